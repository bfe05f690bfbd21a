#pragma once

#include <functional>
#include <span>
#include <vector>

#include "czbmo/errors.hpp"

namespace czbmo::quad {

using Fn = std::function<double(double)>;

struct WeightedSample {
  double x;
  double w;
  double fx;
};

// Plan for a singularity-aware composite Gauss-Legendre pass over [a, b].
//   - breakpoints force panel boundaries (kinks, jumps; the integrand stays
//     bounded there),
//   - singular_points mark integrable endpoint/interior singularities; the
//     mesh is geometrically refined toward them (ratio 1/2) until a layer
//     contributes less than sliver_tol, and the remaining sliver is dropped
//     with its width and a mass bound recorded.
struct MeshSpec {
  int cells = 64;          // uniform panel budget across regular segments
  int gauss_order = 4;     // 2, 4 or 8; graded layers always use >= 8
  std::vector<double> breakpoints;
  std::vector<double> singular_points;
  double sliver_tol = 1e-9;
  int max_layers = 64;
  // magnitude of the coordinates the integrand derives from the mesh variable
  // (e.g. x +- t when integrating in t); keeps graded layers above the
  // floating-point resolution of those evaluations
  double position_scale = 0.0;
};

struct SampledIntegral {
  std::vector<WeightedSample> samples;
  double value = 0.0;            // sum of w * fx
  double covered_measure = 0.0;  // sum of w
  double dropped_measure = 0.0;  // total width of dropped slivers
  double dropped_bound = 0.0;    // bound on the integral mass dropped
  bool graded_converged = true;  // false if grading hit its depth/fp limits
};

SampledIntegral sample_integral(const Fn& f, double a, double b,
                                const MeshSpec& spec);

double integrate(const Fn& f, double a, double b, const MeshSpec& spec);

// Assembles a MeshSpec for [a, b]: interior kinks become breakpoints, interior
// singular points are graded toward, and a singularity hugging the interval
// from outside promotes the adjacent endpoint to a graded endpoint (the
// integrand is steep there even though it is finite on [a, b]).
MeshSpec make_mesh(double a, double b, int cells, int gauss_order,
                   std::span<const double> kinks, std::span<const double> sings,
                   double sliver_tol = 1e-9);

// Weighted median of sample values and the L1 deviation around it:
//   median minimizes sum(w * |fx - b|) over b;
//   mean_abs_dev = sum(w * |fx - median|) / sum(w);
//   mean = sum(w * fx) / sum(w).
// Sorts the sample vector by value in place.
struct MedianOscillation {
  double median = 0.0;
  double mean_abs_dev = 0.0;
  double mean = 0.0;
};
MedianOscillation weighted_median_oscillation(std::vector<WeightedSample>& samples);

// Polynomial extrapolation of vals(eps) to eps = 0 (Neville). Used for the
// principal-value exclusion radius. If last_delta is non-null it receives the
// change introduced by the final extrapolation level.
double richardson_extrapolate(std::span<const double> eps,
                              std::span<const double> vals,
                              double* last_delta = nullptr);

}  // namespace czbmo::quad
