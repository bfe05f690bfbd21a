#pragma once

#include <functional>
#include <memory>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "czbmo/geometry.hpp"

namespace czbmo {

// Catalog of test functions: constants, log|x|, the shifted-log differences
// log|x-s| - log|x+s|, Lipschitz profiles A (with derivative A'), and
// tabulated samples. Values are immutable once built; copies are cheap
// (shared immutable state).
class TestFunction {
 public:
  static TestFunction constant(double v);
  static TestFunction log_abs(int dimension = 1);
  static TestFunction log_shift_diff(std::vector<double> s);
  static TestFunction log_shift_diff(double s);

  // Lipschitz profiles for commutator kernels; evaluate to A(x), expose A'.
  static TestFunction linear_profile();         // A(x) = x
  static TestFunction abs_profile();            // A(x) = |x|
  static TestFunction smooth_arctan_profile();  // A(x) = atan(x); A' = 1/(1+x^2)

  static TestFunction tabulated(std::vector<double> xs, std::vector<double> vs,
                                std::string name = "table");
  static TestFunction from_csv(const std::string& path);

  double operator()(double x) const;
  double operator()(std::span<const double> x) const;

  // 0 means "any dimension" (constants); otherwise the fixed dimension.
  int dimension() const;
  const std::string& name() const;

  // Points where the function is infinite (integrable log-type). d = 1 view.
  const std::vector<double>& singular_points() const;
  // Full singular points for d >= 2 evaluators.
  const std::vector<std::vector<double>>& singular_points_nd() const;
  // Bounded kinks / jump locations worth a panel boundary in quadrature.
  const std::vector<double>& kink_points() const;
  // Smooth but sharply localized features (graded refinement pays off there
  // even though nothing is singular).
  const std::vector<double>& refinement_points() const;
  bool is_singular_at(double x, double tol = 0.0) const;

  bool has_derivative() const;
  TestFunction derivative() const;  // A' for profiles, slopes for tables
  double lipschitz_constant() const;

  TestFunction minus_constant(double c) const;  // x -> f(x) - c
  TestFunction plus(const TestFunction& g) const;
  TestFunction scaled_by(double k) const;

 private:
  struct Impl;
  explicit TestFunction(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}
  std::shared_ptr<const Impl> impl_;
};

// Checks |A(x)-A(y)| <= lambda |x-y| on `pairs` seeded random pairs and
// returns the largest sampled ratio.
double sampled_lipschitz_ratio(const TestFunction& f, int pairs, std::uint64_t seed,
                               double lo = -100.0, double hi = 100.0);

struct GridSpec {
  int points_per_axis = 257;  // >= 3
};

struct OscillationReport {
  Cube cube;
  double best_constant = 0.0;  // weighted median of the sampled values
  double value = 0.0;          // inf_b (1/|Q|) int_Q |f - b|
  int grid_points = 0;
};

struct SeminormEstimate {
  double value = 0.0;
  int family_size = 0;
  Cube argmax_cube;
  std::vector<std::pair<int, double>> convergence_trace;  // (grid points, value)
  double cross_check_delta = 0.0;  // used by the operator-side estimator
};

// (1/|Q|) int_Q f, with graded refinement toward integrable singularities.
double mean(const TestFunction& f, const Cube& q, const GridSpec& grid = {});

OscillationReport oscillation(const TestFunction& f, const Cube& q,
                              const GridSpec& grid = {});

SeminormEstimate bmo_seminorm(const TestFunction& f, std::span<const Cube> family,
                              const GridSpec& grid = {});

// ||f||*_BMO = bmo_seminorm + |mean over Q0|.
double bmo_norm(const TestFunction& f, std::span<const Cube> family,
                const GridSpec& grid = {});

// sup over the family of L(Q) * oscillation.
SeminormEstimate lmo_seminorm(const TestFunction& f, std::span<const Cube> family,
                              const GridSpec& grid = {});

}  // namespace czbmo
