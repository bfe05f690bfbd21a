#include "czbmo/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace czbmo::quad {

namespace {

struct GaussRule {
  std::span<const double> nodes;    // on [-1, 1]
  std::span<const double> weights;  // sum = 2
};

constexpr double kN2[] = {-0.5773502691896257645, 0.5773502691896257645};
constexpr double kW2[] = {1.0, 1.0};

constexpr double kN4[] = {-0.8611363115940525752, -0.3399810435848562648,
                          0.3399810435848562648, 0.8611363115940525752};
constexpr double kW4[] = {0.3478548451374538574, 0.6521451548625461426,
                          0.6521451548625461426, 0.3478548451374538574};

constexpr double kN8[] = {-0.9602898564975362317, -0.7966664774136267395,
                          -0.5255324099163289858, -0.1834346424956498049,
                          0.1834346424956498049,  0.5255324099163289858,
                          0.7966664774136267395,  0.9602898564975362317};
constexpr double kW8[] = {0.1012285362903762592, 0.2223810344533744705,
                          0.3137066458778872873, 0.3626837833783619830,
                          0.3626837833783619830, 0.3137066458778872873,
                          0.2223810344533744705, 0.1012285362903762592};

GaussRule gauss_rule(int order) {
  switch (order) {
    case 2:
      return {kN2, kW2};
    case 8:
      return {kN8, kW8};
    case 4:
    default:
      return {kN4, kW4};
  }
}

// One Gauss panel over [a, b]; appends samples, returns the panel integral.
double gauss_panel(const Fn& f, double a, double b, const GaussRule& rule,
                   std::vector<WeightedSample>& out) {
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  double acc = 0.0;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    const double x = mid + half * rule.nodes[i];
    const double w = half * rule.weights[i];
    const double fx = f(x);
    if (!std::isfinite(fx))
      throw NumericalError("integrand not finite at x = " + std::to_string(x));
    out.push_back({x, w, fx});
    acc += w * fx;
  }
  return acc;
}

double composite_panels(const Fn& f, double a, double b, int n,
                        const GaussRule& rule, std::vector<WeightedSample>& out) {
  double acc = 0.0;
  const double h = (b - a) / n;
  for (int i = 0; i < n; ++i)
    acc += gauss_panel(f, a + i * h, a + (i + 1) * h, rule, out);
  return acc;
}

// Geometric layers toward a singular endpoint at `p`. `q` is the far end of
// the segment (either side of p). The layer schedule is purely geometric
// (depth fixed by the segment geometry, never by integrand values), so the
// sample set is invariant under shifting or scaling the integrand.
void graded_stack(const Fn& f, double p, double q, const MeshSpec& spec,
                  SampledIntegral& acc) {
  const GaussRule rule = gauss_rule(std::max(spec.gauss_order, 8));
  const double len = std::abs(q - p);
  const double dir = (q > p) ? 1.0 : -1.0;
  const double floor_width =
      std::max(1e-13 * len, 32.0 * std::numeric_limits<double>::epsilon() *
                                (std::abs(p) + len + spec.position_scale));

  double outer = len;  // current layer spans [inner, outer] away from p
  double last_contrib = 0.0;
  double total_abs = 0.0;
  int j = 0;
  for (; j < spec.max_layers; ++j) {
    const double inner = 0.5 * outer;
    const double a = p + dir * inner;
    const double b = p + dir * outer;
    const double contrib = (dir > 0) ? gauss_panel(f, a, b, rule, acc.samples)
                                     : gauss_panel(f, b, a, rule, acc.samples);
    acc.value += contrib;
    acc.covered_measure += inner;  // layer width == inner
    last_contrib = std::abs(contrib);
    total_abs += last_contrib;
    outer = inner;
    if (outer < floor_width) break;
  }
  acc.dropped_measure += outer;
  acc.dropped_bound += 2.0 * last_contrib + spec.sliver_tol;
  // integrable singularities leave a vanishing share in the innermost layer
  if (last_contrib > spec.sliver_tol &&
      last_contrib > 1e-3 * (0.5 + total_abs))
    acc.graded_converged = false;
}

}  // namespace

SampledIntegral sample_integral(const Fn& f, double a, double b,
                                const MeshSpec& spec) {
  SampledIntegral out;
  if (!(b > a)) {
    if (b == a) return out;
    throw NumericalError("sample_integral: inverted interval");
  }
  const double total = b - a;
  const double snap = 1e-13 * total;

  // Collect cut points: breakpoints and singular points interior to (a, b).
  struct Cut {
    double x;
    bool singular;
  };
  std::vector<Cut> cuts;
  for (double x : spec.breakpoints)
    if (x > a + snap && x < b - snap) cuts.push_back({x, false});
  for (double x : spec.singular_points)
    if (x > a + snap && x < b - snap) cuts.push_back({x, true});
  std::sort(cuts.begin(), cuts.end(), [](const Cut& l, const Cut& r) { return l.x < r.x; });
  // merge near-coincident cuts, keeping the singular flag
  std::vector<Cut> merged;
  for (const Cut& c : cuts) {
    if (!merged.empty() && c.x - merged.back().x < snap)
      merged.back().singular = merged.back().singular || c.singular;
    else
      merged.push_back(c);
  }

  auto endpoint_singular = [&](double x) {
    for (double s : spec.singular_points)
      if (std::abs(s - x) <= snap) return true;
    return false;
  };

  struct Segment {
    double lo, hi;
    bool lo_singular, hi_singular;
  };
  std::vector<Segment> segments;
  double prev = a;
  bool prev_sing = endpoint_singular(a);
  for (const Cut& c : merged) {
    segments.push_back({prev, c.x, prev_sing, c.singular});
    prev = c.x;
    prev_sing = c.singular;
  }
  segments.push_back({prev, b, prev_sing, endpoint_singular(b)});

  const GaussRule rule = gauss_rule(spec.gauss_order);
  for (const Segment& seg : segments) {
    const double len = seg.hi - seg.lo;
    if (len <= snap) {
      out.dropped_measure += len;
      continue;
    }
    if (seg.lo_singular && seg.hi_singular) {
      const double mid = 0.5 * (seg.lo + seg.hi);
      graded_stack(f, seg.lo, mid, spec, out);
      graded_stack(f, seg.hi, mid, spec, out);
    } else if (seg.lo_singular) {
      graded_stack(f, seg.lo, seg.hi, spec, out);
    } else if (seg.hi_singular) {
      graded_stack(f, seg.hi, seg.lo, spec, out);
    } else {
      const int n = std::max(1, static_cast<int>(std::lround(
                                    spec.cells * len / total)));
      out.value += composite_panels(f, seg.lo, seg.hi, n, rule, out.samples);
      out.covered_measure += len;
    }
  }
  return out;
}

double integrate(const Fn& f, double a, double b, const MeshSpec& spec) {
  return sample_integral(f, a, b, spec).value;
}

MeshSpec make_mesh(double a, double b, int cells, int gauss_order,
                   std::span<const double> kinks, std::span<const double> sings,
                   double sliver_tol) {
  MeshSpec spec;
  spec.cells = std::max(1, cells);
  spec.gauss_order = gauss_order;
  spec.sliver_tol = sliver_tol;
  spec.breakpoints.assign(kinks.begin(), kinks.end());
  const double len = b - a;
  for (double s : sings) {
    spec.singular_points.push_back(s);
    // exterior singularity close to an endpoint: grade toward that endpoint
    if (s <= a && a - s <= 0.5 * len) spec.singular_points.push_back(a);
    if (s >= b && s - b <= 0.5 * len) spec.singular_points.push_back(b);
  }
  return spec;
}

MedianOscillation weighted_median_oscillation(std::vector<WeightedSample>& samples) {
  MedianOscillation res;
  if (samples.empty()) return res;
  std::sort(samples.begin(), samples.end(),
            [](const WeightedSample& l, const WeightedSample& r) {
              return l.fx < r.fx;
            });
  double total_w = 0.0, mean_acc = 0.0;
  for (const auto& s : samples) {
    total_w += s.w;
    mean_acc += s.w * s.fx;
  }
  const double half = 0.5 * total_w;
  double cum = 0.0;
  double median = samples.back().fx;
  for (const auto& s : samples) {
    cum += s.w;
    if (cum >= half) {
      median = s.fx;
      break;
    }
  }
  double dev = 0.0;
  for (const auto& s : samples) dev += s.w * std::abs(s.fx - median);
  res.median = median;
  res.mean_abs_dev = dev / total_w;
  res.mean = mean_acc / total_w;
  return res;
}

double richardson_extrapolate(std::span<const double> eps,
                              std::span<const double> vals, double* last_delta) {
  const std::size_t n = eps.size();
  if (n == 0 || vals.size() != n)
    throw NumericalError("richardson_extrapolate: bad input sizes");
  std::vector<double> t(vals.begin(), vals.end());
  double prev = t[0];
  // Neville evaluation of the interpolating polynomial at eps = 0.
  for (std::size_t j = 1; j < n; ++j) {
    if (j == n - 1) prev = t[0];
    for (std::size_t i = 0; i + j < n; ++i) {
      const double xi = eps[i];
      const double xj = eps[i + j];
      t[i] = (xj * t[i] - xi * t[i + 1]) / (xj - xi);
    }
  }
  if (last_delta) *last_delta = std::abs(t[0] - prev);
  return t[0];
}

}  // namespace czbmo::quad
