#include "czbmo/funcspace.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "czbmo/parallel.hpp"
#include "czbmo/prng.hpp"
#include "czbmo/quadrature.hpp"

namespace czbmo {

namespace {
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double norm2(std::span<const double> x) {
  double s = 0.0;
  for (double v : x) s += v * v;
  return std::sqrt(s);
}
}  // namespace

struct TestFunction::Impl {
  std::string name;
  int dim = 1;  // 0 = any dimension
  std::function<double(double)> eval1;
  std::function<double(std::span<const double>)> evalN;
  std::vector<double> sing1;
  std::vector<double> kinks1;
  std::vector<double> refine1;
  std::vector<std::vector<double>> sing_nd;
  double lipschitz = kNaN;
  std::shared_ptr<const Impl> deriv;
};

TestFunction TestFunction::constant(double v) {
  auto impl = std::make_shared<Impl>();
  std::ostringstream name;
  name << "const:" << v;
  impl->name = name.str();
  impl->dim = 0;
  impl->eval1 = [v](double) { return v; };
  impl->evalN = [v](std::span<const double>) { return v; };
  impl->lipschitz = 0.0;
  return TestFunction(std::move(impl));
}

TestFunction TestFunction::log_abs(int dimension) {
  if (dimension < 1) throw ConfigError("log_abs: dimension must be >= 1");
  auto impl = std::make_shared<Impl>();
  impl->name = "logabs";
  impl->dim = dimension;
  impl->eval1 = [](double x) { return std::log(std::abs(x)); };
  impl->evalN = [](std::span<const double> x) { return std::log(norm2(x)); };
  impl->sing1 = {0.0};
  impl->sing_nd = {std::vector<double>(static_cast<std::size_t>(dimension), 0.0)};
  return TestFunction(std::move(impl));
}

TestFunction TestFunction::log_shift_diff(std::vector<double> s) {
  if (s.empty()) throw ConfigError("log_shift_diff: empty shift");
  auto impl = std::make_shared<Impl>();
  std::ostringstream name;
  name << "logshiftdiff:";
  for (std::size_t i = 0; i < s.size(); ++i) name << (i ? "," : "") << s[i];
  impl->name = name.str();
  impl->dim = static_cast<int>(s.size());
  if (impl->dim == 1) {
    const double sh = s[0];
    impl->eval1 = [sh](double x) {
      return std::log(std::abs(x - sh)) - std::log(std::abs(x + sh));
    };
    impl->sing1 = {sh, -sh};
  }
  auto shift = std::make_shared<std::vector<double>>(s);
  impl->evalN = [shift](std::span<const double> x) {
    double dp = 0.0, dm = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      const double a = x[i] - (*shift)[i];
      const double b = x[i] + (*shift)[i];
      dp += a * a;
      dm += b * b;
    }
    return 0.5 * (std::log(dp) - std::log(dm));
  };
  std::vector<double> minus(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) minus[i] = -s[i];
  impl->sing_nd = {s, minus};
  return TestFunction(std::move(impl));
}

TestFunction TestFunction::log_shift_diff(double s) {
  return log_shift_diff(std::vector<double>{s});
}

TestFunction TestFunction::linear_profile() {
  auto d = std::make_shared<Impl>();
  d->name = "aprime:linear";
  d->dim = 1;
  d->eval1 = [](double) { return 1.0; };
  d->lipschitz = 0.0;

  auto impl = std::make_shared<Impl>();
  impl->name = "linear-profile";
  impl->dim = 1;
  impl->eval1 = [](double x) { return x; };
  impl->lipschitz = 1.0;
  impl->deriv = d;
  return TestFunction(std::move(impl));
}

TestFunction TestFunction::abs_profile() {
  auto d = std::make_shared<Impl>();
  d->name = "aprime:abs";
  d->dim = 1;
  d->eval1 = [](double x) { return x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0); };
  d->kinks1 = {0.0};
  d->lipschitz = kNaN;  // a jump; not Lipschitz, but bounded

  auto impl = std::make_shared<Impl>();
  impl->name = "abs-profile";
  impl->dim = 1;
  impl->eval1 = [](double x) { return std::abs(x); };
  impl->kinks1 = {0.0};
  impl->lipschitz = 1.0;
  impl->deriv = d;
  return TestFunction(std::move(impl));
}

TestFunction TestFunction::smooth_arctan_profile() {
  auto d = std::make_shared<Impl>();
  d->name = "aprime:atan";
  d->dim = 1;
  d->eval1 = [](double x) { return 1.0 / (1.0 + x * x); };
  d->lipschitz = 0.6495190528383290;  // max |d/dx 1/(1+x^2)| = 3 sqrt(3) / 8
  d->refine1 = {0.0};  // the bump is concentrated near the origin

  auto impl = std::make_shared<Impl>();
  impl->name = "atan-profile";
  impl->dim = 1;
  impl->eval1 = [](double x) { return std::atan(x); };
  impl->lipschitz = 1.0;
  impl->refine1 = {0.0};
  impl->deriv = d;
  return TestFunction(std::move(impl));
}

TestFunction TestFunction::tabulated(std::vector<double> xs, std::vector<double> vs,
                                     std::string name) {
  if (xs.size() != vs.size() || xs.size() < 2)
    throw ConfigError("tabulated: need >= 2 matching (x, value) rows");
  std::vector<std::size_t> order(xs.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return xs[a] < xs[b]; });
  auto knots = std::make_shared<std::vector<double>>();
  auto vals = std::make_shared<std::vector<double>>();
  for (std::size_t i : order) {
    if (!std::isfinite(xs[i]) || !std::isfinite(vs[i]))
      throw ConfigError("tabulated: non-finite row");
    if (!knots->empty() && xs[i] == knots->back())
      throw ConfigError("tabulated: duplicate x value");
    knots->push_back(xs[i]);
    vals->push_back(vs[i]);
  }

  double max_slope = 0.0;
  for (std::size_t i = 0; i + 1 < knots->size(); ++i) {
    const double s = ((*vals)[i + 1] - (*vals)[i]) / ((*knots)[i + 1] - (*knots)[i]);
    max_slope = std::max(max_slope, std::abs(s));
  }

  auto eval = [knots, vals](double x) {
    if (x <= knots->front()) return vals->front();
    if (x >= knots->back()) return vals->back();
    const auto it = std::upper_bound(knots->begin(), knots->end(), x);
    const std::size_t i = static_cast<std::size_t>(it - knots->begin()) - 1;
    const double t = (x - (*knots)[i]) / ((*knots)[i + 1] - (*knots)[i]);
    return (*vals)[i] + t * ((*vals)[i + 1] - (*vals)[i]);
  };

  auto d = std::make_shared<Impl>();
  d->name = name + "'";
  d->dim = 1;
  d->eval1 = [knots, vals](double x) {
    if (x <= knots->front() || x >= knots->back()) return 0.0;
    const auto it = std::upper_bound(knots->begin(), knots->end(), x);
    const std::size_t i = static_cast<std::size_t>(it - knots->begin()) - 1;
    return ((*vals)[i + 1] - (*vals)[i]) / ((*knots)[i + 1] - (*knots)[i]);
  };
  if (knots->size() <= 128) d->kinks1 = *knots;

  auto impl = std::make_shared<Impl>();
  impl->name = std::move(name);
  impl->dim = 1;
  impl->eval1 = eval;
  if (knots->size() <= 128) impl->kinks1 = *knots;
  impl->lipschitz = max_slope;
  impl->deriv = d;
  return TestFunction(std::move(impl));
}

TestFunction TestFunction::from_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open table file: " + path);
  std::vector<double> xs, vs;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream row(line);
    double x, v;
    if (!(row >> x >> v)) {
      if (lineno == 1) continue;  // header row
      throw ConfigError("bad row " + std::to_string(lineno) + " in " + path);
    }
    xs.push_back(x);
    vs.push_back(v);
  }
  if (xs.size() < 2) throw ConfigError("table file has fewer than 2 rows: " + path);
  return tabulated(std::move(xs), std::move(vs), "table:" + path);
}

double TestFunction::operator()(double x) const {
  if (impl_->dim > 1)
    throw ConfigError(impl_->name + " requires dimension " +
                      std::to_string(impl_->dim));
  for (double s : impl_->sing1)
    if (x == s)
      throw NumericalError(impl_->name + " is singular at x = " + std::to_string(x));
  return impl_->eval1(x);
}

double TestFunction::operator()(std::span<const double> x) const {
  if (x.size() == 1 && impl_->dim <= 1) return (*this)(x[0]);
  if (impl_->dim != 0 && impl_->dim != static_cast<int>(x.size()))
    throw ConfigError(impl_->name + ": dimension mismatch");
  if (!impl_->evalN)
    throw ConfigError(impl_->name + " has no multi-dimensional evaluator");
  for (const auto& s : impl_->sing_nd) {
    bool hit = s.size() == x.size();
    for (std::size_t i = 0; hit && i < s.size(); ++i) hit = (x[i] == s[i]);
    if (hit) throw NumericalError(impl_->name + " is singular at the given point");
  }
  return impl_->evalN(x);
}

int TestFunction::dimension() const { return impl_->dim; }
const std::string& TestFunction::name() const { return impl_->name; }
const std::vector<double>& TestFunction::singular_points() const {
  return impl_->sing1;
}
const std::vector<double>& TestFunction::kink_points() const {
  return impl_->kinks1;
}
const std::vector<std::vector<double>>& TestFunction::singular_points_nd() const {
  return impl_->sing_nd;
}
const std::vector<double>& TestFunction::refinement_points() const {
  return impl_->refine1;
}

bool TestFunction::is_singular_at(double x, double tol) const {
  for (double s : impl_->sing1)
    if (std::abs(x - s) <= tol) return true;
  return false;
}

bool TestFunction::has_derivative() const { return impl_->deriv != nullptr; }

TestFunction TestFunction::derivative() const {
  if (!impl_->deriv)
    throw ConfigError(impl_->name + " has no derivative in the catalog");
  return TestFunction(impl_->deriv);
}

double TestFunction::lipschitz_constant() const { return impl_->lipschitz; }

TestFunction TestFunction::minus_constant(double c) const {
  auto base = impl_;
  auto impl = std::make_shared<Impl>(*base);
  std::ostringstream name;
  name << base->name << "-(" << c << ")";
  impl->name = name.str();
  impl->eval1 = [base, c](double x) { return base->eval1(x) - c; };
  if (base->evalN)
    impl->evalN = [base, c](std::span<const double> x) { return base->evalN(x) - c; };
  impl->deriv = base->deriv;
  return TestFunction(std::move(impl));
}

TestFunction TestFunction::plus(const TestFunction& g) const {
  auto a = impl_;
  auto b = g.impl_;
  if (a->dim != 0 && b->dim != 0 && a->dim != b->dim)
    throw ConfigError("plus: dimension mismatch");
  auto impl = std::make_shared<Impl>();
  impl->name = a->name + "+" + b->name;
  impl->dim = std::max(a->dim, b->dim);
  if (a->eval1 && b->eval1)
    impl->eval1 = [a, b](double x) { return a->eval1(x) + b->eval1(x); };
  if (a->evalN && b->evalN)
    impl->evalN = [a, b](std::span<const double> x) {
      return a->evalN(x) + b->evalN(x);
    };
  auto merge = [](std::vector<double> u, const std::vector<double>& v) {
    u.insert(u.end(), v.begin(), v.end());
    std::sort(u.begin(), u.end());
    u.erase(std::unique(u.begin(), u.end()), u.end());
    return u;
  };
  impl->sing1 = merge(a->sing1, b->sing1);
  impl->kinks1 = merge(a->kinks1, b->kinks1);
  impl->refine1 = merge(a->refine1, b->refine1);
  impl->sing_nd = a->sing_nd;
  impl->sing_nd.insert(impl->sing_nd.end(), b->sing_nd.begin(), b->sing_nd.end());
  if (std::isfinite(a->lipschitz) && std::isfinite(b->lipschitz))
    impl->lipschitz = a->lipschitz + b->lipschitz;
  return TestFunction(std::move(impl));
}

TestFunction TestFunction::scaled_by(double k) const {
  auto base = impl_;
  auto impl = std::make_shared<Impl>(*base);
  std::ostringstream name;
  name << k << "*" << base->name;
  impl->name = name.str();
  impl->eval1 = [base, k](double x) { return k * base->eval1(x); };
  if (base->evalN)
    impl->evalN = [base, k](std::span<const double> x) { return k * base->evalN(x); };
  if (std::isfinite(base->lipschitz)) impl->lipschitz = std::abs(k) * base->lipschitz;
  impl->deriv = nullptr;
  return TestFunction(std::move(impl));
}

double sampled_lipschitz_ratio(const TestFunction& f, int pairs, std::uint64_t seed,
                               double lo, double hi) {
  SplitMix64 rng(seed);
  double worst = 0.0;
  for (int i = 0; i < pairs; ++i) {
    const double x = rng.uniform(lo, hi);
    const double y = rng.uniform(lo, hi);
    if (x == y || f.is_singular_at(x) || f.is_singular_at(y)) continue;
    worst = std::max(worst, std::abs(f(x) - f(y)) / std::abs(x - y));
  }
  return worst;
}

// ---------------------------------------------------------------------------
// Means and oscillations over cubes
// ---------------------------------------------------------------------------

namespace {

void check_compat(const TestFunction& f, const Cube& q, const GridSpec& grid) {
  if (grid.points_per_axis < 3)
    throw ConfigError("grid resolution must be >= 3 points per axis");
  if (f.dimension() != 0 && f.dimension() != q.dimension())
    throw ConfigError(f.name() + ": dimension mismatch with cube");
}

quad::SampledIntegral sample_on_interval(const TestFunction& f, double a, double b,
                                         int points) {
  const int cells = std::max(1, points / 4);
  std::vector<double> graded = f.singular_points();
  graded.insert(graded.end(), f.refinement_points().begin(),
                f.refinement_points().end());
  const auto spec =
      quad::make_mesh(a, b, cells, 4, f.kink_points(), graded, 1e-9);
  auto fn = [&f](double x) { return f(x); };
  auto result = quad::sample_integral(fn, a, b, spec);
  if (!result.graded_converged)
    throw NumericalError(f.name() + " appears non-integrable on the cube");
  return result;
}

// Fixed-depth per-axis mesh for tensor-product sampling in d >= 2.
struct AxisSample {
  double x, w;
};

std::vector<AxisSample> axis_mesh(double lo, double hi, int cells,
                                  std::span<const double> sing_coords) {
  // reuse the adaptive 1-D machinery against a dummy integrand
  const auto spec = quad::make_mesh(lo, hi, cells, 4, {}, sing_coords, 1e-12);
  auto unit = [](double) { return 1.0; };
  auto res = quad::sample_integral(unit, lo, hi, spec);
  std::vector<AxisSample> out;
  out.reserve(res.samples.size());
  for (const auto& s : res.samples) out.push_back({s.x, s.w});
  return out;
}

std::vector<quad::WeightedSample> tensor_samples(const TestFunction& f,
                                                 const Cube& q, int points) {
  const int d = q.dimension();
  std::vector<std::vector<AxisSample>> axes;
  axes.reserve(static_cast<std::size_t>(d));
  double count = 1.0;
  for (int a = 0; a < d; ++a) {
    // grade toward each singular point's coordinate on this axis
    std::vector<double> coords;
    for (const auto& p : f.singular_points_nd())
      if (static_cast<int>(p.size()) == d) coords.push_back(p[static_cast<std::size_t>(a)]);
    axes.push_back(axis_mesh(q.lo(a), q.hi(a), std::max(1, points / 4), coords));
    count *= static_cast<double>(axes.back().size());
  }
  if (count > 5e7)
    throw NumericalError("tensor grid too large for dimension " + std::to_string(d));

  std::vector<quad::WeightedSample> out;
  out.reserve(static_cast<std::size_t>(count));
  std::vector<std::size_t> idx(static_cast<std::size_t>(d), 0);
  std::vector<double> pt(static_cast<std::size_t>(d));
  for (;;) {
    double w = 1.0;
    for (int a = 0; a < d; ++a) {
      pt[static_cast<std::size_t>(a)] = axes[a][idx[a]].x;
      w *= axes[a][idx[a]].w;
    }
    const double fx = f(std::span<const double>(pt));
    if (!std::isfinite(fx))
      throw NumericalError(f.name() + ": non-finite value in tensor grid");
    out.push_back({0.0, w, fx});
    int a = d - 1;
    for (; a >= 0; --a) {
      if (++idx[static_cast<std::size_t>(a)] < axes[a].size()) break;
      idx[static_cast<std::size_t>(a)] = 0;
    }
    if (a < 0) break;
  }
  return out;
}

}  // namespace

double mean(const TestFunction& f, const Cube& q, const GridSpec& grid) {
  check_compat(f, q, grid);
  if (q.dimension() == 1) {
    auto res = sample_on_interval(f, q.lo(0), q.hi(0), grid.points_per_axis);
    return res.value / res.covered_measure;
  }
  auto samples = tensor_samples(f, q, grid.points_per_axis);
  double v = 0.0, w = 0.0;
  for (const auto& s : samples) {
    v += s.w * s.fx;
    w += s.w;
  }
  return v / w;
}

OscillationReport oscillation(const TestFunction& f, const Cube& q,
                              const GridSpec& grid) {
  check_compat(f, q, grid);
  std::vector<quad::WeightedSample> samples;
  if (q.dimension() == 1)
    samples = sample_on_interval(f, q.lo(0), q.hi(0), grid.points_per_axis).samples;
  else
    samples = tensor_samples(f, q, grid.points_per_axis);
  const auto med = quad::weighted_median_oscillation(samples);
  OscillationReport rep{q, med.median, med.mean_abs_dev,
                        static_cast<int>(samples.size())};
  return rep;
}

namespace {

SeminormEstimate weighted_sup_estimate(const TestFunction& f,
                                       std::span<const Cube> family,
                                       const GridSpec& grid, bool lmo_weight) {
  if (family.empty()) throw ConfigError("seminorm estimate: empty cube family");
  const int base = grid.points_per_axis;
  const std::vector<int> levels = {base, 2 * base - 1};

  SeminormEstimate est;
  est.family_size = static_cast<int>(family.size());
  est.argmax_cube = family[0];
  for (int level : levels) {
    std::vector<double> vals(family.size());
    parallel_for(family.size(), [&](std::size_t i) {
      const double osc = oscillation(f, family[i], GridSpec{level}).value;
      vals[i] = lmo_weight ? log_distance(family[i]) * osc : osc;
    });
    double sup = 0.0;
    std::size_t arg = 0;
    for (std::size_t i = 0; i < vals.size(); ++i)
      if (vals[i] > sup) {
        sup = vals[i];
        arg = i;
      }
    est.convergence_trace.emplace_back(level, sup);
    est.value = sup;
    est.argmax_cube = family[arg];
  }
  return est;
}

}  // namespace

SeminormEstimate bmo_seminorm(const TestFunction& f, std::span<const Cube> family,
                              const GridSpec& grid) {
  return weighted_sup_estimate(f, family, grid, /*lmo_weight=*/false);
}

double bmo_norm(const TestFunction& f, std::span<const Cube> family,
                const GridSpec& grid) {
  const auto semi = bmo_seminorm(f, family, grid);
  const Cube q0 = Cube::reference(family[0].dimension());
  return semi.value + std::abs(mean(f, q0, grid));
}

SeminormEstimate lmo_seminorm(const TestFunction& f, std::span<const Cube> family,
                              const GridSpec& grid) {
  return weighted_sup_estimate(f, family, grid, /*lmo_weight=*/true);
}

}  // namespace czbmo
