#include "czbmo/kernels.hpp"

#include <algorithm>
#include <cmath>

#include "czbmo/prng.hpp"

namespace czbmo {

struct KernelSpec::Impl {
  std::string name;
  int dim = 1;
  double delta = 1.0;
  double size_c = 1.0;
  double reg_c = 1.0;
  std::function<double(double, double)> eval;
  std::vector<double> breakpoints;
  std::optional<TestFunction> profile;
};

KernelSpec KernelSpec::hilbert() {
  auto impl = std::make_shared<Impl>();
  impl->name = "hilbert";
  impl->delta = 1.0;
  impl->size_c = 1.0;
  // |K(x1,y)-K(x2,y)| = |x1-x2| / (|x1-y| |x2-y|) and |x2-y| >= |x1-y|/2
  impl->reg_c = 2.0;
  impl->eval = [](double x, double y) { return 1.0 / (x - y); };
  return KernelSpec(std::move(impl));
}

KernelSpec KernelSpec::calderon_commutator(TestFunction profile) {
  if (profile.dimension() > 1)
    throw ConfigError("commutator profile must be one-dimensional");
  if (!profile.singular_points().empty())
    throw ConfigError("commutator profile must be finite everywhere");
  auto impl = std::make_shared<Impl>();
  impl->name = "commutator:" + profile.name();
  impl->delta = 1.0;
  const double lam = std::isfinite(profile.lipschitz_constant())
                         ? profile.lipschitz_constant()
                         : 1.0;
  impl->size_c = lam;
  impl->reg_c = 16.0 * std::max(lam, 1e-30);
  impl->breakpoints = profile.kink_points();
  auto a = profile;
  impl->eval = [a](double x, double y) {
    const double d = x - y;
    return (a(x) - a(y)) / (d * d);
  };
  impl->profile = std::move(profile);
  return KernelSpec(std::move(impl));
}

KernelSpec KernelSpec::custom(std::string name,
                              std::function<double(double, double)> k,
                              int dimension, double delta, double size_constant,
                              double regularity_constant) {
  if (dimension < 1) throw ConfigError("kernel dimension must be >= 1");
  if (!(delta > 0.0) || delta > 1.0)
    throw ConfigError("kernel regularity exponent must lie in (0, 1]");
  auto impl = std::make_shared<Impl>();
  impl->name = std::move(name);
  impl->dim = dimension;
  impl->delta = delta;
  impl->size_c = size_constant;
  impl->reg_c = regularity_constant;
  impl->eval = std::move(k);
  return KernelSpec(std::move(impl));
}

const std::string& KernelSpec::name() const { return impl_->name; }
int KernelSpec::dimension() const { return impl_->dim; }
double KernelSpec::delta() const { return impl_->delta; }
double KernelSpec::size_constant() const { return impl_->size_c; }
double KernelSpec::regularity_constant() const { return impl_->reg_c; }

double KernelSpec::operator()(double x, double y) const {
  if (x == y)
    throw NumericalError(impl_->name + ": kernel evaluated on the diagonal");
  return impl_->eval(x, y);
}

const std::vector<double>& KernelSpec::breakpoints() const {
  return impl_->breakpoints;
}

bool KernelSpec::is_commutator() const { return impl_->profile.has_value(); }

const TestFunction* KernelSpec::profile() const {
  return impl_->profile ? &*impl_->profile : nullptr;
}

namespace {

// least-squares slope of log10(sup) against the decade index
double bucket_slope(const std::vector<std::pair<int, double>>& buckets) {
  std::vector<std::pair<double, double>> pts;
  for (const auto& [dec, sup] : buckets)
    if (sup > 0.0) pts.emplace_back(static_cast<double>(dec), std::log10(sup));
  if (pts.size() < 2) return 0.0;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (const auto& [x, y] : pts) {
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double n = static_cast<double>(pts.size());
  const double denom = n * sxx - sx * sx;
  if (denom == 0.0) return 0.0;
  return (n * sxy - sx * sy) / denom;
}

std::vector<std::pair<int, double>> collect_buckets(
    const std::vector<std::pair<int, double>>& raw) {
  std::vector<std::pair<int, double>> out;
  for (const auto& [dec, v] : raw) {
    auto it = std::find_if(out.begin(), out.end(),
                           [dec_ = dec](const auto& p) { return p.first == dec_; });
    if (it == out.end())
      out.emplace_back(dec, v);
    else
      it->second = std::max(it->second, v);
  }
  std::sort(out.begin(), out.end());
  return out;
}

// Slopes on either side of unit separation. A bound-type condition fails
// only when the measured constant grows toward the diagonal (negative slope
// on sub-unit decades) or toward infinity (positive slope above).
struct SideSlopes {
  double small_sep = 0.0;
  double large_sep = 0.0;
};

SideSlopes side_slopes(const std::vector<std::pair<int, double>>& buckets) {
  std::vector<std::pair<int, double>> lo, hi;
  for (const auto& b : buckets) {
    if (b.first <= 0) lo.push_back(b);
    if (b.first >= 0) hi.push_back(b);
  }
  return {bucket_slope(lo), bucket_slope(hi)};
}

}  // namespace

SizeCheckReport check_size(const KernelSpec& k,
                           std::span<const std::pair<double, double>> pairs) {
  SizeCheckReport rep;
  rep.pairs = pairs.size();
  std::vector<std::pair<int, double>> raw;
  const double d = static_cast<double>(k.dimension());
  for (const auto& [x, y] : pairs) {
    if (x == y) throw ConfigError("check_size: diagonal pair");
    const double r = std::abs(x - y);
    const double v = std::abs(k(x, y)) * std::pow(r, d);
    rep.measured_sup = std::max(rep.measured_sup, v);
    raw.emplace_back(static_cast<int>(std::floor(std::log10(r))), v);
  }
  rep.decade_sup = collect_buckets(raw);
  rep.log10_slope = bucket_slope(rep.decade_sup);
  const auto slopes = side_slopes(rep.decade_sup);
  rep.slope_small_sep = slopes.small_sep;
  rep.slope_large_sep = slopes.large_sep;
  rep.pass = std::isfinite(rep.measured_sup) && rep.slope_small_sep >= -0.1 &&
             rep.slope_large_sep <= 0.1;
  return rep;
}

std::vector<std::pair<double, double>> default_size_pairs(std::uint64_t seed,
                                                          int first_decade,
                                                          int last_decade,
                                                          int per_decade) {
  if (last_decade < first_decade || per_decade < 1)
    throw ConfigError("default_size_pairs: empty design");
  SplitMix64 rng(seed);
  std::vector<std::pair<double, double>> pairs;
  for (int dec = first_decade; dec <= last_decade; ++dec) {
    for (int i = 0; i < per_decade; ++i) {
      const double r = std::pow(10.0, dec + rng.next_double());
      // base points both near and away from the origin, signed
      double x = rng.sign() * std::pow(10.0, rng.uniform(-2.0, 1.0));
      if (i % 4 == 0) x = rng.uniform(-0.5, 0.5) * r;  // pairs straddling 0
      pairs.emplace_back(x, x + rng.sign() * r);
    }
  }
  return pairs;
}

RegularityCheckReport check_regularity(const KernelSpec& k,
                                       std::span<const RegularityTriple> triples,
                                       std::optional<double> delta_override) {
  RegularityCheckReport rep;
  rep.triples = triples.size();
  rep.delta_used = delta_override.value_or(k.delta());
  const double delta = rep.delta_used;
  const double d = static_cast<double>(k.dimension());
  std::vector<std::pair<int, double>> raw;
  for (const auto& t : triples) {
    const double rho = std::abs(t.x1 - t.x2);
    const double r = std::abs(t.x1 - t.y);
    if (!(2.0 * rho <= r))
      throw ConfigError("check_regularity: triple violates 2|x1-x2| <= |x1-y|");
    if (rho == 0.0) continue;
    const double v = std::abs(k(t.x1, t.y) - k(t.x2, t.y)) *
                     std::pow(r, d + delta) / std::pow(rho, delta);
    rep.measured_sup = std::max(rep.measured_sup, v);
    raw.emplace_back(static_cast<int>(std::floor(std::log10(r))), v);
  }
  rep.decade_sup = collect_buckets(raw);
  rep.log10_slope = bucket_slope(rep.decade_sup);
  const auto slopes = side_slopes(rep.decade_sup);
  rep.slope_small_sep = slopes.small_sep;
  rep.slope_large_sep = slopes.large_sep;
  rep.pass = std::isfinite(rep.measured_sup) && rep.slope_small_sep >= -0.1 &&
             rep.slope_large_sep <= 0.1;
  return rep;
}

std::vector<RegularityTriple> default_regularity_triples(std::uint64_t seed,
                                                         int first_decade,
                                                         int last_decade,
                                                         int per_decade) {
  if (last_decade < first_decade || per_decade < 1)
    throw ConfigError("default_regularity_triples: empty design");
  SplitMix64 rng(seed);
  std::vector<RegularityTriple> out;
  for (int dec = first_decade; dec <= last_decade; ++dec) {
    for (int i = 0; i < per_decade; ++i) {
      const double r = std::pow(10.0, dec + rng.next_double());
      double x1 = rng.sign() * std::pow(10.0, rng.uniform(-2.0, 1.0));
      if (i % 4 == 0) x1 = rng.uniform(-0.5, 0.5) * r;
      const double y = x1 + rng.sign() * r;
      const double rho = 0.5 * r * std::pow(10.0, rng.uniform(-3.0, 0.0));
      out.push_back({x1, x1 + rng.sign() * rho, y});
    }
  }
  return out;
}

}  // namespace czbmo
