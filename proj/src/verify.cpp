#include "czbmo/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>

#include "czbmo/parallel.hpp"
#include "czbmo/prng.hpp"

namespace czbmo {

namespace {

using Clock = std::chrono::steady_clock;

struct Timer {
  Clock::time_point t0 = Clock::now();
  double elapsed() const {
    return std::chrono::duration<double>(Clock::now() - t0).count();
  }
};

SuiteCase make_case(std::string label, double measured, double bound, bool verdict,
                    std::map<std::string, double> extra = {}) {
  SuiteCase c;
  c.label = std::move(label);
  c.measured = measured;
  c.bound = bound;
  c.verdict = verdict;
  c.extra = std::move(extra);
  return c;
}

void finalize(VerificationReport& rep, const Timer& timer) {
  rep.pass = true;
  for (const auto& c : rep.cases) rep.pass = rep.pass && c.verdict;
  rep.runtime_seconds = timer.elapsed();
}

std::map<std::string, double> cube_extra(const Cube& q) {
  return {{"center", q.center1()}, {"side", q.side()}};
}

double ln_max(double a, double b) { return std::log(std::max(a, b)); }

}  // namespace

double trend_slope_log10(std::span<const std::pair<int, double>> decade_max) {
  std::vector<std::pair<double, double>> pts;
  for (const auto& [dec, v] : decade_max)
    if (v > 0.0) pts.emplace_back(static_cast<double>(dec), std::log10(v));
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

int growth_decade(const Cube& q) {
  const double driver = std::max(
      {std::abs(q.center1()), q.side(), 1.0 / q.side(), 1.0});
  return static_cast<int>(std::floor(std::log10(driver) + 1e-12));
}

namespace {

std::vector<std::pair<int, double>> decade_maxima(
    const std::vector<std::pair<int, double>>& raw) {
  std::vector<std::pair<int, double>> out;
  for (const auto& [dec, v] : raw) {
    auto it = std::find_if(out.begin(), out.end(),
                           [d = dec](const auto& p) { return p.first == d; });
    if (it == out.end())
      out.emplace_back(dec, v);
    else
      it->second = std::max(it->second, v);
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<Cube> grid_family(const std::vector<double>& sides,
                              const std::vector<double>& center_mags) {
  std::vector<Cube> out;
  for (double l : sides) {
    out.emplace_back(0.0, l);
    for (double m : center_mags) {
      out.emplace_back(m, l);
      out.emplace_back(-m, l);
    }
  }
  return out;
}

}  // namespace

// --------------------------------------------------------------------------
// log-mean: |log_Q - log max(|c|, l)| bounded, stable under extension, and
// exactly 1 + ln 2 on the reference cube.
// --------------------------------------------------------------------------
VerificationReport suite_log_mean(const VerifyOptions& opt) {
  Timer timer;
  VerificationReport rep;
  rep.suite_id = "log-mean";
  const bool quick = opt.preset == Preset::Quick;

  const auto f = TestFunction::log_abs();
  const GridSpec grid{257};

  auto family_devs = [&](double side_lo, double side_hi, double cen_lo,
                         double cen_hi, std::vector<SuiteCase>* cases) {
    const auto sides = FamilySpec::log_spaced(side_lo, side_hi);
    const auto mags = FamilySpec::log_spaced(cen_lo, cen_hi);
    const auto cubes = grid_family(sides, mags);
    std::vector<double> devs(cubes.size());
    parallel_for(
        cubes.size(),
        [&](std::size_t i) {
          const double m = mean(f, cubes[i], grid);
          devs[i] = std::abs(m - ln_max(std::abs(cubes[i].center1()),
                                        cubes[i].side()));
        },
        opt.parallel);
    double worst = 0.0;
    for (std::size_t i = 0; i < cubes.size(); ++i) {
      worst = std::max(worst, devs[i]);
      if (cases)
        cases->push_back(make_case("dev " + cubes[i].describe(), devs[i], 2.5,
                                   devs[i] <= 2.5, cube_extra(cubes[i])));
    }
    return worst;
  };

  const double lo = quick ? -2.0 : -3.0;
  const double hi = quick ? 2.0 : 3.0;
  const double clo = quick ? -1.0 : -2.0;
  const double chi = quick ? 2.0 : 4.0;
  const double max_base = family_devs(lo, hi, clo, chi, &rep.cases);
  const double max_ext = family_devs(lo - 1, hi + 1, clo - 1, chi + 1, nullptr);

  // worked value on Q0: mean = -1 - ln 2, deviation 1 + ln 2
  const double exact = 1.0 + std::log(2.0);
  const double q0_dev =
      std::abs(mean(f, Cube::reference(1), grid) - (-1.0 - std::log(2.0)));
  rep.cases.push_back(make_case("Q0 mean exact", q0_dev, 1e-6, q0_dev <= 1e-6));
  rep.cases.push_back(make_case("max deviation in [1.0, 2.5]", max_base, 2.5,
                                max_base >= 1.0 && max_base <= 2.5));
  const double growth = std::abs(max_ext - max_base) / max_base;
  rep.cases.push_back(
      make_case("stability under extension", growth, 0.2, growth < 0.2));

  // scale invariance along Q(l, l): log_{lambda Q} = log_Q + ln lambda
  double diag_min = std::numeric_limits<double>::infinity(), diag_max = 0.0;
  for (double l : FamilySpec::log_spaced(quick ? -2 : -3, quick ? 2 : 3)) {
    const Cube q(l, l);
    const double dev = std::abs(mean(f, q, grid) - ln_max(l, l));
    diag_min = std::min(diag_min, dev);
    diag_max = std::max(diag_max, dev);
  }
  rep.cases.push_back(make_case("diagonal scale invariance spread",
                                diag_max - diag_min, 1e-3,
                                diag_max - diag_min <= 1e-3));

  rep.global_constant = max_base;
  rep.summary["max_base"] = max_base;
  rep.summary["max_ext"] = max_ext;
  rep.summary["q0_exact_value"] = exact;
  finalize(rep, timer);
  return rep;
}

// --------------------------------------------------------------------------
// logshift-norms: ||log_{s,-s}||*_BMO uniform in s, and the mean prediction
// |log_{s,-s,Q} - (log max(|c-s|, l) - log max(|c+s|, l))| bounded.
// --------------------------------------------------------------------------
VerificationReport suite_logshift_norms(const VerifyOptions& opt) {
  Timer timer;
  VerificationReport rep;
  rep.suite_id = "logshift-norms";
  const bool quick = opt.preset == Preset::Quick;
  const GridSpec grid{257};

  const std::vector<double> svals =
      quick ? std::vector<double>{1.0, 10.0}
            : std::vector<double>{1.0, 10.0, 1e3, 1e6};

  std::vector<double> norms;
  double mean_dev_max = 0.0;
  for (double s : svals) {
    std::vector<Cube> family;
    for (double l : {0.1, 1.0, 10.0}) family.emplace_back(0.0, l);
    for (double rel : {1e-3, 1e-2, 1e-1}) {
      family.emplace_back(s, rel * std::max(s, 1.0));
      family.emplace_back(-s, rel * std::max(s, 1.0));
    }
    family.emplace_back(s / 2, s / 2);
    family.emplace_back(2 * s, s / 2);
    family.emplace_back(s, 1.0);
    family.emplace_back(-s, 1.0);
    // central cubes proportional to the shift: both singularities in view
    family.emplace_back(0.0, s);
    family.emplace_back(0.0, 4.0 * s);

    const auto f = TestFunction::log_shift_diff(s);
    const double norm = bmo_norm(f, family, grid);
    norms.push_back(norm);

    const double q0_mean = mean(f, Cube::reference(1), grid);
    rep.cases.push_back(make_case(
        "|mean over Q0|, s=" + std::to_string(s), std::abs(q0_mean), 1.0,
        std::abs(q0_mean) <= 1.0, {{"s", s}}));

    double dev_max = 0.0;
    for (const auto& q : family) {
      const double c = q.center1(), l = q.side();
      const double predicted =
          ln_max(std::abs(c - s), l) - ln_max(std::abs(c + s), l);
      const double dev = std::abs(mean(f, q, grid) - predicted);
      dev_max = std::max(dev_max, dev);
      rep.cases.push_back(make_case(
          "mean prediction s=" + std::to_string(s) + " " + q.describe(), dev,
          3.5, dev <= 3.5, cube_extra(q)));
    }
    mean_dev_max = std::max(mean_dev_max, dev_max);
    rep.summary["norm_s_" + std::to_string(s)] = norm;
  }

  const double norm_ref = norms.front();
  double ratio_max = 1.0;
  for (double n : norms)
    ratio_max = std::max({ratio_max, n / norm_ref, norm_ref / n});
  rep.cases.push_back(make_case("norms within factor 2 of s=1", ratio_max, 2.0,
                                ratio_max <= 2.0));

  rep.global_constant = ratio_max;
  rep.summary["mean_prediction_dev_max"] = mean_dev_max;
  finalize(rep, timer);
  return rep;
}

// --------------------------------------------------------------------------
// mean-growth: |f_{2Q}| <= C L(Q) ||f||_BMO + |f_{Q0}|, C stable as the
// family widens by two decades.
// --------------------------------------------------------------------------
VerificationReport suite_mean_growth(const VerifyOptions& opt) {
  Timer timer;
  VerificationReport rep;
  rep.suite_id = "mean-growth";
  const bool quick = opt.preset == Preset::Quick;
  const GridSpec grid{257};
  const auto f = TestFunction::log_abs();

  const auto semi_family = grid_family(
      FamilySpec::log_spaced(quick ? -2 : -3, quick ? 2 : 3), {});
  const double seminorm = bmo_seminorm(f, semi_family, grid).value;
  const double f_q0 = std::abs(mean(f, Cube::reference(1), grid));

  auto family_for = [](int kmax) {
    std::vector<Cube> cubes;
    for (int k = 0; k <= kmax; ++k) {
      const double p = std::pow(10.0, k);
      cubes.emplace_back(p, 1.0);
      cubes.emplace_back(-p, 1.0);
      cubes.emplace_back(0.0, 1.0 / p);
      cubes.emplace_back(0.0, p);
    }
    return cubes;
  };

  auto max_ratio = [&](const std::vector<Cube>& cubes,
                       std::vector<SuiteCase>* cases) {
    double worst = 0.0;
    for (const auto& q : cubes) {
      const double f2q = std::abs(mean(f, dilate(q, 2.0), grid));
      const double ratio =
          std::max(0.0, f2q - f_q0) / (log_distance(q) * seminorm);
      worst = std::max(worst, ratio);
      if (cases)
        cases->push_back(make_case("ratio " + q.describe(), ratio, 5.0,
                                   ratio <= 5.0, cube_extra(q)));
    }
    return worst;
  };

  const int kmax = quick ? 3 : 6;
  const double c_base = max_ratio(family_for(kmax), &rep.cases);
  const double c_ext = max_ratio(family_for(kmax + 2), nullptr);

  rep.cases.push_back(make_case("C stable under 2-decade widening",
                                c_ext / std::max(c_base, 1e-12), 2.0,
                                c_ext <= 2.0 * c_base));

  // constant input: equality |1| = 0 + |1|
  const auto one = TestFunction::constant(1.0);
  const double one_gap =
      std::abs(std::abs(mean(one, Cube(3.0, 2.0), grid)) -
               std::abs(mean(one, Cube::reference(1), grid)));
  rep.cases.push_back(make_case("constant input equality", one_gap, 1e-12,
                                one_gap <= 1e-12));

  rep.global_constant = c_base;
  rep.summary["C_base"] = c_base;
  rep.summary["C_ext"] = c_ext;
  rep.summary["bmo_seminorm"] = seminorm;
  rep.summary["f_Q0"] = f_q0;
  finalize(rep, timer);
  return rep;
}

// --------------------------------------------------------------------------
// hilbert-constants: H_Q 1 = 0 across a random cube family, dilations, and
// constant multiples.
// --------------------------------------------------------------------------
VerificationReport suite_hilbert_constants(const VerifyOptions& opt) {
  Timer timer;
  VerificationReport rep;
  rep.suite_id = "hilbert-constants";
  const bool quick = opt.preset == Preset::Quick;

  const auto cfg =
      quick ? QuadratureConfig::standard() : QuadratureConfig::strict();
  const auto hilbert = KernelSpec::hilbert();
  const auto one = TestFunction::constant(1.0);
  const int n_cubes = quick ? 8 : 50;
  const int n_points = quick ? 9 : 33;

  SplitMix64 rng(opt.seed);
  std::vector<Cube> cubes;
  for (int i = 0; i < n_cubes; ++i) {
    const double l = std::pow(10.0, rng.uniform(-2.0, 2.0));
    double c = 0.0;
    if (i >= 5) c = rng.sign() * std::pow(10.0, rng.uniform(-2.0, 3.0));
    cubes.emplace_back(c, l);
  }

  auto midpoints = [&](const Cube& q, int n) {
    std::vector<double> pts;
    for (int i = 0; i < n; ++i)
      pts.push_back(q.lo(0) + (i + 0.5) * q.side() / n);
    return pts;
  };

  auto max_abs = [](std::span<const double> v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
  };

  std::vector<double> sups(cubes.size());
  parallel_for(
      cubes.size(),
      [&](std::size_t i) {
        const auto res =
            apply_truncated(hilbert, one, cubes[i], midpoints(cubes[i], n_points), cfg);
        sups[i] = max_abs(res.total_values);
      },
      opt.parallel);
  double global = 0.0;
  for (std::size_t i = 0; i < cubes.size(); ++i) {
    global = std::max(global, sups[i]);
    rep.cases.push_back(make_case("H_Q 1 " + cubes[i].describe(), sups[i], 1e-6,
                                  sups[i] <= 1e-6, cube_extra(cubes[i])));
  }

  // dilated cubes: the statement is uniform over cubes
  for (std::size_t i = 0; i < std::min<std::size_t>(cubes.size(), 10); ++i) {
    const Cube q2 = dilate(cubes[i], 2.0);
    const auto res = apply_truncated(hilbert, one, q2, midpoints(q2, n_points), cfg);
    const double sup = max_abs(res.total_values);
    global = std::max(global, sup);
    rep.cases.push_back(make_case("H_{2Q} 1 " + q2.describe(), sup, 1e-6,
                                  sup <= 1e-6, cube_extra(q2)));
  }

  // constant multiples scale linearly
  const auto five = TestFunction::constant(5.0);
  for (std::size_t i = 0; i < std::min<std::size_t>(cubes.size(), 10); ++i) {
    const auto res =
        apply_truncated(hilbert, five, cubes[i], midpoints(cubes[i], n_points), cfg);
    const double sup = max_abs(res.total_values);
    rep.cases.push_back(make_case("H_Q 5 " + cubes[i].describe(), sup, 5e-6,
                                  sup <= 5e-6, cube_extra(cubes[i])));
  }

  rep.global_constant = global;
  rep.summary["max_abs_Hq1"] = global;
  finalize(rep, timer);
  return rep;
}

// --------------------------------------------------------------------------
// commutator-identity: C_{A,Q} 1 - H_Q A' is constant on Q.
// --------------------------------------------------------------------------
VerificationReport suite_commutator_identity(const VerifyOptions& opt) {
  Timer timer;
  VerificationReport rep;
  rep.suite_id = "commutator-identity";
  const bool quick = opt.preset == Preset::Quick;
  const auto cfg =
      quick ? QuadratureConfig::standard() : QuadratureConfig::strict();
  const auto hilbert = KernelSpec::hilbert();
  const int n_points = quick ? 11 : 21;

  struct Setup {
    TestFunction profile;
    std::vector<Cube> cubes;
  };
  std::vector<Setup> setups;
  setups.push_back({TestFunction::abs_profile(),
                    {Cube(1.0, 0.5), Cube(10.0, 5.0), Cube(100.0, 50.0)}});
  setups.push_back({TestFunction::linear_profile(), {Cube(0.0, 2.0), Cube(3.0, 1.0)}});
  setups.push_back({TestFunction::smooth_arctan_profile(),
                    {Cube(0.0, 2.0), Cube(3.0, 1.0), Cube(-5.0, 0.5)}});
  {
    // a tabulated sampling of a smooth Lipschitz profile
    const std::vector<double> knots = {-12.0, -6.0, -2.0, 0.0, 2.0, 6.0, 12.0};
    std::vector<double> vals;
    for (double x : knots) vals.push_back(std::atan(x));
    setups.push_back({TestFunction::tabulated(knots, vals, "atan-table"),
                      {Cube(0.9, 1.5), Cube(3.5, 1.0)}});
  }

  double global = 0.0;
  const auto one = TestFunction::constant(1.0);
  for (const auto& setup : setups) {
    const auto commutator = KernelSpec::calderon_commutator(setup.profile);
    const auto aprime = setup.profile.derivative();
    for (const auto& q : setup.cubes) {
      std::vector<double> pts;
      for (int i = 0; i < n_points; ++i)
        pts.push_back(q.lo(0) + (i + 0.5) * q.side() / n_points);
      const auto c_res = apply_truncated(commutator, one, q, pts, cfg);
      const auto h_res = apply_truncated(hilbert, aprime, q, pts, cfg);
      double m = 0.0;
      for (std::size_t i = 0; i < pts.size(); ++i)
        m += c_res.total_values[i] - h_res.total_values[i];
      m /= static_cast<double>(pts.size());
      double var = 0.0;
      for (std::size_t i = 0; i < pts.size(); ++i) {
        const double d = c_res.total_values[i] - h_res.total_values[i] - m;
        var += d * d;
      }
      var /= static_cast<double>(pts.size());
      global = std::max(global, var);
      auto extra = cube_extra(q);
      extra["constant"] = m;
      rep.cases.push_back(make_case(
          "var " + setup.profile.name() + " " + q.describe(), var, 1e-6,
          var <= 1e-6, std::move(extra)));
    }
  }

  rep.global_constant = global;
  rep.summary["max_variance"] = global;
  finalize(rep, timer);
  return rep;
}

// --------------------------------------------------------------------------
// dyadic-sum: L(Q) * sum_s 2^{-s delta} / L(2^{s+1} Q) bounded with no
// growth trend across decades.
// --------------------------------------------------------------------------
VerificationReport suite_dyadic_sum(const VerifyOptions& opt) {
  Timer timer;
  VerificationReport rep;
  rep.suite_id = "dyadic-sum";
  const bool quick = opt.preset == Preset::Quick;
  const int max_width = quick ? 4 : 6;  // decades of |c| and l per direction

  auto family_of_width = [](int w) {
    std::vector<double> sides, mags;
    for (int k = -w; k <= w; ++k) {
      sides.push_back(std::pow(10.0, k));
      sides.push_back(3.0 * std::pow(10.0, k));
    }
    for (int j = 0; j <= w; ++j) {
      mags.push_back(std::pow(10.0, j));
      mags.push_back(3.0 * std::pow(10.0, j));
    }
    return grid_family(sides, mags);
  };

  auto cube_value = [](const Cube& q, double delta) {
    double sum = 0.0;
    for (int s = 1; s <= 400; ++s) {
      const double weight = std::pow(2.0, -s * delta);
      if (weight < 1e-12) break;
      sum += weight / log_distance(dilate(q, std::ldexp(1.0, s + 1)));
    }
    return log_distance(q) * sum;
  };

  for (double delta : opt.deltas) {
    if (!(delta > 0.0) || delta > 1.0)
      throw ConfigError("dyadic-sum: delta must lie in (0, 1]");
    const double cap_factor = 1.0 / (std::pow(2.0, delta) - 1.0);

    // per-cube cap L(Q)/(2^delta - 1) on the widest family (both regimes)
    const auto widest = family_of_width(max_width);
    bool caps_ok = true;
    double worst = 0.0;
    for (const auto& q : widest) {
      const double value = cube_value(q, delta);
      caps_ok = caps_ok && value <= log_distance(q) * cap_factor * (1.0 + 1e-9);
      worst = std::max(worst, value);
    }
    rep.cases.push_back(make_case(
        "per-cube cap, delta=" + std::to_string(delta), worst,
        cap_factor * 20.0, caps_ok, {{"cubes", static_cast<double>(widest.size())}}));

    // the family-sup must saturate as the family widens decade by decade
    std::vector<std::pair<int, double>> sup_by_width;
    for (int w = 1; w <= max_width; ++w) {
      double sup = 0.0;
      for (const auto& q : family_of_width(w)) sup = std::max(sup, cube_value(q, delta));
      sup_by_width.emplace_back(w, sup);
      rep.cases.push_back(make_case("family sup, delta=" + std::to_string(delta) +
                                        " width=" + std::to_string(w),
                                    sup, cap_factor * 20.0, sup <= cap_factor * 20.0,
                                    {{"width", static_cast<double>(w)}}));
    }
    const double slope = trend_slope_log10(sup_by_width);
    rep.cases.push_back(make_case("trend slope, delta=" + std::to_string(delta),
                                  slope, 0.1, slope < 0.1));
    rep.summary["max_delta_" + std::to_string(delta)] = worst;
    rep.summary["slope_delta_" + std::to_string(delta)] = slope;
    rep.global_constant = std::max(rep.global_constant, worst);
  }

  finalize(rep, timer);
  return rep;
}

// --------------------------------------------------------------------------
// sharpness: for A(x) = |x| and Q = (c/2, 3c/2), C_Q 1(x) = 2(ln x - ln c);
// the oscillation is c-independent and separated from zero, so
// L(Q) ||C_Q 1||_Q grows without bound.
// --------------------------------------------------------------------------
VerificationReport suite_sharpness(const VerifyOptions& opt) {
  Timer timer;
  VerificationReport rep;
  rep.suite_id = "sharpness";
  const bool quick = opt.preset == Preset::Quick;
  const auto cfg = QuadratureConfig::strict();
  const auto commutator = KernelSpec::calderon_commutator(TestFunction::abs_profile());
  const auto one = TestFunction::constant(1.0);

  const std::vector<double> cs =
      quick ? std::vector<double>{1.0, 10.0} : std::vector<double>{1.0, 10.0, 1e3};
  const int n_points = 65;
  const int osc_cells = quick ? 64 : 128;

  // independent oscillation oracle: 2 inf_b int_{1/2}^{3/2} |ln t - b| dt,
  // through the function-space quadrature rather than the operator path
  const double oracle =
      2.0 * oscillation(TestFunction::log_abs(), Cube(1.0, 1.0), GridSpec{2049}).value;

  std::vector<double> oscs, products;
  double worst_dev = 0.0;
  for (double c : cs) {
    const Cube q(c, c);
    std::vector<double> pts;
    for (int i = 0; i < n_points; ++i)
      pts.push_back(q.lo(0) + (i + 0.5) * q.side() / n_points);
    const auto res = apply_truncated(commutator, one, q, pts, cfg);
    double dev = 0.0;
    for (std::size_t i = 0; i < pts.size(); ++i)
      dev = std::max(dev, std::abs(res.total_values[i] -
                                   2.0 * (std::log(pts[i]) - std::log(c))));
    worst_dev = std::max(worst_dev, dev);
    rep.cases.push_back(make_case("formula sup-dev c=" + std::to_string(c), dev,
                                  1e-4, dev <= 1e-4, cube_extra(q)));

    const double osc =
        operator_oscillation(commutator, one, q, cfg, osc_cells, ApplyMode::Plain)
            .report.value;
    oscs.push_back(osc);
    products.push_back(log_distance(q) * osc);
    rep.cases.push_back(make_case("oscillation vs oracle c=" + std::to_string(c),
                                  std::abs(osc - oracle), 1e-3,
                                  std::abs(osc - oracle) <= 1e-3, cube_extra(q)));
  }

  double c_indep = 0.0;
  for (double o : oscs) c_indep = std::max(c_indep, std::abs(o - oscs.front()));
  rep.cases.push_back(
      make_case("oscillation c-independence", c_indep, 1e-3, c_indep <= 1e-3));

  bool increasing = true;
  for (std::size_t i = 1; i < products.size(); ++i)
    increasing = increasing && products[i] > products[i - 1];
  rep.cases.push_back(make_case("L(Q) * oscillation strictly increasing",
                                products.back() / products.front(), 1.0,
                                increasing));

  rep.global_constant = oscs.empty() ? 0.0 : oscs.front();
  rep.summary["oracle"] = oracle;
  rep.summary["formula_dev_max"] = worst_dev;
  for (std::size_t i = 0; i < cs.size(); ++i) {
    rep.summary["osc_c_" + std::to_string(cs[i])] = oscs[i];
    rep.summary["L_times_osc_c_" + std::to_string(cs[i])] = products[i];
  }
  finalize(rep, timer);
  return rep;
}

// --------------------------------------------------------------------------
// tl-chain: the designed contrast. ||T1||_LMO vanishes for the Hilbert
// transform, grows without bound for the |x| commutator, and stays bounded
// for a commutator whose profile derivative satisfies the LMO inequality.
// Also reports the testing-family estimates ||T log|x| ||_BMO,
// ||T log_{s,-s}||_BMO and the ratio sup ||Tf||_BMO / ||f||*_BMO.
// --------------------------------------------------------------------------
namespace {

struct T1Trend {
  double t1_lmo = 0.0;
  double t1_bmo = 0.0;
  double max_l = 0.0;
  double slope = 0.0;
  double last_over_first = 0.0;
  bool growing = false;
};

T1Trend measure_t1(const KernelSpec& k, std::span<const Cube> family,
                   const QuadratureConfig& cfg, int cells, bool parallel) {
  const auto one = TestFunction::constant(1.0);
  std::vector<double> oscs(family.size());
  parallel_for(
      family.size(),
      [&](std::size_t i) {
        oscs[i] = operator_oscillation(k, one, family[i], cfg, cells,
                                       ApplyMode::Plain)
                      .report.value;
      },
      parallel);
  T1Trend t;
  std::vector<std::pair<int, double>> raw;
  for (std::size_t i = 0; i < family.size(); ++i) {
    const double l = log_distance(family[i]);
    t.max_l = std::max(t.max_l, l);
    t.t1_bmo = std::max(t.t1_bmo, oscs[i]);
    t.t1_lmo = std::max(t.t1_lmo, l * oscs[i]);
    raw.emplace_back(growth_decade(family[i]), l * oscs[i]);
  }
  const auto buckets = decade_maxima(raw);
  t.slope = trend_slope_log10(buckets);
  if (!buckets.empty())
    t.last_over_first =
        buckets.back().second / std::max(buckets.front().second, 1e-300);
  const bool negligible = t.t1_lmo <= 1e-4 * t.max_l;
  t.growing = !negligible && t.slope > 0.05 && t.last_over_first >= 2.0;
  return t;
}

}  // namespace

VerificationReport suite_tl_chain(const VerifyOptions& opt) {
  Timer timer;
  VerificationReport rep;
  rep.suite_id = "tl-chain";
  const bool quick = opt.preset == Preset::Quick;
  const auto cfg = QuadratureConfig::standard();

  std::vector<Cube> family;
  for (double c : quick ? std::vector<double>{1.0, 10.0, 100.0}
                        : std::vector<double>{1.0, 10.0, 100.0, 1000.0})
    family.emplace_back(c, c);  // the sharp regime (c/2, 3c/2)
  for (double l : quick ? std::vector<double>{0.1, 1.0}
                        : std::vector<double>{0.01, 0.1, 1.0, 10.0})
    family.emplace_back(0.0, l);
  for (double c : quick ? std::vector<double>{10.0}
                        : std::vector<double>{10.0, 100.0, 1000.0})
    family.emplace_back(c, 1.0);
  if (!quick) {
    family.emplace_back(1.0, 0.01);
    family.emplace_back(5.0, 0.2);
    family.emplace_back(0.0, 100.0);
  }

  // smaller family for the BMO-ratio sweeps
  std::vector<Cube> op_family = {Cube(0.0, 1.0),  Cube(0.0, 0.1), Cube(0.0, 10.0),
                                 Cube(1.0, 1.0),  Cube(10.0, 10.0),
                                 Cube(10.0, 1.0), Cube(100.0, 1.0), Cube(2.0, 0.25)};
  if (quick) op_family.resize(5);

  struct KernelCase {
    KernelSpec kernel;
    bool expect_lmo;
  };
  std::vector<KernelCase> kernels;
  kernels.push_back({KernelSpec::hilbert(), true});
  kernels.push_back(
      {KernelSpec::calderon_commutator(TestFunction::abs_profile()), false});
  kernels.push_back(
      {KernelSpec::calderon_commutator(TestFunction::smooth_arctan_profile()), true});

  const GridSpec grid{129};
  const int t1_cells = quick ? 24 : 48;
  const int op_cells = quick ? 16 : 24;
  const std::vector<double> svals =
      quick ? std::vector<double>{1.0} : std::vector<double>{1.0, 10.0, 1000.0};

  for (const auto& [kernel, expect_lmo] : kernels) {
    const auto trend = measure_t1(kernel, family, cfg, t1_cells, opt.parallel);
    const bool lmo_ok = !trend.growing;
    const std::string kn = kernel.name();
    rep.cases.push_back(make_case(
        "T1 LMO classification " + kn, trend.t1_lmo, 1e-4 * trend.max_l,
        lmo_ok == expect_lmo,
        {{"slope", trend.slope}, {"last_over_first", trend.last_over_first}}));
    rep.summary["t1_lmo_" + kn] = trend.t1_lmo;
    rep.summary["t1_bmo_" + kn] = trend.t1_bmo;
    rep.summary["t1_slope_" + kn] = trend.slope;

    // testing family: T log|x| and T log_{s,-s}, plus ratio estimates
    const auto logabs = TestFunction::log_abs();
    const double t_logabs =
        operator_bmo_seminorm(kernel, logabs, op_family, cfg, op_cells).value;
    const double logabs_norm = bmo_norm(logabs, op_family, grid);
    rep.cases.push_back(make_case("T logabs finite " + kn, t_logabs, 1e6,
                                  std::isfinite(t_logabs) && t_logabs < 1e6));
    rep.summary["t_logabs_" + kn] = t_logabs;
    rep.summary["ratio_logabs_" + kn] = t_logabs / logabs_norm;

    double ratio_min = std::numeric_limits<double>::infinity(), ratio_max = 0.0;
    for (double s : svals) {
      std::vector<Cube> fam_s = op_family;
      fam_s.emplace_back(s, 1.0);
      fam_s.emplace_back(-s, 1.0);
      if (s > 2.0) {
        fam_s.emplace_back(s, s / 4);
        fam_s.emplace_back(-s, s / 4);
      }
      const auto f = TestFunction::log_shift_diff(s);
      const double t_ls = operator_bmo_seminorm(kernel, f, fam_s, cfg, op_cells).value;
      const double n_ls = bmo_norm(f, fam_s, grid);
      const double ratio = t_ls / std::max(n_ls, 1e-12);
      ratio_min = std::min(ratio_min, ratio);
      ratio_max = std::max(ratio_max, ratio);
      rep.summary["t_logshift_" + std::to_string(s) + "_" + kn] = t_ls;
    }
    rep.cases.push_back(make_case("T logshift ratios finite " + kn, ratio_max,
                                  1e6, std::isfinite(ratio_max) && ratio_max < 1e6,
                                  {{"ratio_min", ratio_min}}));
    rep.summary["logshift_ratio_max_" + kn] = ratio_max;

    const auto one = TestFunction::constant(1.0);
    const double t_one =
        operator_bmo_seminorm(kernel, one, op_family, cfg, op_cells).value;
    rep.summary["ratio_const_" + kn] = t_one;  // ||1||* = 1
  }

  // derived contrast verdicts
  rep.global_constant = rep.summary["t1_lmo_hilbert"];
  rep.cases.push_back(make_case("hilbert T1 LMO negligible",
                                rep.summary["t1_lmo_hilbert"], 1e-4,
                                rep.summary["t1_lmo_hilbert"] <= 1e-4 * 20.0));
  finalize(rep, timer);
  return rep;
}

// --------------------------------------------------------------------------
// registry
// --------------------------------------------------------------------------

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names = {
      "log-mean",         "logshift-norms",  "mean-growth",
      "hilbert-constants", "commutator-identity", "dyadic-sum",
      "sharpness",        "tl-chain"};
  return names;
}

VerificationReport run_suite(const std::string& id, const VerifyOptions& opt) {
  if (id == "log-mean") return suite_log_mean(opt);
  if (id == "logshift-norms") return suite_logshift_norms(opt);
  if (id == "mean-growth") return suite_mean_growth(opt);
  if (id == "hilbert-constants") return suite_hilbert_constants(opt);
  if (id == "commutator-identity") return suite_commutator_identity(opt);
  if (id == "dyadic-sum") return suite_dyadic_sum(opt);
  if (id == "sharpness") return suite_sharpness(opt);
  if (id == "tl-chain") return suite_tl_chain(opt);
  throw ConfigError("unknown suite: " + id);
}

std::vector<VerificationReport> run_suites(std::span<const std::string> ids,
                                           const VerifyOptions& opt) {
  std::vector<VerificationReport> reports(ids.size());
  parallel_for(
      ids.size(), [&](std::size_t i) { reports[i] = run_suite(ids[i], opt); },
      opt.parallel && ids.size() > 1);
  return reports;
}

}  // namespace czbmo
