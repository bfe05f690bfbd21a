// Acceptance harness: one pass/fail line per criterion, nonzero exit on any
// failure. Tolerances are pinned in code next to each check.
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <map>
#include <vector>

#include "czbmo/prng.hpp"
#include "czbmo/verify.hpp"
#include "oracles.hpp"

using namespace czbmo;

namespace {

int g_failures = 0;

void report(int num, const std::string& name, bool ok, const std::string& detail) {
  std::printf("[%s] %d. %s: %s\n", ok ? "PASS" : "FAIL", num, name.c_str(),
              detail.c_str());
  if (!ok) ++g_failures;
}

std::string fmt(const char* pattern, ...) {
  char buf[512];
  va_list args;
  va_start(args, pattern);
  std::vsnprintf(buf, sizeof(buf), pattern, args);
  va_end(args);
  return buf;
}

double case_measured(const VerificationReport& rep, const std::string& prefix) {
  for (const auto& c : rep.cases)
    if (c.label.rfind(prefix, 0) == 0) return c.measured;
  return std::nan("");
}

bool case_verdict(const VerificationReport& rep, const std::string& prefix) {
  bool found = false, ok = true;
  for (const auto& c : rep.cases)
    if (c.label.rfind(prefix, 0) == 0) {
      found = true;
      ok = ok && c.verdict;
    }
  return found && ok;
}

std::vector<double> midpoints(const Cube& q, int n) {
  std::vector<double> pts;
  for (int i = 0; i < n; ++i) pts.push_back(q.lo(0) + (i + 0.5) * q.side() / n);
  return pts;
}

double stddev(std::span<const double> v) {
  double mean = 0.0;
  for (double x : v) mean += x;
  mean /= static_cast<double>(v.size());
  double var = 0.0;
  for (double x : v) var += (x - mean) * (x - mean);
  return std::sqrt(var / static_cast<double>(v.size()));
}

// ---- criterion 3: base-cube constancy over overlapping pairs --------------
void criterion_base_cube_constancy() {
  const auto cfg = QuadratureConfig::strict();
  SplitMix64 rng(424242);
  const std::vector<KernelSpec> kernels = {
      KernelSpec::hilbert(),
      KernelSpec::calderon_commutator(TestFunction::abs_profile())};
  const std::vector<TestFunction> functions = {TestFunction::constant(1.0),
                                               TestFunction::log_abs()};
  double worst = 0.0;
  for (int pair = 0; pair < 20; ++pair) {
    const double l = std::pow(10.0, rng.uniform(-1.0, 1.0));
    const double c = rng.sign() * l * (2.2 + 40.0 * rng.next_double());
    const Cube q1(c, l);
    const Cube q2(c + 0.3 * l, 1.4 * l);
    std::vector<double> pts;
    for (int i = 0; i < 9; ++i)
      pts.push_back(c - 0.4 * l + (i + 0.5) * 0.9 * l / 9);
    for (const auto& k : kernels) {
      for (const auto& f : functions) {
        const auto r1 = apply_truncated(k, f, q1, pts, cfg);
        const auto r2 = apply_truncated(k, f, q2, pts, cfg);
        std::vector<double> diff(pts.size());
        for (std::size_t i = 0; i < pts.size(); ++i)
          diff[i] = r1.total_values[i] - r2.total_values[i];
        worst = std::max(worst, stddev(diff));
      }
    }
  }
  report(3, "base-cube constancy", worst <= 1e-5,
         fmt("max stddev over 20 pairs x {hilbert,commutator} x {1,log}: %.3g "
             "<= 1e-5",
             worst));
}

// ---- criterion 7: the seminorm estimate of the mean-corrected field -------
void criterion_lemma_bound() {
  const auto cfg = QuadratureConfig::standard();
  const auto h = KernelSpec::hilbert();
  const auto f = TestFunction::log_abs();

  std::vector<Cube> semi_family;
  for (double l : FamilySpec::log_spaced(-3, 3)) semi_family.emplace_back(0.0, l);
  const double seminorm = bmo_seminorm(f, semi_family, GridSpec{257}).value;

  auto family_for = [](bool extended) {
    std::vector<Cube> cubes;
    const std::vector<double> centers =
        extended ? std::vector<double>{0.0, 1.0, 10.0, 100.0, 1000.0}
                 : std::vector<double>{0.0, 1.0, 10.0, 100.0};
    const std::vector<double> sides = extended
                                          ? std::vector<double>{0.01, 0.1, 1.0, 10.0, 100.0}
                                          : std::vector<double>{0.1, 1.0, 10.0};
    for (double c : centers)
      for (double l : sides) {
        cubes.emplace_back(c, l);
        if (c > 0.0) cubes.emplace_back(-c, l);
      }
    return cubes;
  };

  auto max_ratio = [&](const std::vector<Cube>& cubes) {
    double worst = 0.0;
    for (const auto& q : cubes) {
      const double osc =
          operator_oscillation(h, f, q, cfg, 32, ApplyMode::MeanCorrected)
              .report.value;
      worst = std::max(worst, osc / seminorm);
    }
    return worst;
  };

  const double base = max_ratio(family_for(false));
  const double ext = max_ratio(family_for(true));
  const double change = std::abs(ext - base) / base;
  report(7, "mean-corrected seminorm bound",
         change < 0.2 && std::isfinite(base),
         fmt("max ||T_Q(f-f_2Q)||_Q / ||f||_BMO: base %.4g, extended %.4g, "
             "change %.1f%% < 20%%",
             base, ext, 100.0 * change));
}

// ---- criterion 9: numerical hygiene ----------------------------------------
void criterion_hygiene() {
  // (a) convergence under grid refinement on Lipschitz inputs.
  // Mean: the smooth Lipschitz-1 arctangent profile against its closed-form
  // antiderivative x atan x - ln(1 + x^2)/2, on a wide cube where the
  // low-resolution panels carry visible error.
  const auto smooth_profile = TestFunction::smooth_arctan_profile();
  const Cube wide(4.0, 30.0);
  auto exact_atan_mean = [](const Cube& q) {
    auto antider = [](double x) {
      return x * std::atan(x) - 0.5 * std::log1p(x * x);
    };
    return (antider(q.hi(0)) - antider(q.lo(0))) / q.side();
  };
  std::vector<double> mean_err;
  for (int level : {9, 17, 33})
    mean_err.push_back(std::abs(mean(smooth_profile, wide, GridSpec{level}) -
                                exact_atan_mean(wide)));

  // Oscillation: the |x| profile, whose best-constant deviation has kinks at
  // unknown level-crossings; oracle by adaptive quadrature + scan.
  const auto f = TestFunction::abs_profile();
  const std::vector<double> offsets = {0.1234, 0.2234, 0.3234, 0.4234, 0.5234};
  std::vector<double> osc_err;
  for (int level : {65, 129, 257}) {
    double oe = 0.0;
    for (double off : offsets) {
      const Cube q(off, 1.0);
      const double oracle = oracles::oscillation_oracle(
          [](double x) { return std::abs(x); }, q.lo(0), q.hi(0), 0.0, 1.0);
      oe = std::max(oe,
                    std::abs(oscillation(f, q, GridSpec{level}).value - oracle));
    }
    osc_err.push_back(oe);
  }
  bool conv_ok = true;
  const double noise_floor = 1e-13;
  for (std::size_t i = 1; i < mean_err.size(); ++i) {
    conv_ok = conv_ok &&
              mean_err[i] <= std::max(0.6 * mean_err[i - 1], noise_floor);
    conv_ok = conv_ok && osc_err[i] <= std::max(0.6 * osc_err[i - 1], noise_floor);
  }

  // (b) principal-value extrapolation agreement on smooth inputs
  const auto smooth = TestFunction::smooth_arctan_profile().derivative();
  const Cube q(0.0, 2.0);
  const auto res = apply_truncated(KernelSpec::hilbert(), smooth, q,
                                   midpoints(q, 9), QuadratureConfig::strict());
  const bool pv_ok = res.pv_delta <= 1e-6;

  report(9, "numerical hygiene", conv_ok && pv_ok,
         fmt("mean errors %.2g/%.2g/%.2g, osc errors %.2g/%.2g/%.2g (ratios <= "
             "0.6); pv delta %.2g <= 1e-6",
             mean_err[0], mean_err[1], mean_err[2], osc_err[0], osc_err[1],
             osc_err[2], res.pv_delta));
}

}  // namespace

int main() {
  using Clock = std::chrono::steady_clock;
  const auto t0 = Clock::now();

  // Full desk-preset verification run; several criteria read off its reports.
  const VerifyOptions opt = VerifyOptions::desk();
  std::map<std::string, VerificationReport> reports;
  for (const auto& id : suite_names()) reports[id] = run_suite(id, opt);
  const double verify_seconds =
      std::chrono::duration<double>(Clock::now() - t0).count();

  {
    const auto& rep = reports.at("hilbert-constants");
    report(1, "hilbert annihilation", rep.pass && rep.runtime_seconds < 5.0,
           fmt("max |H_Q 1| = %.3g <= 1e-6 over the random family (%.2fs < 5s)",
               rep.global_constant, rep.runtime_seconds));
  }
  {
    const auto& rep = reports.at("sharpness");
    const bool ok = rep.pass && rep.runtime_seconds < 10.0;
    report(2, "sharpness formula and oscillation", ok,
           fmt("sup |C_Q1 - 2(ln x - ln c)| = %.3g <= 1e-4; osc vs oracle ok; "
               "L*osc increasing (%.2fs < 10s)",
               rep.summary.at("formula_dev_max"), rep.runtime_seconds));
  }

  criterion_base_cube_constancy();

  {
    const auto& rep = reports.at("log-mean");
    report(4, "log-mean lemma", rep.pass,
           fmt("max |log_Q - log max(|c|,l)| = %.4g in [1.0, 2.5]; Q0 value "
               "exact to 1e-6; extension stable",
               rep.summary.at("max_base")));
  }
  {
    const auto& rep = reports.at("logshift-norms");
    report(5, "uniform logshift norms", rep.pass,
           fmt("norm ratios across s in {1,10,1e3,1e6}: max %.3f <= 2",
               rep.global_constant));
  }
  {
    const auto& rep = reports.at("dyadic-sum");
    report(6, "dyadic-sum claim", rep.pass,
           fmt("max L(Q)*sum = %.4g; slopes %.3f / %.3f < 0.1",
               rep.global_constant, rep.summary.at("slope_delta_0.500000"),
               rep.summary.at("slope_delta_1.000000")));
  }

  criterion_lemma_bound();

  {
    const auto& rep = reports.at("tl-chain");
    const double t1_hilbert = rep.summary.at("t1_lmo_hilbert");
    const bool contrast =
        rep.pass && case_verdict(rep, "T1 LMO classification");
    const bool time_ok = verify_seconds < 60.0;
    report(8, "T(L) chain contrast", contrast && time_ok,
           fmt("hilbert ||T1||_LMO = %.2g; |x| commutator grows "
               "(measured %.3g); LMO-profile bounded (%.3g); full verify %.1fs "
               "< 60s",
               t1_hilbert, rep.summary.at("t1_lmo_commutator:abs-profile"),
               rep.summary.at("t1_lmo_commutator:atan-profile"),
               verify_seconds));
    (void)case_measured;
  }

  criterion_hygiene();

  if (g_failures == 0)
    std::printf("acceptance: all criteria passed\n");
  else
    std::printf("acceptance: %d criterion(s) FAILED\n", g_failures);
  return g_failures == 0 ? 0 : 1;
}
