#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "czbmo/truncated_operator.hpp"

namespace czbmo {

struct SuiteCase {
  std::string label;
  double measured = 0.0;
  double bound = 0.0;
  bool verdict = true;
  std::map<std::string, double> extra;  // cube parameters etc., for CSV/plots
};

struct VerificationReport {
  std::string suite_id;
  std::vector<SuiteCase> cases;
  double global_constant = 0.0;
  bool pass = false;
  double runtime_seconds = 0.0;  // written to run metadata, not the report file
  std::map<std::string, double> summary;
};

enum class Preset { Desk, Quick };

struct VerifyOptions {
  std::uint64_t seed = 20260808ULL;
  Preset preset = Preset::Desk;
  bool parallel = true;
  std::vector<double> deltas = {0.5, 1.0};  // dyadic-sum regularity exponents

  static VerifyOptions desk() { return {}; }
  static VerifyOptions quick() {
    VerifyOptions o;
    o.preset = Preset::Quick;
    return o;
  }
};

// Numbered experiment suites; each checks one lemma / inequality / worked
// computation and reports measured constants with pass/fail verdicts.
VerificationReport suite_log_mean(const VerifyOptions& opt = {});
VerificationReport suite_logshift_norms(const VerifyOptions& opt = {});
VerificationReport suite_mean_growth(const VerifyOptions& opt = {});
VerificationReport suite_hilbert_constants(const VerifyOptions& opt = {});
VerificationReport suite_commutator_identity(const VerifyOptions& opt = {});
VerificationReport suite_dyadic_sum(const VerifyOptions& opt = {});
VerificationReport suite_sharpness(const VerifyOptions& opt = {});
VerificationReport suite_tl_chain(const VerifyOptions& opt = {});

const std::vector<std::string>& suite_names();
VerificationReport run_suite(const std::string& id, const VerifyOptions& opt = {});
std::vector<VerificationReport> run_suites(std::span<const std::string> ids,
                                           const VerifyOptions& opt = {});

// Least-squares slope of log10(max value) against the decade index; the
// numerical surrogate for "the constant does not grow with the family".
double trend_slope_log10(std::span<const std::pair<int, double>> decade_max);

// Decade bucket of the quantity that drives L(Q): max(|c|, l, 1/l, 1).
int growth_decade(const Cube& q);

}  // namespace czbmo
