#include <doctest.h>

#include "czbmo/report_io.hpp"
#include "czbmo/verify.hpp"

using namespace czbmo;

namespace {
const VerifyOptions kQuick = VerifyOptions::quick();
}

TEST_CASE("trend slope helper") {
  const std::vector<std::pair<int, double>> flat = {{0, 2.0}, {1, 2.0}, {2, 2.0}};
  CHECK(trend_slope_log10(flat) == doctest::Approx(0.0));
  const std::vector<std::pair<int, double>> up = {{0, 1.0}, {1, 10.0}, {2, 100.0}};
  CHECK(trend_slope_log10(up) == doctest::Approx(1.0));
  CHECK(growth_decade(Cube(0.0, 1.0)) == 0);
  CHECK(growth_decade(Cube(100.0, 1.0)) == 2);
  CHECK(growth_decade(Cube(0.0, 1e-3)) == 3);
}

TEST_CASE("suite: log-mean") {
  const auto rep = suite_log_mean(kQuick);
  CHECK(rep.pass);
  CHECK(rep.global_constant >= 1.0);
  CHECK(rep.global_constant <= 2.5);
  CHECK(rep.summary.at("max_base") == doctest::Approx(1.0 + std::log(2.0)).epsilon(1e-4));
}

TEST_CASE("suite: logshift-norms") {
  const auto rep = suite_logshift_norms(kQuick);
  CHECK(rep.pass);
  CHECK(rep.global_constant <= 2.0);
}

TEST_CASE("suite: mean-growth") {
  const auto rep = suite_mean_growth(kQuick);
  CHECK(rep.pass);
  CHECK(rep.summary.at("C_base") > 0.0);
  CHECK(rep.summary.at("C_ext") <= 2.0 * rep.summary.at("C_base"));
}

TEST_CASE("suite: hilbert-constants") {
  const auto rep = suite_hilbert_constants(kQuick);
  CHECK(rep.pass);
  CHECK(rep.global_constant <= 1e-6);
}

TEST_CASE("suite: commutator-identity") {
  const auto rep = suite_commutator_identity(kQuick);
  CHECK(rep.pass);
  CHECK(rep.global_constant <= 1e-6);
}

TEST_CASE("suite: dyadic-sum") {
  const auto rep = suite_dyadic_sum(kQuick);
  CHECK(rep.pass);
  CHECK(rep.summary.at("slope_delta_1.000000") < 0.1);
  CHECK(rep.summary.at("slope_delta_0.500000") < 0.1);
}

TEST_CASE("suite: sharpness") {
  const auto rep = suite_sharpness(kQuick);
  CHECK(rep.pass);
  CHECK(rep.summary.at("oracle") == doctest::Approx(0.5232481437645479).epsilon(1e-4));
}

TEST_CASE("suite: tl-chain shows the designed contrast") {
  const auto rep = suite_tl_chain(kQuick);
  CHECK(rep.pass);
  // the |x| commutator must grow, the other two must not
  CHECK(rep.summary.at("t1_lmo_hilbert") <= 1e-4 * 20.0);
  CHECK(rep.summary.at("t1_lmo_commutator:abs-profile") >
        10.0 * rep.summary.at("t1_lmo_hilbert"));
}

TEST_CASE("suites are deterministic given the seed") {
  const auto a = suite_dyadic_sum(kQuick);
  const auto b = suite_dyadic_sum(kQuick);
  CHECK(to_json(a).dump() == to_json(b).dump());

  const auto ha = suite_hilbert_constants(kQuick);
  const auto hb = suite_hilbert_constants(kQuick);
  CHECK(to_json(ha).dump() == to_json(hb).dump());

  VerifyOptions other = kQuick;
  other.seed += 1;
  const auto hc = suite_hilbert_constants(other);
  CHECK(to_json(ha).dump() != to_json(hc).dump());
}

TEST_CASE("suite registry") {
  CHECK(suite_names().size() == 8);
  CHECK_THROWS_AS(run_suite("nosuch", kQuick), ConfigError);
  const std::vector<std::string> two = {"dyadic-sum", "log-mean"};
  const auto reports = run_suites(two, kQuick);
  REQUIRE(reports.size() == 2);
  CHECK(reports[0].suite_id == "dyadic-sum");
  CHECK(reports[1].suite_id == "log-mean");
}

TEST_CASE("report serialization") {
  const auto rep = suite_dyadic_sum(kQuick);
  const auto j = to_json(rep);
  CHECK(j["suite_id"] == "dyadic-sum");
  CHECK(j.contains("cases"));
  CHECK_FALSE(j.contains("runtime_seconds"));  // runtimes go to run metadata
  const auto csv = to_csv(rep);
  CHECK(csv.find("label,center,side,measured,bound,verdict") == 0);
}
