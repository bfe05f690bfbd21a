#include "czbmo/cli.hpp"

#include <cstdio>
#include <filesystem>
#include <iostream>

#include <CLI11.hpp>

#include "czbmo/config.hpp"
#include "czbmo/report_io.hpp"
#include "czbmo/verify.hpp"

namespace czbmo {

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFail = 1;
constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;

void maybe_write(const std::string& out_dir, const std::string& name,
                 const json& j) {
  if (out_dir.empty()) return;
  std::filesystem::create_directories(out_dir);
  write_text_file(std::filesystem::path(out_dir) / name, j.dump(2) + "\n");
}

std::vector<Cube> resolve_family(const RunConfig& rc) {
  if (rc.family_path) return load_family(*rc.family_path);
  return preset_family(rc.preset);
}

int cmd_oscillation(const RunConfig& rc) {
  const auto f = make_function(rc.function_tag);
  const Cube q = rc.cube.value_or(Cube::reference(1));
  const auto rep = oscillation(f, q, rc.grid);
  std::printf("oscillation %s on %s: value %.12g best_constant %.12g (%d points)\n",
              f.name().c_str(), q.describe().c_str(), rep.value,
              rep.best_constant, rep.grid_points);
  maybe_write(rc.out_dir, "oscillation.json", to_json(rep));
  return kExitOk;
}

int cmd_seminorm(const RunConfig& rc) {
  const auto f = make_function(rc.function_tag);
  const auto family = resolve_family(rc);
  const SeminormEstimate est = rc.lmo ? lmo_seminorm(f, family, rc.grid)
                                      : bmo_seminorm(f, family, rc.grid);
  const char* kind = rc.lmo ? "lmo" : "bmo";
  std::printf("%s seminorm estimate for %s: %.12g over %d cubes (argmax %s)\n",
              kind, f.name().c_str(), est.value, est.family_size,
              est.argmax_cube.describe().c_str());
  if (!rc.lmo) {
    const double norm = est.value + std::abs(mean(f, Cube::reference(1), rc.grid));
    std::printf("normed bmo estimate: %.12g\n", norm);
  }
  maybe_write(rc.out_dir, std::string(kind) + "_seminorm.json", to_json(est));
  return kExitOk;
}

int cmd_apply(const RunConfig& rc, const std::string& mode_name, int grid_n) {
  const auto k = make_kernel(rc.kernel_tag);
  const auto f = make_function(rc.function_tag);
  const Cube q = rc.cube.value_or(Cube::reference(1));

  std::vector<double> pts = rc.points;
  if (pts.empty()) {
    const int n = grid_n > 0 ? grid_n : 33;
    for (int i = 0; i < n; ++i) pts.push_back(q.lo(0) + (i + 0.5) * q.side() / n);
  }

  ApplyMode mode = ApplyMode::Bmo;
  if (mode_name == "plain")
    mode = ApplyMode::Plain;
  else if (mode_name == "corrected")
    mode = ApplyMode::MeanCorrected;
  else if (mode_name != "bmo")
    throw ConfigError("unknown apply mode: " + mode_name);

  const auto res = apply_with_base(k, f, q, pts, rc.quad, mode);
  double sup = 0.0;
  for (double v : res.total_values) sup = std::max(sup, std::abs(v));
  std::printf("T_Q %s with %s on %s: %zu points, sup |T| = %.12g, tail bound %.3g\n",
              f.name().c_str(), k.name().c_str(), q.describe().c_str(),
              res.points.size(), sup, res.tail_bound);
  maybe_write(rc.out_dir, "apply.json", to_json(res));
  if (!rc.out_dir.empty()) {
    std::string csv = "point,near,far,total\n";
    char buf[160];
    for (std::size_t i = 0; i < res.points.size(); ++i) {
      std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g,%.17g\n", res.points[i],
                    res.near_values[i], res.far_values[i], res.total_values[i]);
      csv += buf;
    }
    write_text_file(std::filesystem::path(rc.out_dir) / "apply.csv", csv);
  }
  return kExitOk;
}

int cmd_verify(const RunConfig& rc) {
  VerifyOptions opt;
  opt.seed = rc.seed;
  opt.deltas = rc.deltas;
  if (rc.preset == "quick")
    opt.preset = Preset::Quick;
  else if (rc.preset == "desk")
    opt.preset = Preset::Desk;
  else
    throw ConfigError("unknown preset: " + rc.preset);

  std::vector<std::string> ids = rc.suites;
  if (ids.empty() || (ids.size() == 1 && ids[0] == "all")) ids = suite_names();
  for (const auto& id : ids)
    if (std::find(suite_names().begin(), suite_names().end(), id) ==
        suite_names().end())
      throw ConfigError("unknown suite: " + id);

  const auto reports = run_suites(ids, opt);
  bool all_pass = true;
  std::map<std::string, double> runtimes;
  for (const auto& rep : reports) {
    all_pass = all_pass && rep.pass;
    runtimes[rep.suite_id] = rep.runtime_seconds;
    std::printf("[%s] %-20s global_constant %.6g (%zu cases, %.2fs)\n",
                rep.pass ? "PASS" : "FAIL", rep.suite_id.c_str(),
                rep.global_constant, rep.cases.size(), rep.runtime_seconds);
    if (!rc.out_dir.empty()) write_suite_files(rc.out_dir, rep);
  }
  if (!rc.out_dir.empty()) write_run_meta(rc.out_dir, runtimes, rc.seed);
  return all_pass ? kExitOk : kExitFail;
}

int cmd_kernels_check(const RunConfig& rc, double delta_override) {
  const auto k = make_kernel(rc.kernel_tag);
  const auto pairs = default_size_pairs(rc.seed);
  const auto size_rep = check_size(k, pairs);
  const auto triples = default_regularity_triples(rc.seed + 1);
  std::optional<double> dov;
  if (delta_override > 0.0) dov = delta_override;
  const auto reg_rep = check_regularity(k, triples, dov);

  std::printf("kernel %s: size sup %.6g over %zu pairs [%s]\n", k.name().c_str(),
              size_rep.measured_sup, size_rep.pairs,
              size_rep.pass ? "PASS" : "FAIL");
  std::printf("kernel %s: regularity sup %.6g (delta %.3g) over %zu triples [%s]\n",
              k.name().c_str(), reg_rep.measured_sup, reg_rep.delta_used,
              reg_rep.triples, reg_rep.pass ? "PASS" : "FAIL");

  if (!rc.out_dir.empty()) {
    json sj{{"kernel", k.name()},
            {"seed", rc.seed},
            {"size", {{"measured_sup", size_rep.measured_sup},
                      {"log10_slope", size_rep.log10_slope},
                      {"pass", size_rep.pass},
                      {"pairs", size_rep.pairs}}},
            {"regularity", {{"measured_sup", reg_rep.measured_sup},
                            {"delta", reg_rep.delta_used},
                            {"log10_slope", reg_rep.log10_slope},
                            {"pass", reg_rep.pass},
                            {"triples", reg_rep.triples}}}};
    maybe_write(rc.out_dir, "kernels-check.json", sj);
  }
  return (size_rep.pass && reg_rep.pass) ? kExitOk : kExitFail;
}

}  // namespace

std::vector<Cube> preset_family(const std::string& name) {
  FamilySpec spec;
  if (name == "desk") {
    spec.sides = FamilySpec::log_spaced(-3, 3);
    spec.center_distances = {0.0};
    for (double m : FamilySpec::log_spaced(-2, 4))
      spec.center_distances.push_back(m);
  } else if (name == "quick") {
    spec.sides = FamilySpec::log_spaced(-2, 2);
    spec.center_distances = {0.0, 0.1, 1.0, 10.0, 100.0};
  } else {
    throw ConfigError("unknown preset: " + name);
  }
  spec.directions = {{1.0}, {-1.0}};
  return make_family(spec);
}

int run_cli(const std::vector<std::string>& args) {
  std::vector<std::string> rest;
  RunConfig rc;

  try {
    // --config is handled before flag parsing so flags can override it
    for (std::size_t i = 0; i < args.size(); ++i) {
      if (args[i] == "--config") {
        if (i + 1 >= args.size()) throw ConfigError("--config needs a path");
        rc.apply(load_config_file(args[++i]));
      } else {
        rest.push_back(args[i]);
      }
    }
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return kExitConfig;
  }

  CLI::App app{"numerical toolkit for truncated Calderon-Zygmund operators on BMO"};
  app.require_subcommand(1);

  std::string cube_arg, points_arg, mode_name = "bmo", suites_arg;
  int grid_n = 0;
  double delta_override = 0.0;

  auto add_common = [&](CLI::App* sub, bool wants_kernel) {
    sub->add_option("--f", rc.function_tag, "function tag");
    if (wants_kernel) sub->add_option("--kernel", rc.kernel_tag, "kernel tag");
    sub->add_option("--cube", cube_arg, "cube as 'center,side'");
    sub->add_option("--family", [&rc](const std::vector<std::string>& v) {
      rc.family_path = v.back();
      return true;
    }, "cube family JSON file");
    sub->add_option("--out", rc.out_dir, "output directory");
    sub->add_option("--seed", rc.seed, "run seed");
    sub->add_option("--preset", rc.preset, "desk or quick");
    sub->add_option("--grid-points", rc.grid.points_per_axis,
                    "quadrature points per axis");
  };

  auto* osc = app.add_subcommand("oscillation", "best-constant L1 oscillation");
  add_common(osc, false);

  auto* semi = app.add_subcommand("seminorm", "BMO/LMO seminorm over a family");
  add_common(semi, false);
  semi->add_flag("--lmo", rc.lmo, "weight oscillations by L(Q)");

  auto* apply = app.add_subcommand("apply", "evaluate the truncated operator");
  add_common(apply, true);
  apply->add_option("--points", points_arg, "comma-separated evaluation points");
  apply->add_option("--grid", grid_n, "number of evaluation grid points");
  apply->add_option("--mode", mode_name, "plain | corrected | bmo");

  auto* verify = app.add_subcommand("verify", "run verification suites");
  add_common(verify, false);
  verify->add_option("--suite", suites_arg, "all or comma-separated suite ids");
  std::string delta_arg;
  verify->add_option("--delta", delta_arg,
                     "comma-separated regularity exponents for dyadic-sum");

  auto* kcheck = app.add_subcommand("kernels-check", "size/regularity conditions");
  add_common(kcheck, true);
  kcheck->add_option("--delta", delta_override, "regularity exponent override");

  std::vector<const char*> argv = {"czbmo"};
  for (const auto& a : rest) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (!cube_arg.empty()) rc.cube = parse_cube_arg(cube_arg);
    if (!points_arg.empty()) rc.points = parse_double_list(points_arg);
    if (!delta_arg.empty()) rc.deltas = parse_double_list(delta_arg);
    if (!suites_arg.empty()) {
      rc.suites.clear();
      std::istringstream in(suites_arg);
      std::string id;
      while (std::getline(in, id, ','))
        if (!id.empty()) rc.suites.push_back(id);
    }

    if (app.got_subcommand(osc)) return cmd_oscillation(rc);
    if (app.got_subcommand(semi)) return cmd_seminorm(rc);
    if (app.got_subcommand(apply)) return cmd_apply(rc, mode_name, grid_n);
    if (app.got_subcommand(verify)) return cmd_verify(rc);
    if (app.got_subcommand(kcheck)) return cmd_kernels_check(rc, delta_override);
    throw ConfigError("no subcommand selected");
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return kExitConfig;
  } catch (const NumericalError& e) {
    std::fprintf(stderr, "numerical failure: %s\n", e.what());
    return kExitNumerical;
  }
}

int run_cli(int argc, const char* const* argv) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run_cli(args);
}

}  // namespace czbmo
