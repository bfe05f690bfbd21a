#include "czbmo/report_io.hpp"

#include <chrono>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace czbmo {

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

json to_json(const Cube& q) {
  return json{{"center", q.center()}, {"side", q.side()}};
}

Cube cube_from_json(const json& j) {
  if (!j.is_object() || !j.contains("center") || !j.contains("side"))
    throw ConfigError("cube JSON needs {\"center\": [..], \"side\": x}");
  std::vector<double> center;
  if (j["center"].is_number())
    center.push_back(j["center"].get<double>());
  else
    center = j["center"].get<std::vector<double>>();
  return Cube(std::move(center), j["side"].get<double>());
}

json to_json(const OscillationReport& rep) {
  return json{{"cube", to_json(rep.cube)},
              {"best_constant", rep.best_constant},
              {"value", rep.value},
              {"grid_points", rep.grid_points}};
}

json to_json(const SeminormEstimate& est) {
  json trace = json::array();
  for (const auto& [pts, v] : est.convergence_trace)
    trace.push_back(json{{"grid_points", pts}, {"value", v}});
  return json{{"value", est.value},
              {"family_size", est.family_size},
              {"argmax_cube", to_json(est.argmax_cube)},
              {"convergence_trace", trace},
              {"cross_check_delta", est.cross_check_delta}};
}

json to_json(const TruncatedResult& res) {
  json j{{"cube", to_json(res.cube)},
         {"points", res.points},
         {"total", res.total_values},
         {"near", res.near_values},
         {"far", res.far_values},
         {"tail_bound", res.tail_bound},
         {"pv_delta", res.pv_delta},
         {"shells_used", res.shells_used}};
  if (res.base_cube_mean) j["base_cube_mean"] = *res.base_cube_mean;
  return j;
}

json to_json(const VerificationReport& rep) {
  json cases = json::array();
  for (const auto& c : rep.cases) {
    json extra(json::value_t::object);
    for (const auto& [k, v] : c.extra) extra[k] = v;
    cases.push_back(json{{"label", c.label},
                         {"measured", c.measured},
                         {"bound", c.bound},
                         {"verdict", c.verdict},
                         {"extra", extra}});
  }
  json summary(json::value_t::object);
  for (const auto& [k, v] : rep.summary) summary[k] = v;
  return json{{"suite_id", rep.suite_id},
              {"pass", rep.pass},
              {"global_constant", rep.global_constant},
              {"cases", cases},
              {"summary", summary}};
}

std::string to_csv(const VerificationReport& rep) {
  std::ostringstream os;
  os << "label,center,side,measured,bound,verdict\n";
  for (const auto& c : rep.cases) {
    std::string label = c.label;
    for (char& ch : label)
      if (ch == ',') ch = ';';
    const auto center = c.extra.find("center");
    const auto side = c.extra.find("side");
    os << label << ','
       << (center != c.extra.end() ? fmt(center->second) : "") << ','
       << (side != c.extra.end() ? fmt(side->second) : "") << ','
       << fmt(c.measured) << ',' << fmt(c.bound) << ',' << (c.verdict ? 1 : 0)
       << '\n';
  }
  return os.str();
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write " + path.string());
  out << text;
}

void write_suite_files(const std::filesystem::path& dir,
                       const VerificationReport& rep) {
  std::filesystem::create_directories(dir);
  write_text_file(dir / (rep.suite_id + ".json"), to_json(rep).dump(2) + "\n");
  write_text_file(dir / (rep.suite_id + ".csv"), to_csv(rep));
}

void write_run_meta(const std::filesystem::path& dir,
                    const std::map<std::string, double>& suite_runtimes,
                    std::uint64_t seed) {
  std::filesystem::create_directories(dir);
  json runtimes(json::value_t::object);
  double total = 0.0;
  for (const auto& [k, v] : suite_runtimes) {
    runtimes[k] = v;
    total += v;
  }
  const auto now = std::chrono::system_clock::now();
  json meta{{"timestamp_unix_ms",
             std::chrono::duration_cast<std::chrono::milliseconds>(
                 now.time_since_epoch())
                 .count()},
            {"seed", seed},
            {"runtime_seconds", runtimes},
            {"runtime_total_seconds", total}};
  write_text_file(dir / "run_meta.json", meta.dump(2) + "\n");
}

}  // namespace czbmo
