#include "czbmo/config.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <sstream>

#include "czbmo/report_io.hpp"

namespace czbmo {

using nlohmann::json;

TestFunction make_function(const std::string& tag) {
  if (tag == "logabs") return TestFunction::log_abs();
  if (tag == "abs-profile") return TestFunction::abs_profile();
  if (tag == "atan-profile") return TestFunction::smooth_arctan_profile();
  if (tag == "linear-profile") return TestFunction::linear_profile();
  if (tag == "aprime:abs") return TestFunction::abs_profile().derivative();
  if (tag == "aprime:atan") return TestFunction::smooth_arctan_profile().derivative();
  if (tag == "aprime:linear") return TestFunction::linear_profile().derivative();
  if (tag.rfind("const:", 0) == 0) {
    try {
      return TestFunction::constant(std::stod(tag.substr(6)));
    } catch (const std::exception&) {
      throw ConfigError("bad constant in function tag: " + tag);
    }
  }
  if (tag.rfind("logshiftdiff:", 0) == 0) {
    const auto parts = parse_double_list(tag.substr(13));
    if (parts.empty()) throw ConfigError("bad shift in function tag: " + tag);
    return TestFunction::log_shift_diff(parts);
  }
  if (tag.rfind("table:", 0) == 0) return TestFunction::from_csv(tag.substr(6));
  throw ConfigError("unknown function tag: " + tag);
}

KernelSpec make_kernel(const std::string& tag) {
  if (tag == "hilbert") return KernelSpec::hilbert();
  if (tag == "commutator:abs")
    return KernelSpec::calderon_commutator(TestFunction::abs_profile());
  if (tag == "commutator:atan")
    return KernelSpec::calderon_commutator(TestFunction::smooth_arctan_profile());
  if (tag == "commutator:linear")
    return KernelSpec::calderon_commutator(TestFunction::linear_profile());
  if (tag.rfind("commutator:table:", 0) == 0)
    return KernelSpec::calderon_commutator(TestFunction::from_csv(tag.substr(17)));
  if (tag == "custom:zero")
    return KernelSpec::custom("custom:zero", [](double, double) { return 0.0; }, 1,
                              1.0, 0.0, 0.0);
  if (tag == "custom:inverse-square")
    // deliberately fails the size condition: |K| |x-y| grows like 1/|x-y|
    return KernelSpec::custom(
        "custom:inverse-square",
        [](double x, double y) { return 1.0 / ((x - y) * (x - y)); }, 1, 1.0, 1.0,
        1.0);
  throw ConfigError("unknown kernel tag: " + tag);
}

std::vector<Cube> family_from_json(const json& j) {
  if (j.contains("cubes")) {
    std::vector<Cube> out;
    for (const auto& cj : j["cubes"]) out.push_back([&] {
      if (!cj.contains("center") || !cj.contains("side"))
        throw ConfigError("family cube entry needs center and side");
      std::vector<double> center;
      if (cj["center"].is_number())
        center.push_back(cj["center"].get<double>());
      else
        center = cj["center"].get<std::vector<double>>();
      return Cube(std::move(center), cj["side"].get<double>());
    }());
    if (out.empty()) throw ConfigError("family file lists no cubes");
    return out;
  }
  FamilySpec spec;
  if (j.contains("dimension")) spec.dimension = j["dimension"].get<int>();
  if (!j.contains("sides") || !j.contains("center_distances"))
    throw ConfigError("family descriptor needs sides and center_distances");
  spec.sides = j["sides"].get<std::vector<double>>();
  spec.center_distances = j["center_distances"].get<std::vector<double>>();
  if (j.contains("directions"))
    spec.directions = j["directions"].get<std::vector<std::vector<double>>>();
  return make_family(spec);
}

std::vector<Cube> load_family(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open family file: " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ConfigError("bad family JSON in " + path + ": " + e.what());
  }
  return family_from_json(j);
}

// ---------------------------------------------------------------------------
// TOML subset
// ---------------------------------------------------------------------------

namespace {

std::string strip(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r");
  std::size_t e = s.find_last_not_of(" \t\r");
  if (b == std::string::npos) return "";
  return s.substr(b, e - b + 1);
}

json parse_toml_scalar(const std::string& raw, int lineno) {
  const std::string v = strip(raw);
  if (v.empty()) throw ConfigError("toml: empty value at line " + std::to_string(lineno));
  if (v.front() == '"') {
    if (v.size() < 2 || v.back() != '"')
      throw ConfigError("toml: unterminated string at line " + std::to_string(lineno));
    return v.substr(1, v.size() - 2);
  }
  if (v == "true") return true;
  if (v == "false") return false;
  if (v.front() == '[') {
    if (v.back() != ']')
      throw ConfigError("toml: unterminated array at line " + std::to_string(lineno));
    json arr = json::array();
    std::string body = v.substr(1, v.size() - 2);
    std::string item;
    int depth = 0;
    bool in_str = false;
    for (char ch : body) {
      if (ch == '"') in_str = !in_str;
      if (!in_str && ch == '[') ++depth;
      if (!in_str && ch == ']') --depth;
      if (!in_str && depth == 0 && ch == ',') {
        if (!strip(item).empty()) arr.push_back(parse_toml_scalar(item, lineno));
        item.clear();
      } else {
        item += ch;
      }
    }
    if (!strip(item).empty()) arr.push_back(parse_toml_scalar(item, lineno));
    return arr;
  }
  try {
    std::size_t used = 0;
    const double d = std::stod(v, &used);
    if (used != v.size())
      throw ConfigError("toml: bad number at line " + std::to_string(lineno));
    if (d == std::floor(d) && std::abs(d) < 9e15 &&
        v.find_first_of(".eE") == std::string::npos)
      return static_cast<std::int64_t>(d);
    return d;
  } catch (const std::invalid_argument&) {
    throw ConfigError("toml: unrecognized value '" + v + "' at line " +
                      std::to_string(lineno));
  }
}

}  // namespace

json toml_to_json(const std::string& text) {
  json root(json::value_t::object);
  json* table = &root;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    // strip comments outside strings
    bool in_str = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
      if (line[i] == '"') in_str = !in_str;
      if (line[i] == '#' && !in_str) {
        line = line.substr(0, i);
        break;
      }
    }
    const std::string t = strip(line);
    if (t.empty()) continue;
    if (t.front() == '[') {
      if (t.back() != ']')
        throw ConfigError("toml: bad table header at line " + std::to_string(lineno));
      const std::string name = strip(t.substr(1, t.size() - 2));
      if (name.empty())
        throw ConfigError("toml: empty table name at line " + std::to_string(lineno));
      table = &root[name];
      if (table->is_null()) *table = json(json::value_t::object);
      continue;
    }
    const std::size_t eq = t.find('=');
    if (eq == std::string::npos)
      throw ConfigError("toml: expected key = value at line " + std::to_string(lineno));
    const std::string key = strip(t.substr(0, eq));
    if (key.empty())
      throw ConfigError("toml: empty key at line " + std::to_string(lineno));
    (*table)[key] = parse_toml_scalar(t.substr(eq + 1), lineno);
  }
  return root;
}

json load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  if (path.size() >= 5 && path.substr(path.size() - 5) == ".json") {
    try {
      return json::parse(buf.str());
    } catch (const json::exception& e) {
      throw ConfigError("bad JSON config " + path + ": " + e.what());
    }
  }
  return toml_to_json(buf.str());
}

void RunConfig::apply(const json& j) {
  try {
    if (j.contains("kernel")) kernel_tag = j["kernel"].get<std::string>();
    if (j.contains("function")) function_tag = j["function"].get<std::string>();
    if (j.contains("f")) function_tag = j["f"].get<std::string>();
    if (j.contains("cube")) {
      if (j["cube"].is_string())
        cube = parse_cube_arg(j["cube"].get<std::string>());
      else
        cube = cube_from_json(j["cube"]);
    }
    if (j.contains("family")) family_path = j["family"].get<std::string>();
    if (j.contains("suites")) suites = j["suites"].get<std::vector<std::string>>();
    if (j.contains("out")) out_dir = j["out"].get<std::string>();
    if (j.contains("seed")) seed = j["seed"].get<std::uint64_t>();
    if (j.contains("preset")) preset = j["preset"].get<std::string>();
    if (j.contains("points")) points = j["points"].get<std::vector<double>>();
    if (j.contains("deltas")) deltas = j["deltas"].get<std::vector<double>>();
    if (j.contains("lmo")) lmo = j["lmo"].get<bool>();
    if (j.contains("grid_points")) grid.points_per_axis = j["grid_points"].get<int>();
    if (j.contains("quadrature")) {
      const auto& q = j["quadrature"];
      if (q.contains("pv_epsilons"))
        quad.pv_epsilons = q["pv_epsilons"].get<std::vector<double>>();
      if (q.contains("near_nodes")) quad.near_nodes = q["near_nodes"].get<int>();
      if (q.contains("shell_cells")) quad.shell_cells = q["shell_cells"].get<int>();
      if (q.contains("shell_count")) quad.shell_count = q["shell_count"].get<int>();
      if (q.contains("tail_tolerance"))
        quad.tail_tolerance = q["tail_tolerance"].get<double>();
      quad.validate();
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("bad config field: ") + e.what());
  }
}

Cube parse_cube_arg(const std::string& arg) {
  const auto parts = parse_double_list(arg);
  if (parts.size() != 2)
    throw ConfigError("cube argument must be 'center,side' (got '" + arg + "')");
  return Cube(parts[0], parts[1]);
}

std::vector<double> parse_double_list(const std::string& arg) {
  std::vector<double> out;
  std::string item;
  std::istringstream in(arg);
  while (std::getline(in, item, ',')) {
    const std::string v = strip(item);
    if (v.empty()) continue;
    try {
      std::size_t used = 0;
      out.push_back(std::stod(v, &used));
      if (used != v.size()) throw std::invalid_argument(v);
    } catch (const std::exception&) {
      throw ConfigError("bad number '" + v + "' in list '" + arg + "'");
    }
  }
  return out;
}

}  // namespace czbmo
