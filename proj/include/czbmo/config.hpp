#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "czbmo/funcspace.hpp"
#include "czbmo/kernels.hpp"
#include "czbmo/truncated_operator.hpp"

namespace czbmo {

// Catalog lookups by config tag.
//   functions: const:<v>, logabs, logshiftdiff:<s>, abs-profile, atan-profile,
//              linear-profile, aprime:abs, aprime:atan, aprime:linear,
//              table:<path>
//   kernels:   hilbert, commutator:abs, commutator:atan, commutator:linear,
//              commutator:table:<path>, custom:zero, custom:inverse-square
TestFunction make_function(const std::string& tag);
KernelSpec make_kernel(const std::string& tag);

// Cube families from JSON: either {"cubes": [{center, side}...]} or a
// descriptor {"dimension", "sides", "center_distances", "directions"}.
std::vector<Cube> family_from_json(const nlohmann::json& j);
std::vector<Cube> load_family(const std::string& path);

// Minimal TOML reader (flat tables, strings, numbers, booleans, arrays);
// produces the same shape as the JSON config.
nlohmann::json toml_to_json(const std::string& text);

// Loads .toml or .json config files into one canonical JSON object.
nlohmann::json load_config_file(const std::string& path);

struct RunConfig {
  std::string kernel_tag = "hilbert";
  std::string function_tag = "const:1";
  std::optional<Cube> cube;
  std::optional<std::string> family_path;
  std::vector<std::string> suites;
  std::string out_dir;
  std::uint64_t seed = 20260808ULL;
  std::string preset = "desk";
  QuadratureConfig quad;
  GridSpec grid;
  std::vector<double> points;
  std::vector<double> deltas = {0.5, 1.0};
  bool lmo = false;

  // fills fields present in the config object, leaves the rest untouched
  void apply(const nlohmann::json& j);
};

Cube parse_cube_arg(const std::string& arg);  // "c,l" (d = 1)
std::vector<double> parse_double_list(const std::string& arg);

}  // namespace czbmo
