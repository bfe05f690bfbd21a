#pragma once

#include <filesystem>
#include <map>
#include <string>

#include <json.hpp>

#include "czbmo/verify.hpp"

namespace czbmo {

using json = nlohmann::json;

json to_json(const Cube& q);
Cube cube_from_json(const json& j);

json to_json(const OscillationReport& rep);
json to_json(const SeminormEstimate& est);
json to_json(const TruncatedResult& res);
// Deterministic given identical inputs: runtime_seconds is NOT serialized
// here; it goes to the run metadata file instead.
json to_json(const VerificationReport& rep);

std::string to_csv(const VerificationReport& rep);

// Writes <suite_id>.json and <suite_id>.csv under dir.
void write_suite_files(const std::filesystem::path& dir,
                       const VerificationReport& rep);

// Timestamps and runtimes live here, outside the deterministic outputs.
void write_run_meta(const std::filesystem::path& dir,
                    const std::map<std::string, double>& suite_runtimes,
                    std::uint64_t seed);

void write_text_file(const std::filesystem::path& path, const std::string& text);

}  // namespace czbmo
