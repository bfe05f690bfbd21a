#pragma once

#include <stdexcept>
#include <string>

namespace czbmo {

// Bad user input: unknown tags, malformed configs, invalid descriptors.
// The CLI maps this to exit code 2.
struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// A computation could not be carried out at the requested tolerance
// (non-integrable input, evaluation point inside an exclusion window,
// shell budget exhausted before the tail certificate holds, ...).
// The CLI maps this to exit code 3.
struct NumericalError : std::runtime_error {
  explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace czbmo
