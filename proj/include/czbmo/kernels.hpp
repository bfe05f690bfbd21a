#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "czbmo/funcspace.hpp"

namespace czbmo {

// A Calderon-Zygmund kernel: off-diagonal evaluator plus its declared
// dimension d, regularity exponent delta in (0, 1], size constant and
// regularity constant (the constants of the size and smoothness conditions).
class KernelSpec {
 public:
  // K(x, y) = 1 / (x - y), d = 1, delta = 1.
  static KernelSpec hilbert();
  // K_A(x, y) = (A(x) - A(y)) / (x - y)^2 for a Lipschitz profile A.
  static KernelSpec calderon_commutator(TestFunction profile);
  static KernelSpec custom(std::string name,
                           std::function<double(double, double)> k, int dimension,
                           double delta, double size_constant,
                           double regularity_constant);

  const std::string& name() const;
  int dimension() const;
  double delta() const;
  double size_constant() const;
  double regularity_constant() const;

  // Off-diagonal evaluation; rejects x == y.
  double operator()(double x, double y) const;

  // y-locations where the integrand K(x, .) has a bounded kink (profile kinks
  // for commutators). Quadrature places panel boundaries there.
  const std::vector<double>& breakpoints() const;

  bool is_commutator() const;
  const TestFunction* profile() const;  // commutators only, else nullptr

 private:
  struct Impl;
  explicit KernelSpec(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}
  std::shared_ptr<const Impl> impl_;
};

// Measured sup of |K(x,y)| |x-y|^d over sample pairs, bucketed by the decade
// of |x-y|. The condition is an upper bound, so decay across decades is fine;
// pass = finite with no growth toward the diagonal (sub-unit separations) and
// no growth toward infinity (super-unit separations).
struct SizeCheckReport {
  double measured_sup = 0.0;
  std::vector<std::pair<int, double>> decade_sup;  // (decade of |x-y|, sup)
  double log10_slope = 0.0;        // across all decades (diagnostic)
  double slope_small_sep = 0.0;    // decades <= 0; growth means slope < 0
  double slope_large_sep = 0.0;    // decades >= 0; growth means slope > 0
  bool pass = false;
  std::size_t pairs = 0;
};

SizeCheckReport check_size(const KernelSpec& k,
                           std::span<const std::pair<double, double>> pairs);

// Deterministic off-diagonal pairs spanning the requested decades of |x-y|.
std::vector<std::pair<double, double>> default_size_pairs(std::uint64_t seed,
                                                          int first_decade = -4,
                                                          int last_decade = 3,
                                                          int per_decade = 48);

struct RegularityTriple {
  double x1, x2, y;  // requires 2 |x1 - x2| <= |x1 - y|
};

struct RegularityCheckReport {
  double measured_sup = 0.0;
  std::vector<std::pair<int, double>> decade_sup;  // (decade of |x1-y|, sup)
  double log10_slope = 0.0;
  double slope_small_sep = 0.0;
  double slope_large_sep = 0.0;
  bool pass = false;
  std::size_t triples = 0;
  double delta_used = 1.0;
};

RegularityCheckReport check_regularity(const KernelSpec& k,
                                       std::span<const RegularityTriple> triples,
                                       std::optional<double> delta_override = {});

std::vector<RegularityTriple> default_regularity_triples(std::uint64_t seed,
                                                         int first_decade = -4,
                                                         int last_decade = 3,
                                                         int per_decade = 48);

}  // namespace czbmo
