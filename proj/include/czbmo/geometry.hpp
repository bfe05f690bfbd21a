#pragma once

#include <span>
#include <string>
#include <vector>

#include "czbmo/errors.hpp"

namespace czbmo {

// Axis-parallel cube Q(c, l) in R^d: center c, side length l > 0.
// Membership uses closed intervals; boundary points belong to the cube.
class Cube {
 public:
  Cube() : Cube(0.0, 1.0) {}  // defaults to the reference cube in d = 1
  Cube(std::vector<double> center, double side);
  Cube(double center, double side);  // d = 1 convenience

  // The fixed reference cube Q0: center at the origin, side 1.
  static Cube reference(int dimension = 1);

  int dimension() const { return static_cast<int>(center_.size()); }
  const std::vector<double>& center() const { return center_; }
  double center1() const { return center_[0]; }  // d = 1 convenience
  double side() const { return side_; }
  double volume() const;

  double lo(int axis) const { return center_[axis] - 0.5 * side_; }
  double hi(int axis) const { return center_[axis] + 0.5 * side_; }

  bool contains_point(std::span<const double> p, double tol = 0.0) const;
  bool contains_point(double x, double tol = 0.0) const;
  bool contains_cube(const Cube& q, double tol = 0.0) const;
  bool overlaps(const Cube& q) const;

  std::string describe() const;

 private:
  std::vector<double> center_;
  double side_;
};

// alpha Q: same center, side alpha * l. Rejects alpha <= 0.
Cube dilate(const Cube& q, double alpha);

// A smallest cube containing both Q and Q0 (same dimension). The side is
// unique; the center is the canonical midpoint of the axis-wise hulls.
struct EnclosingResult {
  Cube cube;
  double tilde_side;
};
EnclosingResult enclosing_with_reference(const Cube& q);

// L(Q) = log max(l~/l, l~) + 1 with the natural logarithm. Always >= 1.
double log_distance(const Cube& q);

// Deterministic cube family generator: the cartesian product of side lengths
// and center distances along the given directions. Distance 0 contributes a
// single origin-centered cube per side regardless of directions.
struct FamilySpec {
  int dimension = 1;
  std::vector<double> sides;
  std::vector<double> center_distances;
  std::vector<std::vector<double>> directions;  // default {+e1}; normalized

  // {10^lo, ..., 10^hi} with per_decade values per decade, inclusive.
  static std::vector<double> log_spaced(double lo_exp10, double hi_exp10,
                                        int per_decade = 1);
};

std::vector<Cube> make_family(const FamilySpec& spec);

}  // namespace czbmo
