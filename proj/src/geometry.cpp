#include "czbmo/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace czbmo {

Cube::Cube(std::vector<double> center, double side)
    : center_(std::move(center)), side_(side) {
  if (center_.empty()) throw ConfigError("cube center must have dimension >= 1");
  if (!(side_ > 0.0) || !std::isfinite(side_))
    throw ConfigError("cube side must be positive and finite");
  for (double c : center_)
    if (!std::isfinite(c)) throw ConfigError("cube center must be finite");
}

Cube::Cube(double center, double side) : Cube(std::vector<double>{center}, side) {}

Cube Cube::reference(int dimension) {
  if (dimension < 1) throw ConfigError("reference cube dimension must be >= 1");
  return Cube(std::vector<double>(static_cast<std::size_t>(dimension), 0.0), 1.0);
}

double Cube::volume() const {
  return std::pow(side_, static_cast<double>(dimension()));
}

bool Cube::contains_point(std::span<const double> p, double tol) const {
  if (static_cast<int>(p.size()) != dimension()) return false;
  for (int a = 0; a < dimension(); ++a)
    if (p[a] < lo(a) - tol || p[a] > hi(a) + tol) return false;
  return true;
}

bool Cube::contains_point(double x, double tol) const {
  return contains_point(std::span<const double>(&x, 1), tol);
}

bool Cube::contains_cube(const Cube& q, double tol) const {
  if (q.dimension() != dimension()) return false;
  for (int a = 0; a < dimension(); ++a)
    if (q.lo(a) < lo(a) - tol || q.hi(a) > hi(a) + tol) return false;
  return true;
}

bool Cube::overlaps(const Cube& q) const {
  if (q.dimension() != dimension()) return false;
  for (int a = 0; a < dimension(); ++a)
    if (q.hi(a) <= lo(a) || q.lo(a) >= hi(a)) return false;
  return true;
}

std::string Cube::describe() const {
  std::ostringstream os;
  os << "Q(";
  for (int a = 0; a < dimension(); ++a) os << (a ? "," : "") << center_[a];
  os << "; " << side_ << ")";
  return os.str();
}

Cube dilate(const Cube& q, double alpha) {
  if (!(alpha > 0.0) || !std::isfinite(alpha))
    throw ConfigError("dilation factor must be positive");
  return Cube(q.center(), alpha * q.side());
}

EnclosingResult enclosing_with_reference(const Cube& q) {
  const int d = q.dimension();
  const Cube q0 = Cube::reference(d);
  std::vector<double> hull_lo(d), hull_hi(d);
  double tilde_side = 0.0;
  for (int a = 0; a < d; ++a) {
    hull_lo[a] = std::min(q.lo(a), q0.lo(a));
    hull_hi[a] = std::max(q.hi(a), q0.hi(a));
    tilde_side = std::max(tilde_side, hull_hi[a] - hull_lo[a]);
  }
  std::vector<double> center(d);
  for (int a = 0; a < d; ++a) center[a] = 0.5 * (hull_lo[a] + hull_hi[a]);
  return EnclosingResult{Cube(std::move(center), tilde_side), tilde_side};
}

double log_distance(const Cube& q) {
  const double tilde = enclosing_with_reference(q).tilde_side;
  return std::log(std::max(tilde / q.side(), tilde)) + 1.0;
}

std::vector<double> FamilySpec::log_spaced(double lo_exp10, double hi_exp10,
                                           int per_decade) {
  if (per_decade < 1) throw ConfigError("log_spaced: per_decade must be >= 1");
  if (hi_exp10 < lo_exp10) throw ConfigError("log_spaced: empty exponent range");
  std::vector<double> out;
  const int steps =
      static_cast<int>(std::lround((hi_exp10 - lo_exp10) * per_decade));
  for (int k = 0; k <= steps; ++k)
    out.push_back(std::pow(10.0, lo_exp10 + static_cast<double>(k) / per_decade));
  return out;
}

std::vector<Cube> make_family(const FamilySpec& spec) {
  if (spec.dimension < 1) throw ConfigError("family dimension must be >= 1");
  if (spec.sides.empty()) throw ConfigError("family: empty side list");
  if (spec.center_distances.empty())
    throw ConfigError("family: empty center-distance list");
  for (double s : spec.sides)
    if (!(s > 0.0)) throw ConfigError("family: sides must be positive");
  for (double r : spec.center_distances)
    if (r < 0.0) throw ConfigError("family: center distances must be >= 0");

  std::vector<std::vector<double>> dirs = spec.directions;
  if (dirs.empty()) {
    std::vector<double> e1(static_cast<std::size_t>(spec.dimension), 0.0);
    e1[0] = 1.0;
    dirs.push_back(std::move(e1));
  }
  for (auto& u : dirs) {
    if (static_cast<int>(u.size()) != spec.dimension)
      throw ConfigError("family: direction dimension mismatch");
    double norm = 0.0;
    for (double x : u) norm += x * x;
    norm = std::sqrt(norm);
    if (!(norm > 0.0)) throw ConfigError("family: zero direction vector");
    for (double& x : u) x /= norm;
  }

  std::vector<Cube> out;
  for (double side : spec.sides) {
    for (double dist : spec.center_distances) {
      if (dist == 0.0) {
        out.emplace_back(std::vector<double>(static_cast<std::size_t>(spec.dimension), 0.0),
                         side);
        continue;
      }
      for (const auto& u : dirs) {
        std::vector<double> c(u.size());
        for (std::size_t a = 0; a < u.size(); ++a) c[a] = dist * u[a];
        out.emplace_back(std::move(c), side);
      }
    }
  }
  return out;
}

}  // namespace czbmo
