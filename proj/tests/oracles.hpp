// Test-side oracles, independent of the library's quadrature path.
#pragma once

#include <cmath>
#include <functional>
#include <stdexcept>

namespace oracles {

inline double simpson(const std::function<double(double)>& f, double a, double b) {
  return (b - a) / 6.0 * (f(a) + 4.0 * f(0.5 * (a + b)) + f(b));
}

inline double adaptive_simpson_rec(const std::function<double(double)>& f, double a,
                                   double b, double whole, double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double left = simpson(f, a, m);
  const double right = simpson(f, m, b);
  const double err = left + right - whole;
  if (depth <= 0 || std::abs(err) < 15.0 * tol)
    return left + right + err / 15.0;
  return adaptive_simpson_rec(f, a, m, left, 0.5 * tol, depth - 1) +
         adaptive_simpson_rec(f, m, b, right, 0.5 * tol, depth - 1);
}

inline double adaptive_simpson(const std::function<double(double)>& f, double a,
                               double b, double tol = 1e-11, int depth = 40) {
  return adaptive_simpson_rec(f, a, b, simpson(f, a, b), tol, depth);
}

// inf over b of (1/(b-a)) int_a^b |f - b|, by ternary search over the convex
// objective; blo/bhi must bracket the minimizer.
inline double oscillation_oracle(const std::function<double(double)>& f, double a,
                                 double b, double blo, double bhi,
                                 double tol = 1e-10) {
  auto objective = [&](double c) {
    return adaptive_simpson([&](double x) { return std::abs(f(x) - c); }, a, b) /
           (b - a);
  };
  for (int it = 0; it < 200 && bhi - blo > tol; ++it) {
    const double m1 = blo + (bhi - blo) / 3.0;
    const double m2 = bhi - (bhi - blo) / 3.0;
    if (objective(m1) <= objective(m2))
      bhi = m2;
    else
      blo = m1;
  }
  return objective(0.5 * (blo + bhi));
}

// Frozen closed forms used across the tests.
namespace frozen {
// mean of ln|x| over (-1/2, 1/2): 2 int_0^{1/2} ln = -1 - ln 2
inline const double kLogAbsMeanQ0 = -1.0 - std::log(2.0);        // -1.6931471805599453
// best-constant L1 oscillation of ln|x| over any (-l/2, l/2): ln 2
inline const double kLogAbsOscCentered = std::log(2.0);          // 0.6931471805599453
// its minimizer over (-1/2, 1/2): -ln 4 (the median of ln|x|)
inline const double kLogAbsMedianQ0 = -std::log(4.0);            // -1.3862943611198906
// 2 inf_b int_{1/2}^{3/2} |ln t - b| dt = 3 ln(3/2) - ln 2
inline const double kSharpnessOsc = 3.0 * std::log(1.5) - std::log(2.0);  // 0.5232481437645479
// L(Q) examples
inline const double kLQuarter = std::log(4.0) + 1.0;    // 2.386294361119891
inline const double kLFar100 = std::log(101.0) + 1.0;   // 5.615170185988091
// commutator worked value 2 (ln 12 - ln 10)
inline const double kCommutator12 = 2.0 * std::log(1.2);  // 0.3646431135879092
}  // namespace frozen

}  // namespace oracles
