#ifndef PKS_QUADRATURE_HPP
#define PKS_QUADRATURE_HPP

#include <cmath>
#include <functional>

#include "pks/errors.hpp"

namespace pks {

namespace detail {

template <class Fn>
double adaptive_simpson_rec(const Fn& f, double a, double b, double fa,
                            double fm, double fb, double whole, double tol,
                            int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = f(lm), frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  if (depth <= 0)
    throw numerical_error("adaptive quadrature: max depth reached, residual " +
                          std::to_string(std::abs(delta)));
  if (std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
  return adaptive_simpson_rec(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         adaptive_simpson_rec(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

}  // namespace detail

// Adaptive Simpson with absolute tolerance. Subdivides until the local error
// estimate is below tolerance; handles integrands with sqrt-type kinks by
// bisection near the offending points.
template <class Fn>
double adaptive_simpson(const Fn& f, double a, double b, double abs_tol,
                        int max_depth = 60) {
  if (a == b) return 0.0;
  const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return detail::adaptive_simpson_rec(f, a, b, fa, fm, fb, whole, abs_tol,
                                      max_depth);
}

}  // namespace pks

#endif
