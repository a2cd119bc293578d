#pragma once

#include <cmath>
#include <stdexcept>

namespace udn {

/// Adaptive Simpson integration on [a, b] to absolute tolerance abs_tol.
/// The local acceptance test uses the standard Richardson estimate
/// |S_halves - S_whole| < 15 tol; accepted panels return the extrapolated
/// value. Intended for smooth bounded integrands.
template <typename F>
double adaptive_simpson(F&& f, double a, double b, double abs_tol) {
  struct Impl {
    const F& f;
    int max_depth;
    double recurse(double a, double b, double fa, double fm, double fb,
                   double whole, double tol, int depth) const {
      const double m = 0.5 * (a + b);
      const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
      const double flm = f(lm), frm = f(rm);
      const double h6 = (b - a) / 12.0;
      const double left = h6 * (fa + 4.0 * flm + fm);
      const double right = h6 * (fm + 4.0 * frm + fb);
      const double delta = left + right - whole;
      if (depth >= max_depth || std::abs(delta) <= 15.0 * tol)
        return left + right + delta / 15.0;
      return recurse(a, m, fa, flm, fm, left, 0.5 * tol, depth + 1) +
             recurse(m, b, fm, frm, fb, right, 0.5 * tol, depth + 1);
    }
  };
  if (!(abs_tol > 0.0)) throw std::invalid_argument("adaptive_simpson: tolerance must be positive");
  if (a == b) return 0.0;
  const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  // A floor proportional to the first estimate keeps the recursion from
  // chasing tolerances below double rounding when the integrand is large.
  const double tol = std::max(abs_tol, std::abs(whole) * 1e-14);
  return Impl{f, 52}.recurse(a, b, fa, fm, fb, whole, tol, 0);
}

}  // namespace udn
