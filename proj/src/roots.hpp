#pragma once

#include <cmath>
#include <cstddef>

namespace plspread::detail {

struct RootResult {
  double x;
  double fx;
  std::size_t iterations;
  double a;  ///< final bracket
  double b;
};

// Illinois-modified regula falsi on a bracket [a, b] with fa * fb <= 0.
// Stops when |f| <= ftol or the bracket is narrower than xtol.
template <class F>
RootResult illinois(F&& f, double a, double b, double fa, double fb, double ftol, double xtol,
                    std::size_t max_iter = 200) {
  if (fa == 0.0) return {a, fa, 0, a, a};
  if (fb == 0.0) return {b, fb, 0, b, b};
  int side = 0;
  double c = a, fc = fa;
  std::size_t it = 0;
  for (; it < max_iter; ++it) {
    c = (fa * b - fb * a) / (fa - fb);
    if (!(c > std::fmin(a, b) && c < std::fmax(a, b))) c = 0.5 * (a + b);
    fc = f(c);
    if (std::abs(fc) <= ftol || std::abs(b - a) <= xtol) break;
    if ((fc > 0.0) == (fb > 0.0)) {
      b = c;
      fb = fc;
      if (side == -1) fa *= 0.5;
      side = -1;
    } else {
      a = c;
      fa = fc;
      if (side == +1) fb *= 0.5;
      side = +1;
    }
  }
  return {c, fc, it, std::fmin(a, b), std::fmax(a, b)};
}

}  // namespace plspread::detail
