#pragma once

// Dormand-Prince 5(4) embedded Runge-Kutta pair with the 4th-order continuous
// extension and a proportional-integral step-size controller. Header-only;
// the drivers that decide what to do with a step live in the solver modules.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <vector>

namespace plspread::ode {

template <std::size_t N>
using Vec = std::array<double, N>;

/// Continuous extension of one accepted step on [x0, x0 + h].
template <std::size_t N>
struct DenseStep {
  double x0 = 0.0;
  double h = 0.0;
  std::array<Vec<N>, 5> rc{};

  double x1() const { return x0 + h; }

  Vec<N> value(double x) const {
    const double t = (x - x0) / h;
    const double s = 1.0 - t;
    Vec<N> out;
    for (std::size_t i = 0; i < N; ++i) {
      out[i] = rc[0][i] + t * (rc[1][i] + s * (rc[2][i] + t * (rc[3][i] + s * rc[4][i])));
    }
    return out;
  }

  Vec<N> derivative(double x) const {
    const double t = (x - x0) / h;
    const double s = 1.0 - t;
    Vec<N> out;
    for (std::size_t i = 0; i < N; ++i) {
      const double g = rc[2][i] + t * (rc[3][i] + s * rc[4][i]);
      const double dg = rc[3][i] + (s - t) * rc[4][i];
      out[i] = (rc[1][i] + (s - t) * g + t * s * dg) / h;
    }
    return out;
  }
};

/// Piecewise dense representation of a whole integration.
template <std::size_t N>
class DenseTrajectory {
 public:
  void push(const DenseStep<N>& s) { steps_.push_back(s); }
  bool empty() const { return steps_.empty(); }
  double x_begin() const { return steps_.front().x0; }
  double x_end() const { return steps_.back().x1(); }
  const std::vector<DenseStep<N>>& steps() const { return steps_; }

  /// Evaluates the interpolant; x is clamped to the covered interval.
  Vec<N> value(double x) const { return locate(x).value(std::clamp(x, x_begin(), x_end())); }
  Vec<N> derivative(double x) const {
    return locate(x).derivative(std::clamp(x, x_begin(), x_end()));
  }

 private:
  const DenseStep<N>& locate(double x) const {
    auto it = std::upper_bound(steps_.begin(), steps_.end(), x,
                               [](double v, const DenseStep<N>& s) { return v < s.x0; });
    if (it == steps_.begin()) return steps_.front();
    return *std::prev(it);
  }

  std::vector<DenseStep<N>> steps_;
};

template <std::size_t N>
struct StepAttempt {
  Vec<N> y;       ///< 5th-order solution at x + h
  Vec<N> k_end;   ///< f(x + h, y), reused as the next first stage
  double err;     ///< scaled RMS error estimate; accept when <= 1
  bool finite;    ///< false when any stage produced a non-finite value
  DenseStep<N> dense;
};

struct Tolerance {
  double rtol = 1e-10;
  double atol = 1e-14;
};

/// One Dormand-Prince step from (x, y) with first stage k1 = f(x, y).
template <std::size_t N, class Rhs>
StepAttempt<N> dopri_step(Rhs&& f, double x, const Vec<N>& y, const Vec<N>& k1, double h,
                          const Tolerance& tol) {
  constexpr double a21 = 1.0 / 5.0;
  constexpr double a31 = 3.0 / 40.0, a32 = 9.0 / 40.0;
  constexpr double a41 = 44.0 / 45.0, a42 = -56.0 / 15.0, a43 = 32.0 / 9.0;
  constexpr double a51 = 19372.0 / 6561.0, a52 = -25360.0 / 2187.0, a53 = 64448.0 / 6561.0,
                   a54 = -212.0 / 729.0;
  constexpr double a61 = 9017.0 / 3168.0, a62 = -355.0 / 33.0, a63 = 46732.0 / 5247.0,
                   a64 = 49.0 / 176.0, a65 = -5103.0 / 18656.0;
  constexpr double b1 = 35.0 / 384.0, b3 = 500.0 / 1113.0, b4 = 125.0 / 192.0,
                   b5 = -2187.0 / 6784.0, b6 = 11.0 / 84.0;
  constexpr double e1 = 71.0 / 57600.0, e3 = -71.0 / 16695.0, e4 = 71.0 / 1920.0,
                   e5 = -17253.0 / 339200.0, e6 = 22.0 / 525.0, e7 = -1.0 / 40.0;
  constexpr double d1 = -12715105075.0 / 11282082432.0, d3 = 87487479700.0 / 32700410799.0,
                   d4 = -10690763975.0 / 1880347072.0, d5 = 701980252875.0 / 199316789632.0,
                   d6 = -1453857185.0 / 822651844.0, d7 = 69997945.0 / 29380423.0;

  StepAttempt<N> out{};
  Vec<N> tmp;
  auto stage = [&](double c, auto&& combine) {
    for (std::size_t i = 0; i < N; ++i) tmp[i] = y[i] + h * combine(i);
    return f(x + c * h, tmp);
  };
  const Vec<N> k2 = stage(1.0 / 5.0, [&](std::size_t i) { return a21 * k1[i]; });
  const Vec<N> k3 = stage(3.0 / 10.0, [&](std::size_t i) { return a31 * k1[i] + a32 * k2[i]; });
  const Vec<N> k4 = stage(4.0 / 5.0, [&](std::size_t i) {
    return a41 * k1[i] + a42 * k2[i] + a43 * k3[i];
  });
  const Vec<N> k5 = stage(8.0 / 9.0, [&](std::size_t i) {
    return a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i];
  });
  const Vec<N> k6 = stage(1.0, [&](std::size_t i) {
    return a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] + a65 * k5[i];
  });
  for (std::size_t i = 0; i < N; ++i) {
    out.y[i] = y[i] + h * (b1 * k1[i] + b3 * k3[i] + b4 * k4[i] + b5 * k5[i] + b6 * k6[i]);
  }
  out.k_end = f(x + h, out.y);

  double acc = 0.0;
  out.finite = true;
  for (std::size_t i = 0; i < N; ++i) {
    const double e =
        h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] + e7 * out.k_end[i]);
    const double sc = tol.atol + tol.rtol * std::max(std::abs(y[i]), std::abs(out.y[i]));
    acc += (e / sc) * (e / sc);
    if (!std::isfinite(out.y[i]) || !std::isfinite(out.k_end[i])) out.finite = false;
  }
  out.err = out.finite ? std::sqrt(acc / static_cast<double>(N)) : HUGE_VAL;
  if (!std::isfinite(out.err)) out.finite = false;

  auto& rc = out.dense.rc;
  out.dense.x0 = x;
  out.dense.h = h;
  for (std::size_t i = 0; i < N; ++i) {
    const double dy = out.y[i] - y[i];
    const double bspl = h * k1[i] - dy;
    rc[0][i] = y[i];
    rc[1][i] = dy;
    rc[2][i] = bspl;
    rc[3][i] = dy - h * out.k_end[i] - bspl;
    rc[4][i] = h * (d1 * k1[i] + d3 * k3[i] + d4 * k4[i] + d5 * k5[i] + d6 * k6[i] +
                    d7 * out.k_end[i]);
  }
  return out;
}

/// PI step-size controller (Hairer & Wanner's DOPRI5 constants).
class PiController {
 public:
  /// Next step size after an accepted step with scaled error err.
  double accepted(double h, double err) {
    const double e = std::max(err, 1e-10);
    double fac = 0.9 * std::pow(e, -0.7 / 5.0) * std::pow(err_prev_, 0.4 / 5.0);
    fac = std::clamp(fac, 0.2, 5.0);
    err_prev_ = std::max(err, 1e-4);
    return h * fac;
  }
  /// Shrunken step size after a rejection.
  static double rejected(double h, double err) {
    if (!std::isfinite(err)) return 0.25 * h;
    return h * std::max(0.2, 0.9 * std::pow(err, -0.2));
  }

 private:
  double err_prev_ = 1e-4;
};

}  // namespace plspread::ode
