#pragma once

// Reference computations for the tests, written independently of the
// library's integrator: classical fixed-step RK4 and repeated-integral
// formulas evaluated by tanh-sinh quadrature.

#include <boost/math/quadrature/tanh_sinh.hpp>

#include <array>
#include <cmath>
#include <functional>
#include <vector>

namespace oracle {

using State = std::array<double, 3>;  // z, z', curv (z'' planar, z'' + z'/x radial)

inline State rhs(bool radial, double a, double gamma, double x, const State& u) {
  const double f = gamma * std::pow(x, a) * std::pow(u[0], -1.0 - a);
  return {u[1], radial ? u[2] - u[1] / x : u[2], f};
}

inline State series(bool radial, double a, double gamma, double x) {
  if (!radial) {
    const double c = gamma / ((1 + a) * (2 + a) * (3 + a));
    return {1 - x * x / 2 + c * std::pow(x, 3 + a), -x + (3 + a) * c * std::pow(x, 2 + a),
            -1 + (3 + a) * (2 + a) * c * std::pow(x, 1 + a)};
  }
  const double c = gamma / ((1 + a) * (3 + a) * (3 + a));
  return {1 - x * x / 4 + c * std::pow(x, 3 + a), -x / 2 + (3 + a) * c * std::pow(x, 2 + a),
          -1 + (3 + a) * (3 + a) * c * std::pow(x, 1 + a)};
}

struct Rk4Shot {
  bool crossed = false;  // z reached delta
  bool turned = false;   // z' turned positive above delta
  double x = 0.0;        // crossing or turning point
  double z = 0.0;
  double dz = 0.0;
};

// Fixed step h; a step whose stages would evaluate z <= 0 is retried with
// halved length (only ever happens inside the last step before the crossing).
// Crossings are located on the cubic Hermite interpolant of z.
inline Rk4Shot rk4_shoot(bool radial, double a, double gamma, double delta, double h = 1e-5,
                         std::vector<std::array<double, 2>>* trace = nullptr, double x0 = 1e-4,
                         double x_max = 10.0) {
  double x = x0;
  State u = series(radial, a, gamma, x0);
  Rk4Shot out;
  auto add = [](const State& p, double s, const State& k) {
    return State{p[0] + s * k[0], p[1] + s * k[1], p[2] + s * k[2]};
  };
  auto step = [&](double hh, State& v) {
    const State k1 = rhs(radial, a, gamma, x, u);
    const State k2 = rhs(radial, a, gamma, x + hh / 2, add(u, hh / 2, k1));
    const State k3 = rhs(radial, a, gamma, x + hh / 2, add(u, hh / 2, k2));
    const State k4 = rhs(radial, a, gamma, x + hh, add(u, hh, k3));
    for (int i = 0; i < 3; ++i) v[i] = u[i] + hh / 6 * (k1[i] + 2 * k2[i] + 2 * k3[i] + k4[i]);
    return std::isfinite(v[0]) && std::isfinite(v[1]) && std::isfinite(v[2]);
  };
  auto ddz = [&](double xx, const State& v) { return radial ? v[2] - v[1] / xx : v[2]; };
  while (x < x_max) {
    double hh = h;
    State v{};
    int halvings = 0;
    while (!step(hh, v) || v[0] <= 0.0) {
      hh *= 0.5;
      if (++halvings > 60) return out;
    }
    const double x1 = x + hh;
    auto hermite = [&](double t, int comp) {
      // comp 0: z from (z, z'); comp 1: z' from (z', z'')
      const double p0 = comp == 0 ? u[0] : u[1], p1 = comp == 0 ? v[0] : v[1];
      const double m0 = (comp == 0 ? u[1] : ddz(x, u)) * hh;
      const double m1 = (comp == 0 ? v[1] : ddz(x1, v)) * hh;
      const double t2 = t * t, t3 = t2 * t;
      return (2 * t3 - 3 * t2 + 1) * p0 + (t3 - 2 * t2 + t) * m0 + (-2 * t3 + 3 * t2) * p1 +
             (t3 - t2) * m1;
    };
    auto solve = [&](int comp, double target, double lo, double hi) {
      for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if ((hermite(mid, comp) - target) * (hermite(lo, comp) - target) <= 0) hi = mid;
        else lo = mid;
      }
      return 0.5 * (lo + hi);
    };
    double t_turn = 2.0;
    if (v[1] >= 0.0) t_turn = solve(1, 0.0, 0.0, 1.0);
    const double t_end = std::min(t_turn, 1.0);
    if (hermite(t_end, 0) <= delta || v[0] <= delta) {
      const double t = solve(0, delta, 0.0, t_end);
      out.crossed = true;
      out.x = x + t * hh;
      out.z = delta;
      out.dz = hermite(t, 1);
      return out;
    }
    if (t_turn <= 1.0) {
      out.turned = true;
      out.x = x + t_turn * hh;
      out.z = hermite(t_turn, 0);
      out.dz = 0.0;
      return out;
    }
    x = x1;
    u = v;
    if (trace) trace->push_back({x, u[0]});
  }
  return out;
}

// Repeated-integral representation of a solution z on [0, x] given the
// forcing g(s) = s^a z(s)^(-1-a):
//   planar  z'' = -1 + gamma I0,  z' = -x + gamma I1,  z = 1 - x^2/2 + gamma I2 / 2
//           with Ik = int_0^x (x - s)^k g(s) ds
//   radial  v = -1 + gamma int g,
//           z' = -x/2 + gamma / (2x) int g(s) (x^2 - s^2) ds,
//           z = 1 - x^2/4 + gamma int g(s) [(x^2 - s^2)/4 - (s^2/2) log(x/s)] ds
struct Representation {
  double z;
  double dz;
  double curv;
};

inline Representation represent(bool radial, double a, double gamma, double x,
                                const std::function<double(double)>& z) {
  boost::math::quadrature::tanh_sinh<double> q;
  auto g = [&](double s) { return std::pow(s, a) * std::pow(z(s), -1.0 - a); };
  auto I = [&](auto&& w) { return q.integrate([&](double s) { return g(s) * w(s); }, 0.0, x); };
  if (!radial) {
    return {1 - x * x / 2 + gamma * I([&](double s) { return (x - s) * (x - s); }) / 2,
            -x + gamma * I([&](double s) { return x - s; }),
            -1 + gamma * I([](double) { return 1.0; })};
  }
  return {1 - x * x / 4 + gamma * I([&](double s) {
                                return (x * x - s * s) / 4 - s * s / 2 * std::log(x / s);
                              }),
          -x / 2 + gamma / (2 * x) * I([&](double s) { return x * x - s * s; }),
          -1 + gamma * I([](double) { return 1.0; })};
}

}  // namespace oracle
