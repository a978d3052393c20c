#include "plspread/profile_ode.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "plspread/errors.hpp"
#include "roots.hpp"

namespace plspread {

namespace {

using V3 = ode::Vec<3>;

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

ProfileState to_state(double x, const V3& u) { return {x, u[0], u[1], u[2]}; }

// Same as rhs() but returns NaN instead of throwing, so that a trial step
// reaching z <= 0 is simply rejected by the driver.
V3 eval_rhs(Geometry geom, double x, const V3& u, double gamma, double a) {
  if (!(u[0] > 0.0)) return {kNaN, kNaN, kNaN};
  const double forcing = gamma == 0.0 ? 0.0 : gamma * std::pow(x, a) * std::pow(u[0], -1.0 - a);
  if (geom == Geometry::Planar) return {u[1], u[2], forcing};
  return {u[1], u[2] - u[1] / x, forcing};
}

}  // namespace

std::string to_string(Geometry g) { return g == Geometry::Planar ? "planar" : "radial"; }

Geometry parse_geometry(const std::string& s) {
  if (s == "planar") return Geometry::Planar;
  if (s == "radial") return Geometry::Radial;
  throw DomainError("unknown geometry '" + s + "' (expected planar or radial)");
}

std::string ShotOutcome::name() const {
  switch (kind.index()) {
    case 0: return "InterfaceHit";
    case 1: return "MinimumTurn";
    case 2: return "BoundExceeded";
    default: return "SingularStall";
  }
}

ProfileState series_start(Geometry geom, double gamma, const Rheology& r, double x0) {
  if (!(x0 > 0.0) || !std::isfinite(x0)) throw DomainError("series start requires x0 > 0");
  if (!std::isfinite(gamma)) throw DomainError("gamma must be finite");
  const double a = r.a;
  const double xa1 = std::pow(x0, 1.0 + a);
  if (geom == Geometry::Planar) {
    const double c = gamma / ((1.0 + a) * (2.0 + a) * (3.0 + a));
    return {x0, 1.0 - 0.5 * x0 * x0 + c * xa1 * x0 * x0, -x0 + (3.0 + a) * c * xa1 * x0,
            -1.0 + (3.0 + a) * (2.0 + a) * c * xa1};
  }
  const double c = gamma / ((1.0 + a) * (3.0 + a) * (3.0 + a));
  return {x0, 1.0 - 0.25 * x0 * x0 + c * xa1 * x0 * x0, -0.5 * x0 + (3.0 + a) * c * xa1 * x0,
          -1.0 + (3.0 + a) * (3.0 + a) * c * xa1};
}

StateDerivative rhs(Geometry geom, const ProfileState& s, double gamma, const Rheology& r) {
  if (!(s.z > 0.0)) throw SingularityError("rhs evaluated at z <= 0 (past the interface)");
  if (!(s.x > 0.0)) throw DomainError("rhs requires x > 0");
  const V3 d = eval_rhs(geom, s.x, {s.z, s.dz, s.curv}, gamma, r.a);
  return {d[0], d[1], d[2]};
}

double interface_bound(Geometry geom, double gamma, const Rheology& r) {
  if (!(gamma > 0.0)) throw DomainError("interface bound requires gamma > 0");
  const double a = r.a;
  const double num = geom == Geometry::Planar ? (1.0 + a) * (2.0 + a) : 0.5 * (1.0 + a) * (3.0 + a);
  return std::pow(num / gamma, 1.0 / (1.0 + a));
}

ShotOutcome integrate_to_event(Geometry geom, double gamma, const Rheology& r, double delta,
                               const IntegrationOptions& opt) {
  if (!(delta >= kMinDelta && delta < 1.0)) {
    throw DomainError("working floor delta must lie in [1e-12, 1)");
  }
  if (!(opt.tol > 0.0)) throw DomainError("tolerance must be positive");
  if (!std::isfinite(gamma)) throw DomainError("gamma must be finite");
  const double x_max = opt.x_max ? *opt.x_max
                       : gamma > 0.0 ? 4.0 * interface_bound(geom, gamma, r)
                                     : 10.0;
  if (!(x_max > opt.x0)) throw DomainError("x_max must exceed the series start x0");

  const double a = r.a;
  auto f = [&](double x, const V3& u) { return eval_rhs(geom, x, u, gamma, a); };
  const ode::Tolerance tol{opt.tol, opt.tol * delta};

  ShotOutcome out{BoundExceeded{x_max}, {}, {}, std::nullopt, 0};
  if (opt.record_dense) out.dense.emplace();

  const ProfileState s0 = series_start(geom, gamma, r, opt.x0);
  double x = s0.x;
  V3 u{s0.z, s0.dz, s0.curv};
  V3 k1 = f(x, u);
  if (opt.record_trace) out.trace.push_back(s0);

  auto finish = [&](OutcomeKind kind, const ProfileState& last) {
    out.kind = kind;
    out.last = last;
    return out;
  };

  if (s0.dz >= 0.0) return finish(MinimumTurn{x, s0.z}, s0);

  // Re-integrates a single step of length tau from the accepted state, which
  // is at least as accurate as the full step that bracketed the event.
  auto partial = [&](double tau) { return ode::dopri_step<3>(f, x, u, k1, tau, tol); };
  auto locate = [&](std::size_t comp, double target, double tau_hi, double ftol) {
    auto g = [&](double tau) {
      const auto st = partial(tau);
      return st.finite ? st.y[comp] - target : -target;
    };
    const double f_lo = u[comp] - target;
    const double f_hi = g(tau_hi);
    const double xtol = 4.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, x);
    return detail::illinois(g, 0.0, tau_hi, f_lo, f_hi, ftol, xtol).x;
  };
  auto commit_partial = [&](double tau) {
    const auto st = partial(tau);
    if (out.dense && tau > 0.0) out.dense->push(st.dense);
    const ProfileState ev = to_state(x + tau, tau > 0.0 ? st.y : u);
    if (opt.record_trace) out.trace.push_back(ev);
    return ev;
  };

  double h = std::min(1e-2, 0.5 * (x_max - x));
  ode::PiController ctrl;
  while (true) {
    if (out.steps >= opt.max_steps) return finish(SingularStall{x, u[0]}, to_state(x, u));
    const double h_min = 1e-14 * std::max(1.0, x);
    h = std::min(h, x_max - x);
    const auto st = ode::dopri_step<3>(f, x, u, k1, h, tol);
    if (!st.finite || st.err > 1.0) {
      h = ode::PiController::rejected(h, st.err);
      if (h < h_min) return finish(SingularStall{x, u[0]}, to_state(x, u));
      continue;
    }
    ++out.steps;

    const bool turn = st.y[1] >= 0.0;
    const bool cross = st.y[0] <= delta;
    if (turn) {
      const double tau_t = locate(1, 0.0, h, 0.0);
      const auto at_turn = partial(tau_t);
      if (at_turn.y[0] > delta && !cross) {
        const ProfileState ev = commit_partial(tau_t);
        return finish(MinimumTurn{ev.x, ev.z}, ev);
      }
      // z dipped below delta before turning within this step
      if (at_turn.y[0] <= delta) {
        const double tau_c = locate(0, delta, tau_t, opt.tol * delta);
        const ProfileState ev = commit_partial(tau_c);
        return finish(InterfaceHit{ev.x, ev.dz}, ev);
      }
    }
    if (cross) {
      const double tau_c = locate(0, delta, h, opt.tol * delta);
      const ProfileState ev = commit_partial(tau_c);
      if (ev.dz >= 0.0) return finish(MinimumTurn{ev.x, ev.z}, ev);
      return finish(InterfaceHit{ev.x, ev.dz}, ev);
    }

    if (out.dense) out.dense->push(st.dense);
    x += h;
    u = st.y;
    k1 = st.k_end;
    if (opt.record_trace) out.trace.push_back(to_state(x, u));
    if (x >= x_max) return finish(BoundExceeded{x}, to_state(x, u));
    h = ctrl.accepted(h, st.err);
  }
}

// ---------------------------------------------------------------------------

FiniteAngleExpansion expand_finite_angle(double y, double theta, double gamma, const Rheology& r) {
  const double a = r.a;
  if (!(a < 1.0)) {
    throw UnsupportedRegime("no local interface expansion for a >= 1 (lambda <= 1)");
  }
  if (!(y > 0.0)) throw DomainError("interface position must be positive");
  if (!(theta > 0.0 && theta <= 1.0)) throw DomainError("theta must lie in (0, 1]");
  const double coeff = gamma * std::pow(y, a) /
                       (std::pow(2.0, 0.5 * (1.0 + a)) * std::pow(theta, 1.0 + a) * a *
                        (1.0 - a) * (2.0 - a));
  return {y, theta, gamma, a, coeff};
}

double FiniteAngleExpansion::value(double x) const {
  const double s = y - x;
  return std::sqrt(2.0) * theta * s + coeff * std::pow(s, 2.0 - a);
}

double FiniteAngleExpansion::slope(double x) const {
  const double s = y - x;
  return -std::sqrt(2.0) * theta - coeff * (2.0 - a) * std::pow(s, 1.0 - a);
}

double FiniteAngleExpansion::third_derivative(double x) const {
  const double s = y - x;
  return coeff * (2.0 - a) * (1.0 - a) * a * std::pow(s, -1.0 - a);
}

ZeroAngleExpansion expand_zero_angle(double y, double gamma, const Rheology& r) {
  const double a = r.a;
  if (!(a > 0.0 && a < 1.0)) throw UnsupportedRegime("zero-angle expansion requires 0 < a < 1");
  if (!(gamma > 0.0)) throw UnsupportedRegime("zero-angle expansion requires gamma > 0");
  if (!(y > 0.0)) throw DomainError("interface position must be positive");
  const double base =
      gamma * std::pow(y, a) * std::pow(2.0 + a, 3) / (3.0 * (1.0 - a) * (1.0 + 2.0 * a));
  return {y, gamma, a, std::pow(base, 1.0 / (2.0 + a)), 3.0 / (2.0 + a)};
}

double ZeroAngleExpansion::value(double x) const { return coeff * std::pow(y - x, exponent); }

double ZeroAngleExpansion::slope(double x) const {
  return -coeff * exponent * std::pow(y - x, exponent - 1.0);
}

double ZeroAngleExpansion::second_derivative(double x) const {
  return coeff * exponent * (exponent - 1.0) * std::pow(y - x, exponent - 2.0);
}

double ZeroAngleExpansion::third_derivative(double x) const {
  const double p = exponent;
  return -coeff * p * (p - 1.0) * (p - 2.0) * std::pow(y - x, p - 3.0);
}

}  // namespace plspread
