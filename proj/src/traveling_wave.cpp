#include "plspread/traveling_wave.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "plspread/dopri5.hpp"
#include "plspread/errors.hpp"
#include "plspread/io.hpp"

namespace plspread {

namespace {

using V4 = ode::Vec<4>;  // log x, y, z, xi

constexpr double kLaunchOffset = 1e-7;

struct Coefficients {
  double alpha;
  double beta;
  double y_P;
  double z_P;
};

Coefficients coefficients(const Rheology& r) {
  const double al = r.tw_alpha, be = r.tw_beta;
  return {al, be, std::cbrt(1.0 / (be * al)), std::cbrt(al) / std::cbrt(be * be)};
}

double distance_to_P(const Coefficients& c, const TWSample& s) {
  return std::hypot(s.y - c.y_P, s.z - c.z_P) / std::hypot(c.y_P, c.z_P);
}

enum class Stop { Span, Xi1, LogX, Underflow };

struct Run {
  std::vector<TWSample> samples;  // in integration order
  Stop stop = Stop::Span;
  double closest_to_P = 0.0;  // relative distance, over all samples
};

// Integrates in direction dir = +1 / -1 of xi1. With `pinned` the (y, z)
// part is held at its initial value (the equilibrium orbit).
Run run(const Coefficients& c, const TWSample& start, double dir, bool pinned, const TWCaps& caps) {
  const double ab = c.alpha + c.beta;
  auto f = [&](double, const V4& u) -> V4 {
    const double dy = pinned ? 0.0 : u[2] - c.alpha * u[1] * u[1];
    const double dz = pinned ? 0.0 : -1.0 + c.beta * u[1] * u[2];
    return {dir * u[1], dir * dy, dir * dz, dir * std::exp(ab * u[0])};
  };
  const ode::Tolerance tol{caps.tol, caps.tol};
  Run out;
  out.samples.push_back(start);
  double s = 0.0;
  // u[3] restarts at zero every step, so samples carry the xi increment from
  // the previous sample free of cancellation against a running total.
  V4 u{start.log_x, start.y, start.z, 0.0};
  V4 k1 = f(s, u);
  double h = std::min(1e-3, caps.max_step);
  ode::PiController ctrl;
  auto done = [&](Stop why) {
    out.stop = why;
    out.closest_to_P = distance_to_P(c, out.samples.front());
    for (const auto& p : out.samples) out.closest_to_P = std::min(out.closest_to_P, distance_to_P(c, p));
    return out;
  };
  while (true) {
    if (std::abs(u[1]) > caps.span || std::abs(u[2]) > caps.span) return done(Stop::Span);
    if (s >= caps.xi1_max) return done(Stop::Xi1);
    if (std::abs(u[0]) > caps.log_x_max) return done(Stop::LogX);
    h = std::min({h, caps.max_step, caps.xi1_max - s});
    const auto st = ode::dopri_step<4>(f, s, u, k1, h, tol);
    if (!st.finite || st.err > 1.0) {
      h = ode::PiController::rejected(h, st.err);
      if (h < 1e-15 * std::max(1.0, s)) return done(Stop::Underflow);
      continue;
    }
    s += h;
    u = st.y;
    out.samples.push_back({start.xi1 + dir * s, u[0], u[1], u[2], u[3]});
    u[3] = 0.0;
    k1 = st.k_end;
    h = ctrl.accepted(h, st.err);
  }
}


std::string describe(const TWSample& s) {
  std::ostringstream os;
  os << "xi1=" << format_number(s.xi1) << " log_x=" << format_number(s.log_x)
     << " y=" << format_number(s.y) << " z=" << format_number(s.z);
  return os.str();
}

// Classifies the far end of a run. `forward` says in which direction of xi1
// the run went.
TailFit fit_end(const Coefficients& c, const Run& rn, bool forward, const TWCaps& caps) {
  const TWSample& e = rn.samples.back();
  const char* dir = forward ? "forward" : "backward";
  if (rn.stop == Stop::Underflow) {
    throw SolverError(std::string(dir) + " integration stalled at " + describe(e));
  }
  TailFit fit;
  // A seed on an unstable (stable) separatrix approaches P backward (forward)
  // but, being off it by rounding, lingers there until a cap stops the run.
  if (rn.stop != Stop::Span && rn.closest_to_P <= caps.p_radius) {
    fit.regime = EndRegime::Equilibrium;
    return fit;
  }
  // product tails send x -> 0 and usually stop on the log x cap first
  if (std::abs(e.y) < 10.0 * std::hypot(c.y_P, c.z_P)) {
    throw SolverError(std::string("indeterminate ") + dir + " end: no tail regime within caps, " +
                      describe(e));
  }
  const bool product = std::abs(e.z) < std::abs(e.y);
  auto ratio = [&](const TWSample& s) { return product ? s.z * s.y : s.z / (s.y * s.y); };
  fit.ratio = ratio(e);
  fit.expected = product ? 1.0 / (c.beta - c.alpha) : c.alpha + 0.5 * c.beta;
  const double y_earlier = std::abs(e.y) / 10.0;
  auto it = std::find_if(rn.samples.rbegin(), rn.samples.rend(),
                         [&](const TWSample& s) { return std::abs(s.y) <= y_earlier; });
  if (it == rn.samples.rend()) {
    throw SolverError(std::string(dir) + " tail covers less than a decade of |y|: " + describe(e));
  }
  fit.ratio_earlier = ratio(*it);
  if (!(std::abs(fit.ratio - fit.ratio_earlier) <= caps.stationarity * std::abs(fit.ratio))) {
    throw SolverError(std::string(dir) + " tail ratio not stationary (" +
                      format_number(fit.ratio_earlier) + " -> " + format_number(fit.ratio) +
                      "), " + describe(e));
  }
  if (product) {
    fit.K = std::abs(e.y) * std::exp(c.alpha * e.log_x);
    if (!forward && e.y > 0.0) fit.regime = EndRegime::Gamma1;
    else if (forward && e.y < 0.0) fit.regime = EndRegime::Gamma4;
  } else {
    fit.K = 0.5 * e.z * std::exp(-c.beta * e.log_x);
    if (!forward && e.y < 0.0) fit.regime = EndRegime::Gamma2;
    else if (forward && e.y > 0.0) fit.regime = EndRegime::Gamma3;
  }
  if (fit.regime == EndRegime::Equilibrium) {
    throw SolverError(std::string(dir) + " tail has an impossible sign pattern: " + describe(e));
  }
  return fit;
}

TrajectoryClass label(const TailFit& back, const TailFit& fwd) {
  TrajectoryClass cls;
  cls.backward_end = back.regime;
  cls.forward_end = fwd.regime;
  cls.backward_fit = back;
  cls.forward_fit = fwd;
  using E = EndRegime;
  const E b = back.regime, f = fwd.regime;
  if (b == E::Equilibrium && f == E::Equilibrium) {
    cls.label = TWLabel::EquilibriumOrbit;
  } else if (f == E::Equilibrium) {
    cls.label = b == E::Gamma1 ? TWLabel::Gamma1 : TWLabel::Gamma2;
  } else if (b == E::Equilibrium) {
    cls.label = f == E::Gamma3 ? TWLabel::Gamma3 : TWLabel::Gamma4;
  } else {
    cls.label = TWLabel::Mixed;
  }
  unsigned m = 0;
  if (b == E::Equilibrium) m |= ZeroAngleAtOrigin;
  if (b == E::Gamma1) m |= LinearAtOrigin;
  if (b == E::Gamma2) m |= QuadraticFarField;
  if (f == E::Gamma3) m |= QuadraticFarField;
  if (f == E::Gamma4) {
    if (b == E::Gamma2) m |= LinearAtOrigin;  // dewetting: the contact point is on the right
    else m |= CompactSupport;
  }
  if (b == E::Gamma2 && f != E::Gamma4) m |= NoFront;
  cls.behavior = m;
  return cls;
}

// Ordered samples of a run (reversed for a backward one) with xi summed from
// the first of them.
std::vector<TWSample> ordered(const std::vector<TWSample>& run, bool reversed) {
  std::vector<TWSample> out(run);
  if (reversed) {
    for (auto& s : out) s.xi = -s.xi;
    std::reverse(out.begin(), out.end());
  } else {
    for (std::size_t k = 1; k < out.size(); ++k) out[k - 1].xi = run[k].xi;
  }
  // out[k].xi now holds the gap to out[k + 1].
  double xi = 0.0;
  for (auto& s : out) {
    const double gap = s.xi;
    s.xi = xi;
    xi += gap;
  }
  return out;
}

// Stitches a backward run and a forward run (both starting at the seed) into
// one list ordered by increasing xi1 with xi measured from the first sample.
std::vector<TWSample> stitch(const Run& back, const Run& fwd) {
  std::vector<TWSample> out = ordered(back.samples, true);
  const std::vector<TWSample> tail = ordered(fwd.samples, false);
  const double xi_seed = out.back().xi;
  for (std::size_t k = 1; k < tail.size(); ++k) {
    out.push_back(tail[k]);
    out.back().xi += xi_seed;
  }
  return out;
}

}  // namespace

TWDerivative tw_rhs(const TWState& s, const Rheology& r) {
  if (!(s.x > 0.0)) throw DomainError("traveling-wave state requires x > 0");
  const double al = r.tw_alpha, be = r.tw_beta;
  return {s.x * s.y, s.z - al * s.y * s.y, -1.0 + be * s.y * s.z};
}

Equilibrium equilibrium_analysis(const Rheology& r) {
  if (!(r.lambda > 1.0)) {
    throw UnsupportedRegime("traveling-wave saddle requires lambda > 1 (alpha > 0)");
  }
  const Coefficients c = coefficients(r);
  Equilibrium eq;
  eq.y_P = c.y_P;
  eq.z_P = c.z_P;
  eq.residual = std::abs(c.z_P - c.alpha * c.y_P * c.y_P) + std::abs(-1.0 + c.beta * c.y_P * c.z_P);
  const double j11 = -2.0 * c.alpha * c.y_P, j12 = 1.0;
  const double j21 = c.beta * c.z_P, j22 = c.beta * c.y_P;
  eq.jacobian = {{{j11, j12}, {j21, j22}}};
  eq.trace = j11 + j22;
  eq.det = j11 * j22 - j12 * j21;
  if (!(eq.det < 0.0)) throw NumericError("equilibrium is not a saddle (det >= 0)");
  const double disc = std::sqrt(0.25 * eq.trace * eq.trace - eq.det);
  const double lp = 0.5 * eq.trace + disc;
  // product form avoids cancellation in the smaller root
  const double lm = eq.det / lp;
  eq.eigenvalues = {lp, lm};
  for (int k = 0; k < 2; ++k) {
    // (J - l I) v = 0 with the first row: v = (1, l - j11)
    const double vx = 1.0, vy = eq.eigenvalues[k] - j11;
    const double n = std::hypot(vx, vy);
    if (!(n > 0.0) || !std::isfinite(n)) throw NumericError("degenerate eigenvector");
    eq.eigenvectors[k] = {vx / n, vy / n};
  }
  return eq;
}

std::string to_string(EndRegime e) {
  switch (e) {
    case EndRegime::Equilibrium: return "P";
    case EndRegime::Gamma1: return "Gamma1";
    case EndRegime::Gamma2: return "Gamma2";
    case EndRegime::Gamma3: return "Gamma3";
    default: return "Gamma4";
  }
}

std::string to_string(TWLabel l) {
  switch (l) {
    case TWLabel::EquilibriumOrbit: return "EquilibriumOrbit";
    case TWLabel::Gamma1: return "Gamma1";
    case TWLabel::Gamma2: return "Gamma2";
    case TWLabel::Gamma3: return "Gamma3";
    case TWLabel::Gamma4: return "Gamma4";
    default: return "Mixed";
  }
}

std::string behavior_string(unsigned mask) {
  static const std::pair<unsigned, const char*> names[] = {
      {LinearAtOrigin, "LinearAtOrigin"},       {ZeroAngleAtOrigin, "ZeroAngleAtOrigin"},
      {QuadraticFarField, "QuadraticFarField"}, {CompactSupport, "CompactSupport"},
      {NoFront, "NoFront"}};
  std::string s;
  for (const auto& [bit, name] : names) {
    if (!(mask & bit)) continue;
    if (!s.empty()) s += '+';
    s += name;
  }
  return s.empty() ? "None" : s;
}

TWTrajectory integrate_separatrix(Separatrix which, const Rheology& r, double span, double tol) {
  if (!(span > 0.0)) throw DomainError("separatrix span must be positive");
  const Equilibrium eq = equilibrium_analysis(r);
  const Coefficients c = coefficients(r);
  const bool stable = which == Separatrix::Gamma1 || which == Separatrix::Gamma2;
  const auto& v = eq.eigenvectors[stable ? 1 : 0];
  const EndRegime want = which == Separatrix::Gamma1   ? EndRegime::Gamma1
                         : which == Separatrix::Gamma2 ? EndRegime::Gamma2
                         : which == Separatrix::Gamma3 ? EndRegime::Gamma3
                                                       : EndRegime::Gamma4;
  TWCaps caps;
  caps.span = span;
  caps.tol = tol;
  caps.log_x_max = std::numeric_limits<double>::infinity();
  std::string tried;
  for (double sign : {1.0, -1.0}) {
    const TWSample start{0.0, 0.0, c.y_P + sign * kLaunchOffset * v[0],
                         c.z_P + sign * kLaunchOffset * v[1], 0.0};
    const Run rn = run(c, start, stable ? -1.0 : 1.0, false, caps);
    TailFit fit;
    try {
      fit = fit_end(c, rn, !stable, caps);
    } catch (const SolverError& e) {
      tried += std::string(" [") + e.what() + "]";
      continue;
    }
    if (fit.regime != want) {
      tried += " [branch ends in " + to_string(fit.regime) + "]";
      continue;
    }
    TailFit at_P;
    at_P.regime = EndRegime::Equilibrium;
    TWTrajectory out;
    out.cls = stable ? label(fit, at_P) : label(at_P, fit);
    out.samples = ordered(rn.samples, stable);
    return out;
  }
  throw SolverError("could not trace separatrix " + to_string(want) + ":" + tried);
}

TWTrajectory trace_orbit(const TWState& initial, const Rheology& r, const TWCaps& caps) {
  if (!(initial.x > 0.0)) throw DomainError("traveling-wave state requires x > 0");
  if (!(r.lambda > 1.0)) {
    throw UnsupportedRegime("traveling-wave classification requires lambda > 1");
  }
  const Coefficients c = coefficients(r);
  const TWSample start{initial.xi1, std::log(initial.x), initial.y, initial.z, 0.0};
  // P itself is invariant; holding it exactly avoids roundoff escaping along
  // the unstable direction.
  const bool pinned = distance_to_P(c, start) <= 1e-12;
  const Run back = run(c, start, -1.0, pinned, caps);
  const Run fwd = run(c, start, 1.0, pinned, caps);
  const TailFit fb = fit_end(c, back, false, caps);
  const TailFit ff = fit_end(c, fwd, true, caps);
  TWTrajectory out;
  out.cls = label(fb, ff);
  out.samples = stitch(back, fwd);
  return out;
}

TrajectoryClass classify_trajectory(const TWState& initial, const Rheology& r,
                                    const TWCaps& caps) {
  return trace_orbit(initial, r, caps).cls;
}

std::vector<FrontSample> reconstruct_front(const TWTrajectory& traj, const Rheology& r,
                                           double xi_anchor) {
  if (traj.samples.empty()) throw DomainError("empty trajectory");
  const Coefficients c = coefficients(r);
  const TWSample& first = traj.samples.front();
  // Distance from the contact point to the first sample, from the local law
  // f ~ K xi (m = 1) or f ~ C xi^p (m = p = 1/(alpha+beta)): xi = m x^(1-alpha) / y.
  double offset = 0.0;
  const EndRegime b = traj.cls.backward_end;
  if (b == EndRegime::Gamma1 || b == EndRegime::Equilibrium) {
    const double m = b == EndRegime::Gamma1 ? 1.0 : 1.0 / (c.alpha + c.beta);
    offset = m * std::exp((1.0 - c.alpha) * first.log_x) / first.y;
  }
  std::vector<FrontSample> out;
  out.reserve(traj.samples.size());
  for (const auto& s : traj.samples) {
    const double x = std::exp(s.log_x);
    out.push_back({xi_anchor + offset + s.xi, x, s.y * std::exp(c.alpha * s.log_x)});
  }
  return out;
}

double equilibrium_front_coefficient(const Rheology& r) {
  const Coefficients c = coefficients(r);
  const double ab = c.alpha + c.beta;
  return std::pow(ab * c.y_P, 1.0 / ab);
}

double equilibrium_front_residual(const Rheology& r, double xi) {
  if (!(xi > 0.0)) throw DomainError("xi must be positive");
  const double C = equilibrium_front_coefficient(r);
  const double p = r.p_front;
  const double f = C * std::pow(xi, p);
  const double f3 = C * p * (p - 1.0) * (p - 2.0) * std::pow(xi, p - 3.0);
  return f3 + std::pow(f, -1.0 - r.a);
}

}  // namespace plspread
