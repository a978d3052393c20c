#include "plspread/shooting.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss.hpp>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "plspread/errors.hpp"
#include "plspread/io.hpp"
#include "roots.hpp"

namespace plspread {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

IntegrationOptions shot_options(const ShootOptions& opt) {
  IntegrationOptions io;
  io.x0 = opt.x0;
  io.tol = opt.ode_tol;
  return io;
}

void check_delta(double delta) {
  if (!(delta >= kMinDelta && delta <= 0.5)) {
    throw DomainError("delta must lie in [1e-12, 0.5]");
  }
}

}  // namespace

double AnalyticBounds::B(double gamma) const {
  if (!(gamma > 0.0)) throw DomainError("B(gamma) requires gamma > 0");
  const double num = geom == Geometry::Planar ? (1.0 + a) * (2.0 + a) : 0.5 * (1.0 + a) * (3.0 + a);
  return std::pow(num / gamma, 1.0 / (1.0 + a));
}

double AnalyticBounds::free_interface(double delta) const {
  return geom == Geometry::Planar ? std::sqrt(2.0 * (1.0 - delta)) : 2.0 * std::sqrt(1.0 - delta);
}

double AnalyticBounds::free_slope(double delta) const {
  return geom == Geometry::Planar ? std::sqrt(2.0 * (1.0 - delta)) : std::sqrt(1.0 - delta);
}

AnalyticBounds analytic_bounds(const Rheology& r, Geometry geom) {
  const double a = r.a;
  if (!(a > 0.0)) throw DomainError("analytic bounds require a > 0");
  AnalyticBounds b{geom, a, 0.0, 0.0};
  if (geom == Geometry::Planar) {
    b.no_interface_threshold =
        std::pow((1.0 + a) / (2.0 * (3.0 + a)), 0.5 * (1.0 + a)) * (1.0 + a) * (2.0 + a);
    b.G = std::pow(2.0, 0.5 * (1.0 + a)) * (1.0 + a) * (2.0 + a);
  } else {
    b.no_interface_threshold =
        0.5 * (1.0 + a) * (3.0 + a) * std::pow((1.0 + a) / (4.0 * (3.0 + a)), 0.5 * (1.0 + a));
    b.G = (1.0 + a) * (3.0 + a) / std::pow(2.0, 2.0 + a);
  }
  return b;
}

std::vector<double> default_schedule(int last_index) {
  std::vector<double> s;
  for (int j = 0; j <= last_index; ++j) s.push_back(std::pow(10.0, -2.0 - 0.5 * j));
  return s;
}

// ---------------------------------------------------------------------------

DeltaLevelSolve solve_delta_level(Geometry geom, const Rheology& r, double delta, double theta,
                                  const ShootOptions& opt) {
  check_delta(delta);
  if (!(theta >= 0.0 && theta <= 1.0)) throw DomainError("theta must lie in [0, 1]");
  if (!(opt.gamma_tol > 0.0)) throw DomainError("gamma tolerance must be positive");

  const AnalyticBounds bounds = analytic_bounds(r, geom);
  const IntegrationOptions io = shot_options(opt);
  auto shoot = [&](double g) { return integrate_to_event(geom, g, r, delta, io); };

  DeltaLevelSolve out;
  out.delta = delta;
  out.theta = theta;

  if (theta == 1.0) {
    const ShotOutcome s = shoot(0.0);
    const auto* hit = std::get_if<InterfaceHit>(&s.kind);
    if (!hit) throw NumericError("gamma = 0 trajectory did not reach delta");
    out.y = hit->y;
    out.slope = hit->slope;
    return out;
  }

  if (theta == 0.0) {
    double lo = 0.0, hi = bounds.G;
    if (opt.bracket) {
      auto [blo, bhi] = *opt.bracket;
      if (blo >= 0.0 && bhi > blo && shoot(blo).hit() && !shoot(bhi).hit()) {
        lo = blo;
        hi = bhi;
      }
    }
    if (shoot(hi).hit()) {
      double probe = hi;
      for (int k = 0; k < 6 && shoot(probe).hit(); ++k) probe *= 2.0;
      if (shoot(probe).hit()) {
        throw SolverError("no turning trajectory found for gamma up to " + format_number(probe));
      }
      hi = probe;
    }
    std::size_t it = 0;
    while (hi - lo > opt.gamma_tol && it < opt.max_iter) {
      const double mid = 0.5 * (lo + hi);
      (shoot(mid).hit() ? lo : hi) = mid;
      ++it;
    }
    // The crossing of the lower bracket moves like sqrt(hi - lo); the turning
    // point of the upper bracket moves linearly, so it locates the contact.
    const ShotOutcome s = shoot(lo);
    const ShotOutcome t = shoot(hi);
    const auto* turn = std::get_if<MinimumTurn>(&t.kind);
    out.gamma = lo;
    out.y = turn ? turn->x_min : std::get<InterfaceHit>(s.kind).y;
    out.slope = std::get<InterfaceHit>(s.kind).slope;
    out.bracket_lo = lo;
    out.bracket_hi = hi;
    out.iterations = it;
    return out;
  }

  // theta in (0, 1): Delta(gamma) = z'(y) + theta * free_slope, continued by
  // its limiting value theta * free_slope once trajectories stop reaching delta.
  const double target = theta * bounds.free_slope(delta);
  std::size_t evals = 0;
  auto mismatch = [&](double g) {
    ++evals;
    const ShotOutcome s = shoot(g);
    if (const auto* hit = std::get_if<InterfaceHit>(&s.kind)) return hit->slope + target;
    return target;
  };
  const double step = bounds.G / 64.0;
  double g_lo = 0.0, f_lo = mismatch(0.0);
  if (f_lo > 0.0) throw SolverError("Delta(0, theta) is positive; no root for theta < 1");
  double g_hi = 0.0, f_hi = f_lo;
  for (int k = 1; k <= 256; ++k) {
    g_hi = k * step;
    f_hi = mismatch(g_hi);
    if (f_hi >= 0.0) break;
    g_lo = g_hi;
    f_lo = f_hi;
  }
  if (f_hi < 0.0) {
    throw SolverError("no sign change of Delta found in (0, " + format_number(g_hi) + "]");
  }
  const auto root = detail::illinois(mismatch, g_lo, g_hi, f_lo, f_hi, 0.0, opt.gamma_tol,
                                     opt.max_iter);
  const ShotOutcome s = shoot(root.x);
  const auto* hit = std::get_if<InterfaceHit>(&s.kind);
  if (!hit) throw SolverError("finite-angle root landed on a turning trajectory");
  out.gamma = root.x;
  out.y = hit->y;
  out.slope = hit->slope;
  out.bracket_lo = root.a;
  out.bracket_hi = root.b;
  out.iterations = evals;
  return out;
}

// ---------------------------------------------------------------------------

Extrapolation extrapolate_to_zero(std::span<const double> d, std::span<const double> v) {
  if (d.size() != v.size() || d.size() < 3) {
    throw DomainError("extrapolation needs at least three levels");
  }
  // ratio(q) = (d2^q - d1^q) / (d1^q - d0^q), increasing from its q -> 0
  // limit towards 0 as q grows for a decreasing schedule.
  auto fit_rate = [](double d0, double d1, double d2, double target) -> double {
    auto ratio = [&](double q) {
      return (std::pow(d2, q) - std::pow(d1, q)) / (std::pow(d1, q) - std::pow(d0, q));
    };
    double lo = 1e-4, hi = 8.0;
    double rlo = ratio(lo) - target, rhi = ratio(hi) - target;
    if (rlo * rhi > 0.0) return std::numeric_limits<double>::quiet_NaN();
    for (int i = 0; i < 200 && hi - lo > 1e-14; ++i) {
      const double mid = 0.5 * (lo + hi);
      const double rm = ratio(mid) - target;
      if ((rm > 0.0) == (rlo > 0.0)) {
        lo = mid;
        rlo = rm;
      } else {
        hi = mid;
      }
    }
    return 0.5 * (lo + hi);
  };

  std::vector<double> extrapolants;
  double rate = std::numeric_limits<double>::quiet_NaN();
  for (std::size_t k = 2; k < d.size(); ++k) {
    const double dv1 = v[k - 1] - v[k - 2];
    const double dv2 = v[k] - v[k - 1];
    if (dv1 == 0.0 || dv2 == 0.0) {
      extrapolants.push_back(v[k]);
      continue;
    }
    const double q = fit_rate(d[k - 2], d[k - 1], d[k], dv2 / dv1);
    if (!std::isfinite(q)) {
      extrapolants.push_back(std::numeric_limits<double>::quiet_NaN());
      continue;
    }
    rate = q;
    const double t1 = std::pow(d[k - 1], q), t2 = std::pow(d[k], q);
    extrapolants.push_back(v[k] - dv2 * t2 / (t2 - t1));
  }
  Extrapolation e;
  e.value = extrapolants.back();
  e.rate = rate;
  e.error_estimate =
      extrapolants.size() >= 2 ? std::abs(e.value - extrapolants[extrapolants.size() - 2]) : kInf;
  if (!std::isfinite(e.value) || !std::isfinite(e.error_estimate)) {
    e.error_estimate = kInf;
  }
  return e;
}

std::string level_trace(const ShootingResult& res) {
  std::ostringstream os;
  for (const auto& l : res.levels) {
    os << format_number(l.delta) << ' ' << format_number(l.gamma) << ' ' << format_number(l.y)
       << ' ' << format_number(l.slope) << ' ' << l.iterations << '\n';
  }
  return os.str();
}

ShootingResult continue_to_zero_delta(Geometry geom, const Rheology& r, double theta,
                                      std::span<const double> schedule, const ShootOptions& opt) {
  if (schedule.size() < 3) throw DomainError("schedule needs at least three levels");
  for (std::size_t i = 0; i < schedule.size(); ++i) {
    check_delta(schedule[i]);
    if (i > 0 && !(schedule[i] < schedule[i - 1])) {
      throw DomainError("delta schedule must be strictly decreasing");
    }
  }
  const AnalyticBounds bounds = analytic_bounds(r, geom);

  ShootingResult res;
  res.geom = geom;
  res.theta = theta;

  ShootOptions level_opt = opt;
  for (std::size_t i = 0; i < schedule.size(); ++i) {
    if (theta == 0.0 && i > 0) {
      // gamma_0(delta) decreases with delta: the previous turning bound still
      // turns, and the previous step size guesses a hit below.
      const auto& prev = res.levels.back();
      const double dec = i > 1 ? res.levels[i - 2].gamma - prev.gamma : prev.gamma;
      level_opt.bracket = std::make_pair(std::max(0.0, prev.gamma - 4.0 * std::abs(dec)),
                                         prev.bracket_hi);
    }
    res.levels.push_back(solve_delta_level(geom, r, schedule[i], theta, level_opt));
  }

  std::vector<double> ds, gs, ys;
  for (const auto& l : res.levels) {
    ds.push_back(l.delta);
    gs.push_back(l.gamma);
    ys.push_back(l.y);
  }

  res.slope = theta == 0.0 ? 0.0 : -theta * bounds.free_slope(0.0);
  if (theta == 1.0) {
    res.gamma_theta = 0.0;
    res.y_theta = bounds.free_interface(0.0);
    res.kappa = kInf;
    return res;
  }

  // monotone level sequence (ignoring differences at the bisection resolution)
  int direction = 0;
  for (std::size_t i = 1; i < gs.size(); ++i) {
    const double dg = gs[i] - gs[i - 1];
    if (std::abs(dg) <= 10.0 * opt.gamma_tol) continue;
    const int s = dg > 0.0 ? 1 : -1;
    if (direction != 0 && s != direction) {
      throw ConvergenceError("gamma(delta) is not monotone along the schedule",
                             level_trace(res));
    }
    direction = s;
  }

  if (!r.shear_thinning()) {
    if (direction > 0) {
      throw ConvergenceError("gamma(delta) increases as delta -> 0 for a >= 1",
                             level_trace(res));
    }
    res.interface_exists = false;
    res.gamma_theta = 0.0;
    res.y_theta = ys.back();
    res.kappa = kInf;
    res.extrapolation_error_estimate = gs.back();
    return res;
  }

  const Extrapolation eg = extrapolate_to_zero(ds, gs);
  const Extrapolation ey = extrapolate_to_zero(ds, ys);
  res.gamma_theta = eg.value;
  res.y_theta = ey.value;
  res.extrapolation_error_estimate = eg.error_estimate;
  res.y_error_estimate = ey.error_estimate;
  res.rate_gamma = eg.rate;
  res.rate_y = ey.rate;
  if (!(eg.value > 0.0) || !(eg.error_estimate < 1e-3 * std::max(1.0, eg.value)) ||
      !(ey.error_estimate < 1e-3 * std::max(1.0, ey.value))) {
    throw ConvergenceError("delta continuation did not converge (extrapolant " +
                               format_number(eg.value) + ", estimate " +
                               format_number(eg.error_estimate) + ")",
                           level_trace(res));
  }
  res.kappa = gamma_to_kappa(res.gamma_theta, r);
  return res;
}

// ---------------------------------------------------------------------------

double PhysicalProfile::z(double x) const {
  x = std::abs(x);
  if (x >= y) return 0.0;
  if (!traj_) {
    // explicit gamma = 0 profile
    return geom == Geometry::Planar ? 1.0 - 0.5 * x * x : 1.0 - 0.25 * x * x;
  }
  if (x < x0_) {
    return series_start(geom, gamma, rheo_, std::max(x, 1e-300)).z;
  }
  if (x <= x_end_) return traj_->value(x)[0];
  return z_end_ * std::pow((y - x) / (y - x_end_), tail_exponent_);
}

double PhysicalProfile::U(double eta) const { return z(eta * std::sqrt(kappa)); }

std::vector<std::pair<double, double>> PhysicalProfile::samples(std::size_t n) const {
  std::vector<std::pair<double, double>> out;
  if (n < 2) n = 2;
  for (std::size_t i = 0; i < n; ++i) {
    const double eta = eta_front * static_cast<double>(i) / static_cast<double>(n - 1);
    out.emplace_back(eta, U(eta));
  }
  return out;
}

PhysicalProfile to_physical(const ShootingResult& result, const Rheology& r, Geometry geom,
                            double parabola_kappa, const ShootOptions& opt) {
  if (!result.interface_exists) {
    throw UnsupportedRegime("no self-similar profile with an interface for a >= 1");
  }
  PhysicalProfile p;
  p.geom = geom;
  p.theta = result.theta;
  p.gamma = result.gamma_theta;
  p.rheo_ = r;
  p.beta = geom == Geometry::Planar ? r.beta_planar : r.beta_radial;
  p.amp = geom == Geometry::Planar ? r.amp_A : r.amp_A_radial;

  if (result.gamma_theta == 0.0) {
    if (!(parabola_kappa > 0.0)) throw DomainError("parabola kappa must be positive");
    p.kappa = parabola_kappa;
    p.y = analytic_bounds(r, geom).free_interface(0.0);
  } else {
    p.kappa = result.kappa;
    p.y = result.y_theta;
    IntegrationOptions io = shot_options(opt);
    io.record_dense = true;
    const ShotOutcome s = integrate_to_event(geom, p.gamma, r, kMinDelta, io);
    if (!s.dense || s.dense->empty()) throw NumericError("profile integration produced no steps");
    p.x0_ = opt.x0;
    p.x_end_ = s.last.x;
    p.z_end_ = s.last.z;
    p.tail_exponent_ = result.theta == 0.0 ? r.p_front : 1.0;
    p.traj_ = std::make_shared<const ode::DenseTrajectory<3>>(std::move(*s.dense));
  }
  p.eta_front = p.y / std::sqrt(p.kappa);

  // Integral of z(x) x^k over [0, y]: Gauss-Legendre on every dense step
  // (exact for the polynomial interpolant), the series piece, and the tail
  // law z_end (s / L)^p, s = y - x, in closed form.
  const int k = geom == Geometry::Planar ? 0 : 1;
  auto weighted = [&](double x) { return k == 0 ? p.z(x) : p.z(x) * x; };
  double I = 0.0;
  if (!p.traj_) {
    I = boost::math::quadrature::gauss<double, 8>::integrate(weighted, 0.0, p.y);
  } else {
    I = boost::math::quadrature::gauss<double, 8>::integrate(weighted, 0.0, p.x0_);
    for (const auto& st : p.traj_->steps()) {
      const double lo = st.x0, hi = std::min(st.x1(), p.x_end_);
      if (hi > lo) {
        I += boost::math::quadrature::gauss<double, 8>::integrate(
            [&](double x) { return k == 0 ? st.value(x)[0] : st.value(x)[0] * x; }, lo, hi);
      }
    }
    const double L = p.y - p.x_end_, q = p.tail_exponent_;
    I += k == 0 ? p.z_end_ * L / (q + 1.0) : p.z_end_ * L * (p.y / (q + 1.0) - L / (q + 2.0));
  }
  p.mass = geom == Geometry::Planar ? 2.0 * I / std::sqrt(p.kappa)
                                    : 2.0 * std::numbers::pi * I / p.kappa;
  return p;
}

}  // namespace plspread
