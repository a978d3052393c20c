#include "plspread/pde_evolve.hpp"

#include <lapacke.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>

#include "plspread/errors.hpp"
#include "plspread/io.hpp"
#include "plspread/shooting.hpp"

namespace plspread {

namespace {

double mobility_node(double u, double lambda) { return std::pow(std::max(u, 0.0), lambda + 2.0); }

// d3 only matters for the upwind choice: a positive flux (d3 > 0) carries
// mass to the right, so the left node is the donor.
double mobility_half(double ul, double ur, double d3, double lambda, Mobility m) {
  const double gl = mobility_node(ul, lambda), gr = mobility_node(ur, lambda);
  switch (m) {
    case Mobility::Arithmetic: return 0.5 * (gl + gr);
    case Mobility::Minimum: return std::min(gl, gr);
    default: return d3 > 0.0 ? gl : gr;
  }
}

// |d|^(lambda-1) d
double power_flux(double d, double lambda) {
  if (d == 0.0) return 0.0;
  return std::copysign(std::pow(std::abs(d), lambda), d);
}

// d/dd of |d|^(lambda-1) d; floored so that lambda < 1 stays finite
double power_flux_slope(double d, double lambda) {
  const double ad = std::max(std::abs(d), 1e-300);
  return lambda * std::pow(ad, lambda - 1.0);
}

double third_difference(const std::vector<double>& u, std::size_t k, double h3) {
  return (u[k + 2] - 3.0 * u[k + 1] + 3.0 * u[k] - u[k - 1]) / h3;
}

std::string state_summary(const Field1D& f) {
  std::ostringstream os;
  const auto [lo, hi] = std::minmax_element(f.u.begin(), f.u.end());
  os << "t=" << format_number(f.t) << " steps=" << f.steps << " min=" << format_number(*lo)
     << " max=" << format_number(*hi) << " mass=" << format_number(f.mass);
  std::size_t bad = 0;
  while (bad < f.u.size() && std::isfinite(f.u[bad])) ++bad;
  if (bad < f.u.size()) os << " first_nonfinite_index=" << bad;
  return os.str();
}

// Clips negatives to zero and books the added (trapezoid) mass.
void clip(Field1D& f) {
  const double h = f.grid.h();
  const std::size_t n = f.u.size();
  for (std::size_t i = 0; i < n; ++i) {
    if (f.u[i] < 0.0) {
      const double w = (i == 0 || i + 1 == n) ? 0.5 * h : h;
      f.clipped += -f.u[i] * w;
      f.u[i] = 0.0;
    }
  }
}

}  // namespace

Grid make_grid(double x_lo, double x_hi, std::size_t n) {
  if (!(x_lo < x_hi) || !std::isfinite(x_lo) || !std::isfinite(x_hi)) {
    throw DomainError("grid requires finite x_lo < x_hi");
  }
  if (n < 5) throw DomainError("grid requires at least 5 nodes");
  return {x_lo, x_hi, n};
}

double trapezoid_mass(const Grid& g, const std::vector<double>& u) {
  if (u.empty()) return 0.0;
  double s = 0.0;
  for (double v : u) s += v;
  s -= 0.5 * (u.front() + u.back());
  return s * g.h();
}

DropShape parse_drop_shape(const std::string& s) {
  if (s == "parabola") return DropShape::Parabola;
  if (s == "rectangle") return DropShape::Rectangle;
  if (s == "snapshot") return DropShape::SelfSimilarSnapshot;
  throw DomainError("unknown drop shape '" + s + "' (expected parabola, rectangle or snapshot)");
}

std::string to_string(DropShape s) {
  switch (s) {
    case DropShape::Parabola: return "parabola";
    case DropShape::Rectangle: return "rectangle";
    default: return "snapshot";
  }
}

Mobility parse_mobility(const std::string& s) {
  if (s == "arithmetic") return Mobility::Arithmetic;
  if (s == "min") return Mobility::Minimum;
  if (s == "upwind") return Mobility::Upwind;
  throw DomainError("unknown mobility '" + s + "' (expected arithmetic, min or upwind)");
}

std::string to_string(Mobility m) {
  switch (m) {
    case Mobility::Arithmetic: return "arithmetic";
    case Mobility::Minimum: return "min";
    default: return "upwind";
  }
}

Scheme parse_scheme(const std::string& s) {
  if (s == "explicit") return Scheme::Explicit;
  if (s == "implicit") return Scheme::Implicit;
  throw DomainError("unknown scheme '" + s + "' (expected explicit or implicit)");
}

std::string to_string(Scheme s) { return s == Scheme::Explicit ? "explicit" : "implicit"; }

Field1D init_drop(DropShape shape, std::optional<double> mass_target,
                  std::pair<double, double> support, const Grid& grid,
                  const PhysicalProfile* profile, double t0) {
  Field1D f;
  f.grid = grid;
  f.u.assign(grid.n, 0.0);
  if (shape == DropShape::SelfSimilarSnapshot) {
    if (!profile) throw DomainError("snapshot initial data needs a similarity profile");
    if (profile->geom != Geometry::Planar) throw DomainError("only planar profiles can seed the PDE");
    if (!(t0 > 0.0)) throw DomainError("snapshot time must be positive");
    const double stretch = std::pow(t0, profile->beta);
    const double edge = profile->eta_front * stretch;
    if (!(-edge > grid.x_lo && edge < grid.x_hi)) {
      throw DomainError("similarity snapshot does not fit inside the grid");
    }
    for (std::size_t i = 0; i < grid.n; ++i) {
      f.u[i] = profile->amp / stretch * profile->U(std::abs(grid.node(i)) / stretch);
    }
    f.t = t0;
  } else {
    const auto [s0, s1] = support;
    if (!(s0 < s1)) throw DomainError("support requires lo < hi");
    if (!(s0 >= grid.x_lo && s1 <= grid.x_hi)) throw DomainError("support must lie inside the grid");
    if (!mass_target) throw DomainError("mass target required for this drop shape");
    const double m = 0.5 * (s0 + s1), w = s1 - s0;
    for (std::size_t i = 0; i < grid.n; ++i) {
      const double x = grid.node(i);
      if (shape == DropShape::Parabola) {
        const double s = 2.0 * (x - m) / w;
        f.u[i] = std::max(0.0, 1.0 - s * s);
      } else {
        f.u[i] = (x >= s0 && x <= s1) ? 1.0 : 0.0;
      }
    }
  }
  if (mass_target) {
    if (!(*mass_target > 0.0)) throw DomainError("mass target must be positive");
    const double m0 = trapezoid_mass(grid, f.u);
    if (!(m0 > 0.0)) throw DomainError("support contains no grid nodes");
    const double c = *mass_target / m0;
    for (double& v : f.u) v *= c;
  }
  f.mass = trapezoid_mass(grid, f.u);
  return f;
}

std::vector<double> half_node_fluxes(const Field1D& f, const Rheology& r, const PdeOptions& opt) {
  const std::size_t n = f.u.size();
  const double h = f.grid.h();
  const double h3 = h * h * h;
  std::vector<double> F(n - 1, 0.0);
  for (std::size_t k = 1; k + 2 < n; ++k) {
    const double d3 = third_difference(f.u, k, h3);
    const double M = mobility_half(f.u[k], f.u[k + 1], d3, r.lambda, opt.mobility);
    if (M == 0.0) continue;
    F[k] = M * power_flux(d3, r.lambda);
  }
  return F;
}

double max_diffusivity(const Field1D& f, const Rheology& r, const PdeOptions& opt) {
  const std::size_t n = f.u.size();
  const double h = f.grid.h();
  const double h3 = h * h * h;
  double D = 0.0;
  for (std::size_t k = 1; k + 2 < n; ++k) {
    const double d3 = third_difference(f.u, k, h3);
    const double M = mobility_half(f.u[k], f.u[k + 1], d3, r.lambda, opt.mobility);
    if (M == 0.0) continue;
    // for lambda < 1 the coefficient blows up at d3 = 0; skip flat spots
    if (d3 == 0.0 && r.lambda < 1.0) continue;
    D = std::max(D, r.lambda * M * std::pow(std::abs(d3), r.lambda - 1.0));
  }
  return D;
}

double suggest_dt(const Field1D& f, const Rheology& r, const PdeOptions& opt) {
  const double D = max_diffusivity(f, r, opt);
  if (!(D > 0.0)) return opt.dt_max;
  const double h = f.grid.h();
  return std::min(opt.dt_max, opt.c_safe * h * h * h * h / D);
}

Field1D step(const Field1D& f, const Rheology& r, double dt, const PdeOptions& opt) {
  if (!(dt > 0.0)) throw DomainError("time step must be positive");
  const double h = f.grid.h();
  const double D = max_diffusivity(f, r, opt);
  if (D > 0.0 && dt > h * h * h * h / (8.0 * D)) {
    throw StabilityError("explicit step " + format_number(dt) + " exceeds the stability bound " +
                         format_number(h * h * h * h / (8.0 * D)));
  }
  const auto F = half_node_fluxes(f, r, opt);
  Field1D g = f;
  const std::size_t n = f.u.size();
  const double c = dt / h;
  for (std::size_t i = 0; i < n; ++i) {
    const double right = i + 1 < n ? F[i] : 0.0;
    const double left = i > 0 ? F[i - 1] : 0.0;
    g.u[i] -= c * (right - left);
  }
  g.t += dt;
  ++g.steps;
  for (double v : g.u) {
    if (!std::isfinite(v)) throw NumericError("non-finite field after step: " + state_summary(g));
  }
  clip(g);
  g.mass = trapezoid_mass(g.grid, g.u);
  return g;
}

std::optional<Field1D> step_implicit(const Field1D& f, const Rheology& r, double dt,
                                     const PdeOptions& opt, ImplicitStats* stats,
                                     double newton_tol, int newton_max) {
  if (!(dt > 0.0)) throw DomainError("time step must be positive");
  const std::size_t n = f.u.size();
  const double h = f.grid.h();
  const double h3 = h * h * h;
  const double c = dt / h;
  const double lam = r.lambda;
  constexpr lapack_int kl = 2, ku = 2, ldab = 2 * kl + ku + 1;
  const lapack_int nn = static_cast<lapack_int>(n);

  std::vector<double> u = f.u;
  std::vector<double> res(n), ab(static_cast<std::size_t>(ldab) * n), F(n - 1);
  std::vector<std::array<double, 4>> dF(n - 1);  // dF_k / du_{k-1..k+2}
  std::vector<lapack_int> ipiv(n);
  const double scale = std::max(1.0, *std::max_element(f.u.begin(), f.u.end()));

  auto put = [&](std::size_t i, std::size_t j, double v) {
    ab[static_cast<std::size_t>(kl + ku + static_cast<lapack_int>(i) - static_cast<lapack_int>(j)) +
       j * ldab] += v;
  };

  for (int it = 1; it <= newton_max; ++it) {
    std::fill(F.begin(), F.end(), 0.0);
    for (auto& row : dF) row = {0.0, 0.0, 0.0, 0.0};
    for (std::size_t k = 1; k + 2 < n; ++k) {
      const double ul = u[k], ur = u[k + 1];
      const double d3 = third_difference(u, k, h3);
      const double M = mobility_half(ul, ur, d3, lam, opt.mobility);
      const double P = power_flux(d3, lam);
      F[k] = M * P;
      const double dP = M == 0.0 ? 0.0 : M * power_flux_slope(d3, lam) / h3;
      dF[k] = {-dP, 3.0 * dP, -3.0 * dP, dP};
      const double gl = (lam + 2.0) * std::pow(std::max(ul, 0.0), lam + 1.0);
      const double gr = (lam + 2.0) * std::pow(std::max(ur, 0.0), lam + 1.0);
      if (opt.mobility == Mobility::Arithmetic) {
        dF[k][1] += 0.5 * gl * P;
        dF[k][2] += 0.5 * gr * P;
      } else if (opt.mobility == Mobility::Upwind) {
        dF[k][d3 > 0.0 ? 1 : 2] += (d3 > 0.0 ? gl : gr) * P;
      } else if (mobility_node(ul, lam) <= mobility_node(ur, lam)) {
        dF[k][1] += gl * P;
      } else {
        dF[k][2] += gr * P;
      }
    }
    double rnorm = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double right = i + 1 < n ? F[i] : 0.0;
      const double left = i > 0 ? F[i - 1] : 0.0;
      res[i] = -(u[i] - f.u[i] + c * (right - left));
      rnorm = std::max(rnorm, std::abs(res[i]));
    }
    std::fill(ab.begin(), ab.end(), 0.0);
    for (std::size_t i = 0; i < n; ++i) put(i, i, 1.0);
    // row i gets +c dF_i (right face) and -c dF_{i-1} (left face)
    for (std::size_t k = 1; k + 2 < n; ++k) {
      for (std::size_t m = 0; m < 4; ++m) {
        const std::size_t j = k - 1 + m;
        put(k, j, c * dF[k][m]);
        put(k + 1, j, -c * dF[k][m]);
      }
    }
    const lapack_int info =
        LAPACKE_dgbsv(LAPACK_COL_MAJOR, nn, kl, ku, 1, ab.data(), ldab, ipiv.data(), res.data(), nn);
    if (info != 0) return std::nullopt;
    double dnorm = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      u[i] += res[i];
      dnorm = std::max(dnorm, std::abs(res[i]));
    }
    for (double v : u) {
      if (!std::isfinite(v)) return std::nullopt;
    }
    if (dnorm <= newton_tol * scale) {
      if (stats) *stats = {it, rnorm};
      Field1D g = f;
      g.u = std::move(u);
      g.t += dt;
      ++g.steps;
      clip(g);
      g.mass = trapezoid_mass(g.grid, g.u);
      return g;
    }
  }
  return std::nullopt;
}

FrontPosition front_position(const Field1D& f, double level) {
  FrontPosition fp;
  const auto& u = f.u;
  const std::size_t n = u.size();
  const double umax = *std::max_element(u.begin(), u.end());
  if (!(umax > 0.0)) return fp;
  const double lv = level * umax;
  if (u.front() > lv || u.back() > lv) return fp;
  std::size_t i = 0;
  while (u[i + 1] <= lv) ++i;
  std::size_t j = n - 1;
  while (u[j - 1] <= lv) --j;
  const auto cross = [&](std::size_t a, std::size_t b) {
    const double t = (lv - u[a]) / (u[b] - u[a]);
    return f.grid.node(a) + t * (f.grid.node(b) - f.grid.node(a));
  };
  fp.left = cross(i, i + 1);
  fp.right = cross(j, j - 1);
  fp.detected = true;
  return fp;
}

double EvolveReport::mass_drift() const {
  return std::abs(field.mass - mass0 - field.clipped) / mass0;
}

EvolveReport evolve(Field1D f, const Rheology& r, const EvolveOptions& eo, const PdeOptions& opt) {
  if (!(eo.t_end > f.t)) throw DomainError("t_end must exceed the initial time");
  EvolveReport rep;
  rep.mass0 = f.mass;
  std::vector<double> snaps = eo.snapshot_times;
  std::sort(snaps.begin(), snaps.end());
  std::size_t next_snap = 0;
  while (next_snap < snaps.size() && snaps[next_snap] <= f.t) {
    rep.snapshots.push_back(f);
    ++next_snap;
  }
  rep.fronts.push_back({f.t, front_position(f, eo.front_level)});

  double dt = eo.dt_initial > 0.0 ? eo.dt_initial : suggest_dt(f, r, opt);
  std::size_t count = 0;
  while (f.t < eo.t_end) {
    if (count++ >= eo.max_steps) throw SolverError("step budget exhausted at " + state_summary(f));
    if (eo.scheme == Scheme::Explicit) {
      dt = std::min(suggest_dt(f, r, opt), eo.t_end - f.t);
      f = step(f, r, dt, opt);
    } else {
      if (eo.dt_rel_max > 0.0 && f.t > 0.0) dt = std::min(dt, eo.dt_rel_max * f.t);
      dt = std::min(dt, eo.t_end - f.t);
      ImplicitStats st;
      auto g = step_implicit(f, r, dt, opt, &st);
      if (!g) {
        ++rep.rejected;
        dt *= 0.5;
        if (dt < 1e-14 * std::max(1.0, f.t)) {
          throw SolverError("implicit step size underflow at " + state_summary(f));
        }
        continue;
      }
      f = std::move(*g);
      if (st.newton_iterations <= 4) dt *= eo.dt_growth;
    }
    rep.fronts.push_back({f.t, front_position(f, eo.front_level)});
    while (next_snap < snaps.size() && snaps[next_snap] <= f.t) {
      rep.snapshots.push_back(f);
      ++next_snap;
    }
  }
  rep.field = std::move(f);
  return rep;
}

double front_exponent_fit(const std::vector<FrontRecord>& fronts, double t_lo, double t_hi) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  std::size_t m = 0;
  for (const auto& fr : fronts) {
    if (fr.t < t_lo || fr.t > t_hi || !fr.front.detected || !(fr.t > 0.0)) continue;
    const double x = std::log(fr.t), y = std::log(fr.front.half_width());
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++m;
  }
  if (m < 2) throw DomainError("fewer than two front records in the fit window");
  const double dm = static_cast<double>(m);
  const double den = dm * sxx - sx * sx;
  if (!(den > 0.0)) throw DomainError("degenerate time window for the front fit");
  return (dm * sxy - sx * sy) / den;
}

SimilarityReport rescale_compare(const Field1D& f, const Rheology& r,
                                 const PhysicalProfile& profile, double front_level) {
  if (profile.geom != Geometry::Planar) throw DomainError("similarity comparison is planar only");
  if (!(f.t > 0.0)) throw DomainError("similarity comparison needs t > 0");
  if (std::abs(profile.beta - r.beta_planar) > 1e-12) {
    throw DomainError("profile was computed for a different rheology");
  }
  SimilarityReport rep;
  rep.t = f.t;
  rep.eta_front = profile.eta_front;
  const double stretch = std::pow(f.t, profile.beta);
  const double h_eta = f.grid.h() / stretch;
  const std::size_t n = f.u.size();
  for (std::size_t i = 0; i < n; ++i) {
    const double eta = f.grid.node(i) / stretch;
    const double v = stretch * f.u[i] / profile.amp;
    const double d = std::abs(v - profile.U(std::abs(eta)));
    rep.linf = std::max(rep.linf, d);
    rep.l1 += (i == 0 || i + 1 == n ? 0.5 : 1.0) * d * h_eta;
  }
  const FrontPosition fp = front_position(f, front_level);
  rep.front_detected = fp.detected;
  if (fp.detected) rep.front_scaled = fp.half_width() / stretch;
  return rep;
}

}  // namespace plspread
