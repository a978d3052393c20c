#pragma once

// 1-D evolution u_t + (u^(lambda+2) |u_xxx|^(lambda-1) u_xxx)_x = 0 on a
// uniform grid in conservative flux form with zero flux at both ends.

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "plspread/rheology.hpp"

namespace plspread {

class PhysicalProfile;

struct Grid {
  double x_lo = 0.0;
  double x_hi = 1.0;
  std::size_t n = 2;

  double h() const { return (x_hi - x_lo) / static_cast<double>(n - 1); }
  double node(std::size_t i) const { return x_lo + static_cast<double>(i) * h(); }
};

/// Throws DomainError unless x_lo < x_hi and n >= 5.
Grid make_grid(double x_lo, double x_hi, std::size_t n);

struct Field1D {
  Grid grid;
  std::vector<double> u;
  double t = 0.0;
  double mass = 0.0;     ///< trapezoid integral of u
  double clipped = 0.0;  ///< mass added by clipping negative values to zero, cumulative
  std::size_t steps = 0;
};

double trapezoid_mass(const Grid& g, const std::vector<double>& u);

enum class DropShape { Parabola, Rectangle, SelfSimilarSnapshot };
DropShape parse_drop_shape(const std::string& s);
std::string to_string(DropShape s);

/// Compactly supported initial data.
///  Parabola:  c * max(0, 1 - (2 (x - m) / w)^2), w the support width, m its centre
///  Rectangle: constant on the support
///  SelfSimilarSnapshot: A t0^(-beta) U(x / t0^beta) from `profile`, which
///    must be planar; the support argument is ignored apart from the check
///    that the snapshot fits the grid.
/// The amplitude is scaled so that the trapezoid mass equals mass_target;
/// for the snapshot, leaving mass_target empty keeps the exact samples.
Field1D init_drop(DropShape shape, std::optional<double> mass_target,
                  std::pair<double, double> support, const Grid& grid,
                  const PhysicalProfile* profile = nullptr, double t0 = 1.0);

enum class Mobility {
  Arithmetic,  ///< mean of u^(lambda+2) at the two adjacent nodes
  Minimum,     ///< smaller of the two; pins the support in place
  Upwind,      ///< value at the donor node, chosen by the sign of the flux
};
Mobility parse_mobility(const std::string& s);
std::string to_string(Mobility m);

struct PdeOptions {
  Mobility mobility = Mobility::Upwind;
  double c_safe = 0.1;  ///< explicit step as a fraction of h^4 / D_max
  double dt_max = 1.0;  ///< cap returned by suggest_dt when the field is flat
};

/// Fluxes at the n - 1 half nodes; the first and last (stencil outside the
/// grid) are zero.
std::vector<double> half_node_fluxes(const Field1D& f, const Rheology& r, const PdeOptions& opt = {});

/// Largest linearized coefficient lambda M |d3|^(lambda-1) over half nodes.
double max_diffusivity(const Field1D& f, const Rheology& r, const PdeOptions& opt = {});

/// c_safe * h^4 / max_diffusivity, or dt_max for a flat field. Heuristic for
/// the degenerate operator; the hard limit enforced by step() is h^4 / (8 D).
double suggest_dt(const Field1D& f, const Rheology& r, const PdeOptions& opt = {});

/// Explicit conservative update. Throws StabilityError above h^4 / (8 D_max)
/// and NumericError (with a state summary) on non-finite values.
Field1D step(const Field1D& f, const Rheology& r, double dt, const PdeOptions& opt = {});

struct ImplicitStats {
  int newton_iterations = 0;
  double residual = 0.0;
};

/// Backward Euler with Newton iterations on the pentadiagonal Jacobian.
/// Returns std::nullopt when Newton fails to converge (caller shrinks dt).
std::optional<Field1D> step_implicit(const Field1D& f, const Rheology& r, double dt,
                                     const PdeOptions& opt = {}, ImplicitStats* stats = nullptr,
                                     double newton_tol = 1e-10, int newton_max = 20);

struct FrontPosition {
  double left = 0.0;
  double right = 0.0;
  bool detected = false;  ///< false when the level is exceeded at a boundary node
  double half_width() const { return 0.5 * (right - left); }
};

/// Outermost crossings of level * max(u), linearly interpolated.
FrontPosition front_position(const Field1D& f, double level = 1e-3);

enum class Scheme { Explicit, Implicit };
Scheme parse_scheme(const std::string& s);
std::string to_string(Scheme s);

struct EvolveOptions {
  Scheme scheme = Scheme::Implicit;
  double t_end = 1.0;
  double dt_initial = 0.0;   ///< 0 picks suggest_dt
  double dt_growth = 1.2;    ///< implicit: growth after a quick Newton solve
  double dt_rel_max = 0.02;  ///< implicit: dt <= dt_rel_max * t
  double front_level = 1e-3;
  std::vector<double> snapshot_times;
  std::size_t max_steps = 10'000'000;
};

struct FrontRecord {
  double t;
  FrontPosition front;
};

struct EvolveReport {
  Field1D field;
  double mass0 = 0.0;
  std::size_t rejected = 0;
  std::vector<FrontRecord> fronts;  ///< initial state, then one per accepted step
  std::vector<Field1D> snapshots;   ///< at the first step reaching each snapshot time

  /// |mass - mass0 - clipped| / mass0
  double mass_drift() const;
};

EvolveReport evolve(Field1D f, const Rheology& r, const EvolveOptions& eo,
                    const PdeOptions& opt = {});

/// Least-squares slope of log half_width against log t over [t_lo, t_hi].
double front_exponent_fit(const std::vector<FrontRecord>& fronts, double t_lo, double t_hi);

struct SimilarityReport {
  double t = 0.0;
  double linf = 0.0;          ///< max |v - U| over nodes
  double l1 = 0.0;            ///< integral of |v - U| d eta
  double front_scaled = 0.0;  ///< half width / t^beta
  double eta_front = 0.0;     ///< of the similarity profile
  bool front_detected = false;
};

/// v(eta) = t^beta u(eta t^beta) / A against U(eta) at the grid nodes.
SimilarityReport rescale_compare(const Field1D& f, const Rheology& r,
                                 const PhysicalProfile& profile, double front_level = 1e-3);

}  // namespace plspread
