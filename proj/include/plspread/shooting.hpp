#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "plspread/dopri5.hpp"
#include "plspread/profile_ode.hpp"
#include "plspread/rheology.hpp"

namespace plspread {

/// Closed-form a-priori bounds for the shooting parameter and interface.
///
/// Planar: no trajectory reaches zero once
///   gamma > ((1+a)/(2(3+a)))^((1+a)/2) (1+a)(2+a),
/// interface bound B(gamma) = ((1+a)(2+a)/gamma)^(1/(1+a)) and
/// G = 2^((1+a)/2) (1+a)(2+a). The radial versions follow from the same
/// comparison arguments applied to (x z')' = x (-1 + gamma I1).
struct AnalyticBounds {
  Geometry geom;
  double a;
  double no_interface_threshold;
  double G;

  double B(double gamma) const;
  /// Position where the gamma = 0 profile reaches z = delta.
  double free_interface(double delta) const;
  /// |z'| of the gamma = 0 profile at z = delta; the finite-angle slope targets scale with it.
  double free_slope(double delta) const;
};

AnalyticBounds analytic_bounds(const Rheology& r, Geometry geom = Geometry::Planar);

struct ShootOptions {
  double gamma_tol = 1e-10;  ///< bisection width in gamma
  double ode_tol = 1e-10;    ///< integrator tolerance
  double x0 = 1e-4;
  std::size_t max_iter = 200;
  /// Optional warm-start bracket (lo must give an interface hit).
  std::optional<std::pair<double, double>> bracket;
};

/// Solution of the regularized problem z(y) = delta with a prescribed slope.
struct DeltaLevelSolve {
  double delta = 0.0;
  double theta = 0.0;
  double gamma = 0.0;
  double y = 0.0;      ///< where z = delta (theta = 0: where the upper bracket touches it)
  double slope = 0.0;  ///< z' there, never positive
  double bracket_lo = 0.0;
  double bracket_hi = 0.0;
  std::size_t iterations = 0;
};

/// For theta = 0 returns gamma_0(delta), the boundary between trajectories
/// that reach delta and those that turn above it. For theta in (0, 1]
/// returns the smallest gamma >= 0 with z'(y) = -theta * free_slope(delta).
DeltaLevelSolve solve_delta_level(Geometry geom, const Rheology& r, double delta, double theta,
                                  const ShootOptions& opt = {});

/// delta_j = 10^(-2 - j/2), j = 0..16.
std::vector<double> default_schedule(int last_index = 16);

struct Extrapolation {
  double value = 0.0;
  double error_estimate = 0.0;
  double rate = 0.0;  ///< fitted exponent q in value(delta) ~ limit + c delta^q
};

/// Extrapolates a sequence sampled at decreasing delta to delta = 0 assuming
/// a power-law approach; q is re-fitted on every consecutive triple and the
/// error estimate is the difference of the last two extrapolants.
Extrapolation extrapolate_to_zero(std::span<const double> deltas, std::span<const double> values);

struct ShootingResult {
  Geometry geom = Geometry::Planar;
  double theta = 0.0;
  double gamma_theta = 0.0;
  double y_theta = 0.0;
  double slope = 0.0;
  double kappa = 0.0;  ///< +inf when gamma_theta = 0
  bool interface_exists = true;
  std::vector<DeltaLevelSolve> levels;
  double extrapolation_error_estimate = 0.0;
  double y_error_estimate = 0.0;
  double rate_gamma = 0.0;
  double rate_y = 0.0;
};

/// Runs solve_delta_level along a strictly decreasing schedule (warm-starting
/// each bracket from the previous level) and extrapolates to delta = 0.
///
/// For a >= 1 the level sequence is required to decrease and the result is
/// reported with interface_exists = false and gamma_theta = 0.
ShootingResult continue_to_zero_delta(Geometry geom, const Rheology& r, double theta,
                                      std::span<const double> schedule,
                                      const ShootOptions& opt = {});

/// One line per level: delta gamma y slope iterations.
std::string level_trace(const ShootingResult& res);

/// Self-similar profile in physical similarity variables eta = x / sqrt(kappa).
class PhysicalProfile {
 public:
  Geometry geom = Geometry::Planar;
  double theta = 0.0;
  double gamma = 0.0;
  double kappa = 0.0;
  double y = 0.0;          ///< interface in the rescaled variable x
  double eta_front = 0.0;  ///< interface in eta
  double mass = 0.0;       ///< 2 int U d eta (planar) or 2 pi int U eta d eta (radial)
  double beta = 0.0;       ///< time exponent
  double amp = 0.0;        ///< amplitude A of u = A t^(-beta) U(x / t^beta) (t^(-2 beta) radial)

  /// U(eta), zero outside the support.
  double U(double eta) const;
  /// Rescaled profile z(x), zero beyond the interface.
  double z(double x) const;
  /// Uniform samples (eta, U) on [0, eta_front].
  std::vector<std::pair<double, double>> samples(std::size_t n) const;

 private:
  friend PhysicalProfile to_physical(const ShootingResult&, const Rheology&, Geometry, double,
                                     const ShootOptions&);
  std::shared_ptr<const ode::DenseTrajectory<3>> traj_;
  Rheology rheo_{};
  double x_end_ = 0.0;
  double z_end_ = 0.0;
  double tail_exponent_ = 1.0;
  double x0_ = 0.0;
};

/// Converts a converged result to physical variables. For gamma_theta = 0
/// (theta = 1) kappa is free and `parabola_kappa` is used with the explicit profile.
PhysicalProfile to_physical(const ShootingResult& result, const Rheology& r, Geometry geom,
                            double parabola_kappa = 1.0, const ShootOptions& opt = {});

}  // namespace plspread
