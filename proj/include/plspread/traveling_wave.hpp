#pragma once

// Traveling-wave fronts f(xi) of f''' = -f^(-1-1/lambda) (wave speed scaled
// out; restore it with f -> |c|^(1/(2 lambda + 1)) f).
//
// With x = f, y = f^(-alpha) f', z = f^beta f'' and d xi = x^(alpha+beta) d xi1
// the equation becomes the autonomous system
//   x' = x y,   y' = z - alpha y^2,   z' = -1 + beta y z,
// whose (y, z) part decouples from x. It has a single saddle P.

#include <array>
#include <cstddef>
#include <string>
#include <vector>

#include "plspread/rheology.hpp"

namespace plspread {

struct TWState {
  double x = 1.0;
  double y = 0.0;
  double z = 0.0;
  double xi1 = 0.0;
};

struct TWDerivative {
  double dx;
  double dy;
  double dz;
};

/// Throws DomainError for x <= 0.
TWDerivative tw_rhs(const TWState& s, const Rheology& r);

struct Equilibrium {
  double y_P = 0.0;
  double z_P = 0.0;
  std::array<std::array<double, 2>, 2> jacobian{};
  std::array<double, 2> eigenvalues{};  ///< unstable first, then stable
  std::array<std::array<double, 2>, 2> eigenvectors{};  ///< unit vectors, same order
  double det = 0.0;
  double trace = 0.0;
  double residual = 0.0;  ///< |y'| + |z'| at P
};

/// Requires lambda > 1; throws UnsupportedRegime otherwise.
Equilibrium equilibrium_analysis(const Rheology& r);

/// Kinds of trajectory ends. Gamma1..Gamma4 name the tail regimes reached by
/// the four separatrices:
///   Gamma1  backward, y -> +inf, z -> 0+, z y -> 1/(beta - alpha)
///   Gamma2  backward, y -> -inf, z -> +inf, z / y^2 -> alpha + beta/2
///   Gamma3  forward,  y -> +inf, z -> +inf, z / y^2 -> alpha + beta/2
///   Gamma4  forward,  y -> -inf, z -> 0-, z y -> 1/(beta - alpha)
enum class EndRegime { Equilibrium, Gamma1, Gamma2, Gamma3, Gamma4 };
std::string to_string(EndRegime e);

enum class Separatrix { Gamma1, Gamma2, Gamma3, Gamma4 };

enum class TWLabel { EquilibriumOrbit, Gamma1, Gamma2, Gamma3, Gamma4, Mixed };
std::string to_string(TWLabel l);

// Front behaviors, combined as a bit mask.
enum FrontBehavior : unsigned {
  LinearAtOrigin = 1u,     ///< f ~ K |xi - xi0| at a contact point
  ZeroAngleAtOrigin = 2u,  ///< f ~ C xi^p at the origin
  QuadraticFarField = 4u,  ///< f ~ K xi^2 as |xi| -> inf
  CompactSupport = 8u,     ///< vanishes at both ends
  NoFront = 16u,           ///< positive everywhere
};
/// '+'-joined names, e.g. "ZeroAngleAtOrigin+CompactSupport".
std::string behavior_string(unsigned mask);

struct TWSample {
  double xi1;
  double log_x;
  double y;
  double z;
  double xi;  ///< integral of x^(alpha+beta) d xi1, zero at the first sample
};

struct TailFit {
  EndRegime regime = EndRegime::Equilibrium;
  double ratio = 0.0;          ///< z y or z / y^2 at the end of the run
  double ratio_earlier = 0.0;  ///< same ratio one decade of |y| earlier
  double expected = 0.0;       ///< its asymptotic value
  double K = 0.0;              ///< |f'| (linear) or f'' / 2 (quadratic) at the end
};

struct TrajectoryClass {
  TWLabel label = TWLabel::Mixed;
  EndRegime backward_end = EndRegime::Equilibrium;
  EndRegime forward_end = EndRegime::Equilibrium;
  unsigned behavior = 0;
  TailFit backward_fit;
  TailFit forward_fit;
};

/// Samples ordered by increasing xi1.
struct TWTrajectory {
  std::vector<TWSample> samples;
  TrajectoryClass cls;
};

struct TWCaps {
  double span = 1e6;       ///< stop once |y| or |z| exceeds this
  double xi1_max = 100.0;  ///< per direction
  double log_x_max = 60.0; ///< stop once |log x| exceeds this
  double p_radius = 1e-6;  ///< closest relative distance to P that counts as reaching it when a cap stops the run
  double tol = 1e-11;
  double max_step = 0.05;  ///< in xi1, keeps the samples dense
  double stationarity = 0.01;  ///< relative drift of the tail ratio over a decade of |y|
};

/// Traces the separatrix from P offset by 1e-7 along the stable (Gamma1,
/// Gamma2: integrated backward) or unstable (Gamma3, Gamma4: forward)
/// eigenvector until |y| or |z| exceeds span. Starts with x = 1 at P. Throws
/// SolverError when neither launch direction ends in the expected tail.
TWTrajectory integrate_separatrix(Separatrix which, const Rheology& r, double span = 1e6,
                                  double tol = 1e-11);

/// Integrates both ways from `initial` and classifies each end. Throws
/// SolverError with diagnostics when an end matches no regime within caps.
TWTrajectory trace_orbit(const TWState& initial, const Rheology& r, const TWCaps& caps = {});

TrajectoryClass classify_trajectory(const TWState& initial, const Rheology& r,
                                    const TWCaps& caps = {});

struct FrontSample {
  double xi;
  double f;
  double df;
};

/// Recovers (xi, f, f') along the trajectory. When the backward end is a
/// contact point (Gamma1 or P) the local power law fixes its position and
/// xi_anchor is the origin; otherwise the first sample sits at xi_anchor.
std::vector<FrontSample> reconstruct_front(const TWTrajectory& traj, const Rheology& r,
                                           double xi_anchor = 0.0);

/// C_lambda of the equilibrium front f = C xi^p, [(alpha+beta) y_P]^(1/(alpha+beta)).
double equilibrium_front_coefficient(const Rheology& r);

/// f''' + f^(-1-1/lambda) for f = C xi^p.
double equilibrium_front_residual(const Rheology& r, double xi);

}  // namespace plspread
