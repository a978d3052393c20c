#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "plspread/dopri5.hpp"
#include "plspread/rheology.hpp"

namespace plspread {

enum class Geometry { Planar, Radial };

std::string to_string(Geometry g);
Geometry parse_geometry(const std::string& s);

/// Integration state of the rescaled similarity ODE.
///
/// `curv` is z'' in the planar case and v = z'' + z'/x in the radial case,
/// i.e. the quantity whose x-derivative the ODE prescribes.
struct ProfileState {
  double x = 0.0;
  double z = 0.0;
  double dz = 0.0;
  double curv = 0.0;
};

struct StateDerivative {
  double dz;
  double ddz;
  double dcurv;
};

// Terminal events of one integration at fixed gamma.
struct InterfaceHit {
  double y;      ///< position where z first reaches the working floor delta
  double slope;  ///< z' there (always negative)
};
struct MinimumTurn {
  double x_min;
  double z_min;
};
struct BoundExceeded {
  double x_stop;
};
struct SingularStall {
  double x_stop;
  double z_stop;
};

using OutcomeKind = std::variant<InterfaceHit, MinimumTurn, BoundExceeded, SingularStall>;

struct ShotOutcome {
  OutcomeKind kind;
  ProfileState last;                ///< state at the event
  std::vector<ProfileState> trace;  ///< accepted steps, when requested
  std::optional<ode::DenseTrajectory<3>> dense;
  std::size_t steps = 0;

  bool hit() const { return std::holds_alternative<InterfaceHit>(kind); }
  bool turned() const { return std::holds_alternative<MinimumTurn>(kind); }
  std::string name() const;
};

struct IntegrationOptions {
  double x0 = 1e-4;
  double tol = 1e-10;
  std::optional<double> x_max;  ///< default: 4 * interface_bound(gamma) for gamma > 0, else 10
  bool record_trace = false;
  bool record_dense = false;
  std::size_t max_steps = 5'000'000;
};

/// Smallest allowed working floor; cancellation in z dominates below it.
inline constexpr double kMinDelta = 1e-12;

/// Regular expansion of the solution at x0 > 0:
///   planar: z = 1 - x^2/2 + gamma x^(3+a) / ((1+a)(2+a)(3+a))
///   radial: z = 1 - x^2/4 + gamma x^(3+a) / ((1+a)(3+a)^2)
ProfileState series_start(Geometry geom, double gamma, const Rheology& r, double x0);

/// Right-hand side of z^(1+a) z''' = gamma x^a (planar) or
/// z^(1+a) (z'' + z'/x)' = gamma x^a (radial). Throws SingularityError for z <= 0.
StateDerivative rhs(Geometry geom, const ProfileState& s, double gamma, const Rheology& r);

/// Upper bound on interface and turning-point positions for gamma > 0:
/// planar B = ((1+a)(2+a)/gamma)^(1/(1+a)), radial ((1+a)(3+a)/(2 gamma))^(1/(1+a)).
double interface_bound(Geometry geom, double gamma, const Rheology& r);

/// Integrates from the series start until z falls to delta (InterfaceHit),
/// z' turns positive above delta (MinimumTurn), x passes x_max
/// (BoundExceeded) or the step size underflows (SingularStall).
ShotOutcome integrate_to_event(Geometry geom, double gamma, const Rheology& r, double delta,
                               const IntegrationOptions& opt = {});

/// z ~ sqrt(2) theta (y - x) + B (y - x)^(2 - a) near an interface with a
/// finite contact angle.
struct FiniteAngleExpansion {
  double y;
  double theta;
  double gamma;
  double a;
  double coeff;  ///< B

  double value(double x) const;
  double slope(double x) const;
  double third_derivative(double x) const;
};

/// Requires a < 1, y > 0 and theta in (0, 1].
FiniteAngleExpansion expand_finite_angle(double y, double theta, double gamma, const Rheology& r);

/// z ~ C (y - x)^(3/(2+a)) near a zero-contact-angle interface, with
/// C^(2+a) = gamma y^a (2+a)^3 / (3 (1-a)(1+2a)) from dominant balance.
struct ZeroAngleExpansion {
  double y;
  double gamma;
  double a;
  double coeff;     ///< C
  double exponent;  ///< 3 / (2 + a)

  double value(double x) const;
  double slope(double x) const;
  double second_derivative(double x) const;
  double third_derivative(double x) const;
};

/// Requires 0 < a < 1, gamma > 0, y > 0.
ZeroAngleExpansion expand_zero_angle(double y, double gamma, const Rheology& r);

}  // namespace plspread
