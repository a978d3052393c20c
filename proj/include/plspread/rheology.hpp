#pragma once

namespace plspread {

/// Power-law rheology exponent lambda and every exponent derived from it.
///
/// Shear-thinning fluids have lambda > 1 (a < 1); only then do spreading
/// drops with a moving interface exist. Values lambda <= 1 are still
/// constructible so that downstream solvers can demonstrate nonexistence.
struct Rheology {
  double lambda;
  double a;            ///< 1 / lambda
  double beta_planar;  ///< 1 / (5 lambda + 2), planar spreading exponent
  double beta_radial;  ///< 1 / (7 lambda + 3), radial spreading exponent
  double amp_A;        ///< A with A^(2 lambda + 1) = 1 / (5 lambda + 2)
  double amp_A_radial; ///< radial amplitude, A^(2 lambda + 1) = 1 / (7 lambda + 3)
  double tw_alpha;     ///< (lambda - 1) / (3 lambda)
  double tw_beta;      ///< (lambda + 2) / (3 lambda)
  double p_front;      ///< 3 lambda / (2 lambda + 1), zero-angle front exponent

  bool shear_thinning() const noexcept { return a < 1.0; }
};

/// Throws DomainError unless lambda is positive and finite.
Rheology make_rheology(double lambda);

/// Initial curvature kappa for the rescaled shooting parameter gamma,
/// kappa = gamma^(-2 lambda / (3 lambda + 1)). Requires gamma > 0.
double gamma_to_kappa(double gamma, const Rheology& r);

/// Inverse of gamma_to_kappa: gamma = kappa^(-(3 + a) / 2).
double kappa_to_gamma(double kappa, const Rheology& r);

}  // namespace plspread
