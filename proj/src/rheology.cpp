#include "plspread/rheology.hpp"

#include <cmath>
#include <string>

#include "plspread/errors.hpp"

namespace plspread {

Rheology make_rheology(double lambda) {
  if (!std::isfinite(lambda) || lambda <= 0.0) {
    throw DomainError("rheology exponent lambda must be positive and finite, got " +
                      std::to_string(lambda));
  }
  Rheology r{};
  r.lambda = lambda;
  r.a = 1.0 / lambda;
  r.beta_planar = 1.0 / (5.0 * lambda + 2.0);
  r.beta_radial = 1.0 / (7.0 * lambda + 3.0);
  r.amp_A = std::exp(-std::log(5.0 * lambda + 2.0) / (2.0 * lambda + 1.0));
  r.amp_A_radial = std::exp(-std::log(7.0 * lambda + 3.0) / (2.0 * lambda + 1.0));
  r.tw_alpha = (lambda - 1.0) / (3.0 * lambda);
  r.tw_beta = (lambda + 2.0) / (3.0 * lambda);
  r.p_front = 3.0 * lambda / (2.0 * lambda + 1.0);
  return r;
}

double gamma_to_kappa(double gamma, const Rheology& r) {
  if (!(gamma > 0.0) || !std::isfinite(gamma)) {
    throw DomainError("gamma must be positive to define kappa");
  }
  return std::pow(gamma, -2.0 * r.lambda / (3.0 * r.lambda + 1.0));
}

double kappa_to_gamma(double kappa, const Rheology& r) {
  if (!(kappa > 0.0) || !std::isfinite(kappa)) {
    throw DomainError("kappa must be positive");
  }
  return std::pow(kappa, -(3.0 + r.a) / 2.0);
}

}  // namespace plspread
