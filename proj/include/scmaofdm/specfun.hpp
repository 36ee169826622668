#pragma once

#include "scmaofdm/common.hpp"

namespace scmaofdm {

/// log Gamma for x > 0. Throws InputError for x <= 0.
double ln_gamma(double x);

/// Tricomi confluent hypergeometric U(a, b, x) for x > 0, a >= 0.
/// U(0, b, x) = 1 exactly. Evaluated through ln_kummer_u.
double kummer_u(double a, double b, double x);

/// log U(a, b, x) for a > 0, x > 0, computed by adaptive quadrature of
/// ln Integral[u^(a-1) (1+u)^(b-a-1) exp(-x u), {u, 0, inf}] - ln Gamma(a),
/// with the integrand rescaled by its peak so arbitrarily small U values
/// stay representable.
double ln_kummer_u(double a, double b, double x);

/// Whittaker W_{kappa,mu}(z) for z > 0 via the identity
/// W = exp(-z/2) z^(mu+1/2) U(mu - kappa + 1/2, 1 + 2 mu, z).
double whittaker_w(double kappa, double mu, double z);
double ln_whittaker_w(double kappa, double mu, double z);

/// Gaussian tail Q(x) = erfc(x/sqrt(2))/2.
double q_function(double x);

/// Two-exponential approximation Q(x) ~ exp(-x^2/2)/12 + exp(-2x^2/3)/4.
double q_approx(double x);

}  // namespace scmaofdm
