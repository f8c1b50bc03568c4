#pragma once

namespace kval::specfn {

double erf(double z);

/// Upper tail of the standard normal, 1 - Phi(e) = erfc(e / sqrt 2) / 2.
double normal_survival(double e);

/// log Gamma(x) for x > 0 (Lanczos, g = 7). Reentrant, unlike std::lgamma.
double log_gamma(double x);

/// Regularized lower incomplete gamma P(s, x).
double gamma_p(double s, double x);

/// Regularized upper incomplete gamma Q(s, x) = 1 - P(s, x), evaluated
/// directly in whichever regime is accurate.
double gamma_q(double s, double x);

/// Upper tail of the chi-square distribution with `dof` degrees of freedom:
/// Q(dof / 2, chi2 / 2).
double chi2_survival(double chi2, int dof);

/// log B(a, b) = log Gamma(a) + log Gamma(b) - log Gamma(a + b).
double log_beta_function(double a, double b);

/// log of the Beta(a, b) density at p. Throws BoundaryInputError for p
/// outside the open interval (0, 1) and InvalidArgumentError for a, b <= 0.
double log_beta_density(double p, double a, double b);

}  // namespace kval::specfn
