#pragma once

namespace qtdt {

/// Thread-safe log-gamma for positive arguments.
double log_gamma(double x);

/// Standard normal CDF.
double normal_cdf(double x);

/// Standard normal quantile, p in (0, 1).
double normal_quantile(double p);

/// Regularized lower incomplete gamma P(a, x), a > 0, x >= 0.
double regularized_gamma_p(double a, double x);

/// Regularized upper incomplete gamma Q(a, x) = 1 - P(a, x).
double regularized_gamma_q(double a, double x);

/// Upper-tail probability of a chi-square variable with df degrees of
/// freedom: Q(df/2, x/2).  Absolute error below 1e-12 over the useful range.
double chi_square_sf(double x, double df);

/// Quantile of Gamma(shape, scale): the x with P(shape, x/scale) = p.
double gamma_quantile(double p, double shape, double scale);

/// Chi-square quantile via Gamma(df/2, scale 2); supports fractional df.
double chi_square_quantile(double p, double df);

/// Smallest integer k with the Poisson(lambda) CDF at k >= p.
unsigned poisson_quantile(double p, double lambda);

}  // namespace qtdt
