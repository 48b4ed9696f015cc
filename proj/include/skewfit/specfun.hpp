// Apache License, Version 2.0, refer to LICENSE.txt
//
// Scalar special functions and standard normal primitives. Everything here
// is pure and thread-safe.

#pragma once

#include <span>

namespace skewfit::specfun {

inline constexpr double kLogSqrt2Pi = 0.91893853320467274178;  // ln(sqrt(2*pi))
inline constexpr double kEulerGamma = 0.57721566490153286061;

// ln Gamma(x) for x > 0 (Lanczos, g = 7, 9 terms). Throws DomainError otherwise.
double log_gamma(double x);

// psi(x) = d/dx ln Gamma(x) for x > 0.
double digamma(double x);

// ln B(a, b)
double log_beta(double a, double b);

double std_normal_logpdf(double x);
double std_normal_pdf(double x);
double std_normal_cdf(double x);

// ln Phi(x), accurate far into the lower tail where Phi(x) underflows.
double std_normal_logcdf(double x);

// Phi^{-1}(u) for u in (0, 1). Rational approximation refined by one
// Halley step. Throws DomainError at or outside the endpoints.
double std_normal_quantile(double u);

// ln sum exp(v). Returns -inf for an empty span or all -inf entries.
double log_sum_exp(std::span<const double> v);

}  // namespace skewfit::specfun
