// Apache License, Version 2.0, refer to LICENSE.txt
//
// Geometric skew normal (GSN) and Azzalini skew normal (ASN) distributions,
// plus the auxiliary exact samplers the inference code draws from.
//
// Geometric variables use the success-count support {1, 2, ...}: the GSN
// is the sum of N ~ Geometric(p) iid N(mu, sigma^2) summands, and N >= 1.

#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "skewfit/rng.hpp"

namespace skewfit {

using LatentCount = std::int64_t;

struct GsnParams {
  double mu = 0.0;
  double sigma = 1.0;
  double p = 1.0;

  // Throws DomainError unless sigma > 0 and 0 < p <= 1.
  void validate() const;
};

struct AsnParams {
  double xi = 0.0;
  double omega = 1.0;
  double alpha = 0.0;

  void validate() const;
};

// Truncation policy for the infinite geometric series in the GSN density.
struct SeriesControl {
  double epsilon = 1e-20;       // omitted geometric tail mass
  std::size_t k_max = 100000;   // hard cap on the number of terms

  void validate() const;
};

// Number of series terms: 1 when p == 1, otherwise
// min(k_max, max(50, ceil(ln eps / ln(1-p)))).
std::size_t series_truncation(double p, const SeriesControl& ctl = {});

// True when k_max, not the tail-mass rule, decided series_truncation.
bool series_cap_binds(double p, const SeriesControl& ctl = {});

double gsn_logpdf(double x, const GsnParams& theta, const SeriesControl& ctl = {});

struct GsnDraw {
  double x;
  LatentCount n;
};

GsnDraw gsn_draw(const GsnParams& theta, Rng& rng);
std::vector<double> gsn_sample(const GsnParams& theta, std::size_t n, Rng& rng);
std::vector<GsnDraw> gsn_sample_with_latents(const GsnParams& theta, std::size_t n,
                                             Rng& rng);

// E(N | X = x) and E(1/N | X = x) under the GSN joint law.
struct LatentMoments {
  double mean_n;
  double mean_inv_n;
};

// Both conditional moments from one pass over the series. Throws
// NumericalError if every term underflows.
LatentMoments gsn_latent_moments(double x, const GsnParams& theta,
                                 const SeriesControl& ctl = {});
double gsn_expect_N(double x, const GsnParams& theta, const SeriesControl& ctl = {});
double gsn_expect_Ninv(double x, const GsnParams& theta, const SeriesControl& ctl = {});

// Mean of GSN(mu, sigma, p): mu / p.
inline double gsn_mean(const GsnParams& theta) { return theta.mu / theta.p; }

// delta = alpha / sqrt(1 + alpha^2)
double asn_delta(double alpha);

double asn_logpdf(double x, const AsnParams& theta);
double asn_draw(const AsnParams& theta, Rng& rng);
std::vector<double> asn_sample(const AsnParams& theta, std::size_t n, Rng& rng);

// ---- log densities of the auxiliary families ----
double normal_logpdf(double x, double mean, double variance);
double beta_logpdf(double x, double a, double b);
// shape/rate parameterization: density ∝ x^{-shape-1} exp(-rate / x)
double inverse_gamma_logpdf(double x, double shape, double rate);
double geometric_logpmf(LatentCount n, double p);

// ---- auxiliary samplers ----
struct MeanVariance {
  double mu;
  double sigma2;
};

LatentCount sample_geometric(double p, Rng& rng);
double sample_gamma(double shape, double rate, Rng& rng);
double sample_beta(double a, double b, Rng& rng);
double sample_inverse_gamma(double shape, double rate, Rng& rng);

// sigma2 ~ InvGamma(shape, rate), then mu | sigma2 ~ N(mean, sigma2 / precision_scale).
MeanVariance sample_normal_inverse_gamma(double mean, double precision_scale, double shape,
                                         double rate, Rng& rng);

// N(mean, variance) conditioned on being >= lower. Inverse CDF while the
// standardized bound is moderate, exponential rejection in the deep tail.
double sample_truncated_normal_below(double lower, double mean, double variance, Rng& rng);

double sample_lognormal(double meanlog, double varlog, Rng& rng);

}  // namespace skewfit
