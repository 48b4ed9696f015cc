// Apache License, Version 2.0, refer to LICENSE.txt
//
// Posterior summaries and goodness of fit: predictive draws, two-sample
// Kolmogorov-Smirnov distance, KDE mode (MAP), equal-tailed intervals and
// sample skewness.

#pragma once

#include <algorithm>
#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "skewfit/asn_gibbs.hpp"
#include "skewfit/gsn_mcmc.hpp"
#include "skewfit/rng.hpp"

namespace skewfit::analysis {

// One observation per predictive draw, from a parameter draw picked
// uniformly (with replacement) from the chain.
std::vector<double> posterior_predictive(const gsn::Chain& chain, std::size_t n_draws,
                                         Rng& rng);
std::vector<double> posterior_predictive(const asn::Chain& chain, std::size_t n_draws,
                                         Rng& rng);

// sup_x |F_a(x) - F_b(x)| over the two empirical CDFs. Throws DataError on
// empty input.
double ks_distance(std::span<const double> a, std::span<const double> b);

// One-sample KS statistic of `sample` against a continuous CDF.
template <class Cdf>
double ks_statistic(std::span<const double> sample, Cdf&& cdf);

// Silverman's rule: 0.9 min(sd, IQR/1.34) m^{-1/5}.
double silverman_bandwidth(std::span<const double> draws);

// Mode of the Gaussian KDE of `draws`. Requires at least 10 draws unless
// they are all equal, in which case that value is returned.
double map_estimate(std::span<const double> draws);

// Gaussian KDE on `points` equally spaced abscissae spanning the sample
// padded by three bandwidths. Returns (x, density) pairs.
std::vector<std::pair<double, double>> kde_curve(std::span<const double> sample,
                                                 std::size_t points = 512);

// Gaussian KDE (Silverman bandwidth of `sample`) evaluated at `xs`.
std::vector<double> kde_evaluate(std::span<const double> sample, std::span<const double> xs);

// Moment coefficient g1 = m3 / m2^{3/2}. Throws DataError for fewer than three
// values or zero variance.
double pearson_skewness(std::span<const double> sample);

// Pearson's second coefficient 3 (mean - median) / sd.
double pearson_median_skewness(std::span<const double> sample);

// Linear-interpolation (type 7) empirical quantile.
double quantile(std::span<const double> sample, double prob);

struct Interval {
  double lo;
  double hi;
  double level;
};

// Equal-tailed interval at the (1-level)/2 and 1-(1-level)/2 quantiles.
Interval credible_interval(std::span<const double> draws, double level = 0.95);

struct SampleSummary {
  std::size_t m;
  double mean;
  double sd;
  double skewness;
};
SampleSummary summarize(std::span<const double> sample);

// ---- template definitions ----

template <class Cdf>
double ks_statistic(std::span<const double> sample, Cdf&& cdf) {
  std::vector<double> s(sample.begin(), sample.end());
  std::sort(s.begin(), s.end());
  const double n = static_cast<double>(s.size());
  double d = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    const double f = cdf(s[i]);
    d = std::max({d, f - static_cast<double>(i) / n, static_cast<double>(i + 1) / n - f});
  }
  return d;
}

}  // namespace skewfit::analysis
