// Apache License, Version 2.0, refer to LICENSE.txt

#include "skewfit/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "skewfit/distributions.hpp"
#include "skewfit/errors.hpp"

namespace skewfit::analysis {

namespace {

constexpr double kInvSqrt2Pi = 0.39894228040143267794;

double kde_at(std::span<const double> sorted, double x, double h) {
  // Contributions beyond 8 bandwidths are below 1e-14; skip them.
  const auto lo = std::lower_bound(sorted.begin(), sorted.end(), x - 8.0 * h);
  const auto hi = std::upper_bound(sorted.begin(), sorted.end(), x + 8.0 * h);
  double s = 0.0;
  for (auto it = lo; it != hi; ++it) {
    const double z = (x - *it) / h;
    s += std::exp(-0.5 * z * z);
  }
  return s * kInvSqrt2Pi / (h * static_cast<double>(sorted.size()));
}

double sorted_quantile(std::span<const double> sorted, double prob) {
  const double pos = prob * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

double sample_sd(std::span<const double> v) {
  const double n = static_cast<double>(v.size());
  const double mean = std::accumulate(v.begin(), v.end(), 0.0) / n;
  double ss = 0.0;
  for (double x : v) ss += (x - mean) * (x - mean);
  return std::sqrt(ss / (n - 1.0));
}

}  // namespace

std::vector<double> posterior_predictive(const gsn::Chain& chain, std::size_t n_draws,
                                         Rng& rng) {
  if (chain.draws.empty()) throw DataError("posterior_predictive: empty chain");
  std::vector<double> out;
  out.reserve(n_draws);
  for (std::size_t i = 0; i < n_draws; ++i) {
    const gsn::Draw& d = chain.draws[rng.index(chain.draws.size())];
    out.push_back(gsn_draw({d.mu, std::sqrt(d.sigma2), d.p}, rng).x);
  }
  return out;
}

std::vector<double> posterior_predictive(const asn::Chain& chain, std::size_t n_draws,
                                         Rng& rng) {
  if (chain.draws.empty()) throw DataError("posterior_predictive: empty chain");
  std::vector<double> out;
  out.reserve(n_draws);
  for (std::size_t i = 0; i < n_draws; ++i) {
    const asn::Draw& d = chain.draws[rng.index(chain.draws.size())];
    out.push_back(asn_draw({d.xi, std::sqrt(d.omega2), d.alpha}, rng));
  }
  return out;
}

double ks_distance(std::span<const double> a, std::span<const double> b) {
  if (a.empty() || b.empty()) throw DataError("ks_distance: samples must be nonempty");
  std::vector<double> sa(a.begin(), a.end());
  std::vector<double> sb(b.begin(), b.end());
  std::sort(sa.begin(), sa.end());
  std::sort(sb.begin(), sb.end());
  const double na = static_cast<double>(sa.size());
  const double nb = static_cast<double>(sb.size());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < sa.size() && j < sb.size()) {
    const double x = std::min(sa[i], sb[j]);
    while (i < sa.size() && sa[i] == x) ++i;
    while (j < sb.size() && sb[j] == x) ++j;
    d = std::max(d, std::fabs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  }
  return d;
}

double silverman_bandwidth(std::span<const double> draws) {
  std::vector<double> s(draws.begin(), draws.end());
  std::sort(s.begin(), s.end());
  const double sd = sample_sd(s);
  const double iqr = sorted_quantile(s, 0.75) - sorted_quantile(s, 0.25);
  double spread = sd;
  if (iqr > 0.0) spread = std::min(sd, iqr / 1.34);
  return 0.9 * spread * std::pow(static_cast<double>(s.size()), -0.2);
}

double map_estimate(std::span<const double> draws) {
  if (draws.empty()) throw DataError("map_estimate: no draws");
  const auto [mn, mx] = std::minmax_element(draws.begin(), draws.end());
  if (*mn == *mx) return *mn;
  if (draws.size() < 10) throw DataError("map_estimate: need at least 10 draws");

  std::vector<double> s(draws.begin(), draws.end());
  std::sort(s.begin(), s.end());
  const double h = silverman_bandwidth(s);
  const double lo = s.front();
  const double hi = s.back();

  constexpr std::size_t kGrid = 512;
  const double step = (hi - lo) / static_cast<double>(kGrid - 1);
  std::size_t best = 0;
  double best_f = -1.0;
  for (std::size_t k = 0; k < kGrid; ++k) {
    const double f = kde_at(s, lo + step * static_cast<double>(k), h);
    if (f > best_f) {
      best_f = f;
      best = k;
    }
  }
  // Golden-section refinement on the neighbouring grid cells.
  double a = std::max(lo, lo + step * (static_cast<double>(best) - 1.0));
  double b = std::min(hi, lo + step * (static_cast<double>(best) + 1.0));
  const double g = 0.5 * (std::sqrt(5.0) - 1.0);
  double c = b - g * (b - a);
  double d = a + g * (b - a);
  double fc = kde_at(s, c, h);
  double fd = kde_at(s, d, h);
  for (int it = 0; it < 60; ++it) {
    if (fc > fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - g * (b - a);
      fc = kde_at(s, c, h);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + g * (b - a);
      fd = kde_at(s, d, h);
    }
  }
  const double refined = 0.5 * (a + b);
  return kde_at(s, refined, h) >= best_f ? refined : lo + step * static_cast<double>(best);
}

std::vector<std::pair<double, double>> kde_curve(std::span<const double> sample,
                                                 std::size_t points) {
  if (sample.size() < 2) throw DataError("kde_curve: need at least two values");
  std::vector<double> s(sample.begin(), sample.end());
  std::sort(s.begin(), s.end());
  double h = silverman_bandwidth(s);
  if (!(h > 0.0)) h = 1e-3 * std::max(1.0, std::fabs(s.front()));
  const double lo = s.front() - 3.0 * h;
  const double hi = s.back() + 3.0 * h;
  std::vector<std::pair<double, double>> out;
  out.reserve(points);
  for (std::size_t k = 0; k < points; ++k) {
    const double x = lo + (hi - lo) * static_cast<double>(k) / static_cast<double>(points - 1);
    out.emplace_back(x, kde_at(s, x, h));
  }
  return out;
}

std::vector<double> kde_evaluate(std::span<const double> sample, std::span<const double> xs) {
  if (sample.size() < 2) throw DataError("kde_evaluate: need at least two values");
  std::vector<double> s(sample.begin(), sample.end());
  std::sort(s.begin(), s.end());
  double h = silverman_bandwidth(s);
  if (!(h > 0.0)) h = 1e-3 * std::max(1.0, std::fabs(s.front()));
  std::vector<double> out;
  out.reserve(xs.size());
  for (double x : xs) out.push_back(kde_at(s, x, h));
  return out;
}

double pearson_skewness(std::span<const double> sample) {
  if (sample.size() < 3) throw DataError("pearson_skewness: need at least three values");
  const double n = static_cast<double>(sample.size());
  const double mean = std::accumulate(sample.begin(), sample.end(), 0.0) / n;
  double m2 = 0.0, m3 = 0.0;
  for (double x : sample) {
    const double d = x - mean;
    m2 += d * d;
    m3 += d * d * d;
  }
  m2 /= n;
  m3 /= n;
  if (!(m2 > 0.0)) throw DataError("pearson_skewness: zero variance");
  return m3 / std::pow(m2, 1.5);
}

double pearson_median_skewness(std::span<const double> sample) {
  if (sample.size() < 3) throw DataError("pearson_median_skewness: need at least three values");
  std::vector<double> s(sample.begin(), sample.end());
  std::sort(s.begin(), s.end());
  const double mean = std::accumulate(s.begin(), s.end(), 0.0) / static_cast<double>(s.size());
  const double sd = sample_sd(s);
  if (!(sd > 0.0)) throw DataError("pearson_median_skewness: zero variance");
  return 3.0 * (mean - sorted_quantile(s, 0.5)) / sd;
}

double quantile(std::span<const double> sample, double prob) {
  if (sample.empty()) throw DataError("quantile: empty sample");
  if (!(prob >= 0.0 && prob <= 1.0)) throw DomainError("quantile: prob outside [0,1]");
  std::vector<double> s(sample.begin(), sample.end());
  std::sort(s.begin(), s.end());
  return sorted_quantile(s, prob);
}

Interval credible_interval(std::span<const double> draws, double level) {
  if (!(level > 0.0 && level < 1.0)) throw DomainError("credible_interval: level outside (0,1)");
  if (draws.empty()) throw DataError("credible_interval: no draws");
  std::vector<double> s(draws.begin(), draws.end());
  std::sort(s.begin(), s.end());
  const double tail = 0.5 * (1.0 - level);
  return {sorted_quantile(s, tail), sorted_quantile(s, 1.0 - tail), level};
}

SampleSummary summarize(std::span<const double> sample) {
  if (sample.size() < 3) throw DataError("summarize: need at least three values");
  const double n = static_cast<double>(sample.size());
  return {sample.size(), std::accumulate(sample.begin(), sample.end(), 0.0) / n,
          sample_sd(sample), pearson_skewness(sample)};
}

}  // namespace skewfit::analysis
