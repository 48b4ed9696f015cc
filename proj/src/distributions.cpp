// Apache License, Version 2.0, refer to LICENSE.txt

#include "skewfit/distributions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "skewfit/errors.hpp"
#include "skewfit/specfun.hpp"

namespace skewfit {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr double kLn2 = 0.69314718055994530942;
// Geometric draws beyond this are clamped; their GSN weight is nil anyway.
constexpr double kMaxLatent = 1e15;

// Streaming log-sum-exp.
class LogSumAccumulator {
 public:
  void add(double v) {
    if (v == kNegInf) return;
    if (v <= max_) {
      sum_ += std::exp(v - max_);
    } else {
      sum_ = sum_ * std::exp(max_ - v) + 1.0;
      max_ = v;
    }
  }
  double value() const { return max_ == kNegInf ? kNegInf : max_ + std::log(sum_); }

 private:
  double max_ = kNegInf;
  double sum_ = 0.0;
};

// Unnormalized log weight of N = k given x, common to density and moments:
// (k-1) ln(1-p) - (x - k mu)^2 / (2 k sigma^2) - ln(k)/2.
double latent_log_weight(LatentCount k, double x, const GsnParams& theta,
                         double log1mp) {
  const double kd = static_cast<double>(k);
  const double r = x - kd * theta.mu;
  const double geo = (k == 1) ? 0.0 : (kd - 1.0) * log1mp;
  return geo - r * r / (2.0 * kd * theta.sigma * theta.sigma) - 0.5 * std::log(kd);
}

}  // namespace

void GsnParams::validate() const {
  if (!(sigma > 0.0) || !std::isfinite(sigma)) {
    throw DomainError("GSN sigma must be positive, got " + std::to_string(sigma));
  }
  if (!(p > 0.0 && p <= 1.0)) {
    throw DomainError("GSN p must lie in (0,1], got " + std::to_string(p));
  }
  if (!std::isfinite(mu)) throw DomainError("GSN mu must be finite");
}

void AsnParams::validate() const {
  if (!(omega > 0.0) || !std::isfinite(omega)) {
    throw DomainError("ASN omega must be positive, got " + std::to_string(omega));
  }
  if (!std::isfinite(xi) || std::isnan(alpha)) {
    throw DomainError("ASN xi must be finite and alpha not NaN");
  }
}

void SeriesControl::validate() const {
  if (!(epsilon > 0.0 && epsilon < 1.0)) {
    throw DomainError("SeriesControl epsilon must lie in (0,1)");
  }
  if (k_max < 1) throw DomainError("SeriesControl k_max must be >= 1");
}

namespace {

std::size_t uncapped_truncation(double p, const SeriesControl& ctl) {
  if (p >= 1.0) return 1;
  const double k = std::ceil(std::log(ctl.epsilon) / std::log1p(-p));
  if (!(k < static_cast<double>(std::numeric_limits<std::size_t>::max() / 2))) {
    return std::numeric_limits<std::size_t>::max() / 2;
  }
  return std::max<std::size_t>(50, static_cast<std::size_t>(k));
}

}  // namespace

std::size_t series_truncation(double p, const SeriesControl& ctl) {
  if (p >= 1.0) return 1;
  return std::min(ctl.k_max, uncapped_truncation(p, ctl));
}

bool series_cap_binds(double p, const SeriesControl& ctl) {
  return p < 1.0 && uncapped_truncation(p, ctl) > ctl.k_max;
}

double gsn_logpdf(double x, const GsnParams& theta, const SeriesControl& ctl) {
  theta.validate();
  const std::size_t terms = series_truncation(theta.p, ctl);
  const double log1mp = terms > 1 ? std::log1p(-theta.p) : 0.0;
  LogSumAccumulator acc;
  for (std::size_t k = 1; k <= terms; ++k) {
    acc.add(latent_log_weight(static_cast<LatentCount>(k), x, theta, log1mp));
  }
  const double s = acc.value();
  if (s == kNegInf) return kNegInf;
  return s + std::log(theta.p) - std::log(theta.sigma) - specfun::kLogSqrt2Pi;
}

GsnDraw gsn_draw(const GsnParams& theta, Rng& rng) {
  const LatentCount n = sample_geometric(theta.p, rng);
  const double nd = static_cast<double>(n);
  return {rng.normal(nd * theta.mu, std::sqrt(nd) * theta.sigma), n};
}

std::vector<double> gsn_sample(const GsnParams& theta, std::size_t n, Rng& rng) {
  theta.validate();
  std::vector<double> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) out.push_back(gsn_draw(theta, rng).x);
  return out;
}

std::vector<GsnDraw> gsn_sample_with_latents(const GsnParams& theta, std::size_t n,
                                             Rng& rng) {
  theta.validate();
  std::vector<GsnDraw> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) out.push_back(gsn_draw(theta, rng));
  return out;
}

LatentMoments gsn_latent_moments(double x, const GsnParams& theta,
                                 const SeriesControl& ctl) {
  theta.validate();
  const std::size_t terms = series_truncation(theta.p, ctl);
  if (terms == 1) return {1.0, 1.0};
  const double log1mp = std::log1p(-theta.p);
  LogSumAccumulator denom, num_n, num_inv;
  for (std::size_t k = 1; k <= terms; ++k) {
    const double w = latent_log_weight(static_cast<LatentCount>(k), x, theta, log1mp);
    const double lk = std::log(static_cast<double>(k));
    denom.add(w);
    num_n.add(w + lk);
    num_inv.add(w - lk);
  }
  const double d = denom.value();
  if (d == kNegInf) {
    throw NumericalError("gsn_latent_moments: every series term underflowed at x=" +
                         std::to_string(x));
  }
  return {std::exp(num_n.value() - d), std::exp(num_inv.value() - d)};
}

double gsn_expect_N(double x, const GsnParams& theta, const SeriesControl& ctl) {
  return gsn_latent_moments(x, theta, ctl).mean_n;
}

double gsn_expect_Ninv(double x, const GsnParams& theta, const SeriesControl& ctl) {
  return gsn_latent_moments(x, theta, ctl).mean_inv_n;
}

double asn_delta(double alpha) {
  if (std::isinf(alpha)) return alpha > 0 ? 1.0 : -1.0;
  return alpha / std::sqrt(1.0 + alpha * alpha);
}

double asn_logpdf(double x, const AsnParams& theta) {
  theta.validate();
  const double z = (x - theta.xi) / theta.omega;
  return kLn2 - std::log(theta.omega) + specfun::std_normal_logpdf(z) +
         specfun::std_normal_logcdf(theta.alpha * z);
}

double asn_draw(const AsnParams& theta, Rng& rng) {
  const double delta = asn_delta(theta.alpha);
  const double z0 = std::fabs(rng.normal());
  const double z1 = rng.normal();
  return theta.xi + theta.omega * (delta * z0 + std::sqrt(1.0 - delta * delta) * z1);
}

std::vector<double> asn_sample(const AsnParams& theta, std::size_t n, Rng& rng) {
  theta.validate();
  std::vector<double> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) out.push_back(asn_draw(theta, rng));
  return out;
}

double normal_logpdf(double x, double mean, double variance) {
  const double r = x - mean;
  return -0.5 * r * r / variance - 0.5 * std::log(variance) - specfun::kLogSqrt2Pi;
}

double beta_logpdf(double x, double a, double b) {
  if (!(x > 0.0 && x < 1.0)) return kNegInf;
  return (a - 1.0) * std::log(x) + (b - 1.0) * std::log1p(-x) - specfun::log_beta(a, b);
}

double inverse_gamma_logpdf(double x, double shape, double rate) {
  if (!(x > 0.0)) return kNegInf;
  return shape * std::log(rate) - specfun::log_gamma(shape) - (shape + 1.0) * std::log(x) -
         rate / x;
}

double geometric_logpmf(LatentCount n, double p) {
  if (n < 1) return kNegInf;
  if (p >= 1.0) return n == 1 ? 0.0 : kNegInf;
  return std::log(p) + static_cast<double>(n - 1) * std::log1p(-p);
}

LatentCount sample_geometric(double p, Rng& rng) {
  if (!(p > 0.0 && p <= 1.0)) {
    throw DomainError("sample_geometric: p must lie in (0,1], got " + std::to_string(p));
  }
  if (p == 1.0) return 1;
  const double k = std::floor(std::log(rng.uniform()) / std::log1p(-p));
  return 1 + static_cast<LatentCount>(std::min(k, kMaxLatent));
}

double sample_gamma(double shape, double rate, Rng& rng) {
  if (!(shape > 0.0) || !(rate > 0.0) || !std::isfinite(shape) || !std::isfinite(rate)) {
    throw DomainError("sample_gamma: shape and rate must be positive and finite");
  }
  if (shape < 1.0) {
    // Boost: G(a) = G(a+1) * U^{1/a}
    const double g = sample_gamma(shape + 1.0, 1.0, rng);
    return g * std::pow(rng.uniform(), 1.0 / shape) / rate;
  }
  // Marsaglia & Tsang (2000)
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double z, v;
    do {
      z = rng.normal();
      v = 1.0 + c * z;
    } while (v <= 0.0);
    v = v * v * v;
    const double u = rng.uniform();
    if (u < 1.0 - 0.0331 * z * z * z * z ||
        std::log(u) < 0.5 * z * z + d * (1.0 - v + std::log(v))) {
      return d * v / rate;
    }
  }
}

double sample_beta(double a, double b, Rng& rng) {
  if (!(a > 0.0) || !(b > 0.0)) {
    throw DomainError("sample_beta: shapes must be positive");
  }
  const double x = sample_gamma(a, 1.0, rng);
  const double y = sample_gamma(b, 1.0, rng);
  const double s = x + y;
  // Both gammas can underflow for tiny shapes; fall back on the odds of each side.
  if (!(s > 0.0)) return rng.uniform() < a / (a + b) ? 1.0 : 0.0;
  return x / s;
}

double sample_inverse_gamma(double shape, double rate, Rng& rng) {
  return 1.0 / sample_gamma(shape, rate, rng);
}

MeanVariance sample_normal_inverse_gamma(double mean, double precision_scale, double shape,
                                         double rate, Rng& rng) {
  if (!(precision_scale > 0.0)) {
    throw DomainError("sample_normal_inverse_gamma: precision scale must be positive");
  }
  const double sigma2 = sample_inverse_gamma(shape, rate, rng);
  const double mu = rng.normal(mean, std::sqrt(sigma2 / precision_scale));
  return {mu, sigma2};
}

double sample_truncated_normal_below(double lower, double mean, double variance, Rng& rng) {
  if (!(variance > 0.0) || !std::isfinite(variance)) {
    throw DomainError("sample_truncated_normal_below: variance must be positive");
  }
  const double sd = std::sqrt(variance);
  const double a = (lower - mean) / sd;
  double z;
  if (a > 4.0) {
    // Robert (1995) translated-exponential proposal.
    const double lambda = 0.5 * (a + std::sqrt(a * a + 4.0));
    for (;;) {
      z = a - std::log(rng.uniform()) / lambda;
      const double r = z - lambda;
      if (std::log(rng.uniform()) <= -0.5 * r * r) break;
    }
  } else {
    // Inverse CDF on the upper tail: Z = -Phi^{-1}(U * Phi(-a)).
    const double tail = specfun::std_normal_cdf(-a);
    z = -specfun::std_normal_quantile(rng.uniform() * tail);
    z = std::max(z, a);
  }
  return mean + sd * z;
}

double sample_lognormal(double meanlog, double varlog, Rng& rng) {
  if (!(varlog > 0.0)) throw DomainError("sample_lognormal: variance must be positive");
  return std::exp(rng.normal(meanlog, std::sqrt(varlog)));
}

}  // namespace skewfit
