// Apache License, Version 2.0, refer to LICENSE.txt

#include "skewfit/gsn_mcmc.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "skewfit/errors.hpp"

namespace skewfit::gsn {

namespace {

constexpr double kMinSigma2 = 1e-300;

bool accept(double log_ratio, Rng& rng) {
  return log_ratio >= 0.0 || std::log(rng.uniform()) < log_ratio;
}

void check_data(std::span<const double> data) {
  for (double x : data) {
    if (!std::isfinite(x)) throw DataError("GSN sampler: data must be finite");
  }
}

}  // namespace

void PriorSpec::validate() const {
  if (!(n0 > 0.0 && alpha > 0.0 && beta > 0.0 && a > 0.0 && b > 0.0)) {
    throw ConfigError("GSN prior: n0, alpha, beta, a, b must all be positive");
  }
  if (!std::isfinite(v0)) throw ConfigError("GSN prior: v0 must be finite");
}

void State::validate() const {
  if (!(sigma2 > 0.0)) throw DomainError("GSN state: sigma2 must be positive");
  if (!(p > 0.0 && p < 1.0)) throw DomainError("GSN state: p must lie in (0,1)");
  for (LatentCount n : latent_counts) {
    if (n < 1) throw DomainError("GSN state: latent counts must be >= 1");
  }
}

double latent_log_target(LatentCount n, double x, double mu, double sigma2, double p) {
  const double nd = static_cast<double>(n);
  const double r = x - nd * mu;
  return -r * r / (2.0 * nd * sigma2) + (nd - 1.0) * std::log1p(-p) - 0.5 * std::log(nd);
}

double latent_acceptance(LatentCount current, LatentCount proposed, double x, double mu,
                         double sigma2, double p, double log_proposal_ratio) {
  if (proposed == current) return 1.0;
  const double log_r = latent_log_target(proposed, x, mu, sigma2, p) -
                       latent_log_target(current, x, mu, sigma2, p) + log_proposal_ratio;
  return log_r >= 0.0 ? 1.0 : std::exp(log_r);
}

std::size_t update_latents_geometric(State& state, std::span<const double> data, Rng& rng) {
  // One proposal success probability per sweep.
  const double p_prop = rng.uniform();
  const double log1m_prop = std::log1p(-p_prop);
  std::size_t accepted = 0;
  for (std::size_t i = 0; i < data.size(); ++i) {
    LatentCount& n = state.latent_counts[i];
    const LatentCount proposed = sample_geometric(p_prop, rng);
    if (proposed == n) {
      ++accepted;
      continue;
    }
    // ln q(n) - ln q(proposed) for q = Geometric(p_prop)
    const double log_q_ratio = static_cast<double>(n - proposed) * log1m_prop;
    const double log_r = latent_log_target(proposed, data[i], state.mu, state.sigma2,
                                           state.p) -
                         latent_log_target(n, data[i], state.mu, state.sigma2, state.p) +
                         log_q_ratio;
    if (accept(log_r, rng)) {
      n = proposed;
      ++accepted;
    }
  }
  return accepted;
}

std::size_t update_latents_random_walk(State& state, std::span<const double> data,
                                       Rng& rng) {
  std::size_t accepted = 0;
  for (std::size_t i = 0; i < data.size(); ++i) {
    LatentCount& n = state.latent_counts[i];
    const int step = rng.uniform() < 0.5 ? -1 : 1;
    const LatentCount proposed = reflect_step(n, step);
    if (proposed == n) {
      ++accepted;
      continue;
    }
    const double log_r =
        latent_log_target(proposed, data[i], state.mu, state.sigma2, state.p) -
        latent_log_target(n, data[i], state.mu, state.sigma2, state.p);
    if (accept(log_r, rng)) {
      n = proposed;
      ++accepted;
    }
  }
  return accepted;
}

BetaShape p_conditional(std::span<const LatentCount> counts, const PriorSpec& prior) {
  const double m = static_cast<double>(counts.size());
  const double total = static_cast<double>(
      std::accumulate(counts.begin(), counts.end(), LatentCount{0}));
  return {m + prior.a, total - m + prior.b};
}

double update_p(std::span<const LatentCount> counts, const PriorSpec& prior, Rng& rng) {
  const BetaShape s = p_conditional(counts, prior);
  return sample_beta(s.a, s.b, rng);
}

NigParams mu_sigma_conditional(std::span<const LatentCount> counts,
                               std::span<const double> data, const PriorSpec& prior) {
  double sum_n = 0.0;
  double sum_x = 0.0;
  for (std::size_t i = 0; i < data.size(); ++i) {
    sum_n += static_cast<double>(counts[i]);
    sum_x += data[i];
  }
  const double precision = sum_n + prior.n0;
  const double mean = (prior.n0 * prior.v0 + sum_x) / precision;
  double ss = prior.n0 * (mean - prior.v0) * (mean - prior.v0);
  for (std::size_t i = 0; i < data.size(); ++i) {
    const double nd = static_cast<double>(counts[i]);
    const double r = data[i] - nd * mean;
    ss += r * r / nd;
  }
  const double m = static_cast<double>(data.size());
  return {mean, precision, prior.alpha + 0.5 * m, prior.beta + 0.5 * ss};
}

MeanVariance update_mu_sigma(std::span<const LatentCount> counts,
                             std::span<const double> data, const PriorSpec& prior,
                             Rng& rng) {
  const NigParams post = mu_sigma_conditional(counts, data, prior);
  return sample_normal_inverse_gamma(post.mean, post.precision, post.shape, post.rate, rng);
}

State initial_state(std::span<const double> data) {
  const double m = static_cast<double>(data.size());
  const double mean = std::accumulate(data.begin(), data.end(), 0.0) / m;
  double var = 0.0;
  for (double x : data) var += (x - mean) * (x - mean);
  var /= (m - 1.0);
  State s;
  s.p = 0.5;
  s.mu = mean * s.p;
  s.sigma2 = std::max(var * s.p, 1e-8);
  s.latent_counts.assign(data.size(), 1);
  return s;
}

std::size_t sweep(State& state, std::span<const double> data, const PriorSpec& prior,
                  LatentUpdate kernel, Rng& rng) {
  const std::size_t accepted = kernel == LatentUpdate::GeometricProposal
                                   ? update_latents_geometric(state, data, rng)
                                   : update_latents_random_walk(state, data, rng);
  const MeanVariance ms = update_mu_sigma(state.latent_counts, data, prior, rng);
  if (!(ms.sigma2 >= kMinSigma2) || !std::isfinite(ms.mu)) {
    throw NumericalError("GSN sampler: sigma2 collapsed (" + std::to_string(ms.sigma2) + ")");
  }
  state.mu = ms.mu;
  state.sigma2 = ms.sigma2;
  // p = 1 exactly would stall the geometric term; keep it in the open interval.
  state.p = std::clamp(update_p(state.latent_counts, prior, rng), 1e-300, 1.0 - 1e-16);
  return accepted;
}

Chain run_chain(std::span<const double> data, const PriorSpec& prior,
                const ChainConfig& config) {
  config.validate();
  prior.validate();
  if (data.size() < 2) throw ConfigError("GSN sampler needs at least two observations");
  check_data(data);

  Rng rng(config.seed);
  State state = initial_state(data);
  Chain chain;
  chain.config = config;
  chain.draws.reserve((config.iterations - config.burn_in) / config.thin);

  std::size_t accepted = 0;
  for (std::size_t t = 1; t <= config.iterations; ++t) {
    accepted += sweep(state, data, prior, config.latent_update, rng);
    if (t > config.burn_in && (t - config.burn_in) % config.thin == 0) {
      chain.draws.push_back({state.mu, state.sigma2, state.p});
    }
  }
  chain.acceptance_rate = static_cast<double>(accepted) /
                          (static_cast<double>(config.iterations) *
                           static_cast<double>(data.size()));
  return chain;
}

}  // namespace skewfit::gsn
