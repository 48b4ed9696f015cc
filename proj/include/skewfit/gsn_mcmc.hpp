// Apache License, Version 2.0, refer to LICENSE.txt
//
// Hybrid Gibbs / Metropolis-Hastings sampler for the GSN model
//
//   N_i | p            ~ Geometric(p)            (support 1, 2, ...)
//   X_i | N_i, mu, s^2 ~ N(N_i mu, N_i s^2)
//   (mu, s^2)          ~ Normal-Inverse-Gamma(v0, n0, alpha, beta)
//   p                  ~ Beta(a, b)
//
// The latent counts are refreshed by Metropolis-Hastings (independence
// geometric proposal or reflecting +-1 random walk); p and (mu, s^2) are
// drawn from their exact conditionals.

#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "skewfit/chain.hpp"
#include "skewfit/distributions.hpp"
#include "skewfit/rng.hpp"

namespace skewfit::gsn {

struct PriorSpec {
  double v0 = 0.0;
  double n0 = 0.001;
  double alpha = 2.001;
  double beta = 1.001;  // inverse-gamma rate
  double a = 1.0;
  double b = 1.0;

  void validate() const;
};

struct State {
  double mu = 0.0;
  double sigma2 = 1.0;
  double p = 0.5;
  std::vector<LatentCount> latent_counts;

  void validate() const;
};

struct Draw {
  double mu;
  double sigma2;
  double p;
};

using Chain = PosteriorChain<Draw>;

// Unnormalized ln P(N = n | x, mu, sigma2, p).
double latent_log_target(LatentCount n, double x, double mu, double sigma2, double p);

// MH acceptance probability of moving one latent from `current` to
// `proposed`. `log_proposal_ratio` is ln q(current) - ln q(proposed).
double latent_acceptance(LatentCount current, LatentCount proposed, double x, double mu,
                         double sigma2, double p, double log_proposal_ratio = 0.0);

// Reflecting random-walk proposal: n + step, with a step from 1 to 0 kept at 1.
inline LatentCount reflect_step(LatentCount n, int step) {
  const LatentCount proposed = n + step;
  return proposed < 1 ? 1 : proposed;
}

// Each sweep returns the number of accepted moves (a self-proposal counts
// as accepted).
std::size_t update_latents_geometric(State& state, std::span<const double> data, Rng& rng);
std::size_t update_latents_random_walk(State& state, std::span<const double> data,
                                       Rng& rng);

// Beta(m + a, sum(n) - m + b) parameters of p | N.
struct BetaShape {
  double a;
  double b;
};
BetaShape p_conditional(std::span<const LatentCount> counts, const PriorSpec& prior);
double update_p(std::span<const LatentCount> counts, const PriorSpec& prior, Rng& rng);

// Normal-Inverse-Gamma parameters of (mu, sigma2) | N, X.
struct NigParams {
  double mean;       // mu*
  double precision;  // n*
  double shape;      // alpha*
  double rate;       // beta*
};
NigParams mu_sigma_conditional(std::span<const LatentCount> counts,
                               std::span<const double> data, const PriorSpec& prior);
MeanVariance update_mu_sigma(std::span<const LatentCount> counts,
                             std::span<const double> data, const PriorSpec& prior, Rng& rng);

// Starting point: p = 0.5, N_i = 1, mu = mean * p, sigma2 = var * p.
State initial_state(std::span<const double> data);

// One full sweep: latents (chosen kernel), then sigma2/mu and p.
// Returns accepted latent moves.
std::size_t sweep(State& state, std::span<const double> data, const PriorSpec& prior,
                  LatentUpdate kernel, Rng& rng);

// Throws ConfigError on bad configuration and NumericalError if sigma2
// collapses below 1e-300.
Chain run_chain(std::span<const double> data, const PriorSpec& prior,
                const ChainConfig& config);

}  // namespace skewfit::gsn
