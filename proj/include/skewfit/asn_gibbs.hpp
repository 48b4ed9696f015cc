// Apache License, Version 2.0, refer to LICENSE.txt
//
// Gibbs sampler for the Azzalini skew normal with conjugate
// Normal-Inverse-Gamma prior on (xi, omega^2) and an ASN prior on alpha.
//
// Augmentation: eta_i ~ HalfNormal(0, omega^2) and
// y_i | eta_i ~ N(xi + delta eta_i, omega^2 (1 - delta^2)), delta = alpha/sqrt(1+alpha^2).
// alpha is refreshed by a random-walk Metropolis step on its conditional with
// eta integrated out, pi(alpha) * prod_i Phi(alpha y*_i).

#pragma once

#include <optional>
#include <span>
#include <vector>

#include "skewfit/chain.hpp"
#include "skewfit/distributions.hpp"
#include "skewfit/rng.hpp"

namespace skewfit::asn {

struct PriorSpec {
  double xi0 = 0.0;
  double kappa = 1000.0;
  double a = 2.001;
  double b = 1.001;
  double alpha0 = 0.0;
  double psi0 = 100.0;
  double lambda0 = 0.0;

  void validate() const;
};

struct State {
  double xi = 0.0;
  double omega2 = 1.0;
  double alpha = 0.0;
  std::vector<double> eta;

  double delta() const { return asn_delta(alpha); }
  void validate() const;
};

struct Draw {
  double xi;
  double omega2;
  double alpha;
};

using Chain = PosteriorChain<Draw>;

// Step 1: eta_i ~ N(delta (y_i - xi), omega^2 (1 - delta^2)) truncated below 0.
void update_eta(State& state, std::span<const double> data, Rng& rng);

// Conditional of xi given omega^2 and eta: N(mean, scale * omega^2).
struct XiConditional {
  double mean;   // mu-hat
  double scale;  // kappa-hat
};
XiConditional xi_conditional(const State& state, std::span<const double> data,
                             const PriorSpec& prior);

// Conditional of omega^2 given xi and eta: InvGamma(shape, rate).
struct Omega2Conditional {
  double shape;
  double rate;
};
Omega2Conditional omega2_conditional(const State& state, std::span<const double> data,
                                     const PriorSpec& prior);

// Step 2: xi | omega^2, then omega^2 | xi.
void update_xi_omega(State& state, std::span<const double> data, const PriorSpec& prior,
                     Rng& rng);

// ln pi_ASN(alpha; alpha0, psi0, lambda0) + sum_i ln Phi(alpha y*_i), up to a constant.
double alpha_conditional_logdensity(double alpha, std::span<const double> y_star,
                                    const PriorSpec& prior);

// Default proposal scale 0.5 (1 + |alpha|) clamped to [0.1, 5].
double default_alpha_step(double alpha);

// Step 3: one random-walk MH move on alpha. With `step` unset the proposal sd
// follows default_alpha_step at the current point and the Hastings ratio
// accounts for the asymmetry. Returns true on acceptance.
bool update_alpha(State& state, std::span<const double> data, const PriorSpec& prior,
                  std::optional<double> step, Rng& rng);

// xi = median, omega^2 = variance, alpha = sign(skewness), eta_i = |y_i - xi| delta.
State initial_state(std::span<const double> data);

// update_eta -> update_xi_omega -> update_alpha. Returns alpha acceptance.
bool sweep(State& state, std::span<const double> data, const PriorSpec& prior,
           std::optional<double> step, Rng& rng);

Chain run_chain(std::span<const double> data, const PriorSpec& prior,
                const ChainConfig& config, std::optional<double> step = std::nullopt);

}  // namespace skewfit::asn
