// Apache License, Version 2.0, refer to LICENSE.txt
//
// Coordinate-ascent variational inference for the GSN model under the same
// priors as the MCMC sampler, with mean-field family
//
//   q(N, p, mu, sigma2) = prod_i q(N_i) * Beta(p; a*, b*) * NIG(mu, sigma2; mu*, n*, alpha*, beta*)

#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "skewfit/distributions.hpp"
#include "skewfit/gsn_mcmc.hpp"
#include "skewfit/rng.hpp"

namespace skewfit::vi {

using gsn::PriorSpec;

struct LatentExpectations {
  std::vector<double> mean_n;      // E_q[N_i]
  std::vector<double> mean_inv_n;  // E_q[1/N_i]
  std::vector<double> mean_log_n;  // E_q[ln N_i]
  std::vector<double> entropy;     // -E_q[ln q(N_i)]

  double sum_n() const;
};

struct VariationalState {
  double a_star = 1.0;
  double b_star = 1.0;
  double mu_star = 0.0;
  double n_star = 1.0;
  double alpha_star = 1.0;
  double beta_star = 1.0;
  // latent_weights[i][k] = q(N_i = k + 1)
  std::vector<std::vector<double>> latent_weights;
  LatentExpectations expectations;
  std::vector<double> elbo_trace;
  std::size_t iterations = 0;
  bool converged = false;

  void validate() const;
};

// Truncation for q(N_i): grow until the bounded tail is below
// `relative_tail` of the largest weight, never past `k_max` terms.
struct LatentTruncation {
  double relative_tail = 1e-15;
  std::size_t k_max = 100000;
};

// Exponent coefficients of q*(N_i = n) ∝ n^{-1/2} exp(A n + B x_i^2 / n).
struct LatentCoefficients {
  double A;
  double B;
};
LatentCoefficients latent_coefficients(const VariationalState& state);

// Normalized weights over n = 1..K for one observation.
std::vector<double> latent_weights(double x, const LatentCoefficients& c,
                                   const LatentTruncation& trunc = {});

// Refresh q(N) in place; returns the per-observation expectations (also
// stored on the state). Throws NumericalError if every weight underflows.
const LatentExpectations& update_q_latent(VariationalState& state,
                                          std::span<const double> data,
                                          const LatentTruncation& trunc = {});

struct BetaFactor {
  double a_star;
  double b_star;
};
BetaFactor update_q_p(std::span<const double> mean_n, const PriorSpec& prior);

struct NigFactor {
  double mu_star;
  double n_star;
  double alpha_star;
  double beta_star;
};
NigFactor update_q_mu_sigma(std::span<const double> mean_n, std::span<const double> mean_inv_n,
                            std::span<const double> data, const PriorSpec& prior);

double compute_elbo(const VariationalState& state, std::span<const double> data,
                    const PriorSpec& prior);

struct CaviOptions {
  double tol = 1e-6;             // absolute ELBO change
  std::size_t max_iter = 500;
  double param_tol = 0.0;        // optional relative factor-parameter change; 0 disables
  LatentTruncation truncation;
};

VariationalState initial_state(std::span<const double> data, const PriorSpec& prior);

// One CAVI sweep: q(N), q(p), q(mu, sigma2), then the ELBO is appended.
// Returns the largest relative parameter change.
double cavi_sweep(VariationalState& state, std::span<const double> data,
                  const PriorSpec& prior, const LatentTruncation& trunc = {});

VariationalState run_cavi(std::span<const double> data, const PriorSpec& prior,
                          const CaviOptions& options = {});

// Draws (mu, sigma2) ~ NIG, p ~ Beta, then X ~ GSN(mu, sigma, p).
std::vector<double> vi_posterior_predictive(const VariationalState& state,
                                            std::size_t n_draws, Rng& rng);

// Draws parameter triples from q, e.g. for MAP and interval summaries.
std::vector<gsn::Draw> sample_parameters(const VariationalState& state, std::size_t n_draws,
                                         Rng& rng);

// Largest |E_q[N_i] - E(N_i | x_i, plug-in parameters)| over the data, the
// plug-in being (mu*, beta*/alpha*, a*/(a*+b*)). Measures how far the
// mean-field latent expectations sit from the model-conditional ones.
double plugin_expectation_gap(const VariationalState& state, std::span<const double> data,
                              const SeriesControl& ctl = {});

}  // namespace skewfit::vi
