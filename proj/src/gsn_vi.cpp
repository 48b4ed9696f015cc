// Apache License, Version 2.0, refer to LICENSE.txt

#include "skewfit/gsn_vi.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "skewfit/errors.hpp"
#include "skewfit/specfun.hpp"

namespace skewfit::vi {

using specfun::digamma;
using specfun::kLogSqrt2Pi;
using specfun::log_gamma;

double LatentExpectations::sum_n() const {
  return std::accumulate(mean_n.begin(), mean_n.end(), 0.0);
}

void VariationalState::validate() const {
  if (!(a_star > 0 && b_star > 0 && n_star > 0 && alpha_star > 0 && beta_star > 0)) {
    throw DomainError("variational state: factor parameters must be positive");
  }
}

LatentCoefficients latent_coefficients(const VariationalState& s) {
  const double e_inv_s2 = s.alpha_star / s.beta_star;
  const double A = digamma(s.b_star) - digamma(s.a_star + s.b_star) - 0.5 / s.n_star -
                   0.5 * s.mu_star * s.mu_star * e_inv_s2;
  return {A, -0.5 * e_inv_s2};
}

std::vector<double> latent_weights(double x, const LatentCoefficients& c,
                                   const LatentTruncation& trunc) {
  const double A = c.A;
  const double bx2 = c.B * x * x;  // <= 0
  auto log_w = [&](std::size_t n) {
    const double nd = static_cast<double>(n);
    return -0.5 * std::log(nd) + A * nd + bx2 / nd;
  };
  // Past n >= 2|B x^2| the log weight falls by at least |A| per step, so the
  // tail beyond n is at most w(n) e^A / (1 - e^A).
  const double tail_factor = A - std::log(-std::expm1(A));
  const double log_rel = std::log(trunc.relative_tail);
  const double settle = 2.0 * std::fabs(bx2);

  std::vector<double> lw;
  double max_lw = -std::numeric_limits<double>::infinity();
  for (std::size_t n = 1; n <= trunc.k_max; ++n) {
    const double v = log_w(n);
    lw.push_back(v);
    max_lw = std::max(max_lw, v);
    const bool falling = n > 1 && v < lw[n - 2];
    if (falling && static_cast<double>(n) >= settle && v + tail_factor < max_lw + log_rel) {
      break;
    }
  }
  if (!std::isfinite(max_lw)) {
    throw NumericalError("q(N): all latent weights underflowed");
  }
  double total = 0.0;
  for (double& v : lw) {
    v = std::exp(v - max_lw);
    total += v;
  }
  for (double& v : lw) v /= total;
  return lw;
}

const LatentExpectations& update_q_latent(VariationalState& state,
                                          std::span<const double> data,
                                          const LatentTruncation& trunc) {
  const LatentCoefficients c = latent_coefficients(state);
  const std::size_t m = data.size();
  state.latent_weights.resize(m);
  LatentExpectations& e = state.expectations;
  e.mean_n.assign(m, 0.0);
  e.mean_inv_n.assign(m, 0.0);
  e.mean_log_n.assign(m, 0.0);
  e.entropy.assign(m, 0.0);
  for (std::size_t i = 0; i < m; ++i) {
    std::vector<double>& w = state.latent_weights[i];
    w = latent_weights(data[i], c, trunc);
    for (std::size_t k = 0; k < w.size(); ++k) {
      const double n = static_cast<double>(k + 1);
      const double ln = std::log(n);
      e.mean_n[i] += w[k] * n;
      e.mean_inv_n[i] += w[k] / n;
      e.mean_log_n[i] += w[k] * ln;
      if (w[k] > 0.0) e.entropy[i] -= w[k] * std::log(w[k]);
    }
  }
  return e;
}

BetaFactor update_q_p(std::span<const double> mean_n, const PriorSpec& prior) {
  const double m = static_cast<double>(mean_n.size());
  const double total = std::accumulate(mean_n.begin(), mean_n.end(), 0.0);
  return {m + prior.a, total - m + prior.b};
}

NigFactor update_q_mu_sigma(std::span<const double> mean_n, std::span<const double> mean_inv_n,
                            std::span<const double> data, const PriorSpec& prior) {
  const double sum_n = std::accumulate(mean_n.begin(), mean_n.end(), 0.0);
  const double sum_x = std::accumulate(data.begin(), data.end(), 0.0);
  const double n_star = prior.n0 + sum_n;
  const double mu_star = (sum_x + prior.n0 * prior.v0) / n_star;
  // E_N[sum (1/n_i)(x_i - n_i mu*)^2] = sum x_i^2 E[1/n_i] + mu*^2 E[n_i] - 2 x_i mu*
  double ss = prior.n0 * (mu_star - prior.v0) * (mu_star - prior.v0);
  for (std::size_t i = 0; i < data.size(); ++i) {
    ss += data[i] * data[i] * mean_inv_n[i] + mu_star * mu_star * mean_n[i] -
          2.0 * data[i] * mu_star;
  }
  const double m = static_cast<double>(data.size());
  return {mu_star, n_star, prior.alpha + 0.5 * m, prior.beta + 0.5 * ss};
}

double compute_elbo(const VariationalState& s, std::span<const double> data,
                    const PriorSpec& prior) {
  const LatentExpectations& e = s.expectations;
  const double e_log_s2 = std::log(s.beta_star) - digamma(s.alpha_star);
  const double e_inv_s2 = s.alpha_star / s.beta_star;
  const double psi_ab = digamma(s.a_star + s.b_star);
  const double e_log_p = digamma(s.a_star) - psi_ab;
  const double e_log_1mp = digamma(s.b_star) - psi_ab;

  double elbo = 0.0;
  for (std::size_t i = 0; i < data.size(); ++i) {
    const double x = data[i];
    // E[ln N(x_i; N_i mu, N_i sigma2)]
    elbo += -kLogSqrt2Pi - 0.5 * e.mean_log_n[i] - 0.5 * e_log_s2 -
            0.5 * e_inv_s2 *
                (x * x * e.mean_inv_n[i] - 2.0 * x * s.mu_star +
                 s.mu_star * s.mu_star * e.mean_n[i]) -
            0.5 * e.mean_n[i] / s.n_star;
    // E[ln Geometric(N_i; p)]
    elbo += e_log_p + (e.mean_n[i] - 1.0) * e_log_1mp;
    elbo += e.entropy[i];
  }
  // E[ln Beta(p; a, b)]
  elbo += -specfun::log_beta(prior.a, prior.b) + (prior.a - 1.0) * e_log_p +
          (prior.b - 1.0) * e_log_1mp;
  // E[ln NIG(mu, sigma2; v0, n0, alpha, beta)]
  const double dv = s.mu_star - prior.v0;
  elbo += -kLogSqrt2Pi + 0.5 * std::log(prior.n0) - 0.5 * e_log_s2 -
          0.5 * prior.n0 * (e_inv_s2 * dv * dv + 1.0 / s.n_star) +
          prior.alpha * std::log(prior.beta) - log_gamma(prior.alpha) -
          (prior.alpha + 1.0) * e_log_s2 - prior.beta * e_inv_s2;
  // Entropy of Beta(a*, b*)
  elbo += specfun::log_beta(s.a_star, s.b_star) - (s.a_star - 1.0) * digamma(s.a_star) -
          (s.b_star - 1.0) * digamma(s.b_star) + (s.a_star + s.b_star - 2.0) * psi_ab;
  // Entropy of NIG(mu*, n*, alpha*, beta*)
  elbo += 0.5 + kLogSqrt2Pi - 0.5 * std::log(s.n_star) + 0.5 * e_log_s2 + s.alpha_star +
          std::log(s.beta_star) + log_gamma(s.alpha_star) -
          (1.0 + s.alpha_star) * digamma(s.alpha_star);
  return elbo;
}

VariationalState initial_state(std::span<const double> data, const PriorSpec& prior) {
  const double m = static_cast<double>(data.size());
  const double mean = std::accumulate(data.begin(), data.end(), 0.0) / m;
  double var = 0.0;
  for (double x : data) var += (x - mean) * (x - mean);
  var = std::max(var / (m - 1.0), 1e-8);
  VariationalState s;
  s.a_star = prior.a + m;
  s.b_star = prior.b + m;
  s.mu_star = 0.5 * mean;
  s.n_star = prior.n0 + m;
  s.alpha_star = prior.alpha + 1.0 + 0.5 * m;
  s.beta_star = s.alpha_star * var;
  return s;
}

namespace {

double rel_change(double before, double after) {
  return std::fabs(after - before) / std::max(1.0, std::fabs(before));
}

}  // namespace

double cavi_sweep(VariationalState& state, std::span<const double> data,
                  const PriorSpec& prior, const LatentTruncation& trunc) {
  const VariationalState before = state;
  update_q_latent(state, data, trunc);
  const BetaFactor bf = update_q_p(state.expectations.mean_n, prior);
  const NigFactor nf = update_q_mu_sigma(state.expectations.mean_n,
                                         state.expectations.mean_inv_n, data, prior);
  state.a_star = bf.a_star;
  state.b_star = bf.b_star;
  state.mu_star = nf.mu_star;
  state.n_star = nf.n_star;
  state.alpha_star = nf.alpha_star;
  state.beta_star = nf.beta_star;
  state.elbo_trace.push_back(compute_elbo(state, data, prior));
  ++state.iterations;
  return std::max({rel_change(before.a_star, state.a_star),
                   rel_change(before.b_star, state.b_star),
                   rel_change(before.mu_star, state.mu_star),
                   rel_change(before.n_star, state.n_star),
                   rel_change(before.alpha_star, state.alpha_star),
                   rel_change(before.beta_star, state.beta_star)});
}

VariationalState run_cavi(std::span<const double> data, const PriorSpec& prior,
                          const CaviOptions& options) {
  prior.validate();
  if (data.size() < 2) throw ConfigError("CAVI needs at least two observations");
  if (!(options.tol > 0.0)) throw ConfigError("CAVI tolerance must be positive");
  if (options.max_iter == 0) throw ConfigError("CAVI max_iter must be positive");
  for (double x : data) {
    if (!std::isfinite(x)) throw DataError("CAVI: data must be finite");
  }

  VariationalState state = initial_state(data, prior);
  update_q_latent(state, data, options.truncation);
  state.elbo_trace.push_back(compute_elbo(state, data, prior));

  while (state.iterations < options.max_iter) {
    const double change = cavi_sweep(state, data, prior, options.truncation);
    const std::size_t t = state.elbo_trace.size();
    const double delta = std::fabs(state.elbo_trace[t - 1] - state.elbo_trace[t - 2]);
    if (delta < options.tol && (options.param_tol <= 0.0 || change < options.param_tol)) {
      state.converged = true;
      break;
    }
  }
  return state;
}

std::vector<gsn::Draw> sample_parameters(const VariationalState& state, std::size_t n_draws,
                                         Rng& rng) {
  std::vector<gsn::Draw> out;
  out.reserve(n_draws);
  for (std::size_t i = 0; i < n_draws; ++i) {
    const MeanVariance ms = sample_normal_inverse_gamma(state.mu_star, state.n_star,
                                                        state.alpha_star, state.beta_star, rng);
    const double p = std::clamp(sample_beta(state.a_star, state.b_star, rng), 1e-300, 1.0);
    out.push_back({ms.mu, ms.sigma2, p});
  }
  return out;
}

std::vector<double> vi_posterior_predictive(const VariationalState& state,
                                            std::size_t n_draws, Rng& rng) {
  std::vector<double> out;
  out.reserve(n_draws);
  for (std::size_t i = 0; i < n_draws; ++i) {
    const MeanVariance ms = sample_normal_inverse_gamma(state.mu_star, state.n_star,
                                                        state.alpha_star, state.beta_star, rng);
    const double p = std::clamp(sample_beta(state.a_star, state.b_star, rng), 1e-300, 1.0);
    out.push_back(gsn_draw({ms.mu, std::sqrt(ms.sigma2), p}, rng).x);
  }
  return out;
}

double plugin_expectation_gap(const VariationalState& state, std::span<const double> data,
                              const SeriesControl& ctl) {
  const GsnParams plugin{state.mu_star, std::sqrt(state.beta_star / state.alpha_star),
                         state.a_star / (state.a_star + state.b_star)};
  double gap = 0.0;
  for (std::size_t i = 0; i < data.size(); ++i) {
    const double model = gsn_expect_N(data[i], plugin, ctl);
    gap = std::max(gap, std::fabs(model - state.expectations.mean_n[i]));
  }
  return gap;
}

}  // namespace skewfit::vi
