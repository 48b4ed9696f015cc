// Apache License, Version 2.0, refer to LICENSE.txt

#include "skewfit/asn_gibbs.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "skewfit/errors.hpp"
#include "skewfit/specfun.hpp"

namespace skewfit::asn {

namespace {

constexpr double kMinOmega2 = 1e-300;

double one_minus_delta2(double alpha) { return 1.0 / (1.0 + alpha * alpha); }

}  // namespace

void PriorSpec::validate() const {
  if (!(kappa > 0.0 && a > 0.0 && b > 0.0 && psi0 > 0.0)) {
    throw ConfigError("ASN prior: kappa, a, b, psi0 must be positive");
  }
  if (!std::isfinite(xi0) || !std::isfinite(alpha0) || !std::isfinite(lambda0)) {
    throw ConfigError("ASN prior: xi0, alpha0, lambda0 must be finite");
  }
}

void State::validate() const {
  if (!(omega2 > 0.0)) throw DomainError("ASN state: omega2 must be positive");
  for (double e : eta) {
    if (!(e >= 0.0)) throw DomainError("ASN state: eta must be nonnegative");
  }
}

void update_eta(State& state, std::span<const double> data, Rng& rng) {
  const double delta = state.delta();
  const double var = state.omega2 * one_minus_delta2(state.alpha);
  state.eta.resize(data.size());
  for (std::size_t i = 0; i < data.size(); ++i) {
    state.eta[i] = sample_truncated_normal_below(0.0, delta * (data[i] - state.xi), var, rng);
  }
}

XiConditional xi_conditional(const State& state, std::span<const double> data,
                             const PriorSpec& prior) {
  const double delta = state.delta();
  const double c = one_minus_delta2(state.alpha);
  const double n = static_cast<double>(data.size());
  double s = 0.0;
  for (std::size_t i = 0; i < data.size(); ++i) s += data[i] - delta * state.eta[i];
  const double denom = n * prior.kappa + c;
  return {(prior.kappa * s + c * prior.xi0) / denom, prior.kappa * c / denom};
}

Omega2Conditional omega2_conditional(const State& state, std::span<const double> data,
                                     const PriorSpec& prior) {
  const double delta = state.delta();
  const double c = one_minus_delta2(state.alpha);
  double resid = 0.0;
  double eta_ss = 0.0;
  for (std::size_t i = 0; i < data.size(); ++i) {
    const double r = data[i] - state.xi - delta * state.eta[i];
    resid += r * r;
    eta_ss += state.eta[i] * state.eta[i];
  }
  const double d = state.xi - prior.xi0;
  const double n = static_cast<double>(data.size());
  return {prior.a + n + 0.5,
          prior.b + 0.5 * (resid / c + eta_ss + d * d / prior.kappa)};
}

void update_xi_omega(State& state, std::span<const double> data, const PriorSpec& prior,
                     Rng& rng) {
  const XiConditional xc = xi_conditional(state, data, prior);
  state.xi = rng.normal(xc.mean, std::sqrt(xc.scale * state.omega2));
  const Omega2Conditional oc = omega2_conditional(state, data, prior);
  const double omega2 = sample_inverse_gamma(oc.shape, oc.rate, rng);
  if (!(omega2 >= kMinOmega2) || !std::isfinite(omega2)) {
    throw NumericalError("ASN sampler: omega2 degenerated");
  }
  state.omega2 = omega2;
}

double alpha_conditional_logdensity(double alpha, std::span<const double> y_star,
                                    const PriorSpec& prior) {
  const AsnParams alpha_prior{prior.alpha0, prior.psi0, prior.lambda0};
  double lp = asn_logpdf(alpha, alpha_prior);
  for (double y : y_star) lp += specfun::std_normal_logcdf(alpha * y);
  return lp;
}

double default_alpha_step(double alpha) {
  return std::clamp(0.5 * (1.0 + std::fabs(alpha)), 0.1, 5.0);
}

bool update_alpha(State& state, std::span<const double> data, const PriorSpec& prior,
                  std::optional<double> step, Rng& rng) {
  const double omega = std::sqrt(state.omega2);
  std::vector<double> y_star(data.size());
  std::transform(data.begin(), data.end(), y_star.begin(),
                 [&](double y) { return (y - state.xi) / omega; });

  const double current = state.alpha;
  const double sd_fwd = step ? *step : default_alpha_step(current);
  const double proposed = rng.normal(current, sd_fwd);

  double log_r = alpha_conditional_logdensity(proposed, y_star, prior) -
                 alpha_conditional_logdensity(current, y_star, prior);
  if (!step) {
    const double sd_back = default_alpha_step(proposed);
    log_r += normal_logpdf(current, proposed, sd_back * sd_back) -
             normal_logpdf(proposed, current, sd_fwd * sd_fwd);
  }
  if (log_r >= 0.0 || std::log(rng.uniform()) < log_r) {
    state.alpha = proposed;
    return true;
  }
  return false;
}

State initial_state(std::span<const double> data) {
  const std::size_t n = data.size();
  std::vector<double> sorted(data.begin(), data.end());
  std::sort(sorted.begin(), sorted.end());
  const double median = n % 2 ? sorted[n / 2] : 0.5 * (sorted[n / 2 - 1] + sorted[n / 2]);
  const double mean = std::accumulate(data.begin(), data.end(), 0.0) / static_cast<double>(n);
  double m2 = 0.0, m3 = 0.0;
  for (double y : data) {
    const double d = y - mean;
    m2 += d * d;
    m3 += d * d * d;
  }
  State s;
  s.xi = median;
  s.omega2 = std::max(m2 / static_cast<double>(n - 1), 1e-8);
  s.alpha = m3 > 0.0 ? 1.0 : (m3 < 0.0 ? -1.0 : 0.0);
  const double delta = s.delta();
  s.eta.resize(n);
  for (std::size_t i = 0; i < n; ++i) s.eta[i] = std::fabs(data[i] - median) * std::fabs(delta);
  return s;
}

bool sweep(State& state, std::span<const double> data, const PriorSpec& prior,
           std::optional<double> step, Rng& rng) {
  update_eta(state, data, rng);
  update_xi_omega(state, data, prior, rng);
  return update_alpha(state, data, prior, step, rng);
}

Chain run_chain(std::span<const double> data, const PriorSpec& prior,
                const ChainConfig& config, std::optional<double> step) {
  config.validate();
  prior.validate();
  if (data.size() < 2) throw ConfigError("ASN sampler needs at least two observations");
  if (step && !(*step > 0.0)) throw ConfigError("ASN sampler: MH step must be positive");
  for (double y : data) {
    if (!std::isfinite(y)) throw DataError("ASN sampler: data must be finite");
  }

  Rng rng(config.seed);
  State state = initial_state(data);
  Chain chain;
  chain.config = config;
  chain.draws.reserve((config.iterations - config.burn_in) / config.thin);
  std::size_t accepted = 0;
  for (std::size_t t = 1; t <= config.iterations; ++t) {
    accepted += sweep(state, data, prior, step, rng) ? 1 : 0;
    if (t > config.burn_in && (t - config.burn_in) % config.thin == 0) {
      chain.draws.push_back({state.xi, state.omega2, state.alpha});
    }
  }
  chain.acceptance_rate =
      static_cast<double>(accepted) / static_cast<double>(config.iterations);
  return chain;
}

}  // namespace skewfit::asn
