// Apache License, Version 2.0, refer to LICENSE.txt

#include "skewfit/report.hpp"

#include <algorithm>
#include <cmath>

#include "skewfit/errors.hpp"

namespace skewfit {

namespace {

constexpr std::uint64_t kPredictiveStream = 1;
constexpr std::uint64_t kParameterStream = 2;
constexpr std::size_t kVariationalDraws = 4000;
constexpr double kLevel = 0.95;

void add_summary(FitReport& r, const std::string& name, std::span<const double> draws) {
  r.map_estimates.emplace_back(name, analysis::map_estimate(draws));
  r.credible_intervals.push_back({name, analysis::credible_interval(draws, kLevel)});
}

template <class Draw, class F>
std::vector<double> column(const std::vector<Draw>& draws, F f) {
  std::vector<double> out;
  out.reserve(draws.size());
  for (const Draw& d : draws) out.push_back(f(d));
  return out;
}

void add_gsn_summaries(FitReport& r, const std::vector<gsn::Draw>& draws) {
  add_summary(r, "mu", column(draws, [](const gsn::Draw& d) { return d.mu; }));
  add_summary(r, "sigma", column(draws, [](const gsn::Draw& d) { return std::sqrt(d.sigma2); }));
  add_summary(r, "p", column(draws, [](const gsn::Draw& d) { return d.p; }));
}

}  // namespace

std::string to_string(Model m) { return m == Model::ASN ? "ASN" : "GSN"; }

std::string to_string(Method m) {
  switch (m) {
    case Method::MCMC_GeomProp: return "MCMC_GeomProp";
    case Method::MCMC_RandomWalk: return "MCMC_RandomWalk";
    case Method::VI: return "VI";
  }
  return "unknown";
}

double FitReport::map(const std::string& name) const {
  for (const auto& [k, v] : map_estimates) {
    if (k == name) return v;
  }
  throw DataError("report has no MAP estimate named " + name);
}

const analysis::Interval& FitReport::interval(const std::string& name) const {
  for (const auto& ci : credible_intervals) {
    if (ci.name == name) return ci.interval;
  }
  throw DataError("report has no interval named " + name);
}

nlohmann::ordered_json to_json(const FitReport& r) {
  nlohmann::ordered_json j;
  j["model"] = to_string(r.model);
  j["method"] = to_string(r.method);
  j["map_estimates"] = nlohmann::ordered_json::object();
  for (const auto& [k, v] : r.map_estimates) j["map_estimates"][k] = v;
  j["credible_intervals"] = nlohmann::ordered_json::object();
  for (const auto& ci : r.credible_intervals) {
    j["credible_intervals"][ci.name] = {
        {"lo", ci.interval.lo}, {"hi", ci.interval.hi}, {"level", ci.interval.level}};
  }
  j["ksd"] = r.ksd;
  j["data_summary"] = {{"m", r.data_summary.m},
                       {"mean", r.data_summary.mean},
                       {"sd", r.data_summary.sd},
                       {"skewness", r.data_summary.skewness},
                       {"skewness_definition", r.data_summary.skewness_definition},
                       {"skewness_pearson_median", r.data_summary.skewness_pearson_median}};
  j["runtime_ms"] = r.runtime_ms;
  j["seed"] = r.seed;
  j["prior"] = r.prior;
  j["config"] = r.config;
  j["diagnostics"] = r.diagnostics;
  return j;
}

nlohmann::ordered_json to_json(const gsn::PriorSpec& p) {
  return {{"v0", p.v0}, {"n0", p.n0}, {"alpha", p.alpha},
          {"beta", p.beta}, {"a", p.a}, {"b", p.b}};
}

nlohmann::ordered_json to_json(const asn::PriorSpec& p) {
  return {{"xi0", p.xi0},       {"kappa", p.kappa}, {"a", p.a},          {"b", p.b},
          {"alpha0", p.alpha0}, {"psi0", p.psi0},   {"lambda0", p.lambda0}};
}

nlohmann::ordered_json to_json(const ChainConfig& c) {
  return {{"iterations", c.iterations},
          {"burn_in", c.burn_in},
          {"thin", c.thin},
          {"seed", c.seed},
          {"latent_update",
           c.latent_update == LatentUpdate::GeometricProposal ? "geom" : "rw"}};
}

DataSummary summarize_data(std::span<const double> data) {
  const analysis::SampleSummary s = analysis::summarize(data);
  DataSummary d;
  d.m = s.m;
  d.mean = s.mean;
  d.sd = s.sd;
  d.skewness = s.skewness;
  d.skewness_pearson_median = analysis::pearson_median_skewness(data);
  return d;
}

std::size_t predictive_size(std::size_t m) { return std::max<std::size_t>(10 * m, 1000); }

std::vector<double> report_predictive(const gsn::Chain& chain, std::size_t m) {
  Rng rng(mix_seed(chain.config.seed, kPredictiveStream));
  return analysis::posterior_predictive(chain, predictive_size(m), rng);
}

std::vector<double> report_predictive(const asn::Chain& chain, std::size_t m) {
  Rng rng(mix_seed(chain.config.seed, kPredictiveStream));
  return analysis::posterior_predictive(chain, predictive_size(m), rng);
}

std::vector<double> report_predictive(const vi::VariationalState& state, std::size_t m,
                                      std::uint64_t seed) {
  Rng rng(mix_seed(seed, kPredictiveStream));
  return vi::vi_posterior_predictive(state, predictive_size(m), rng);
}

FitReport build_report(const gsn::Chain& chain, std::span<const double> data,
                       const gsn::PriorSpec& prior, std::int64_t runtime_ms) {
  FitReport r;
  r.model = Model::GSN;
  r.method = chain.config.latent_update == LatentUpdate::GeometricProposal
                 ? Method::MCMC_GeomProp
                 : Method::MCMC_RandomWalk;
  add_gsn_summaries(r, chain.draws);
  r.ksd = analysis::ks_distance(data, report_predictive(chain, data.size()));
  r.data_summary = summarize_data(data);
  r.runtime_ms = runtime_ms;
  r.seed = chain.config.seed;
  r.prior = to_json(prior);
  r.config = to_json(chain.config);
  r.diagnostics = {{"acceptance_rate_latent", chain.acceptance_rate},
                   {"retained_draws", chain.draws.size()}};
  return r;
}

FitReport build_report(const asn::Chain& chain, std::span<const double> data,
                       const asn::PriorSpec& prior, std::optional<double> mh_step,
                       std::int64_t runtime_ms) {
  FitReport r;
  r.model = Model::ASN;
  r.method = Method::MCMC_RandomWalk;
  add_summary(r, "xi", column(chain.draws, [](const asn::Draw& d) { return d.xi; }));
  add_summary(r, "omega",
              column(chain.draws, [](const asn::Draw& d) { return std::sqrt(d.omega2); }));
  add_summary(r, "alpha", column(chain.draws, [](const asn::Draw& d) { return d.alpha; }));
  r.ksd = analysis::ks_distance(data, report_predictive(chain, data.size()));
  r.data_summary = summarize_data(data);
  r.runtime_ms = runtime_ms;
  r.seed = chain.config.seed;
  r.prior = to_json(prior);
  r.config = to_json(chain.config);
  r.config.erase("latent_update");
  if (mh_step) {
    r.config["mh_step"] = *mh_step;
  } else {
    r.config["mh_step"] = "adaptive 0.5(1+|alpha|) in [0.1,5]";
  }
  r.diagnostics = {{"acceptance_rate_alpha", chain.acceptance_rate},
                   {"retained_draws", chain.draws.size()}};
  return r;
}

FitReport build_report(const vi::VariationalState& state, std::span<const double> data,
                       const vi::PriorSpec& prior, const vi::CaviOptions& options,
                       std::uint64_t seed, std::int64_t runtime_ms) {
  FitReport r;
  r.model = Model::GSN;
  r.method = Method::VI;
  Rng param_rng(mix_seed(seed, kParameterStream));
  add_gsn_summaries(r, vi::sample_parameters(state, kVariationalDraws, param_rng));
  r.ksd = analysis::ks_distance(data, report_predictive(state, data.size(), seed));
  r.data_summary = summarize_data(data);
  r.runtime_ms = runtime_ms;
  r.seed = seed;
  r.prior = to_json(prior);
  r.config = {{"tol", options.tol}, {"max_iter", options.max_iter}, {"seed", seed}};
  r.diagnostics = {{"converged", state.converged},
                   {"iterations", state.iterations},
                   {"final_elbo", state.elbo_trace.empty() ? 0.0 : state.elbo_trace.back()},
                   {"plugin_expectation_gap", vi::plugin_expectation_gap(state, data)},
                   {"variational_factors",
                    {{"a_star", state.a_star},
                     {"b_star", state.b_star},
                     {"mu_star", state.mu_star},
                     {"n_star", state.n_star},
                     {"alpha_star", state.alpha_star},
                     {"beta_star", state.beta_star}}}};
  return r;
}

}  // namespace skewfit
