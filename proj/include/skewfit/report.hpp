// Apache License, Version 2.0, refer to LICENSE.txt
//
// FitReport: everything a fit produces that is worth keeping, with a stable
// snake_case JSON form.

#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "skewfit/analysis.hpp"
#include "skewfit/asn_gibbs.hpp"
#include "skewfit/gsn_mcmc.hpp"
#include "skewfit/gsn_vi.hpp"

namespace skewfit {

enum class Model { ASN, GSN };
enum class Method { MCMC_GeomProp, MCMC_RandomWalk, VI };

std::string to_string(Model m);
std::string to_string(Method m);

struct NamedInterval {
  std::string name;
  analysis::Interval interval;
};

struct DataSummary {
  std::size_t m = 0;
  double mean = 0.0;
  double sd = 0.0;
  double skewness = 0.0;
  std::string skewness_definition = "moment_g1";
  double skewness_pearson_median = 0.0;
};

struct FitReport {
  Model model = Model::GSN;
  Method method = Method::MCMC_RandomWalk;
  std::vector<std::pair<std::string, double>> map_estimates;
  std::vector<NamedInterval> credible_intervals;
  double ksd = 0.0;
  DataSummary data_summary;
  std::int64_t runtime_ms = 0;
  std::uint64_t seed = 0;
  nlohmann::ordered_json prior;
  nlohmann::ordered_json config;
  nlohmann::ordered_json diagnostics;

  double map(const std::string& name) const;
  const analysis::Interval& interval(const std::string& name) const;
};

nlohmann::ordered_json to_json(const FitReport& r);
nlohmann::ordered_json to_json(const gsn::PriorSpec& p);
nlohmann::ordered_json to_json(const asn::PriorSpec& p);
nlohmann::ordered_json to_json(const ChainConfig& c);

DataSummary summarize_data(std::span<const double> data);

// Posterior predictive sample size used for the KSD: max(10 m, 1000).
std::size_t predictive_size(std::size_t m);

// Predictive draws and KSD use a child stream of the chain seed, so a report
// is a pure function of (data, prior, config).
FitReport build_report(const gsn::Chain& chain, std::span<const double> data,
                       const gsn::PriorSpec& prior, std::int64_t runtime_ms = 0);
FitReport build_report(const asn::Chain& chain, std::span<const double> data,
                       const asn::PriorSpec& prior, std::optional<double> mh_step,
                       std::int64_t runtime_ms = 0);
FitReport build_report(const vi::VariationalState& state, std::span<const double> data,
                       const vi::PriorSpec& prior, const vi::CaviOptions& options,
                       std::uint64_t seed, std::int64_t runtime_ms = 0);

// Posterior predictive sample matching the one scored in build_report.
std::vector<double> report_predictive(const gsn::Chain& chain, std::size_t m);
std::vector<double> report_predictive(const asn::Chain& chain, std::size_t m);
std::vector<double> report_predictive(const vi::VariationalState& state, std::size_t m,
                                      std::uint64_t seed);

}  // namespace skewfit
