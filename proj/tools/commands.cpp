// Apache License, Version 2.0, refer to LICENSE.txt

#include "commands.hpp"

#include <chrono>
#include <cstdio>
#include <future>
#include <ostream>

#include "skewfit/distributions.hpp"
#include "skewfit/errors.hpp"

#ifndef SKEWFIT_DATA_DIR
#define SKEWFIT_DATA_DIR "data"
#endif

namespace skewfit::cli {

namespace fs = std::filesystem;

namespace {

constexpr std::size_t kStudySize = 100;
constexpr const char* kVersion = "0.1.0";

std::string family_name(Family f) {
  switch (f) {
    case Family::Asn: return "asn";
    case Family::Gsn: return "gsn";
    case Family::Lognormal: return "lognormal";
  }
  return "unknown";
}

std::string fmt(double v) { return io::format_double(v); }

struct StudyEntry {
  const char* name;
  std::optional<SimulateSpec> generator;  // unset: bundled file
};

std::vector<StudyEntry> study_entries() {
  SimulateSpec very_small{.family = Family::Asn, .xi = 0, .omega = 1, .alpha = -0.5};
  SimulateSpec small{.family = Family::Asn, .xi = 0, .omega = 1, .alpha = -1};
  SimulateSpec moderate{.family = Family::Gsn, .mu = 1, .sigma = 1, .p = 0.8};
  SimulateSpec large{.family = Family::Asn, .xi = 0, .omega = 1, .alpha = 100};
  SimulateSpec lognormal{.family = Family::Lognormal, .meanlog = 0, .varlog = 0.6,
                         .negate = true};
  SimulateSpec toy{.family = Family::Gsn, .mu = 2, .sigma = 1, .p = 0.6};
  return {{"very_small_skew", very_small}, {"small_skew", small},
          {"moderate_skew", moderate},     {"large_skew", large},
          {"lognormal", lognormal},        {"frontier", std::nullopt},
          {"guinea_pig", std::nullopt},    {"vi_toy", toy}};
}

std::int64_t elapsed_ms(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration_cast<std::chrono::milliseconds>(
             std::chrono::steady_clock::now() - start)
      .count();
}

ChainConfig chain_config(const FitOptions& o) {
  ChainConfig c;
  c.iterations = o.iterations;
  c.burn_in = o.burn_in;
  c.thin = o.thin;
  c.seed = o.seed;
  c.latent_update = o.latent;
  return c;
}

void write_json(const fs::path& path, const nlohmann::ordered_json& j) {
  io::write_atomic(path, j.dump(2) + "\n");
}

std::vector<double> grid_for(const std::vector<double>& a, const std::vector<double>& b,
                             std::size_t points) {
  auto [amin, amax] = std::minmax_element(a.begin(), a.end());
  double lo = *amin, hi = *amax;
  // Trim the predictive to its central 99.8% so a few far draws do not
  // flatten the plotting range.
  lo = std::min(lo, analysis::quantile(b, 0.001));
  hi = std::max(hi, analysis::quantile(b, 0.999));
  const double pad = 0.1 * (hi - lo);
  lo -= pad;
  hi += pad;
  std::vector<double> xs(points);
  for (std::size_t k = 0; k < points; ++k) {
    xs[k] = lo + (hi - lo) * static_cast<double>(k) / static_cast<double>(points - 1);
  }
  return xs;
}

}  // namespace

io::Dataset simulate(const SimulateSpec& spec, std::string name) {
  if (spec.m == 0) throw ConfigError("simulate: m must be positive");
  Rng rng(spec.seed);
  io::Dataset d;
  d.name = std::move(name);
  d.source = io::DataSource::Simulated;
  d.provenance = {{"source", "simulated"}, {"family", family_name(spec.family)}};
  switch (spec.family) {
    case Family::Gsn: {
      const GsnParams theta{spec.mu, spec.sigma, spec.p};
      d.values = gsn_sample(theta, spec.m, rng);
      d.provenance.insert(d.provenance.end(),
                          {{"mu", fmt(spec.mu)}, {"sigma", fmt(spec.sigma)}, {"p", fmt(spec.p)}});
      break;
    }
    case Family::Asn: {
      const AsnParams theta{spec.xi, spec.omega, spec.alpha};
      d.values = asn_sample(theta, spec.m, rng);
      d.provenance.insert(d.provenance.end(), {{"xi", fmt(spec.xi)},
                                               {"omega", fmt(spec.omega)},
                                               {"alpha", fmt(spec.alpha)}});
      break;
    }
    case Family::Lognormal: {
      d.values.reserve(spec.m);
      for (std::size_t i = 0; i < spec.m; ++i) {
        const double v = sample_lognormal(spec.meanlog, spec.varlog, rng);
        d.values.push_back(spec.negate ? -v : v);
      }
      d.provenance.insert(d.provenance.end(), {{"meanlog", fmt(spec.meanlog)},
                                               {"varlog", fmt(spec.varlog)},
                                               {"negate", spec.negate ? "true" : "false"}});
      break;
    }
  }
  d.provenance.insert(d.provenance.end(),
                      {{"m", std::to_string(spec.m)}, {"seed", std::to_string(spec.seed)}});
  return d;
}

FitOutcome run_fit(const std::vector<double>& data, const FitOptions& o) {
  const auto start = std::chrono::steady_clock::now();
  FitOutcome out;
  if (o.model == Model::ASN) {
    if (o.variational) throw ConfigError("variational inference is available for GSN only");
    const asn::Chain chain = asn::run_chain(data, o.priors.asn, chain_config(o), o.mh_step);
    out.report = build_report(chain, data, o.priors.asn, o.mh_step);
    out.draw_header = {"iter", "xi", "omega2", "alpha"};
    for (std::size_t k = 0; k < chain.draws.size(); ++k) {
      const asn::Draw& d = chain.draws[k];
      out.draws.push_back({static_cast<double>(chain.config.iteration_of(k)), d.xi, d.omega2,
                           d.alpha});
    }
    out.predictive = report_predictive(chain, data.size());
  } else if (o.variational) {
    vi::CaviOptions opts;
    opts.tol = o.tol;
    opts.max_iter = o.max_iter;
    const vi::VariationalState state = vi::run_cavi(data, o.priors.gsn, opts);
    out.report = build_report(state, data, o.priors.gsn, opts, o.seed);
    out.draw_header = {"iter", "mu", "sigma2", "p"};
    Rng rng(mix_seed(o.seed, 3));
    const auto draws = vi::sample_parameters(state, 4000, rng);
    for (std::size_t k = 0; k < draws.size(); ++k) {
      out.draws.push_back({static_cast<double>(k + 1), draws[k].mu, draws[k].sigma2, draws[k].p});
    }
    out.predictive = report_predictive(state, data.size(), o.seed);
    out.elbo_trace = state.elbo_trace;
  } else {
    const gsn::Chain chain = gsn::run_chain(data, o.priors.gsn, chain_config(o));
    out.report = build_report(chain, data, o.priors.gsn);
    out.draw_header = {"iter", "mu", "sigma2", "p"};
    for (std::size_t k = 0; k < chain.draws.size(); ++k) {
      const gsn::Draw& d = chain.draws[k];
      out.draws.push_back({static_cast<double>(chain.config.iteration_of(k)), d.mu, d.sigma2,
                           d.p});
    }
    out.predictive = report_predictive(chain, data.size());
  }
  out.report.runtime_ms = o.record_runtime ? elapsed_ms(start) : 0;
  return out;
}

int cmd_simulate(const SimulateSpec& spec, const fs::path& out) {
  io::write_atomic(out, io::format_dataset(simulate(spec, out.stem().string())));
  return kOk;
}

int cmd_fit(FitOptions options, const FitPaths& paths) {
  const io::Dataset data = io::read_dataset(paths.data);
  if (paths.priors) options.priors = io::read_prior_config(*paths.priors);
  const FitOutcome outcome = run_fit(data.values, options);
  nlohmann::ordered_json j = to_json(outcome.report);
  j["dataset"] = data.name;
  write_json(paths.out, j);
  if (paths.emit_draws) {
    io::write_atomic(*paths.emit_draws, io::format_csv(outcome.draw_header, outcome.draws));
  }
  if (paths.emit_predictive) {
    std::vector<std::vector<double>> rows;
    for (double v : outcome.predictive) rows.push_back({v});
    io::write_atomic(*paths.emit_predictive, io::format_csv({"x"}, rows));
  }
  if (paths.emit_elbo) {
    if (!options.variational) throw ConfigError("--emit-elbo requires --method vi");
    std::vector<std::vector<double>> rows;
    for (std::size_t t = 0; t < outcome.elbo_trace.size(); ++t) {
      rows.push_back({static_cast<double>(t), outcome.elbo_trace[t]});
    }
    io::write_atomic(*paths.emit_elbo, io::format_csv({"iter", "elbo"}, rows));
  }
  return kOk;
}

Comparison compare(const io::Dataset& data, const FitOptions& options) {
  Comparison c;
  c.dataset = data.name;
  FitOptions vi_opts = options;
  vi_opts.model = Model::GSN;
  vi_opts.variational = true;
  FitOptions mcmc_opts = options;
  mcmc_opts.model = Model::GSN;
  mcmc_opts.variational = false;
  FitOptions asn_opts = options;
  asn_opts.model = Model::ASN;
  asn_opts.variational = false;
  c.gsn_vi = run_fit(data.values, vi_opts);
  c.gsn_mcmc = run_fit(data.values, mcmc_opts);
  c.asn = run_fit(data.values, asn_opts);
  return c;
}

nlohmann::ordered_json to_json(const Comparison& c) {
  nlohmann::ordered_json j;
  j["dataset"] = c.dataset;
  const nlohmann::ordered_json mcmc = to_json(c.gsn_mcmc.report);
  j["data_summary"] = mcmc["data_summary"];
  j["ksd"] = {{"gsn_vi", c.gsn_vi.report.ksd},
              {"gsn_mcmc", c.gsn_mcmc.report.ksd},
              {"asn", c.asn.report.ksd}};
  j["map_estimates"] = {{"gsn_vi", to_json(c.gsn_vi.report)["map_estimates"]},
                        {"gsn_mcmc", mcmc["map_estimates"]},
                        {"asn", to_json(c.asn.report)["map_estimates"]}};
  j["reports"] = {{"gsn_vi", to_json(c.gsn_vi.report)},
                  {"gsn_mcmc", mcmc},
                  {"asn", to_json(c.asn.report)}};
  return j;
}

std::string format_table(const std::vector<Comparison>& rows) {
  std::string out;
  char line[256];
  std::snprintf(line, sizeof line, "%-18s %10s %10s %10s\n", "Data Set", "GSN-VI", "GSN-MCMC",
                "ASN");
  out += line;
  for (const Comparison& c : rows) {
    std::snprintf(line, sizeof line, "%-18s %10.3f %10.3f %10.3f\n", c.dataset.c_str(),
                  c.gsn_vi.report.ksd, c.gsn_mcmc.report.ksd, c.asn.report.ksd);
    out += line;
  }
  out += "\nMAP estimates\n";
  for (const Comparison& c : rows) {
    const auto& g = c.gsn_mcmc.report;
    const auto& a = c.asn.report;
    std::snprintf(line, sizeof line,
                  "%-18s GSN (mu %.3f, sigma %.3f, p %.3f)  ASN (xi %.3f, omega %.3f, alpha %.3f)\n",
                  c.dataset.c_str(), g.map("mu"), g.map("sigma"), g.map("p"), a.map("xi"),
                  a.map("omega"), a.map("alpha"));
    out += line;
  }
  return out;
}

int cmd_compare(FitOptions options, const fs::path& data_path,
                const std::optional<fs::path>& priors, const fs::path& out,
                std::ostream& table_out) {
  const io::Dataset data = io::read_dataset(data_path);
  if (priors) options.priors = io::read_prior_config(*priors);
  const Comparison c = compare(data, options);
  write_json(out, to_json(c));
  const std::string table = format_table({c});
  fs::path txt = out;
  txt.replace_extension(".txt");
  io::write_atomic(txt, table);
  table_out << table;
  return kOk;
}

std::vector<std::string> study_dataset_names() {
  std::vector<std::string> names;
  for (const StudyEntry& e : study_entries()) names.emplace_back(e.name);
  return names;
}

io::Dataset study_dataset(const std::string& name, std::uint64_t seed, const fs::path& data_dir) {
  const auto entries = study_entries();
  for (std::size_t k = 0; k < entries.size(); ++k) {
    if (name != entries[k].name) continue;
    if (entries[k].generator) {
      SimulateSpec spec = *entries[k].generator;
      spec.m = kStudySize;
      spec.seed = mix_seed(seed, 100 + k);
      return simulate(spec, name);
    }
    const fs::path path = data_dir / (name + ".csv");
    if (!fs::exists(path)) {
      throw DataError("dataset '" + name + "' not found at " + path.string() +
                      "; pass --data-dir pointing at the repository's data/ directory");
    }
    io::Dataset d = io::read_dataset(path);
    d.name = name;
    return d;
  }
  throw ConfigError("unknown study dataset '" + name + "'");
}

fs::path default_data_dir() { return fs::path(SKEWFIT_DATA_DIR); }

int cmd_reproduce(const std::string& study, FitOptions options, const fs::path& data_dir,
                  const fs::path& out_dir, std::ostream& log) {
  std::vector<std::string> names;
  if (study == "table1") names = {"very_small_skew"};
  else if (study == "table2") names = {"small_skew"};
  else if (study == "table3") names = {"moderate_skew"};
  else if (study == "table4") names = {"large_skew"};
  else if (study == "table5" || study == "figures") {
    names = {"very_small_skew", "small_skew", "moderate_skew", "large_skew",
             "lognormal",       "frontier",   "guinea_pig"};
  } else {
    throw ConfigError("unknown study '" + study + "' (table1..table5, figures)");
  }

  std::vector<io::Dataset> datasets;
  for (const std::string& n : names) datasets.push_back(study_dataset(n, options.seed, data_dir));

  // Fits are independent; each carries its own seed so the results do not
  // depend on scheduling.
  std::vector<std::future<Comparison>> jobs;
  for (const io::Dataset& d : datasets) {
    FitOptions o = options;
    o.seed = mix_seed(options.seed, std::hash<std::string>{}(d.name) & 0xffff);
    jobs.push_back(std::async(std::launch::async, [d, o] { return compare(d, o); }));
  }
  std::vector<Comparison> results;
  for (auto& j : jobs) results.push_back(j.get());

  nlohmann::ordered_json manifest;
  manifest["tool"] = "skewfit";
  manifest["version"] = kVersion;
  manifest["study"] = study;
  manifest["seed"] = options.seed;
  manifest["config"] = {{"iterations", options.iterations},
                        {"burn_in", options.burn_in},
                        {"thin", options.thin},
                        {"tol", options.tol},
                        {"max_iter", options.max_iter}};
  manifest["datasets"] = nlohmann::ordered_json::array();
  manifest["files"] = nlohmann::ordered_json::array();

  for (std::size_t k = 0; k < datasets.size(); ++k) {
    const std::string file = "data_" + datasets[k].name + ".csv";
    io::write_atomic(out_dir / file, io::format_dataset(datasets[k]));
    manifest["files"].push_back(file);
    manifest["datasets"].push_back(
        {{"name", datasets[k].name},
         {"source", datasets[k].source == io::DataSource::Simulated ? "simulated" : "file"},
         {"fit_seed", results[k].gsn_mcmc.report.seed}});
  }

  if (study != "figures") {
    nlohmann::ordered_json j;
    j["study"] = study;
    j["comparisons"] = nlohmann::ordered_json::array();
    for (const Comparison& c : results) j["comparisons"].push_back(to_json(c));
    write_json(out_dir / (study + ".json"), j);
    const std::string table = format_table(results);
    io::write_atomic(out_dir / (study + ".txt"), table);
    manifest["files"].push_back(study + ".json");
    manifest["files"].push_back(study + ".txt");
    log << table;
  } else {
    for (std::size_t k = 0; k < results.size(); ++k) {
      const Comparison& c = results[k];
      const std::vector<double>& data = datasets[k].values;
      const auto xs = grid_for(data, c.gsn_mcmc.predictive, 512);
      const auto f_data = analysis::kde_evaluate(data, xs);
      const auto f_asn = analysis::kde_evaluate(c.asn.predictive, xs);
      const auto f_gsn = analysis::kde_evaluate(c.gsn_mcmc.predictive, xs);
      std::vector<std::vector<double>> rows;
      for (std::size_t i = 0; i < xs.size(); ++i) rows.push_back({xs[i], f_data[i], f_asn[i], f_gsn[i]});
      const std::string file = "fig" + std::to_string(k + 1) + "_" + c.dataset + ".csv";
      io::write_atomic(out_dir / file,
                       io::format_csv({"x", "data_density", "asn_density", "gsn_density"}, rows));
      manifest["files"].push_back(file);
      log << "wrote " << file << "\n";
    }
    // Variational fit of the GSN(2, 1, 0.6) toy data and its ELBO trace.
    const io::Dataset toy = study_dataset("vi_toy", options.seed, data_dir);
    FitOptions o = options;
    o.variational = true;
    o.model = Model::GSN;
    const FitOutcome vi_fit = run_fit(toy.values, o);
    const auto xs = grid_for(toy.values, vi_fit.predictive, 512);
    const auto f_data = analysis::kde_evaluate(toy.values, xs);
    const auto f_vi = analysis::kde_evaluate(vi_fit.predictive, xs);
    std::vector<std::vector<double>> rows;
    for (std::size_t i = 0; i < xs.size(); ++i) rows.push_back({xs[i], f_data[i], f_vi[i]});
    io::write_atomic(out_dir / "fig8_vi_fit.csv",
                     io::format_csv({"x", "data_density", "vi_density"}, rows));
    std::vector<std::vector<double>> elbo;
    for (std::size_t t = 0; t < vi_fit.elbo_trace.size(); ++t) {
      elbo.push_back({static_cast<double>(t), vi_fit.elbo_trace[t]});
    }
    io::write_atomic(out_dir / "fig8_elbo.csv", io::format_csv({"iter", "elbo"}, elbo));
    io::write_atomic(out_dir / "data_vi_toy.csv", io::format_dataset(toy));
    manifest["files"].push_back("fig8_vi_fit.csv");
    manifest["files"].push_back("fig8_elbo.csv");
    manifest["files"].push_back("data_vi_toy.csv");
    log << "wrote fig8_vi_fit.csv, fig8_elbo.csv\n";
  }
  write_json(out_dir / "manifest.json", manifest);
  return kOk;
}

}  // namespace skewfit::cli
