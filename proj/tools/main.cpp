// Apache License, Version 2.0, refer to LICENSE.txt

#include <CLI11.hpp>

#include <filesystem>
#include <iostream>
#include <map>

#include "commands.hpp"
#include "skewfit/errors.hpp"

namespace fs = std::filesystem;
using namespace skewfit;
using namespace skewfit::cli;

namespace {

struct SharedFlags {
  std::string model = "gsn";
  std::string method = "mcmc";
  std::string latent = "rw";
  std::size_t iters = 20000;
  std::size_t burnin = 5000;
  std::size_t thin = 5;
  double tol = 1e-6;
  std::size_t max_iter = 500;
  double mh_step = 0.0;
  std::uint64_t seed = 1;
  std::string priors;
  bool no_runtime = false;
};

void add_fit_flags(CLI::App* cmd, SharedFlags& f, bool with_model) {
  if (with_model) {
    cmd->add_option("--model", f.model, "Model family")
        ->check(CLI::IsMember({"asn", "gsn"}))
        ->capture_default_str();
    cmd->add_option("--method", f.method, "Inference method (vi is GSN only)")
        ->check(CLI::IsMember({"mcmc", "vi"}))
        ->capture_default_str();
  }
  cmd->add_option("--latent", f.latent, "GSN latent-count update: geometric proposal or random walk")
      ->check(CLI::IsMember({"geom", "rw"}))
      ->capture_default_str();
  cmd->add_option("--iters", f.iters, "MCMC iterations")->capture_default_str();
  cmd->add_option("--burnin", f.burnin, "Burn-in iterations")->capture_default_str();
  cmd->add_option("--thin", f.thin, "Thinning interval")->capture_default_str();
  cmd->add_option("--tol", f.tol, "CAVI ELBO tolerance")->capture_default_str();
  cmd->add_option("--max-iter", f.max_iter, "CAVI iteration cap")->capture_default_str();
  cmd->add_option("--mh-step", f.mh_step, "Fixed ASN alpha proposal sd (default: adaptive)");
  cmd->add_option("--seed", f.seed, "RNG seed")->capture_default_str();
  cmd->add_option("--priors", f.priors, "Prior configuration file")->check(CLI::ExistingFile);
  cmd->add_flag("--no-runtime", f.no_runtime, "Record runtime_ms as 0");
}

FitOptions to_options(const SharedFlags& f) {
  FitOptions o;
  o.model = f.model == "asn" ? Model::ASN : Model::GSN;
  o.variational = f.method == "vi";
  o.latent = f.latent == "geom" ? LatentUpdate::GeometricProposal : LatentUpdate::RandomWalk;
  o.iterations = f.iters;
  o.burn_in = f.burnin;
  o.thin = f.thin;
  o.tol = f.tol;
  o.max_iter = f.max_iter;
  if (f.mh_step > 0.0) o.mh_step = f.mh_step;
  o.seed = f.seed;
  o.record_runtime = !f.no_runtime;
  if (!f.priors.empty()) o.priors = io::read_prior_config(f.priors);
  return o;
}

std::optional<fs::path> opt_path(const std::string& s) {
  if (s.empty()) return std::nullopt;
  return fs::path(s);
}

int run(int argc, char** argv) {
  CLI::App app{"Bayesian fitting of skewed univariate data (ASN and GSN models)"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "skewfit 0.1.0");

  SimulateSpec sim;
  std::string family = "gsn";
  std::string sim_out;
  auto* simulate_cmd = app.add_subcommand("simulate", "Draw a synthetic dataset");
  simulate_cmd->add_option("--family", family, "Generating family")
      ->check(CLI::IsMember({"asn", "gsn", "lognormal"}))
      ->capture_default_str();
  simulate_cmd->add_option("--mu", sim.mu, "GSN mu")->capture_default_str();
  simulate_cmd->add_option("--sigma", sim.sigma, "GSN sigma")->capture_default_str();
  simulate_cmd->add_option("--p", sim.p, "GSN p")->capture_default_str();
  simulate_cmd->add_option("--xi", sim.xi, "ASN location")->capture_default_str();
  simulate_cmd->add_option("--omega", sim.omega, "ASN scale")->capture_default_str();
  simulate_cmd->add_option("--alpha", sim.alpha, "ASN shape")->capture_default_str();
  simulate_cmd->add_option("--meanlog", sim.meanlog, "Lognormal log-mean")->capture_default_str();
  simulate_cmd->add_option("--varlog", sim.varlog, "Lognormal log-variance")->capture_default_str();
  simulate_cmd->add_flag("--negate", sim.negate, "Negate lognormal draws");
  simulate_cmd->add_option("--m", sim.m, "Sample size")->capture_default_str();
  simulate_cmd->add_option("--seed", sim.seed, "RNG seed")->capture_default_str();
  simulate_cmd->add_option("--out", sim_out, "Output CSV")->required();

  SharedFlags fit_flags;
  std::string fit_data, fit_out, emit_draws, emit_pred, emit_elbo;
  auto* fit_cmd = app.add_subcommand("fit", "Fit one model to a dataset");
  add_fit_flags(fit_cmd, fit_flags, true);
  fit_cmd->add_option("--data", fit_data, "Dataset CSV")->required();
  fit_cmd->add_option("--out", fit_out, "Report JSON")->required();
  fit_cmd->add_option("--emit-draws", emit_draws, "Posterior draws CSV");
  fit_cmd->add_option("--emit-predictive", emit_pred, "Posterior predictive CSV");
  fit_cmd->add_option("--emit-elbo", emit_elbo, "ELBO trace CSV (vi)");

  SharedFlags cmp_flags;
  std::string cmp_data, cmp_out;
  auto* compare_cmd = app.add_subcommand("compare", "Fit GSN-VI, GSN-MCMC and ASN and tabulate KSD");
  add_fit_flags(compare_cmd, cmp_flags, false);
  compare_cmd->add_option("--data", cmp_data, "Dataset CSV")->required();
  compare_cmd->add_option("--out", cmp_out, "Comparison JSON (a .txt table is written alongside)")
      ->required();

  SharedFlags rep_flags;
  std::string study, rep_out, data_dir = default_data_dir().string();
  auto* reproduce_cmd = app.add_subcommand("reproduce", "Regenerate a comparison study");
  add_fit_flags(reproduce_cmd, rep_flags, false);
  reproduce_cmd->add_option("--study", study, "Study to run")
      ->check(CLI::IsMember({"table1", "table2", "table3", "table4", "table5", "figures"}))
      ->required();
  reproduce_cmd->add_option("--out", rep_out, "Output directory")->required();
  reproduce_cmd->add_option("--data-dir", data_dir, "Directory holding bundled datasets")
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  if (*simulate_cmd) {
    static const std::map<std::string, Family> families{
        {"asn", Family::Asn}, {"gsn", Family::Gsn}, {"lognormal", Family::Lognormal}};
    sim.family = families.at(family);
    return cmd_simulate(sim, sim_out);
  }
  if (*fit_cmd) {
    FitOptions o = to_options(fit_flags);
    FitPaths paths{fit_data, std::nullopt, fit_out, opt_path(emit_draws), opt_path(emit_pred),
                   opt_path(emit_elbo)};
    return cmd_fit(o, paths);
  }
  if (*compare_cmd) {
    return cmd_compare(to_options(cmp_flags), cmp_data, std::nullopt, cmp_out, std::cout);
  }
  fs::create_directories(rep_out);
  return cmd_reproduce(study, to_options(rep_flags), data_dir, rep_out, std::cout);
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const DataError& e) {
    std::cerr << "skewfit: data error: " << e.what() << "\n";
    return kDataError;
  } catch (const NumericalError& e) {
    std::cerr << "skewfit: numerical failure: " << e.what() << "\n";
    return kNumericalFailure;
  } catch (const ConfigError& e) {
    std::cerr << "skewfit: " << e.what() << "\n";
    return kUsage;
  } catch (const DomainError& e) {
    std::cerr << "skewfit: invalid parameter: " << e.what() << "\n";
    return kUsage;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "skewfit: " << e.what() << "\n";
    return kDataError;
  } catch (const std::exception& e) {
    std::cerr << "skewfit: " << e.what() << "\n";
    return kNumericalFailure;
  }
}
