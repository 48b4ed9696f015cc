// Apache License, Version 2.0, refer to LICENSE.txt
//
// Implementation of the `skewfit` subcommands. Kept out of main() so the
// test suites can drive them directly.

#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "skewfit/io.hpp"
#include "skewfit/report.hpp"

namespace skewfit::cli {

enum ExitCode : int { kOk = 0, kUsage = 2, kDataError = 3, kNumericalFailure = 4 };

enum class Family { Asn, Gsn, Lognormal };

struct SimulateSpec {
  Family family = Family::Gsn;
  double mu = 1.0, sigma = 1.0, p = 0.8;           // gsn
  double xi = 0.0, omega = 1.0, alpha = 0.0;       // asn
  double meanlog = 0.0, varlog = 0.6;              // lognormal
  bool negate = false;
  std::size_t m = 100;
  std::uint64_t seed = 1;
};

io::Dataset simulate(const SimulateSpec& spec, std::string name = "simulated");

struct FitOptions {
  Model model = Model::GSN;
  bool variational = false;
  LatentUpdate latent = LatentUpdate::RandomWalk;
  std::size_t iterations = 20000;
  std::size_t burn_in = 5000;
  std::size_t thin = 5;
  double tol = 1e-6;
  std::size_t max_iter = 500;
  std::optional<double> mh_step;
  std::uint64_t seed = 1;
  io::PriorConfig priors;
  bool record_runtime = true;
};

struct FitOutcome {
  FitReport report;
  std::vector<std::string> draw_header;
  std::vector<std::vector<double>> draws;  // iter + three parameters
  std::vector<double> predictive;
  std::vector<double> elbo_trace;
};

FitOutcome run_fit(const std::vector<double>& data, const FitOptions& options);

struct FitPaths {
  std::filesystem::path data;
  std::optional<std::filesystem::path> priors;
  std::filesystem::path out;
  std::optional<std::filesystem::path> emit_draws;
  std::optional<std::filesystem::path> emit_predictive;
  std::optional<std::filesystem::path> emit_elbo;
};

int cmd_simulate(const SimulateSpec& spec, const std::filesystem::path& out);
int cmd_fit(FitOptions options, const FitPaths& paths);
int cmd_compare(FitOptions options, const std::filesystem::path& data,
                const std::optional<std::filesystem::path>& priors,
                const std::filesystem::path& out, std::ostream& table_out);
int cmd_reproduce(const std::string& study, FitOptions options,
                  const std::filesystem::path& data_dir, const std::filesystem::path& out_dir,
                  std::ostream& log);

// Three-way comparison (GSN-VI, GSN-MCMC, ASN) on one dataset.
struct Comparison {
  std::string dataset;
  FitOutcome gsn_vi;
  FitOutcome gsn_mcmc;
  FitOutcome asn;
};
Comparison compare(const io::Dataset& data, const FitOptions& options);
nlohmann::ordered_json to_json(const Comparison& c);
std::string format_table(const std::vector<Comparison>& rows);

// Datasets of the comparison study: very_small_skew, small_skew,
// moderate_skew, large_skew, lognormal (simulated, m = 100), frontier and
// guinea_pig (bundled files), vi_toy (GSN(2,1,0.6)).
std::vector<std::string> study_dataset_names();
io::Dataset study_dataset(const std::string& name, std::uint64_t seed,
                          const std::filesystem::path& data_dir);

// Default location of the bundled data files.
std::filesystem::path default_data_dir();

}  // namespace skewfit::cli
