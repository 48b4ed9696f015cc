// Apache License, Version 2.0, refer to LICENSE.txt
//
// Dataset CSV, prior configuration files and atomic file output.

#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "skewfit/asn_gibbs.hpp"
#include "skewfit/gsn_mcmc.hpp"

namespace skewfit::io {

enum class DataSource { Simulated, File };

struct Dataset {
  std::vector<double> values;
  std::string name;
  DataSource source = DataSource::File;
  std::vector<std::pair<std::string, std::string>> provenance;  // written as "# k=v"
};

// Shortest round-trip decimal form, '.' separator regardless of locale.
std::string format_double(double v);

// One-column CSV: '#' comment lines (key=value pairs become provenance),
// then a header `x`, then one value per line. Throws DataError on malformed
// content, non-finite values or an empty column.
Dataset parse_dataset(std::string_view text, std::string name = "data");
Dataset read_dataset(const std::filesystem::path& path);
std::string format_dataset(const Dataset& d);

// Write via a sibling temporary file and rename.
void write_atomic(const std::filesystem::path& path, std::string_view content);

// CSV with a header line and one row per entry.
std::string format_csv(const std::vector<std::string>& header,
                       const std::vector<std::vector<double>>& rows);

struct PriorConfig {
  gsn::PriorSpec gsn;
  asn::PriorSpec asn;
};

// Flat key = value format with [gsn] / [asn] sections; '#' starts a comment.
// Absent keys keep their defaults; unknown keys or sections are errors.
PriorConfig parse_prior_config(std::string_view text);
PriorConfig read_prior_config(const std::filesystem::path& path);

std::string read_file(const std::filesystem::path& path);

}  // namespace skewfit::io
