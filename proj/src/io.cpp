// Apache License, Version 2.0, refer to LICENSE.txt

#include "skewfit/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <system_error>

#include "skewfit/errors.hpp"

namespace skewfit::io {

namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double parse_double(std::string_view s, const std::string& where) {
  s = trim(s);
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size()) {
    throw DataError(where + ": cannot parse number '" + std::string(s) + "'");
  }
  return v;
}

}  // namespace

std::string format_double(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

Dataset parse_dataset(std::string_view text, std::string name) {
  Dataset d;
  d.name = std::move(name);
  bool header_seen = false;
  std::size_t line_no = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view line = trim(text.substr(0, nl));
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    if (line.empty()) continue;
    if (line.front() == '#') {
      const std::string_view body = trim(line.substr(1));
      const auto eq = body.find('=');
      if (eq != std::string_view::npos) {
        d.provenance.emplace_back(std::string(trim(body.substr(0, eq))),
                                  std::string(trim(body.substr(eq + 1))));
      }
      continue;
    }
    if (!header_seen) {
      if (line != "x") {
        throw DataError(d.name + ": expected header 'x' on line " + std::to_string(line_no));
      }
      header_seen = true;
      continue;
    }
    const double v = parse_double(line, d.name + " line " + std::to_string(line_no));
    if (!std::isfinite(v)) {
      throw DataError(d.name + ": non-finite value on line " + std::to_string(line_no));
    }
    d.values.push_back(v);
  }
  if (!header_seen) throw DataError(d.name + ": missing header 'x'");
  if (d.values.empty()) throw DataError(d.name + ": no observations");
  for (const auto& [k, v] : d.provenance) {
    if (k == "source" && v == "simulated") d.source = DataSource::Simulated;
  }
  return d;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Dataset read_dataset(const std::filesystem::path& path) {
  return parse_dataset(read_file(path), path.stem().string());
}

std::string format_dataset(const Dataset& d) {
  std::string out;
  for (const auto& [k, v] : d.provenance) out += "# " + k + "=" + v + "\n";
  out += "x\n";
  for (double v : d.values) out += format_double(v) + "\n";
  return out;
}

void write_atomic(const std::filesystem::path& path, std::string_view content) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw DataError("cannot write " + tmp.string());
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw DataError("write failed for " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

std::string format_csv(const std::vector<std::string>& header,
                       const std::vector<std::vector<double>>& rows) {
  std::string out;
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (i) out += ',';
    out += header[i];
  }
  out += '\n';
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out += ',';
      out += format_double(row[i]);
    }
    out += '\n';
  }
  return out;
}

PriorConfig parse_prior_config(std::string_view text) {
  PriorConfig cfg;
  std::string section;
  std::size_t line_no = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    line = trim(line);
    if (line.empty()) continue;
    const std::string where = "prior config line " + std::to_string(line_no);
    if (line.front() == '[') {
      if (line.back() != ']') throw DataError(where + ": malformed section header");
      section = std::string(trim(line.substr(1, line.size() - 2)));
      if (section != "gsn" && section != "asn") {
        throw DataError(where + ": unknown section [" + section + "]");
      }
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw DataError(where + ": expected key = value");
    const std::string key(trim(line.substr(0, eq)));
    const double value = parse_double(line.substr(eq + 1), where);
    double* slot = nullptr;
    if (section == "gsn") {
      gsn::PriorSpec& p = cfg.gsn;
      if (key == "v0") slot = &p.v0;
      else if (key == "n0") slot = &p.n0;
      else if (key == "alpha") slot = &p.alpha;
      else if (key == "beta") slot = &p.beta;
      else if (key == "a") slot = &p.a;
      else if (key == "b") slot = &p.b;
    } else if (section == "asn") {
      asn::PriorSpec& p = cfg.asn;
      if (key == "xi0") slot = &p.xi0;
      else if (key == "kappa") slot = &p.kappa;
      else if (key == "a") slot = &p.a;
      else if (key == "b") slot = &p.b;
      else if (key == "alpha0") slot = &p.alpha0;
      else if (key == "psi0") slot = &p.psi0;
      else if (key == "lambda0") slot = &p.lambda0;
    } else {
      throw DataError(where + ": key outside a [gsn] or [asn] section");
    }
    if (!slot) throw DataError(where + ": unknown key '" + key + "' in [" + section + "]");
    *slot = value;
  }
  cfg.gsn.validate();
  cfg.asn.validate();
  return cfg;
}

PriorConfig read_prior_config(const std::filesystem::path& path) {
  return parse_prior_config(read_file(path));
}

}  // namespace skewfit::io
