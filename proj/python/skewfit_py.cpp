// Apache License, Version 2.0, refer to LICENSE.txt

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "commands.hpp"
#include "skewfit/analysis.hpp"
#include "skewfit/distributions.hpp"
#include "skewfit/errors.hpp"
#include "skewfit/specfun.hpp"

namespace py = pybind11;
using namespace skewfit;

namespace {

cli::FitOptions make_options(const std::string& model, const std::string& method,
                             const std::string& latent, std::size_t iters, std::size_t burnin,
                             std::size_t thin, double tol, std::uint64_t seed) {
  cli::FitOptions o;
  if (model != "gsn" && model != "asn") throw ConfigError("model must be 'gsn' or 'asn'");
  if (method != "mcmc" && method != "vi") throw ConfigError("method must be 'mcmc' or 'vi'");
  if (latent != "rw" && latent != "geom") throw ConfigError("latent must be 'rw' or 'geom'");
  o.model = model == "asn" ? Model::ASN : Model::GSN;
  o.variational = method == "vi";
  o.latent = latent == "geom" ? LatentUpdate::GeometricProposal : LatentUpdate::RandomWalk;
  o.iterations = iters;
  o.burn_in = burnin;
  o.thin = thin;
  o.tol = tol;
  o.seed = seed;
  o.record_runtime = false;
  return o;
}

}  // namespace

PYBIND11_MODULE(_skewfit, m) {
  m.doc() = "Bayesian fitting of ASN and GSN models";

  py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<DataError>(m, "DataError", PyExc_ValueError);
  py::register_exception<NumericalError>(m, "NumericalError", PyExc_ArithmeticError);

  m.def("gsn_logpdf", [](double x, double mu, double sigma, double p) {
    return gsn_logpdf(x, GsnParams{mu, sigma, p});
  }, py::arg("x"), py::arg("mu"), py::arg("sigma"), py::arg("p"));
  m.def("asn_logpdf", [](double x, double xi, double omega, double alpha) {
    return asn_logpdf(x, AsnParams{xi, omega, alpha});
  }, py::arg("x"), py::arg("xi"), py::arg("omega"), py::arg("alpha"));

  m.def("gsn_sample", [](double mu, double sigma, double p, std::size_t n, std::uint64_t seed) {
    Rng rng(seed);
    return gsn_sample(GsnParams{mu, sigma, p}, n, rng);
  }, py::arg("mu"), py::arg("sigma"), py::arg("p"), py::arg("n"), py::arg("seed") = 1);
  m.def("asn_sample", [](double xi, double omega, double alpha, std::size_t n, std::uint64_t seed) {
    Rng rng(seed);
    return asn_sample(AsnParams{xi, omega, alpha}, n, rng);
  }, py::arg("xi"), py::arg("omega"), py::arg("alpha"), py::arg("n"), py::arg("seed") = 1);

  m.def("log_gamma", &specfun::log_gamma);
  m.def("digamma", &specfun::digamma);
  m.def("norm_cdf", &specfun::std_normal_cdf);
  m.def("norm_ppf", &specfun::std_normal_quantile);

  m.def("ks_distance", [](const std::vector<double>& a, const std::vector<double>& b) {
    return analysis::ks_distance(a, b);
  });
  m.def("map_estimate", [](const std::vector<double>& d) { return analysis::map_estimate(d); });

  // Returns (report_json, draw_header, draws, predictive, elbo_trace).
  m.def("fit", [](const std::vector<double>& data, const std::string& model,
                  const std::string& method, const std::string& latent, std::size_t iters,
                  std::size_t burnin, std::size_t thin, double tol, std::uint64_t seed) {
    const cli::FitOptions o = make_options(model, method, latent, iters, burnin, thin, tol, seed);
    cli::FitOutcome out;
    {
      py::gil_scoped_release release;
      out = cli::run_fit(data, o);
    }
    return py::make_tuple(to_json(out.report).dump(), out.draw_header, out.draws, out.predictive,
                          out.elbo_trace);
  }, py::arg("data"), py::arg("model") = "gsn", py::arg("method") = "mcmc",
     py::arg("latent") = "rw", py::arg("iters") = 20000, py::arg("burnin") = 5000,
     py::arg("thin") = 5, py::arg("tol") = 1e-6, py::arg("seed") = 1);

  m.attr("__version__") = "0.1.0";
}
