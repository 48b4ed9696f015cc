// Apache License, Version 2.0, refer to LICENSE.txt

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "skewfit/analysis.hpp"
#include "skewfit/errors.hpp"
#include "skewfit/report.hpp"
#include "support.hpp"

using namespace skewfit;
namespace ts = testing_support;

TEST_CASE("ks_distance") {
  const std::vector<double> a{0.0, 1.0}, b{10.0, 11.0};
  CHECK(analysis::ks_distance(a, a) == 0.0);
  CHECK(analysis::ks_distance(a, b) == 1.0);
  const std::vector<double> c{1.0, 2.0}, d{1.5, 2.5};
  CHECK(analysis::ks_distance(c, d) == 0.5);
  const std::vector<double> empty;
  CHECK_THROWS_AS(analysis::ks_distance(empty, a), DataError);

  Rng rng(3);
  for (int rep = 0; rep < 50; ++rep) {
    std::vector<double> x(20 + rep), y(35), z(17);
    for (double& v : x) v = std::round(rng.normal() * 4) / 4;  // ties on purpose
    for (double& v : y) v = std::round(rng.normal(0.3, 1.2) * 4) / 4;
    for (double& v : z) v = rng.normal(-0.2, 0.8);
    const double kxy = analysis::ks_distance(x, y);
    CHECK(kxy == doctest::Approx(ts::ks_two_sample(x, y)).epsilon(1e-15));
    CHECK(kxy == analysis::ks_distance(y, x));
    CHECK(analysis::ks_distance(x, z) <= kxy + analysis::ks_distance(y, z) + 1e-15);
    std::vector<double> ex = x, ey = y;
    for (double& v : ex) v = std::exp(3 * v) + 1;
    for (double& v : ey) v = std::exp(3 * v) + 1;
    CHECK(analysis::ks_distance(ex, ey) == kxy);
    CHECK(kxy >= 0.0);
    CHECK(kxy <= 1.0);
  }
}

TEST_CASE("map_estimate") {
  const std::vector<double> flat(50, 2.5);
  CHECK(analysis::map_estimate(flat) == 2.5);
  const std::vector<double> few{1, 2, 3};
  CHECK_THROWS(analysis::map_estimate(few));

  Rng rng(8);
  std::vector<double> z(100000);
  for (double& v : z) v = rng.normal();
  CHECK(std::abs(analysis::map_estimate(z)) < 0.05);

  std::vector<double> b(100000);
  for (double& v : b) v = sample_beta(2, 5, rng);
  CHECK(std::abs(analysis::map_estimate(b) - 0.2) < 0.03);

  // affine equivariance
  std::vector<double> g(5000);
  for (double& v : g) v = sample_gamma(3.0, 1.0, rng);
  const double m0 = analysis::map_estimate(g);
  std::vector<double> t = g;
  for (double& v : t) v = 2.5 * v - 4.0;
  const double h = analysis::silverman_bandwidth(g);
  CHECK(std::abs(analysis::map_estimate(t) - (2.5 * m0 - 4.0)) < 2.5 * h / 50);
  CHECK(m0 == doctest::Approx(2.0).epsilon(0.2));
}

TEST_CASE("silverman bandwidth") {
  std::vector<double> x;
  for (int i = 0; i < 100; ++i) x.push_back(i);
  const double sd = std::sqrt(ts::variance(x));
  const double iqr = analysis::quantile(x, 0.75) - analysis::quantile(x, 0.25);
  CHECK(analysis::silverman_bandwidth(x) ==
        doctest::Approx(0.9 * std::min(sd, iqr / 1.34) * std::pow(100.0, -0.2)));
}

TEST_CASE("kde curve integrates to one") {
  Rng rng(1);
  std::vector<double> x(300);
  for (double& v : x) v = rng.normal(1, 2);
  const auto curve = analysis::kde_curve(x, 512);
  CHECK(curve.size() == 512);
  double area = 0;
  for (std::size_t i = 1; i < curve.size(); ++i) {
    area += 0.5 * (curve[i].second + curve[i - 1].second) * (curve[i].first - curve[i - 1].first);
  }
  CHECK(area == doctest::Approx(1.0).epsilon(2e-3));
  std::vector<double> xs{curve[100].first, curve[300].first};
  const auto ev = analysis::kde_evaluate(x, xs);
  CHECK(ev[0] == doctest::Approx(curve[100].second).epsilon(1e-12));
  CHECK(ev[1] == doctest::Approx(curve[300].second).epsilon(1e-12));
}

TEST_CASE("skewness") {
  const std::vector<double> sym{-1, 0, 1};
  CHECK(analysis::pearson_skewness(sym) == 0.0);
  const std::vector<double> s{0, 0, 3};
  CHECK(analysis::pearson_skewness(s) == doctest::Approx(std::sqrt(0.5)).epsilon(1e-14));
  const std::vector<double> constant(5, 1.0);
  CHECK_THROWS_AS(analysis::pearson_skewness(constant), DataError);
  const std::vector<double> two{1, 2};
  CHECK_THROWS_AS(analysis::pearson_skewness(two), DataError);

  Rng rng(4);
  std::vector<double> x(200);
  for (double& v : x) v = sample_gamma(2.0, 1.0, rng);
  const double g = analysis::pearson_skewness(x);
  std::vector<double> y = x, r = x;
  for (double& v : y) v = 3 * v + 7;
  for (double& v : r) v = -v;
  CHECK(analysis::pearson_skewness(y) == doctest::Approx(g).epsilon(1e-12));
  CHECK(analysis::pearson_skewness(r) == doctest::Approx(-g).epsilon(1e-12));
  CHECK(analysis::pearson_median_skewness(r) == doctest::Approx(-analysis::pearson_median_skewness(x)));

  // survival times of 72 guinea pigs
  const std::vector<double> gp{12,  15,  22,  24,  24,  32,  32,  33,  34,  38,  38,  43,  44,  48,  52,
                               53,  54,  54,  55,  56,  57,  58,  58,  59,  60,  60,  60,  60,  61,  62,
                               63,  65,  65,  67,  68,  70,  70,  72,  73,  75,  76,  76,  81,  83,  84,
                               85,  87,  91,  95,  96,  98,  99,  109, 110, 121, 127, 129, 131, 143, 146,
                               146, 175, 175, 211, 233, 258, 258, 263, 297, 341, 341, 376};
  CHECK(analysis::pearson_skewness(gp) == doctest::Approx(1.796).epsilon(5e-4));
}

TEST_CASE("ASN(0,1,100) sample skewness sits near 0.956") {
  int near = 0;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    Rng rng(seed);
    const auto x = asn_sample({0, 1, 100}, 100, rng);
    if (std::abs(analysis::pearson_skewness(x) - 0.956) <= 0.3) ++near;
  }
  CHECK(near >= 17);
}

TEST_CASE("quantiles and credible intervals") {
  const std::vector<double> c(20, 3.0);
  const auto ci = analysis::credible_interval(c);
  CHECK(ci.lo == 3.0);
  CHECK(ci.hi == 3.0);

  const std::vector<double> q{1, 2, 3, 4};
  CHECK(analysis::quantile(q, 0.5) == 2.5);
  CHECK(analysis::quantile(q, 0.0) == 1.0);
  CHECK(analysis::quantile(q, 1.0) == 4.0);
  CHECK(analysis::quantile(q, 1.0 / 3) == doctest::Approx(2.0));

  Rng rng(2);
  std::vector<double> u(100000), z(100000);
  for (double& v : u) v = rng.uniform();
  for (double& v : z) v = rng.normal();
  const auto iu = analysis::credible_interval(u, 0.95);
  CHECK(std::abs(iu.lo - 0.025) < 0.01);
  CHECK(std::abs(iu.hi - 0.975) < 0.01);
  const auto iz = analysis::credible_interval(z, 0.95);
  CHECK(std::abs(iz.lo + 1.959964) < 0.05);
  CHECK(std::abs(iz.hi - 1.959964) < 0.05);
  CHECK(iz.level == 0.95);
}

TEST_CASE("posterior predictive") {
  gsn::Chain g;
  g.draws = {{1.0, 1.0, 0.8}};
  Rng rng(1), rng2(2);
  const auto pred = analysis::posterior_predictive(g, 100000, rng);
  const auto ref = gsn_sample({1.0, 1.0, 0.8}, 100000, rng2);
  CHECK(ts::ks_two_sample(pred, ref) < 0.01);
  CHECK(analysis::posterior_predictive(g, 0, rng).empty());

  asn::Chain a;
  a.draws = {{0.5, 4.0, -2.0}};
  const auto pa = analysis::posterior_predictive(a, 100000, rng);
  const auto ra = asn_sample({0.5, 2.0, -2.0}, 100000, rng2);
  CHECK(ts::ks_two_sample(pa, ra) < 0.01);

  // draws are picked uniformly across the chain
  gsn::Chain two;
  two.draws = {{0.0, 1e-6, 0.999999}, {100.0, 1e-6, 0.999999}};
  const auto mix = analysis::posterior_predictive(two, 100000, rng);
  double hi = 0;
  for (double v : mix) hi += v > 50;
  CHECK(std::abs(hi / 1e5 - 0.5) < 4 * 0.5 / std::sqrt(1e5));
}

TEST_CASE("fit reports") {
  Rng rng(77);
  const auto data = gsn_sample({1.0, 1.0, 0.8}, 100, rng);
  ChainConfig cfg{.iterations = 6000, .burn_in = 1000, .thin = 5, .seed = 3};
  const auto chain = gsn::run_chain(data, {}, cfg);
  const auto r1 = build_report(chain, data, {});
  const auto r2 = build_report(chain, data, {});
  CHECK(to_json(r1).dump() == to_json(r2).dump());
  CHECK(r1.ksd >= 0.0);
  CHECK(r1.ksd <= 1.0);
  CHECK(r1.model == Model::GSN);
  CHECK(r1.method == Method::MCMC_RandomWalk);
  for (const auto& ni : r1.credible_intervals) CHECK(ni.interval.lo <= ni.interval.hi);
  CHECK(r1.map("sigma") > 0.0);
  CHECK(r1.data_summary.m == 100);
  CHECK(predictive_size(100) == 1000);
  CHECK(predictive_size(50) == 1000);
  CHECK(predictive_size(250) == 2500);
  CHECK(report_predictive(chain, data.size()).size() == 1000);

  const auto j = to_json(r1);
  for (const char* key : {"model", "method", "map_estimates", "credible_intervals", "ksd",
                          "data_summary", "runtime_ms", "seed", "prior", "config"}) {
    CHECK_MESSAGE(j.contains(key), key);
  }
  CHECK(j["data_summary"]["skewness_definition"] == "moment_g1");
}
