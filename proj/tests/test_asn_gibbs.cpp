// Apache License, Version 2.0, refer to LICENSE.txt

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "skewfit/asn_gibbs.hpp"
#include "skewfit/errors.hpp"
#include "support.hpp"

using namespace skewfit;
namespace ts = testing_support;

namespace {

double log_phi_cdf(double z) { return std::log(ts::phi_cdf(z)); }

// Independent evaluation of ln pi_ASN(alpha) + sum ln Phi(alpha y*).
double alpha_logpost_ref(double alpha, const std::vector<double>& ys, const asn::PriorSpec& pr) {
  const double z = (alpha - pr.alpha0) / pr.psi0;
  double l = -0.5 * z * z + log_phi_cdf(pr.lambda0 * z);
  for (double y : ys) l += log_phi_cdf(alpha * y);
  return l;
}

}  // namespace

TEST_CASE("eta update") {
  Rng rng(5);
  SUBCASE("alpha = 0 gives half-normal latents") {
    const std::vector<double> y{0.3, -1.2, 2.0};
    asn::State st{0.0, 2.25, 0.0, {0, 0, 0}};
    std::vector<double> e;
    for (int i = 0; i < 40000; ++i) {
      asn::update_eta(st, y, rng);
      for (double v : st.eta) {
        CHECK(v >= 0.0);
        e.push_back(v);
      }
    }
    const double mean = 1.5 * std::sqrt(2 / ts::kPi);
    CHECK(std::abs(ts::mean(e) - mean) < 4 * 1.5 * std::sqrt((1 - 2 / ts::kPi) / e.size()));
  }
  SUBCASE("far from the boundary the truncation is negligible") {
    // delta (y - xi) = 5 omega
    const double alpha = 2.0, delta = alpha / std::sqrt(5.0);
    const double omega = 1.3, y0 = 5 * omega / delta;
    const std::vector<double> y{y0};
    asn::State st{0.0, omega * omega, alpha, {1.0}};
    std::vector<double> e;
    for (int i = 0; i < 100000; ++i) {
      asn::update_eta(st, y, rng);
      e.push_back(st.eta[0]);
    }
    const double sd = omega * std::sqrt(1 - delta * delta);
    CHECK(std::abs(ts::mean(e) - 5 * omega) < 4 * sd / std::sqrt(1e5));
  }
}

TEST_CASE("xi and omega2 conditionals") {
  SUBCASE("no skew, flat location prior gives the sample mean") {
    const std::vector<double> y{1.0, 2.5, 3.2, 0.1};
    asn::State st{0.0, 1.0, 0.0, {0.5, 0.5, 0.5, 0.5}};
    const auto c = asn::xi_conditional(st, y, asn::PriorSpec{.kappa = 1e12});
    CHECK(c.mean == doctest::Approx(1.7).epsilon(1e-9));
    CHECK(c.scale == doctest::Approx(0.25).epsilon(1e-9));
  }

  SUBCASE("no data reproduces the prior") {
    const asn::PriorSpec pr{.xi0 = 1.0, .kappa = 2.0, .a = 4.0, .b = 3.0};
    const std::vector<double> none;
    asn::State st{0.0, 1.0, 0.7, {}};
    Rng rng(12);
    std::vector<double> xs, ws;
    for (int i = 0; i < 200000; ++i) {
      asn::update_xi_omega(st, none, pr, rng);
      xs.push_back(st.xi);
      ws.push_back(st.omega2);
    }
    // omega2 ~ IG(4, 3): mean 1; xi ~ xi0 + sqrt(kappa omega2) Z: variance kappa E[omega2] = 2
    CHECK(ts::mean(ws) == doctest::Approx(1.0).epsilon(0.02));
    CHECK(ts::mean(xs) == doctest::Approx(1.0).epsilon(0.02));
    CHECK(ts::variance(xs) == doctest::Approx(2.0).epsilon(0.03));
  }

  SUBCASE("n = 4 marginal moments against 2-D grid quadrature") {
    const asn::PriorSpec pr{.xi0 = 0.2, .kappa = 3.0, .a = 3.0, .b = 2.0};
    const std::vector<double> y{0.4, 1.9, -0.3, 1.1};
    const double alpha = 1.5, delta = alpha / std::sqrt(1 + alpha * alpha);
    const std::vector<double> eta{0.2, 1.4, 0.1, 0.8};
    // p(xi, w | eta, alpha, y) ∝ N(xi; xi0, kappa w) IG(w; a, b)
    //   * prod N(y_i; xi + delta eta_i, w (1 - delta^2)) * prod HN(eta_i; w)
    auto logdens = [&](double xi, double w) {
      double l = -0.5 * std::log(w) - (xi - pr.xi0) * (xi - pr.xi0) / (2 * pr.kappa * w) -
                 (pr.a + 1) * std::log(w) - pr.b / w;
      for (std::size_t i = 0; i < y.size(); ++i) {
        const double r = y[i] - xi - delta * eta[i];
        l += -0.5 * std::log(w) - r * r / (2 * w * (1 - delta * delta));
        l += -0.5 * std::log(w) - eta[i] * eta[i] / (2 * w);
      }
      return l;
    };
    std::vector<double> gx, gw;
    ts::gauss_legendre(200, gx, gw);
    const double xlo = -3, xhi = 3, llo = std::log(1e-3), lhi = std::log(30.0);
    double z = 0, x1 = 0, x2 = 0, w1 = 0, w2 = 0;
    for (int i = 0; i < 200; ++i) {
      const double xi = 0.5 * (xhi - xlo) * (gx[i] + 1) + xlo;
      for (int j = 0; j < 200; ++j) {
        const double lw = 0.5 * (lhi - llo) * (gx[j] + 1) + llo;
        const double w = std::exp(lw);
        const double f = gw[i] * gw[j] * std::exp(logdens(xi, w) + lw);
        z += f;
        x1 += f * xi;
        x2 += f * xi * xi;
        w1 += f * w;
        w2 += f * w * w;
      }
    }
    x1 /= z; x2 /= z; w1 /= z; w2 /= z;

    asn::State st{0.0, 1.0, alpha, eta};
    Rng rng(77);
    std::vector<double> xs, ws;
    for (int i = 0; i < 200000; ++i) {
      asn::update_xi_omega(st, y, pr, rng);
      xs.push_back(st.xi);
      ws.push_back(st.omega2);
    }
    CHECK(ts::mean(xs) == doctest::Approx(x1).epsilon(0.01));
    CHECK(ts::variance(xs) == doctest::Approx(x2 - x1 * x1).epsilon(0.01 * 2));
    CHECK(ts::mean(ws) == doctest::Approx(w1).epsilon(0.01));
    CHECK(ts::variance(ws) == doctest::Approx(w2 - w1 * w1).epsilon(0.03));
  }
}

TEST_CASE("alpha conditional log density") {
  const asn::PriorSpec pr{.alpha0 = 0.5, .psi0 = 3.0, .lambda0 = -1.0};
  const std::vector<double> none;
  const double c = asn::alpha_conditional_logdensity(0.0, none, pr) - alpha_logpost_ref(0.0, {}, pr);
  for (double a : {-4.0, -1.0, 0.3, 2.0, 7.5}) {
    CHECK(asn::alpha_conditional_logdensity(a, none, pr) - alpha_logpost_ref(a, {}, pr) ==
          doctest::Approx(c).epsilon(1e-12));
  }

  const std::vector<double> zeros(6, 0.0);
  const asn::PriorSpec sym{.alpha0 = 0.0, .psi0 = 2.0, .lambda0 = 0.0};
  for (double a : {0.5, 1.7, 9.0}) {
    CHECK(asn::alpha_conditional_logdensity(a, zeros, sym) ==
          doctest::Approx(asn::alpha_conditional_logdensity(-a, zeros, sym)).epsilon(1e-14));
  }

  const std::vector<double> ys{-0.4, 0.9, 1.6, 0.2, 2.3};
  for (double a : {-2.0, 0.0, 1.0, 6.0, 40.0}) {
    CHECK(std::isfinite(asn::alpha_conditional_logdensity(a, ys, pr)));
  }
  // Normalise by quadrature; density ratios agree with direct evaluation.
  auto f = [&](double a) { return std::exp(asn::alpha_conditional_logdensity(a, ys, pr)); };
  const double z = ts::simpson(f, -40, 40, 80000);
  const double r_direct = std::exp(asn::alpha_conditional_logdensity(1.2, ys, pr) -
                                   asn::alpha_conditional_logdensity(3.4, ys, pr));
  CHECK(std::abs((f(1.2) / z) / (f(3.4) / z) - r_direct) < 1e-10 * r_direct);
  CHECK(std::abs(asn::alpha_conditional_logdensity(1.2, ys, pr) -
                 asn::alpha_conditional_logdensity(3.4, ys, pr) -
                 (alpha_logpost_ref(1.2, ys, pr) - alpha_logpost_ref(3.4, ys, pr))) < 1e-10);
}

TEST_CASE("alpha step") {
  CHECK(asn::default_alpha_step(0.0) == doctest::Approx(0.5));
  CHECK(asn::default_alpha_step(3.0) == doctest::Approx(2.0));
  CHECK(asn::default_alpha_step(100.0) == doctest::Approx(5.0));
  CHECK(asn::default_alpha_step(-1.0) == doctest::Approx(1.0));

  SUBCASE("symmetric target") {
    const std::vector<double> y(5, 0.0);
    const asn::PriorSpec sym{.alpha0 = 0.0, .psi0 = 2.0, .lambda0 = 0.0};
    asn::State st{0.0, 1.0, 1.0, std::vector<double>(5, 0.1)};
    Rng rng(8);
    std::vector<double> a;
    for (int i = 0; i < 100000; ++i) {
      asn::update_alpha(st, y, sym, 1.5, rng);
      a.push_back(st.alpha);
    }
    CHECK(std::abs(ts::mean(a)) < 4 * ts::batch_means_se(a));
  }

  SUBCASE("long-run distribution matches the quadrature-normalised conditional") {
    const std::vector<double> y{-0.4, 0.9, 1.6, 0.2, 2.3};
    const asn::PriorSpec pr{.alpha0 = 0.0, .psi0 = 3.0, .lambda0 = 0.0};
    const ts::TabulatedCdf cdf(
        [&](double a) { return std::exp(asn::alpha_conditional_logdensity(a, y, pr)); }, -40,
        60, 200000);
    const double total = cdf(60.0);
    auto normalised = [&](double a) { return cdf(a) / total; };
    for (std::optional<double> step : {std::optional<double>(1.0), std::optional<double>()}) {
      asn::State st{0.0, 1.0, 0.0, std::vector<double>(5, 0.1)};
      Rng rng(step ? 21 : 22);
      std::vector<double> a;
      for (int i = 0; i < 1000; ++i) asn::update_alpha(st, y, pr, step, rng);
      for (int i = 0; i < 100000; ++i) {
        for (int k = 0; k < 3; ++k) asn::update_alpha(st, y, pr, step, rng);
        a.push_back(st.alpha);
      }
      const double ks = ts::ks_one_sample(a, normalised);
      CHECK_MESSAGE(ks < 0.02, (step ? "fixed" : "adaptive") << " step ks=" << ks);
    }
  }
}

TEST_CASE("alpha = 0 sub-model reproduces the conjugate normal posterior") {
  const std::vector<double> y{0.5, 1.7, -0.2, 2.4, 1.1, 0.9};
  const asn::PriorSpec pr{.xi0 = 0.0, .kappa = 5.0, .a = 3.0, .b = 2.0};
  const double n = y.size();
  double sy = 0, ss = 0;
  for (double v : y) sy += v;
  const double ybar = sy / n;
  for (double v : y) ss += (v - ybar) * (v - ybar);
  const double shape = pr.a + n / 2;
  const double rate = pr.b + 0.5 * (ss + n * (ybar - pr.xi0) * (ybar - pr.xi0) / (1 + n * pr.kappa));
  const double xi_mean = (pr.kappa * sy + pr.xi0) / (n * pr.kappa + 1);
  const double xi_var = pr.kappa / (n * pr.kappa + 1) * rate / (shape - 1);

  asn::State st{ybar, 1.0, 0.0, std::vector<double>(y.size(), 0.5)};
  Rng rng(4);
  std::vector<double> xs, ws;
  for (int i = 0; i < 200000; ++i) {
    asn::update_eta(st, y, rng);
    asn::update_xi_omega(st, y, pr, rng);
    xs.push_back(st.xi);
    ws.push_back(st.omega2);
  }
  CHECK(ts::mean(ws) == doctest::Approx(rate / (shape - 1)).epsilon(0.01));
  CHECK(ts::mean(xs) == doctest::Approx(xi_mean).epsilon(0.01));
  CHECK(ts::variance(xs) == doctest::Approx(xi_var).epsilon(0.02));
}

TEST_CASE("Geweke joint-distribution test at n = 5") {
  const asn::PriorSpec prior{.xi0 = 0.3, .kappa = 1.0, .a = 3.0, .b = 2.0,
                             .alpha0 = 0.0, .psi0 = 2.0, .lambda0 = 1.0};
  const std::size_t n = 5;
  const std::size_t iters = 200000;

  auto prior_draw = [&](Rng& rng) {
    const auto mv = sample_normal_inverse_gamma(prior.xi0, 1.0 / prior.kappa, prior.a, prior.b, rng);
    const double alpha = asn_draw({prior.alpha0, prior.psi0, prior.lambda0}, rng);
    return asn::State{mv.mu, mv.sigma2, alpha, {}};
  };
  auto regenerate = [&](asn::State& st, std::vector<double>& y, Rng& rng) {
    const double w = std::sqrt(st.omega2), d = st.delta();
    st.eta.resize(n);
    y.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      st.eta[i] = std::abs(rng.normal(0.0, w));
      y[i] = st.xi + d * st.eta[i] + w * std::sqrt(1 - d * d) * rng.normal();
    }
  };
  // Raw first and second moments, plus bounded functionals that keep power
  // when a broken conditional lets the chain wander into heavy tails.
  auto stats = [&](const asn::State& s) {
    return std::array<double, 9>{s.xi,          s.omega2,
                                 s.alpha,       s.xi * s.xi,
                                 s.omega2 * s.omega2, s.alpha * s.alpha,
                                 std::log(s.omega2), s.omega2 < 1.0 ? 1.0 : 0.0,
                                 s.xi < prior.xi0 ? 1.0 : 0.0};
  };

  Rng rng_a(505);
  std::array<std::vector<double>, 9> mc;
  for (std::size_t t = 0; t < iters; ++t) {
    const auto g = stats(prior_draw(rng_a));
    for (int k = 0; k < 9; ++k) mc[k].push_back(g[k]);
  }
  for (std::optional<double> step : {std::optional<double>(), std::optional<double>(1.0)}) {
    Rng rng(step ? 606 : 707);
    asn::State st = prior_draw(rng);
    std::vector<double> y;
    regenerate(st, y, rng);
    std::array<std::vector<double>, 9> sc;
    for (std::size_t t = 0; t < iters; ++t) {
      asn::sweep(st, y, prior, step, rng);
      regenerate(st, y, rng);
      const auto g = stats(st);
      for (int k = 0; k < 9; ++k) sc[k].push_back(g[k]);
    }
    const char* names[] = {"xi",      "omega2",    "alpha",      "xi^2",     "omega2^2",
                           "alpha^2", "ln omega2", "omega2 < 1", "xi < xi0"};
    for (int k = 0; k < 9; ++k) {
      const double se_mc = std::sqrt(ts::variance(mc[k]) / iters);
      const double se_sc = ts::batch_means_se(sc[k], 100);
      const double z = (ts::mean(sc[k]) - ts::mean(mc[k])) / std::hypot(se_mc, se_sc);
      CHECK_MESSAGE(std::abs(z) < 4.0, std::string(names[k]) << (step ? " fixed" : " adaptive") << " z=" << z);
    }
  }
}

TEST_CASE("run_chain contract") {
  Rng rng(3);
  const auto y = asn_sample({0.0, 1.0, -1.0}, 100, rng);
  ChainConfig cfg{.iterations = 4000, .burn_in = 1000, .thin = 3, .seed = 5};
  const auto a = asn::run_chain(y, {}, cfg);
  const auto b = asn::run_chain(y, {}, cfg);
  REQUIRE(a.draws.size() == 1000);
  for (std::size_t i = 0; i < a.draws.size(); ++i) {
    CHECK(a.draws[i].xi == b.draws[i].xi);
    CHECK(a.draws[i].alpha == b.draws[i].alpha);
    CHECK(a.draws[i].omega2 > 0.0);
  }
  CHECK(a.acceptance_rate > 0.05);
  CHECK(a.acceptance_rate < 0.95);

  const auto init = asn::initial_state(y);
  for (double e : init.eta) CHECK(e >= 0.0);
  CHECK(init.omega2 > 0.0);

  const std::vector<double> one{1.0};
  CHECK_THROWS_AS(asn::run_chain(one, {}, cfg), ConfigError);
  CHECK_THROWS_AS(asn::run_chain(y, asn::PriorSpec{.psi0 = -1}, cfg), ConfigError);
}
