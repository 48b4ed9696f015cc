// Apache License, Version 2.0, refer to LICENSE.txt
//
// Small numerical helpers shared by the test suites. Deliberately
// independent of the library code they check.

#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <vector>

namespace testing_support {

inline constexpr double kPi = 3.14159265358979323846;

// Composite Simpson on [a, b] with n (even) panels.
inline double simpson(const std::function<double(double)>& f, double a, double b,
                      int n = 20000) {
  if (n % 2) ++n;
  const double h = (b - a) / n;
  double s = f(a) + f(b);
  for (int i = 1; i < n; ++i) s += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
  return s * h / 3.0;
}

// Gauss-Legendre nodes/weights on [-1, 1] via Newton on P_n.
inline void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w) {
  x.assign(n, 0.0);
  w.assign(n, 0.0);
  for (int i = 0; i < n; ++i) {
    double z = std::cos(kPi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = z;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (z * p1 - p0) / (z * z - 1.0);
      const double dz = p1 / dp;
      z -= dz;
      if (std::abs(dz) < 1e-15) break;
    }
    x[i] = z;
    w[i] = 2.0 / ((1.0 - z * z) * dp * dp);
  }
}

inline double phi_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

// One-sample KS statistic against a CDF.
inline double ks_one_sample(std::vector<double> xs, const std::function<double(double)>& cdf) {
  std::sort(xs.begin(), xs.end());
  const double n = static_cast<double>(xs.size());
  double d = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double f = cdf(xs[i]);
    d = std::max({d, std::abs(f - i / n), std::abs((i + 1) / n - f)});
  }
  return d;
}

// Two-sample KS statistic by brute force over the pooled points.
inline double ks_two_sample(std::vector<double> a, std::vector<double> b) {
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  std::vector<double> pts = a;
  pts.insert(pts.end(), b.begin(), b.end());
  double d = 0.0;
  for (double t : pts) {
    const double fa =
        static_cast<double>(std::upper_bound(a.begin(), a.end(), t) - a.begin()) / a.size();
    const double fb =
        static_cast<double>(std::upper_bound(b.begin(), b.end(), t) - b.begin()) / b.size();
    d = std::max(d, std::abs(fa - fb));
  }
  return d;
}

inline double mean(const std::vector<double>& v) {
  return std::accumulate(v.begin(), v.end(), 0.0) / v.size();
}

inline double variance(const std::vector<double>& v) {
  const double m = mean(v);
  double s = 0.0;
  for (double x : v) s += (x - m) * (x - m);
  return s / (v.size() - 1);
}

// Standard error of the mean of an autocorrelated series by batch means.
inline double batch_means_se(const std::vector<double>& v, std::size_t batches = 50) {
  const std::size_t len = v.size() / batches;
  std::vector<double> bm;
  for (std::size_t b = 0; b < batches; ++b) {
    double s = 0.0;
    for (std::size_t i = b * len; i < (b + 1) * len; ++i) s += v[i];
    bm.push_back(s / len);
  }
  return std::sqrt(variance(bm) / batches);
}

// Tabulated CDF of a density on [a, b] by cumulative Simpson panels.
struct TabulatedCdf {
  double a, h;
  std::vector<double> c;
  TabulatedCdf(const std::function<double(double)>& pdf, double lo, double hi, int n = 40000)
      : a(lo), h((hi - lo) / n), c(n + 1, 0.0) {
    for (int i = 0; i < n; ++i) {
      const double x0 = a + i * h;
      c[i + 1] = c[i] + h / 6.0 * (pdf(x0) + 4.0 * pdf(x0 + 0.5 * h) + pdf(x0 + h));
    }
  }
  double operator()(double x) const {
    if (x <= a) return 0.0;
    const double t = (x - a) / h;
    const std::size_t i = static_cast<std::size_t>(t);
    if (i + 1 >= c.size()) return c.back();
    return c[i] + (t - i) * (c[i + 1] - c[i]);
  }
};


}  // namespace testing_support
