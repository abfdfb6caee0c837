#pragma once

// Small statistics helpers for the Monte Carlo tests.

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include <boost/math/distributions/chi_squared.hpp>

namespace stats {

inline double binomial_sigma(double p, double n) { return std::sqrt(std::max(p * (1 - p), 0.0) / n); }

// Two-sample Kolmogorov-Smirnov statistic.
inline double ks_statistic(std::vector<double> a, std::vector<double> b) {
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  std::size_t i = 0, j = 0;
  double d = 0;
  while (i < a.size() && j < b.size()) {
    double x = std::min(a[i], b[j]);
    while (i < a.size() && a[i] <= x) ++i;
    while (j < b.size() && b[j] <= x) ++j;
    d = std::max(d, std::abs(double(i) / double(a.size()) - double(j) / double(b.size())));
  }
  return d;
}

// Critical value at the 1% level (c(alpha) = 1.628).
inline double ks_critical(std::size_t n, std::size_t m, double c = 1.628) {
  return c * std::sqrt(double(n + m) / (double(n) * double(m)));
}

// p-value of Pearson's test against the uniform distribution.
inline double chi2_uniform_pvalue(const std::vector<double>& counts) {
  double total = std::accumulate(counts.begin(), counts.end(), 0.0);
  double e = total / double(counts.size()), x2 = 0;
  for (double c : counts) x2 += (c - e) * (c - e) / e;
  boost::math::chi_squared dist(double(counts.size() - 1));
  return boost::math::cdf(boost::math::complement(dist, x2));
}

inline std::vector<double> ranks(const std::vector<double>& x) {
  std::vector<std::size_t> idx(x.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return x[a] < x[b]; });
  std::vector<double> r(x.size());
  for (std::size_t k = 0; k < idx.size();) {
    std::size_t e = k;
    while (e + 1 < idx.size() && x[idx[e + 1]] == x[idx[k]]) ++e;
    for (std::size_t t = k; t <= e; ++t) r[idx[t]] = 0.5 * double(k + e) + 1;
    k = e + 1;
  }
  return r;
}

inline double spearman(const std::vector<double>& x, const std::vector<double>& y) {
  auto rx = ranks(x), ry = ranks(y);
  double mx = std::accumulate(rx.begin(), rx.end(), 0.0) / double(rx.size());
  double my = std::accumulate(ry.begin(), ry.end(), 0.0) / double(ry.size());
  double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t k = 0; k < rx.size(); ++k) {
    sxy += (rx[k] - mx) * (ry[k] - my);
    sxx += (rx[k] - mx) * (rx[k] - mx);
    syy += (ry[k] - my) * (ry[k] - my);
  }
  return sxy / std::sqrt(sxx * syy);
}

}  // namespace stats
