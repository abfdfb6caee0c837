#include "rsp/sampling.hpp"

#include <cmath>
#include <numbers>

namespace rsp {

namespace {

Complex complex_normal(Rng& rng, double variance) {
  double s = std::sqrt(variance / 2.0);
  double re = rng.normal() * s;
  double im = rng.normal() * s;
  return {re, im};
}

CMatrix ginibre(std::size_t rows, std::size_t cols, Rng& rng) {
  CMatrix g(rows, cols);
  for (Eigen::Index j = 0; j < g.cols(); ++j)
    for (Eigen::Index i = 0; i < g.rows(); ++i) g(i, j) = complex_normal(rng, 1.0);
  return g;
}

}  // namespace

GaussianVector gaussian_complex_vector(std::size_t d, double variance, Rng& rng) {
  detail::require(d >= 1, "gaussian vector needs d >= 1");
  detail::require(variance > 0 && std::isfinite(variance), "gaussian variance must be positive");
  CVector v(static_cast<Eigen::Index>(d));
  for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = complex_normal(rng, variance / double(d));
  return {std::move(v), variance};
}

Unitary haar_unitary(std::size_t dim, Rng& rng) {
  detail::require(dim >= 1, "unitary needs dimension >= 1");
  CMatrix g = ginibre(dim, dim, rng);
  Eigen::HouseholderQR<CMatrix> qr(g);
  CMatrix q = qr.householderQ();
  const CMatrix& r = qr.matrixQR();
  for (Eigen::Index j = 0; j < q.cols(); ++j) {
    Complex d = r(j, j);
    double a = std::abs(d);
    q.col(j) *= a > 0 ? d / a : Complex(1.0);
  }
  return Unitary(std::move(q));
}

PureState haar_state(std::size_t dim, Rng& rng) {
  detail::require(dim >= 1, "state needs dimension >= 1");
  return PureState::normalized(ginibre(dim, 1, rng).col(0));
}

DensityOperator random_density(std::size_t dim, std::size_t rank, Rng& rng) {
  detail::require(dim >= 1 && rank >= 1 && rank <= dim, "random_density: bad rank");
  CMatrix g = ginibre(dim, rank, rng);
  return DensityOperator::normalized(g * g.adjoint());
}

std::vector<double> dirichlet(std::size_t n, double alpha, Rng& rng) {
  std::vector<double> x(n);
  double s = 0;
  for (auto& v : x) s += (v = rng.gamma(alpha));
  for (auto& v : x) v /= s;
  return x;
}

double rate_function_gaussian_square(double x, double variance) {
  detail::require(variance > 0, "variance must be positive");
  if (x <= 0) return kInf;
  double r = x / variance;
  return 0.5 * (r - 1.0 - std::log(r));
}

double rate_function_numeric(double x, double variance) {
  detail::require(variance > 0, "variance must be positive");
  if (x <= 0) return kInf;
  // With s = 1 - 2 y variance = e^u the objective y x - Lambda(y) becomes
  // x (1 - e^u) / (2 variance) + u / 2, concave in u.
  auto obj = [&](double u) { return x * (1.0 - std::exp(u)) / (2.0 * variance) + 0.5 * u; };
  double lo = -60, hi = 60;
  const double g = (std::sqrt(5.0) - 1) / 2;
  double a = hi - g * (hi - lo), b = lo + g * (hi - lo);
  double fa = obj(a), fb = obj(b);
  for (int it = 0; it < 200 && hi - lo > 1e-13; ++it) {
    if (fa < fb) {
      lo = a;
      a = b;
      fa = fb;
      b = lo + g * (hi - lo);
      fb = obj(b);
    } else {
      hi = b;
      b = a;
      fb = fa;
      a = hi - g * (hi - lo);
      fa = obj(a);
    }
  }
  return obj(0.5 * (lo + hi));
}

double cramer_tail_bound(std::size_t n, double a, double variance) {
  detail::require(n >= 1, "N must be >= 1");
  // Lambda* is minimized at the mean, so the infimum over x >= a sits at a
  // when a is above the mean and is 0 otherwise.
  double rate = a <= variance ? 0.0 : rate_function_gaussian_square(a, variance);
  return std::exp2(-double(n) * rate / std::numbers::ln2);
}

double empirical_tail(std::size_t n, double a, double variance, std::size_t trials, Rng& rng) {
  detail::require(n >= 1 && trials >= 1, "N and trials must be >= 1");
  double sd = std::sqrt(variance);
  std::size_t hits = 0;
  for (std::size_t t = 0; t < trials; ++t) {
    double s = 0;
    for (std::size_t i = 0; i < n; ++i) {
      double y = rng.normal() * sd;
      s += y * y;
    }
    if (s / double(n) >= a) ++hits;
  }
  return double(hits) / double(trials);
}

double log_gap(double xi) { return xi - std::log1p(xi); }

double concentration_bound(std::size_t K, std::size_t p, double eps) {
  return 2.0 * std::exp2(-double(K) * double(p) * eps * eps / 6.0);
}

double concentration_frequency(std::size_t D, std::size_t p, std::size_t K, double eps,
                               std::size_t trials, Rng& rng) {
  detail::require(p >= 1 && p <= D && K >= 1, "concentration: bad parameters");
  // U|0> is a Haar-random state, so tr(U phi U* P) is its weight on P.
  double mean = double(p) / double(D);
  std::size_t hits = 0;
  for (std::size_t t = 0; t < trials; ++t) {
    double s = 0;
    for (std::size_t k = 0; k < K; ++k) s += haar_state(D, rng).amplitudes().head(Eigen::Index(p)).squaredNorm();
    if (std::abs(s / double(K) - mean) >= eps * mean) ++hits;
  }
  return double(hits) / double(trials);
}

}  // namespace rsp
