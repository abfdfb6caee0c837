#include <doctest.h>

#include <cmath>
#include <map>

#include "rsp/sampling.hpp"
#include "rsp/typicality.hpp"
#include "stats.hpp"

using namespace rsp;

namespace {

CMatrix diag(std::initializer_list<double> v) {
  CMatrix m = CMatrix::Zero(Eigen::Index(v.size()), Eigen::Index(v.size()));
  Eigen::Index k = 0;
  for (double x : v) m(k, k) = x, ++k;
  return m;
}

// All words over [0, a) of length n, by counting in base a.
std::vector<Word> all_words(std::size_t n, std::size_t a) {
  std::vector<Word> out;
  Word w(n, 0);
  for (;;) {
    out.push_back(w);
    std::size_t i = 0;
    while (i < n && ++w[i] == a) w[i++] = 0;
    if (i == n) break;
  }
  return out;
}

double idempotence_defect(const CMatrix& p) { return (p * p - p).cwiseAbs().maxCoeff(); }

}  // namespace

TEST_SUITE("typicality") {

TEST_CASE("types and class sizes") {
  CHECK(type_class_size(type_of({0, 0, 0}, 2)) == 1);
  CHECK(type_class_size(type_of({0, 1, 0, 1}, 2)) == 6);
  CHECK(type_of({2, 0, 2}, 3).counts == std::vector<std::size_t>{1, 0, 2});
  auto r = representative(type_of({2, 0, 2, 1}, 3));
  CHECK(r == Word{0, 1, 2, 2});
  auto t = nearest_type({0.5, 0.3, 0.2}, 7);
  std::size_t s = 0;
  for (auto c : t.counts) s += c;
  CHECK(s == 7);
}

TEST_CASE("class sizes by enumeration and the sandwich bound") {
  for (std::size_t a = 1; a <= 3; ++a)
    for (std::size_t n = 1; n <= 10; ++n) {
      if (a == 3 && n > 8) continue;  // same bound, shorter run
      std::map<std::vector<std::size_t>, std::uint64_t> counted;
      for (const auto& w : all_words(n, a)) ++counted[type_of(w, a).counts];
      auto types = all_types(n, a);
      CHECK(types.size() == counted.size());
      for (const auto& t : types) {
        auto size = type_class_size(t);
        CHECK(size == counted[t.counts]);
        auto p = t.distribution();
        double h = shannon_entropy(p), sz = double(size);
        CHECK(std::pow(double(n + 1), -double(a)) * std::exp2(double(n) * h) <= sz * (1 + 1e-12));
        CHECK(sz <= std::exp2(double(n) * h) * (1 + 1e-12));
      }
    }
}

TEST_CASE("typical projector examples") {
  auto mix = typical_projector(DensityOperator::maximally_mixed(3), 3, 0.0);
  CHECK(mix.rank() == 27);
  auto pure = typical_projector(DensityOperator::from_pure(PureState::uniform(2)), 4, 0.1);
  CHECK(pure.rank() == 1);
  CHECK(pure.probability() == doctest::Approx(1.0));

  DensityOperator rho(diag({0.75, 0.25}));
  auto p = typical_projector(rho, 4, 0.1);
  const double S = 0.8112781244591328;
  std::size_t rank = 0;
  for (const auto& w : all_words(4, 2)) {
    double lp = 0;
    for (auto x : w) lp += std::log2(x == 0 ? 0.75 : 0.25);
    if (std::abs(-lp / 4 - S) <= 0.1) ++rank;
  }
  CHECK(p.rank() == rank);
  CMatrix m = p.matrix();
  CHECK(idempotence_defect(m) < 1e-10);
  CHECK((m - m.adjoint()).cwiseAbs().maxCoeff() < 1e-12);
  CMatrix r4 = kron(kron(rho.matrix(), rho.matrix()), kron(rho.matrix(), rho.matrix()));
  CHECK((m * r4 - r4 * m).cwiseAbs().maxCoeff() < 1e-10);
  CHECK(p.probability() == doctest::Approx((r4 * m).trace().real()).epsilon(1e-12));
}

TEST_CASE("typical projector of a non-diagonal state commutes with the power") {
  Rng r(1);
  auto rho = random_density(2, 2, r);
  auto p = typical_projector(rho, 5, 0.2);
  CMatrix m = p.matrix();
  CMatrix rn = rho.matrix();
  for (int k = 1; k < 5; ++k) rn = kron(rn, rho.matrix());
  CHECK(idempotence_defect(m) < 1e-10);
  CHECK((m * rn - rn * m).cwiseAbs().maxCoeff() < 1e-10);
  CHECK(double(p.rank()) == doctest::Approx(m.trace().real()).epsilon(1e-10));
}

TEST_CASE("conditionally typical projector examples") {
  auto pure = DensityOperator::from_pure(PureState::basis(2, 1));
  CHECK(cond_typical_projector({pure, pure}, {0, 1, 1}, 0.1).rank() == 1);
  auto mm = DensityOperator::maximally_mixed(2);
  CHECK(cond_typical_projector({mm, mm}, {0, 1, 0}, 0.0).rank() == 8);

  DensityOperator w0(diag({0.9, 0.1})), w1(diag({0.5, 0.5}));
  auto p = cond_typical_projector({w0, w1}, {0, 1}, 0.3);
  const double target = 0.5 * (shannon_entropy(std::vector<double>{0.9, 0.1}) + 1.0);
  std::size_t rank = 0;
  for (double a : {0.9, 0.1})
    for (double b : {0.5, 0.5})
      if (std::abs(-0.5 * std::log2(a * b) - target) <= 0.3) ++rank;
  CHECK(p.rank() == rank);
}

TEST_CASE("rank bounds at n up to 10") {
  DensityOperator rho(diag({0.75, 0.25}));
  for (std::size_t n = 1; n <= 10; ++n) {
    auto p = typical_projector(rho, n, 0.2);
    auto b = rank_bounds(p);
    CHECK(b.holds);
    CHECK(double(p.rank()) <= b.upper);
    CHECK(double(p.rank()) >= b.lower);
  }
}

TEST_CASE("operator law of large numbers") {
  // commuting case against the classical calculation
  DensityOperator w0(diag({0.9, 0.1})), w1(diag({0.6, 0.4}));
  auto rep = operator_lln_check({w0, w1}, {0.5, 0.5}, 2, 8, 0.15, 0.1);
  for (std::size_t k = 0; k < rep.n.size(); ++k) {
    std::size_t n = rep.n[k];
    auto t = nearest_type({0.5, 0.5}, n);
    Word I = representative(t);
    auto q = t.distribution();
    double a0 = q[0] * 0.9 + q[1] * 0.6, a1 = 1 - a0;
    double S = shannon_entropy(std::vector<double>{a0, a1});
    double tr = 0;
    for (const auto& w : all_words(n, 2)) {
      double lr = 0, pw = 1;
      for (std::size_t j = 0; j < n; ++j) {
        lr += std::log2(w[j] == 0 ? a0 : a1);
        double e = I[j] == 0 ? (w[j] == 0 ? 0.9 : 0.1) : (w[j] == 0 ? 0.6 : 0.4);
        pw *= e;
      }
      if (std::abs(-lr / double(n) - S) <= 0.15) tr += pw;
    }
    CHECK(rep.trace[k] == doctest::Approx(tr).epsilon(1e-9));
  }

  // non-commuting pair
  DensityOperator v0 = DensityOperator::from_pure(PureState::basis(2, 0));
  DensityOperator v1(0.5 * PureState::uniform(2).projector() + 0.5 * diag({0.5, 0.5}));
  auto nc = operator_lln_check({v0, v1}, {0.5, 0.5}, 2, 10, 0.3, 0.2);
  CHECK(nc.trace.back() > nc.trace.front());
  for (double t : nc.trace) CHECK((t >= 0 && t <= 1 + 1e-12));
}

TEST_CASE("operator chernoff bound") {
  Rng r(3);
  CMatrix half = CMatrix::Identity(2, 2) / 2.0;
  auto det = operator_chernoff_check([&](Rng&) { return half; }, half, 10, 0.3, 200, r);
  CHECK(det.frequency == 0.0);
  CHECK_THROWS_AS(operator_chernoff_check([&](Rng&) { return half; }, half, 10, 0.6, 10, r), InvalidArgument);

  const std::size_t T = 2000;
  auto rep = operator_chernoff_check([](Rng& g) { return haar_state(2, g).projector(); }, half, 64, 0.5, T, r);
  CHECK(rep.alpha == doctest::Approx(0.5));
  CHECK(rep.bound == doctest::Approx(operator_chernoff_bound(2, 64, 0.5, 0.5)));
  CHECK(rep.bound < 1.0);
  CHECK(rep.frequency <= rep.bound + 4 * stats::binomial_sigma(rep.bound, double(T)));
}

TEST_CASE("gentle measurement") {
  Rng r(4);
  auto rho = random_density(3, 2, r);
  CHECK(gentle_measurement_check(rho, CMatrix::Identity(3, 3)).lhs == doctest::Approx(0.0).epsilon(1e-12));
  // projector onto the support
  auto e = hermitian_eigen(rho.matrix());
  CMatrix supp = e.vectors.leftCols(2) * e.vectors.leftCols(2).adjoint();
  CHECK(gentle_measurement_check(rho, supp).lhs < 1e-9);
  for (int t = 0; t < 1000; ++t) {
    std::size_t D = 2 + std::size_t(t) % 7;
    auto s = random_density(D, 1 + std::size_t(t) % D, r);
    CMatrix u = haar_unitary(D, r).matrix();
    CMatrix d = CMatrix::Zero(Eigen::Index(D), Eigen::Index(D));
    for (Eigen::Index k = 0; k < Eigen::Index(D); ++k) d(k, k) = r.uniform();
    CHECK(gentle_measurement_check(s, u * d * u.adjoint()).pass);
  }
}

}  // TEST_SUITE
