#include <doctest.h>

#include <cmath>

#include "rsp/protocols.hpp"
#include "rsp/sampling.hpp"
#include "stats.hpp"

using namespace rsp;

namespace {
double td(const CMatrix& a, const CMatrix& b) { return 0.5 * hermitian_trace_norm(a - b); }
}  // namespace

TEST_SUITE("protocols") {

TEST_CASE("povm for the weyl set") {
  Rng r(1);
  for (std::size_t D : {2u, 3u}) {
    auto w = weyl_set(D);
    auto psi = haar_state(D, r);
    auto povm = rsp_povm(psi, w);
    CHECK(povm.size() == w.K() + 1);
    CHECK(povm.completeness_defect() < 1e-9);
    CHECK(povm.min_eigenvalue() > -1e-10);
    CHECK(povm.elements.back().cwiseAbs().maxCoeff() < 1e-12);
    // each A_k is rank one and triggered with probability 1/(K(1+eps)) on half of Phi_D
    for (std::size_t k = 0; k < w.K(); ++k) {
      auto ev = hermitian_eigenvalues(povm.elements[k]);
      CHECK(ev(1) < 1e-12);
      CHECK(povm.elements[k].trace().real() / double(D) == doctest::Approx(1.0 / double(w.K())).epsilon(1e-12));
    }
  }
}

TEST_CASE("non-randomizing singleton is rejected") {
  auto s = UnitarySet::explicit_set({Unitary::identity(2)}, 0.5);
  CHECK_THROWS_AS(rsp_povm(PureState::uniform(2), s), NotRandomizing);
}

TEST_CASE("protocol pi with the weyl set is exact") {
  Rng r(2);
  auto w = weyl_set(4);
  auto psi = haar_state(4, r);
  PiProtocol pi(psi, w);
  CHECK(pi.failure_probability() < 1e-12);
  for (int t = 0; t < 500; ++t) {
    auto tr = pi.run(r);
    REQUIRE(tr.success);
    CHECK(td(tr.receiver_output.matrix(), psi.projector()) <= 1e-9);
    CHECK(tr.cbits_sent == std::log2(17.0));
    CHECK(tr.ebits_consumed == 2.0);
  }
}

TEST_CASE("message uniformity on success") {
  Rng r(3);
  auto w = weyl_set(3);
  PiProtocol pi(haar_state(3, r), w);
  std::vector<double> counts(w.K(), 0.0);
  for (int t = 0; t < 9000; ++t) counts[*pi.run(r).message] += 1;
  CHECK(stats::chi2_uniform_pvalue(counts) > 0.01);
}

TEST_CASE("protocol pi with a haar set: failure rate and exact successes") {
  Rng r(4);
  auto set = haar_set(2, 600, 0.5, r);
  auto rep = verify_randomizing(set, 16, 4, r);
  REQUIRE(rep.pass);
  auto psi = haar_state(2, r);
  PiProtocol pi(psi, set);
  CHECK(pi.failure_probability() == doctest::Approx(1.0 / 3.0).epsilon(1e-9));
  const int N = 6000;
  int fails = 0;
  for (int t = 0; t < N; ++t) {
    auto tr = pi.run(r);
    if (!tr.success) {
      ++fails;
      CHECK(!tr.message);
    } else {
      CHECK(td(tr.receiver_output.matrix(), psi.projector()) <= 1e-9);
    }
  }
  CHECK(std::abs(double(fails) / N - 1.0 / 3) <= 4 * stats::binomial_sigma(1.0 / 3, N));

  // teleport fallback: always exact, expected cost formula
  auto tt = pi.run(r, OnFailure::Teleport);
  CHECK(tt.success);
  CHECK(tt.fidelity_to_target == doctest::Approx(1.0));
  CHECK(pi_expected_cbits_asymptotic(2, 0.5) == doctest::Approx(1 + 2 * 0.5 / 1.5).epsilon(1e-12));
  CHECK(pi_expected_cbits(2, 600, 0.5) == doctest::Approx(std::log2(601.0) + 2 * 0.5 / 1.5).epsilon(1e-12));
}

TEST_CASE("resource counters do not depend on outcomes") {
  Rng r(5);
  auto psi = haar_state(2, r);
  for (int t = 0; t < 50; ++t) {
    auto c = column_method(psi, 3, r);
    CHECK(c.cbits_sent == std::log2(3.0));
    CHECK(c.ebits_consumed == 3.0);
  }
}

TEST_CASE("column method") {
  Rng r(6);
  auto psi = haar_state(2, r);
  const int N = 20000;
  double zeros = 0, copies = 0, fails = 0;
  for (int t = 0; t < N; ++t) {
    auto c = column_method(psi, 3, r);
    for (int o : c.outcomes) {
      zeros += o == 0;
      copies += 1;
    }
    if (!c.success) {
      ++fails;
      CHECK(!c.message);
    } else {
      CHECK(td(c.receiver_output.matrix(), psi.projector()) <= 1e-9);
      CHECK(c.outcomes[*c.message] == 0);
    }
  }
  CHECK(std::abs(zeros / copies - 0.5) <= 4 * stats::binomial_sigma(0.5, copies));
  CHECK(column_failure_probability(2, 3) == doctest::Approx(0.125));
  CHECK(std::abs(fails / N - 0.125) <= 4 * stats::binomial_sigma(0.125, N));
  CHECK_THROWS_AS(column_method(psi, 0, r), InvalidArgument);
}

TEST_CASE("teleportation") {
  Rng r(7);
  auto plus = LabeledState::from_pure({{"Q", 2}}, PureState::uniform(2));
  auto t = teleport(plus, "Q", r);
  CHECK(t.transcript.cbits_sent == 2.0);
  CHECK(t.transcript.ebits_consumed == 1.0);
  CHECK(td(t.state.matrix(), plus.matrix()) <= 1e-12);

  auto bell = LabeledState::from_pure({{"R", 2}, {"Q", 2}}, max_entangled(2));
  for (int k = 0; k < 8; ++k) {
    auto tb = teleport(bell, "Q", r);
    CHECK(tb.state.parts() == bell.parts());
    CHECK(td(tb.state.matrix(), bell.matrix()) <= 1e-12);
  }

  auto four = LabeledState::from_pure({{"Q", 4}}, haar_state(4, r));
  auto t4 = teleport(four, "Q", r);
  CHECK(t4.transcript.cbits_sent == 4.0);
  CHECK(t4.transcript.ebits_consumed == 2.0);
  CHECK(t4.transcript.fidelity_to_target == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("net-only protocol") {
  Rng r(8);
  const double ep = 0.06;
  auto net = epsilon_net(2, net_parameter(ep), r, 400000, 5000);
  auto in = net_only_protocol(net.states[0], net, ep);
  CHECK(in.fidelity_to_target == doctest::Approx(1.0));
  CHECK(in.ebits_consumed == 0.0);
  CHECK(in.cbits_sent <= net_only_cbit_bound(2, ep));
  CHECK(net_only_cbit_bound(2, ep) == doctest::Approx(16.12).epsilon(1e-3));
  int ok = 0;
  const int N = 10000;
  for (int t = 0; t < N; ++t) ok += net_only_protocol(haar_state(2, r), net, ep).success;
  CHECK(double(ok) / N >= 0.999);
}

TEST_CASE("obliviousness") {
  Rng r(9);
  auto w = weyl_set(2);
  PiProtocol pw(haar_state(2, r), w);
  CHECK(obliviousness_gap_pi(pw).gap <= 1e-9);

  auto set = haar_set(2, 600, 0.5, r);
  PiProtocol ph(haar_state(2, r), set);
  auto g = obliviousness_gap_pi(ph);
  CHECK(g.gap <= 0.5);
  // simulator output is the average receiver state
  CMatrix avg = CMatrix::Zero(2, 2);
  for (const auto& m : pi_simulated_record(set, pi_output(ph))) avg += m;
  CHECK((avg - CMatrix::Identity(2, 2) / 2.0).cwiseAbs().maxCoeff() < 0.25);

  auto e = obliviousness_gap_empirical(ProtocolKind::Pi, haar_state(2, r), &w, 4, 4000, r);
  CHECK(e.gap <= 4 * e.sigma);
}

TEST_CASE("causality") {
  Rng r(10);
  for (std::size_t D : {2u, 4u}) {
    auto rep = causality_pi(weyl_set(D), 4000, r);
    CHECK(rep.frequency <= rep.upper + 4 * rep.sigma);
    CHECK(rep.frequency >= rep.lower - 4 * rep.sigma);
    auto col = causality_column(D, 3, 4000, r);
    CHECK(col.frequency <= col.upper + 4 * col.sigma);
    CHECK(col.frequency >= col.lower - 4 * col.sigma);
  }
}

TEST_CASE("formula cbit count") {
  for (std::size_t D : {2u, 16u})
    CHECK(pi_formula_cbits(D, 0.5) ==
          doctest::Approx(std::log2(double(D)) + 2 * std::log2(20.0) + std::log2(std::log2(40.0 * double(D)))).epsilon(1e-12));
}

}  // TEST_SUITE
