// Acceptance runner: one PASS/FAIL line per criterion.
//   acceptance                 all criteria
//   acceptance --criterion N   only criterion N; exit status 1 on failure

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "rsp/entangled.hpp"
#include "rsp/protocols.hpp"
#include "rsp/randomize.hpp"
#include "rsp/sampling.hpp"
#include "rsp/tradeoff.hpp"
#include "rsp/typicality.hpp"
#include "stats.hpp"

using namespace rsp;

namespace {

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  // Records a failed check; returns ok for chaining.
  bool check(bool ok, const std::string& what) {
    if (!ok) {
      if (pass) detail << "first failure: " << what << "; ";
      pass = false;
    }
    return ok;
  }
};

double td(const CMatrix& a, const CMatrix& b) { return 0.5 * hermitian_trace_norm(a - b); }

std::string fmt(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

PureState qubit(double theta, double phi = 0) {
  CVector v(2);
  v << std::cos(theta / 2), std::polar(std::sin(theta / 2), phi);
  return PureState::normalized(v);
}

// The fixed qubit ensembles with two members.
std::vector<std::pair<std::string, Ensemble>> qubit_ensembles() {
  Rng r(20240611);
  return {
      {"{|0>,|+>} uniform", Ensemble({0.5, 0.5}, {PureState::basis(2, 0), PureState::uniform(2)})},
      {"near-orthogonal (0.3,0.7)", Ensemble({0.3, 0.7}, {PureState::basis(2, 0), qubit(M_PI - 0.2)})},
      {"close pair uniform", Ensemble({0.5, 0.5}, {PureState::basis(2, 0), qubit(M_PI / 4)})},
      {"{|+>,|+i>} (0.6,0.4)", Ensemble({0.6, 0.4}, {qubit(M_PI / 2), qubit(M_PI / 2, M_PI / 2)})},
      {"haar pair (0.25,0.75)", Ensemble({0.25, 0.75}, {haar_state(2, r), haar_state(2, r)})},
  };
}

std::vector<std::pair<std::string, BipartiteEnsemble>> bipartite_ensembles() {
  CVector a(4), b(4);
  a << std::sqrt(3.0) / 2, 0, 0, 0.5;
  b << std::sqrt(3.0 / 8), std::sqrt(3.0 / 8), std::sqrt(1.0 / 8), -std::sqrt(1.0 / 8);
  CVector prod = kron(PureState::basis(2, 0).amplitudes(), PureState::uniform(2).amplitudes());
  Rng r(977);
  return {
      {"partly entangled pair", BipartiteEnsemble({0.5, 0.5}, {PureState(a), PureState(b)}, 2, 2)},
      {"bell and product (0.4,0.6)", BipartiteEnsemble({0.4, 0.6}, {max_entangled(2), PureState(prod)}, 2, 2)},
      {"haar pair (0.7,0.3)", BipartiteEnsemble({0.7, 0.3}, {haar_state(4, r), haar_state(4, r)}, 2, 2)},
  };
}

std::vector<double> linspace(double a, double b, std::size_t n) {
  std::vector<double> v;
  for (std::size_t k = 0; k < n; ++k) v.push_back(n == 1 ? a : a + (b - a) * double(k) / double(n - 1));
  return v;
}

// ---------------------------------------------------------------------------

Outcome c1_pi_exact() {
  Outcome o;
  Rng rng(1);
  double worst = 0;
  std::size_t failures = 0;
  for (std::size_t D : {2u, 4u, 8u}) {
    auto set = weyl_set(D);
    PiProtocol pi(haar_state(D, rng), set);
    for (int t = 0; t < 10000; ++t) {
      Transcript tr = pi.run(rng);
      if (!tr.success) ++failures;
      worst = std::max(worst, td(tr.receiver_output.matrix(), pi.target().projector()));
    }
  }
  o.check(failures == 0, "failures in Weyl-set runs");
  o.check(worst <= 1e-9, "output away from target");
  o.detail << "failures=" << failures << " max_trace_distance=" << fmt(worst);
  return o;
}

Outcome c2_pi_failure_rate() {
  Outcome o;
  Rng rng(2);
  auto set = build_randomizing_set(2, 0.5, rng, 3, 32, 4);
  PiProtocol pi(haar_state(2, rng), set);
  const std::size_t N = 100000;
  std::size_t fails = 0;
  double worst = 0;
  for (std::size_t t = 0; t < N; ++t) {
    Transcript tr = pi.run(rng);
    if (!tr.success) ++fails;
    else worst = std::max(worst, td(tr.receiver_output.matrix(), pi.target().projector()));
  }
  double f = double(fails) / double(N), s = stats::binomial_sigma(1.0 / 3, double(N));
  o.check(std::abs(f - 1.0 / 3) <= 4 * s, "failure frequency outside 4 sigma of 1/3");
  o.check(worst <= 1e-9, "successful output not exact");
  o.detail << "K=" << set.K() << " failure_freq=" << fmt(f) << " (1/3 +- " << fmt(4 * s) << ") max_td=" << fmt(worst);
  return o;
}

Outcome c3_column() {
  Outcome o;
  Rng rng(3);
  const std::size_t N = 20000;
  double worst_td = 0, worst_z0 = 0, worst_zf = 0;
  for (std::size_t D : {2u, 4u})
    for (std::size_t K : {1u, 3u, 8u}) {
      auto psi = haar_state(D, rng);
      double zeros = 0, copies = 0, fails = 0;
      for (std::size_t t = 0; t < N; ++t) {
        Transcript tr = column_method(psi, K, rng);
        for (int x : tr.outcomes) zeros += x == 0, copies += 1;
        if (!tr.success) fails += 1;
        else worst_td = std::max(worst_td, td(tr.receiver_output.matrix(), psi.projector()));
      }
      double p0 = 1.0 / double(D), pf = column_failure_probability(D, K);
      double z0 = std::abs(zeros / copies - p0) / stats::binomial_sigma(p0, copies);
      double zf = std::abs(fails / double(N) - pf) / stats::binomial_sigma(pf, double(N));
      worst_z0 = std::max(worst_z0, z0);
      worst_zf = std::max(worst_zf, zf);
      o.check(z0 <= 4, "outcome-0 frequency D=" + std::to_string(D) + " K=" + std::to_string(K));
      o.check(zf <= 4, "failure frequency D=" + std::to_string(D) + " K=" + std::to_string(K));
    }
  o.check(worst_td <= 1e-9, "conditional state not exact");
  o.detail << "max |z| outcome-0=" << fmt(worst_z0) << " failure=" << fmt(worst_zf) << " max_td=" << fmt(worst_td);
  return o;
}

Outcome c4_resources() {
  Outcome o;
  for (double eps : {0.1, 0.5}) {
    double prev = INFINITY;
    for (std::size_t D = 2; D <= 64; ++D) {
      double L = std::log2(double(D));
      double ratio = pi_formula_cbits(D, eps) / L;
      double formula = 1 + (2 * std::log2(10 / eps) + std::log2(std::log2(20 * double(D) / eps))) / L;
      o.check(std::abs(ratio - formula) <= 1e-12, "ratio differs from formula");
      o.check(ratio < prev, "ratio not decreasing at D=" + std::to_string(D));
      o.check(ratio > 1, "ratio below 1");
      prev = ratio;
    }
    o.detail << "eps=" << eps << ": ratio(2)=" << fmt(pi_formula_cbits(2, eps)) << " ratio(64)="
             << fmt(pi_formula_cbits(64, eps) / 6) << "; ";
  }
  return o;
}

Outcome c5_randomization() {
  Outcome o;
  Rng rng(5);
  double worst = 0;
  for (std::size_t D = 1; D <= 5; ++D) {
    auto w = weyl_set(D);
    CMatrix mix = CMatrix::Identity(Eigen::Index(D), Eigen::Index(D)) / double(D);
    for (int t = 0; t < 100; ++t) {
      auto rho = random_density(D, 1 + std::size_t(t) % D, rng);
      worst = std::max(worst, hermitian_trace_norm(twirl(w, rho.matrix()) - mix));
    }
    worst = std::max(worst, verify_randomizing(w, 8, 2, rng).dev_max);
  }
  o.check(worst <= 1e-10, "Weyl set not exact");
  o.detail << "weyl max residual=" << fmt(worst);
  for (std::size_t D : {2u, 4u}) {
    try {
      auto s = build_randomizing_set(D, 0.5, rng, 3, 32, 4);
      auto rep = verify_randomizing(s, 32, 4, rng);
      o.check(rep.pass, "Haar set fails verification at D=" + std::to_string(D));
      o.detail << "; D=" << D << " K=" << s.K() << " dev_max=" << fmt(rep.dev_max) << " (tol " << fmt(0.5 / double(D)) << ")";
    } catch (const RetriesExhausted&) {
      o.check(false, "no passing Haar set within 3 retries at D=" + std::to_string(D));
    }
  }
  return o;
}

Outcome c6_solver_vs_oracle() {
  Outcome o;
  SolverParams prm;
  double worst_gap = 0, worst_dom = -INFINITY, worst_end = 0, worst_chain = 0;
  for (const auto& [name, e] : qubit_ensembles()) {
    CurveProblem pb(e, CurveKind::Rsp);
    const double HA = shannon_entropy(e.probs);
    auto Rs = linspace(pb.min_rate(), HA, 10);
    auto orc = brute_force_oracle(pb, Rs, 0.05);
    for (std::size_t k = 0; k < Rs.size(); ++k) {
      TradeoffPoint pt = solve_curve(pb, Rs[k], prm);
      if (!o.check(pt.feasible(), name + ": solver infeasible")) continue;
      double gap = std::abs(pt.value - orc[k]);
      worst_gap = std::max(worst_gap, gap);
      worst_dom = std::max(worst_dom, pt.value - orc[k]);
      o.check(gap <= 2 * 0.05 * 3, name + ": solver/oracle gap");
      auto q = eval_qct_point(e, *pt.channel);
      auto r = eval_rsp_point(e, *pt.channel);
      worst_chain = std::max(worst_chain, std::abs(r.R - (q.R + q.Q)));
    }
    double end = solve_curve(pb, HA, prm).value;
    worst_end = std::max(worst_end, end);
    o.check(end <= 1e-3, name + ": value at R = S(A)");
  }
  o.check(worst_chain <= 1e-9, "chain rule residual");

  // finer grid on three points of the first ensemble
  auto e0 = qubit_ensembles().front().second;
  CurveProblem p0(e0, CurveKind::Rsp);
  std::vector<double> spot{0.65, 0.8, 0.95};
  auto fine = brute_force_oracle(p0, spot, 0.01);
  double worst_fine = 0;
  for (std::size_t k = 0; k < spot.size(); ++k) {
    double v = solve_curve(p0, spot[k], prm).value;
    worst_fine = std::max(worst_fine, std::abs(v - fine[k]));
  }
  o.check(worst_fine <= 0.05, "grid-0.01 spot points");
  o.detail << "max|solver-oracle|=" << fmt(worst_gap) << " max(solver-oracle)=" << fmt(worst_dom)
           << " fine-grid max gap=" << fmt(worst_fine) << " max value at S(A)=" << fmt(worst_end)
           << " chain residual=" << fmt(worst_chain);
  return o;
}

Outcome c7_curve_properties() {
  Outcome o;
  SolverParams prm;
  const double tol = prm.tolerance;
  double worst_mono = -INFINITY, worst_conv = -INFINITY;
  auto sweep = [&](const CurveProblem& pb, double lo, double hi, const std::string& name) {
    auto Rs = linspace(lo, hi, 10);
    std::vector<double> v;
    for (double R : Rs) v.push_back(solve_curve(pb, R, prm).value);
    for (std::size_t k = 1; k < v.size(); ++k) {
      worst_mono = std::max(worst_mono, v[k] - v[k - 1]);
      o.check(v[k] <= v[k - 1] + tol, name + ": not monotone");
    }
    for (std::size_t k = 1; k + 1 < v.size(); ++k) {
      worst_conv = std::max(worst_conv, v[k] - 0.5 * (v[k - 1] + v[k + 1]));
      o.check(v[k] <= 0.5 * (v[k - 1] + v[k + 1]) + tol, name + ": not convex");
    }
  };
  for (const auto& [name, e] : qubit_ensembles()) {
    const double HA = shannon_entropy(e.probs);
    CurveProblem q(e, CurveKind::Qct), r(e, CurveKind::Rsp);
    sweep(q, 0.0, HA, name + " qct");
    sweep(r, r.min_rate(), HA, name + " rsp");
  }
  for (const auto& [name, b] : bipartite_ensembles()) {
    CurveProblem pe(b, CurveKind::Entangled);
    sweep(pe, pe.min_rate(), shannon_entropy(b.probs), name + " entangled");
  }
  o.detail << "max increase=" << fmt(worst_mono) << " max midpoint excess=" << fmt(worst_conv);

  // Additivity, upper-bound direction via product channels on E x E.
  double worst_res = 0;
  auto ens = qubit_ensembles();
  for (std::size_t k : {0u, 2u}) {
    const auto& e = ens[k].second;
    CurveProblem pb(e, CurveKind::Rsp);
    double R = 2 * (0.5 * (pb.min_rate() + shannon_entropy(e.probs)));
    auto rep = additivity_check(e, e, R, CurveKind::Rsp, prm, 4);
    worst_res = std::max(worst_res, rep.product_residual);
    o.check(rep.upper_ok, ens[k].first + ": product channel does not achieve the split sum");
    o.check(rep.lhs <= rep.rhs + tol, ens[k].first + ": product-ensemble value above the split sum");
    o.detail << "; " << ens[k].first << " lhs=" << fmt(rep.lhs) << " rhs=" << fmt(rep.rhs);
  }
  o.detail << "; product residual=" << fmt(worst_res);
  return o;
}

Outcome c8_entangled_endpoints() {
  Outcome o;
  SolverParams prm;
  for (const auto& [name, b] : bipartite_ensembles()) {
    auto ep = entangled_endpoints(b);
    CurveProblem pb(b, CurveKind::Entangled);
    const double R0 = ep.R_start + 0.01;
    double v = solve_curve(pb, R0, prm).value;
    double orc = brute_force_oracle(pb, std::vector<double>{R0}, 0.05).front();
    o.check(std::abs(v - ep.E_start) <= 0.05, name + ": value near the start");
    o.check(std::abs(orc - ep.E_start) <= 0.05, name + ": oracle near the start");
    o.check(v <= orc + 1e-9, name + ": solver above oracle");
    double lowest = INFINITY;
    for (double R : linspace(ep.R_start, ep.R_floor + 0.5, 8)) {
      double x = solve_curve(pb, R, prm).value;
      lowest = std::min(lowest, x);
      o.check(x >= ep.E_floor - 1e-6, name + ": below the floor");
    }
    o.detail << name << ": chi=" << fmt(ep.R_start) << " E_start=" << fmt(ep.E_start) << " value=" << fmt(v)
             << " oracle=" << fmt(orc) << " floor=" << fmt(ep.E_floor) << " min=" << fmt(lowest) << "; ";
  }
  return o;
}

Outcome c9_typicality() {
  Outcome o;
  std::size_t types = 0;
  for (std::size_t a = 1; a <= 3; ++a)
    for (std::size_t n = 1; n <= 10; ++n)
      for (const auto& t : all_types(n, a)) {
        double h = shannon_entropy(t.distribution()), sz = double(type_class_size(t));
        o.check(std::pow(double(n + 1), -double(a)) * std::exp2(double(n) * h) <= sz * (1 + 1e-12), "sandwich lower");
        o.check(sz <= std::exp2(double(n) * h) * (1 + 1e-12), "sandwich upper");
        ++types;
      }
  o.detail << types << " types checked; ";

  CMatrix d = CMatrix::Zero(2, 2);
  d(0, 0) = 0.75;
  d(1, 1) = 0.25;
  DensityOperator rho(d);
  const double S = von_neumann_entropy(rho), eps = 0.2;
  for (double delta : {0.2, 0.35, 0.5}) {
    std::vector<TypicalProjector> ps;
    for (std::size_t n = 1; n <= 10; ++n) ps.push_back(typical_projector(rho, n, delta));
    std::size_t threshold = 0;
    for (std::size_t n = 10; n >= 1 && ps[n - 1].probability() >= 1 - eps; --n) threshold = n;
    for (std::size_t n = 1; n <= 10; ++n) {
      const auto& p = ps[n - 1];
      auto b = rank_bounds(p);
      o.check(b.holds && double(p.rank()) <= std::exp2(double(n) * (S + delta)) * (1 + 1e-12), "rank upper bound");
      if (threshold && n >= threshold)
        o.check(double(p.rank()) >= (1 - eps) * std::exp2(double(n) * (S - delta)), "rank lower bound past threshold");
    }
    o.detail << "delta=" << delta << " threshold(eps=0.2)=" << (threshold ? std::to_string(threshold) : "none<=10") << "; ";
  }

  double worst_large = INFINITY, worst_small = INFINITY;
  for (const auto& [name, b] : bipartite_ensembles())
    for (std::size_t n = 2; n <= 8; n += 2) {
      // a word whose type is as close to p as n allows
      Word I = representative(nearest_type(b.probs, n));
      auto c = pi_chain(I, b, 0.5);
      worst_large = std::min(worst_large, c.large_margin);
      worst_small = std::min(worst_small, c.small_margin);
      o.check(c.large_margin >= -1e-12, name + ": tr pi below 1 - 2 eps");
      o.check(c.small_margin >= -1e-10, name + ": pi not below the scaled projector");
    }
  o.detail << "min large margin=" << fmt(worst_large) << " min small margin=" << fmt(worst_small);
  return o;
}

Outcome c10_concentration() {
  Outcome o;
  Rng rng(10);
  const std::size_t T = 10000;
  for (auto [p, K] : std::vector<std::pair<std::size_t, std::size_t>>{{1, 64}, {4, 16}, {4, 64}}) {
    double f = concentration_frequency(8, p, K, 0.5, T, rng);
    double b = std::min(1.0, concentration_bound(K, p, 0.5));
    o.check(f <= b + 4 * stats::binomial_sigma(b, double(T)), "unitary average tail");
    o.detail << "p=" << p << ",K=" << K << ": freq=" << fmt(f) << " bound=" << fmt(b) << "; ";
  }
  CMatrix half = CMatrix::Identity(2, 2) / 2.0;
  for (std::size_t M : {32u, 64u}) {
    auto rep = operator_chernoff_check([](Rng& g) { return haar_state(2, g).projector(); }, half, M, 0.5, T, rng);
    double b = std::min(1.0, rep.bound);
    o.check(rep.frequency <= b + 4 * stats::binomial_sigma(b, double(T)), "operator chernoff");
    o.detail << "chernoff M=" << M << ": freq=" << fmt(rep.frequency) << " bound=" << fmt(rep.bound) << "; ";
  }
  std::size_t gentle_fail = 0;
  for (int t = 0; t < 1000; ++t) {
    std::size_t D = 2 + std::size_t(t) % 7;
    auto s = random_density(D, 1 + std::size_t(t) % D, rng);
    CMatrix u = haar_unitary(D, rng).matrix();
    CMatrix x = CMatrix::Zero(Eigen::Index(D), Eigen::Index(D));
    for (Eigen::Index k = 0; k < Eigen::Index(D); ++k) x(k, k) = rng.uniform();
    if (!gentle_measurement_check(s, u * x * u.adjoint()).pass) ++gentle_fail;
  }
  o.check(gentle_fail == 0, "gentle measurement");
  double worst_rate = 0;
  for (int k = 0; k < 100; ++k) {
    double var = k % 2 ? 2.0 : 1.0, x = var * (0.05 + 0.05 * k);
    double a = rate_function_gaussian_square(x, var), b = rate_function_numeric(x, var);
    worst_rate = std::max(worst_rate, std::abs(a - b));
  }
  o.check(worst_rate <= 1e-6, "rate function vs numeric sup");
  double worst_gap = INFINITY;
  for (int k = 0; k <= 10000; ++k) {
    double xi = -1.0 + 2.0 * k / 10000.0;
    worst_gap = std::min(worst_gap, log_gap(xi) - xi * xi / 6);
  }
  o.check(worst_gap >= -1e-15, "taylor bound");
  o.detail << "gentle failures=" << gentle_fail << " rate max diff=" << fmt(worst_rate) << " min(log gap - xi^2/6)="
           << fmt(worst_gap);
  return o;
}

Outcome c11_obliviousness() {
  Outcome o;
  Rng rng(11);
  double weyl = 0;
  for (std::size_t D : {2u, 3u, 4u}) {
    auto w = weyl_set(D);
    weyl = std::max(weyl, obliviousness_gap_pi(PiProtocol(haar_state(D, rng), w)).gap);
  }
  o.check(weyl <= 1e-9, "Weyl gap");
  auto set = build_randomizing_set(2, 0.5, rng, 3, 32, 4);
  PiProtocol ph(haar_state(2, rng), set);
  auto exact = obliviousness_gap_pi(ph);
  o.check(exact.gap <= 0.5, "Haar-set exact gap");
  auto emp = obliviousness_gap_empirical(ProtocolKind::Pi, ph.target(), &set, set.K(), 20000, rng);
  o.check(emp.gap <= 0.5 + 4 * emp.sigma, "Haar-set empirical gap");
  o.detail << "weyl=" << fmt(weyl) << " haar exact=" << fmt(exact.gap) << " empirical=" << fmt(emp.gap) << "+-"
           << fmt(emp.sigma) << "; ";
  for (std::size_t K : {1u, 3u}) {
    auto psi = haar_state(2, rng);
    auto c = obliviousness_gap_column(psi, K);
    auto ce = obliviousness_gap_empirical(ProtocolKind::Column, psi, nullptr, K, 20000, rng);
    o.check(c.gap <= c.bound + 1e-12, "column exact gap above eps at K=" + std::to_string(K));
    o.check(ce.gap <= ce.bound + 4 * ce.sigma, "column empirical gap above eps + 4 sigma at K=" + std::to_string(K));
    o.detail << "column D=2 K=" << K << " exact=" << fmt(c.gap) << " empirical=" << fmt(ce.gap) << " eps=" << fmt(c.bound)
             << "; ";
  }
  return o;
}

Outcome c12_bounds() {
  Outcome o;
  double worst = 0;
  for (std::size_t D : {2u, 3u, 4u, 8u, 64u, 1024u})
    for (double F : {1.0, 0.9, 0.5, 0.25, 0.01}) worst = std::max(worst, std::abs(causality_bound(D, F) - (std::log2(double(D)) + std::log2(F))));
  o.check(std::abs(causality_bound(2, 0.5)) <= 1e-12, "D=2 F=0.5");
  o.check(std::abs(causality_bound(4, 0.9) - 1.8479969065549500) <= 1e-12, "D=4 F=0.9");
  for (std::size_t D : {8u, 64u, 1024u})
    for (std::size_t S : {std::size_t(1), D / 4, D / 2})
      for (double F : {0.6, 0.9, 0.99, 1.0}) {
        double q = double(S) / double(D);
        if (q >= F) continue;
        double ref = q * (1 - q) * double(D) / 6 - 2 * std::log2(double(D)) + std::log2(1 - std::sqrt((1 - F) / (1 - q)));
        worst = std::max(worst, std::abs(universal_description_bound(D, S, F) - ref));
      }
  bool threw = false;
  try {
    universal_description_bound(8, 6, 0.7);
  } catch (const InvalidArgument&) {
    threw = true;
  }
  o.check(threw, "q >= F accepted");
  for (std::size_t D : {2u, 16u})
    worst = std::max(worst, std::abs(net_only_cbit_bound(D, 0.06) - (4 + std::log2(1 / 0.06)) * double(D)));
  o.check(worst <= 1e-12, "formula mismatch");
  o.detail << "max deviation=" << fmt(worst) << " D=1024,q=1/2,F=0.99: " << fmt(universal_description_bound(1024, 512, 0.99))
           << " cbits";
  return o;
}

const std::vector<std::pair<const char*, std::function<Outcome()>>> kCriteria{
    {"protocol pi exact with Weyl sets", c1_pi_exact},
    {"protocol pi failure rate eps/(1+eps)", c2_pi_failure_rate},
    {"column method statistics", c3_column},
    {"cbits per qubit trend", c4_resources},
    {"randomizing set verification", c5_randomization},
    {"trade-off solver vs oracle", c6_solver_vs_oracle},
    {"curve convexity, monotonicity, additivity", c7_curve_properties},
    {"entangled curve endpoints", c8_entangled_endpoints},
    {"typicality suite", c9_typicality},
    {"concentration suite", c10_concentration},
    {"obliviousness", c11_obliviousness},
    {"causality and description bounds", c12_bounds},
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Acceptance criteria"};
  int only = 0;
  app.add_option("--criterion", only, "Run a single criterion (1-12)")->check(CLI::Range(1, int(kCriteria.size())));
  CLI11_PARSE(app, argc, argv);

  int failed = 0;
  for (int k = 1; k <= int(kCriteria.size()); ++k) {
    if (only && k != only) continue;
    const auto& [name, fn] = kCriteria[std::size_t(k - 1)];
    auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail << "exception: " << e.what();
    }
    double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("%s criterion %02d (%s) [%.1fs]: %s\n", o.pass ? "PASS" : "FAIL", k, name, s, o.detail.str().c_str());
    std::fflush(stdout);
    failed += !o.pass;
  }
  return failed ? 1 : 0;
}
