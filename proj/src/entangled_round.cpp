#include <algorithm>
#include <cmath>

#include "rsp/entangled.hpp"
#include "rsp/sampling.hpp"

namespace rsp {

std::size_t entangled_unitary_count(std::size_t n, std::size_t m, std::size_t DT, double chi,
                                    double delta, double eps) {
  detail::require(eps > 0 && eps < 0.5, "epsilon must lie in (0, 1/2)");
  double k = (1.0 + double(n) * std::log2(double(m)) + std::log2(double(DT))) * 2.0 /
             ((1.0 - 2.0 * eps) * eps * eps) * std::exp2(double(n) * (chi + 2.0 * delta));
  detail::require(k < 1e7, "unitary count is too large for simulation; pass K explicitly");
  return std::max<std::size_t>(1, std::size_t(std::ceil(k)));
}

namespace {

struct Block {
  std::vector<DensityOperator> W;
  CMatrix phi;  // phi_I^B
  TypeVector type;
  std::vector<double> Q;
  CMatrix rho;  // sum_i Q(i) phi_i^B
};

Block make_block(const Word& I, const BipartiteEnsemble& ens, std::size_t budget) {
  detail::require(!I.empty(), "block must be non-empty");
  double dim = std::pow(double(ens.dB), double(I.size()));
  if (dim > double(budget)) throw BudgetExceeded("d_B^n exceeds the budget");
  Block b;
  b.W = ens.reduced_b();
  b.type = type_of(I, ens.size());
  b.Q = b.type.distribution();
  b.phi = CMatrix::Ones(1, 1);
  for (std::size_t x : I) b.phi = kron(b.phi, b.W[x].matrix());
  auto d = Eigen::Index(ens.dB);
  b.rho = CMatrix::Zero(d, d);
  for (std::size_t i = 0; i < ens.size(); ++i) b.rho += b.Q[i] * b.W[i].matrix();
  return b;
}

double types_count(std::size_t n, std::size_t m) {
  // C(n + m - 1, m - 1)
  double c = 1;
  for (std::size_t i = 1; i < m; ++i) c = c * double(n + i) / double(i);
  return std::round(c);
}

}  // namespace

PiChain pi_chain(const Word& I, const BipartiteEnsemble& ens, double delta, std::size_t budget) {
  Block b = make_block(I, ens, budget);
  CMatrix pc = cond_typical_projector(b.W, I, delta).matrix(budget);
  CMatrix pa = typical_projector(DensityOperator(b.rho), I.size(), delta).matrix(budget);
  CMatrix pi = pa * pc * b.phi * pc * pa;
  PiChain c;
  c.trace_pi = pi.trace().real();
  double e1 = 1.0 - (b.phi * pc).trace().real();
  double e2 = 1.0 - (b.phi * pa).trace().real();
  c.eps = std::max(e1, e2);
  c.large_margin = c.trace_pi - (1.0 - 2.0 * c.eps);
  double cond_entropy = 0;
  for (std::size_t i = 0; i < ens.size(); ++i) cond_entropy += b.Q[i] * von_neumann_entropy(b.W[i]);
  c.scale = std::exp2(-double(I.size()) * (cond_entropy - delta));
  c.small_margin = hermitian_eigenvalues(c.scale * pa - pi).minCoeff();
  return c;
}

EntangledRound entangled_rsp_round(const Word& I, const BipartiteEnsemble& ens,
                                   const EntangledOptions& opt, Rng& rng) {
  const std::size_t n = I.size(), m = ens.size();
  const double dt = opt.typical_delta.value_or(opt.delta);
  const double eps = opt.epsilon;
  detail::require(eps >= 0 && eps < 0.5, "epsilon must lie in [0, 1/2)");
  Block b = make_block(I, ens, opt.budget);
  const auto full = Eigen::Index(b.phi.rows());

  EntangledRound r;
  r.type = b.type;
  r.type_cbits = std::log2(types_count(n, m));
  Transcript& t = r.transcript;
  t.protocol = "entangled";
  t.input = "n=" + std::to_string(n) + ",m=" + std::to_string(m);
  t.cbits_sent = r.type_cbits;

  double l1 = 0;
  for (std::size_t i = 0; i < m; ++i) l1 += std::abs(ens.probs[i] - b.Q[i]);
  if (l1 > opt.delta + 1e-12) {
    r.aborted = true;
    t.receiver_output = DensityOperator::maximally_mixed(std::size_t(full));
    t.fidelity_to_target = fidelity(t.receiver_output, DensityOperator::normalized(b.phi));
    return r;
  }

  TypicalProjector cond = cond_typical_projector(b.W, I, dt);
  TypicalProjector avg = typical_projector(DensityOperator(b.rho), n, dt);
  CMatrix pc = cond.matrix(opt.budget);
  CMatrix V = avg.range_basis(opt.budget);
  const auto DT = V.cols();
  if (DT == 0) throw Error("typical subspace is empty; increase n or delta");
  r.typical_dim = std::size_t(DT);

  CMatrix sigma1 = pc * b.phi * pc;
  CMatrix piT = V.adjoint() * sigma1 * V;
  piT = (piT + piT.adjoint()) * 0.5;
  r.trace_pi = piT.trace().real();
  r.eps_cond = 1.0 - (b.phi * pc).trace().real();
  r.eps_avg = 1.0 - (b.phi * V * V.adjoint()).trace().real();
  double cond_entropy = 0;
  for (std::size_t i = 0; i < m; ++i) cond_entropy += b.Q[i] * von_neumann_entropy(b.W[i]);
  r.chi = von_neumann_entropy(b.rho) - cond_entropy;
  r.K = opt.K ? *opt.K : entangled_unitary_count(n, m, std::size_t(DT), r.chi, dt, eps);
  detail::require(r.K >= 1, "K must be >= 1");
  if (double(r.K) * double(DT) * double(DT) > kEntangledEntryBudget)
    throw BudgetExceeded("K D_T^2 = " + std::to_string(double(r.K) * double(DT) * double(DT)) +
                         " exceeds the memory budget; pass a smaller K");

  // Draw a family satisfying the good-choice sandwich for this block.
  std::vector<CMatrix> us;
  const CMatrix piTt = piT.transpose();
  for (;;) {
    if (r.attempts >= std::max<std::size_t>(1, opt.max_retries))
      throw RetriesExhausted("no unitary family met the randomization sandwich");
    Rng draw = rng.split(r.attempts++);
    us.clear();
    CMatrix tw = CMatrix::Zero(DT, DT);
    for (std::size_t k = 0; k < r.K; ++k) {
      us.push_back(haar_unitary(std::size_t(DT), draw).matrix());
      tw += us.back() * piTt * us.back().adjoint();
    }
    tw /= double(r.K) * r.trace_pi;
    RVector ev = hermitian_eigenvalues((tw + tw.adjoint()) * 0.5) * double(DT);
    r.good_choice_deviation = std::max(ev.maxCoeff() - 1.0, 1.0 - ev.minCoeff());
    if (r.good_choice_deviation <= eps + 1e-12) break;
  }

  const double c = double(DT) / (double(r.K) * (1.0 + eps) * r.trace_pi);
  std::vector<CMatrix> A;
  CMatrix fail = CMatrix::Identity(DT, DT);
  std::vector<double> cum;
  double acc = 0;
  for (const auto& u : us) {
    A.push_back(c * u * piTt * u.adjoint());
    fail -= A.back();
    acc += A.back().trace().real() / double(DT);
    cum.push_back(acc);
  }
  fail = (fail + fail.adjoint()) * 0.5;
  r.failure_probability = std::max(0.0, fail.trace().real() / double(DT));
  if (r.failure_probability < 1e-13) r.failure_probability = 0;

  Rng meas = rng.split(~std::uint64_t(0));
  double u = meas.uniform() * (acc + r.failure_probability);
  std::size_t k = std::size_t(std::upper_bound(cum.begin(), cum.end(), u) - cum.begin());
  if (k == r.K && r.failure_probability == 0) k = r.K - 1;

  // Square-root instrument on the sender half of Phi_T (amplitude matrix 1/sqrt(D_T)).
  CMatrix psiT;
  if (k < r.K) {
    double pk = A[k].trace().real() / double(DT);
    psiT = psd_sqrt(A[k]) * us[k] / std::sqrt(double(DT) * pk);
    t.message = k;
    t.success = true;
  } else {
    psiT = psd_sqrt(fail) / std::sqrt(double(DT) * r.failure_probability);
  }
  // Sender's copy of T uses the conjugate basis, so the receiver's state is V rho_T V^*.
  CMatrix psi = V.conjugate() * psiT * V.transpose();
  CMatrix rhoB = psi.transpose() * psi.conjugate();
  t.receiver_output = DensityOperator::normalized(rhoB);

  CMatrix Y = CMatrix::Ones(1, 1);
  for (std::size_t x : I) Y = kron(Y, ens.amplitudes(x));
  double tn = trace_norm(psi * Y.adjoint());
  r.fidelity_uhlmann = std::min(1.0, tn * tn);
  r.fidelity_mixed = fidelity(t.receiver_output, DensityOperator::normalized(b.phi));
  t.fidelity_to_target = r.fidelity_mixed;

  double tr1 = 1.0 - r.eps_cond;
  double e2 = tr1 > 0 ? std::max(0.0, 1.0 - r.trace_pi / tr1) : 1.0;
  double chain = std::sqrt(8.0 * std::max(0.0, r.eps_cond)) + tr1 * std::sqrt(8.0 * e2) +
                 std::max(0.0, 1.0 - r.trace_pi);
  r.fidelity_bound = std::pow(std::max(0.0, 1.0 - chain / 2.0), 2);

  t.cbits_sent = std::log2(double(r.K) + 1.0) + r.type_cbits;
  t.ebits_consumed = std::log2(double(DT));
  return r;
}

}  // namespace rsp
