#include "rsp/tradeoff.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace rsp {

ClassicalChannel::ClassicalChannel(Eigen::MatrixXd p) : p_(std::move(p)) {
  detail::require(p_.rows() >= 1 && p_.cols() >= 1, "channel must be non-empty");
  for (Eigen::Index i = 0; i < p_.rows(); ++i) {
    double s = 0;
    for (Eigen::Index j = 0; j < p_.cols(); ++j) {
      detail::require(p_(i, j) >= 0 && std::isfinite(p_(i, j)), "channel entries must be nonnegative");
      s += p_(i, j);
    }
    detail::require(std::abs(s - 1.0) <= 1e-12, "channel rows must sum to 1");
  }
}

ClassicalChannel ClassicalChannel::trivial(std::size_t m, std::size_t J) {
  Eigen::MatrixXd p = Eigen::MatrixXd::Zero(Eigen::Index(m), Eigen::Index(J));
  p.col(0).setOnes();
  return ClassicalChannel(p);
}

ClassicalChannel ClassicalChannel::identity(std::size_t m, std::size_t J) {
  detail::require(J >= m, "identity channel needs J >= m");
  Eigen::MatrixXd p = Eigen::MatrixXd::Zero(Eigen::Index(m), Eigen::Index(J));
  for (Eigen::Index i = 0; i < p.rows(); ++i) p(i, i) = 1;
  return ClassicalChannel(p);
}

ClassicalChannel ClassicalChannel::product(const ClassicalChannel& o) const {
  const auto &a = p_, &b = o.p_;
  Eigen::MatrixXd p(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index k = 0; k < b.rows(); ++k)
      for (Eigen::Index j = 0; j < a.cols(); ++j)
        for (Eigen::Index l = 0; l < b.cols(); ++l) p(i * b.rows() + k, j * b.cols() + l) = a(i, j) * b(k, l);
  // Row sums of the product drift by an ulp at most; renormalize so the
  // constructor's check is exact.
  for (Eigen::Index r = 0; r < p.rows(); ++r) p.row(r) /= p.row(r).sum();
  return ClassicalChannel(p);
}

std::string ClassicalChannel::hash() const {
  std::uint64_t h = 1469598103934665603ull;
  auto mixin = [&](std::int64_t v) {
    for (int b = 0; b < 8; ++b) {
      h ^= std::uint64_t(v >> (8 * b)) & 0xffu;
      h *= 1099511628211ull;
    }
  };
  mixin(p_.rows());
  mixin(p_.cols());
  for (Eigen::Index i = 0; i < p_.rows(); ++i)
    for (Eigen::Index j = 0; j < p_.cols(); ++j) mixin(std::llround(p_(i, j) * 1e9));
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string to_string(CurveKind k) {
  switch (k) {
    case CurveKind::Qct: return "qct";
    case CurveKind::Rsp: return "rsp";
    case CurveKind::Entangled: return "entangled";
  }
  return "?";
}

CurveKind parse_curve_kind(const std::string& s) {
  if (s == "qct") return CurveKind::Qct;
  if (s == "rsp") return CurveKind::Rsp;
  if (s == "entangled") return CurveKind::Entangled;
  throw InvalidArgument("unknown curve kind: " + s);
}

// ---------------------------------------------------------------------------

namespace {

CMatrix channel_diag(const ClassicalChannel& ch, std::size_t i) {
  auto J = Eigen::Index(ch.cols());
  CMatrix c = CMatrix::Zero(J, J);
  for (Eigen::Index j = 0; j < J; ++j) c(j, j) = ch(i, std::size_t(j));
  return c;
}

CMatrix letter(std::size_t m, std::size_t i) {
  CMatrix a = CMatrix::Zero(Eigen::Index(m), Eigen::Index(m));
  a(Eigen::Index(i), Eigen::Index(i)) = 1;
  return a;
}

}  // namespace

LabeledState assemble_omega(const Ensemble& ens, const ClassicalChannel& ch) {
  detail::require(ch.rows() == ens.size(), "channel rows must match the ensemble size");
  const std::size_t m = ens.size(), d = ens.dim(), J = ch.cols();
  auto n = Eigen::Index(m * d * J);
  CMatrix w = CMatrix::Zero(n, n);
  for (std::size_t i = 0; i < m; ++i) {
    if (ens.probs[i] == 0) continue;
    w += ens.probs[i] * kron(kron(letter(m, i), ens.states[i].projector()), channel_diag(ch, i));
  }
  return LabeledState({{"A", m}, {"B", d}, {"C", J}}, DensityOperator(w), {"A", "C"});
}

LabeledState assemble_omega(const BipartiteEnsemble& ens, const ClassicalChannel& ch) {
  detail::require(ch.rows() == ens.size(), "channel rows must match the ensemble size");
  const std::size_t m = ens.size(), J = ch.cols();
  auto n = Eigen::Index(m * ens.dA * ens.dB * J);
  CMatrix w = CMatrix::Zero(n, n);
  for (std::size_t i = 0; i < m; ++i) {
    if (ens.probs[i] == 0) continue;
    w += ens.probs[i] * kron(kron(letter(m, i), ens.states[i].projector()), channel_diag(ch, i));
  }
  return LabeledState({{"X", m}, {"A", ens.dA}, {"B", ens.dB}, {"C", J}}, DensityOperator(w), {"X", "C"});
}

QctPoint eval_qct_point(const Ensemble& ens, const ClassicalChannel& ch) {
  LabeledState w = assemble_omega(ens, ch);
  return {mutual_info(w, {"A"}, {"C"}), cond_mutual_info(w, {"A"}, {"B"}, {"C"})};
}

RspPoint eval_rsp_point(const Ensemble& ens, const ClassicalChannel& ch) {
  LabeledState w = assemble_omega(ens, ch);
  return {mutual_info(w, {"A"}, {"B", "C"}), cond_mutual_info(w, {"A"}, {"B"}, {"C"})};
}

EntangledPoint eval_entangled_point(const BipartiteEnsemble& ens, const ClassicalChannel& ch) {
  LabeledState w = assemble_omega(ens, ch);
  return {mutual_info(w, {"X"}, {"B", "C"}), entropy(w, {"B", "C"}) - entropy(w, {"C"})};
}

// ---------------------------------------------------------------------------

CurveProblem::CurveProblem(const Ensemble& ens, CurveKind kind) {
  std::vector<CMatrix> s;
  for (const auto& st : ens.states) s.push_back(st.projector());
  init(ens.probs, std::move(s), kind);
}

CurveProblem::CurveProblem(const BipartiteEnsemble& ens, CurveKind kind) {
  std::vector<CMatrix> s;
  for (std::size_t i = 0; i < ens.size(); ++i) s.push_back(ens.reduced_b(i));
  init(ens.probs, std::move(s), kind);
}

void CurveProblem::init(std::vector<double> p, std::vector<CMatrix> sigmas, CurveKind kind) {
  probs_ = std::move(p);
  sigmas_ = std::move(sigmas);
  kind_ = kind;
  source_entropy_ = shannon_entropy(probs_);
  floor_ = 0;
  for (std::size_t i = 0; i < probs_.size(); ++i) floor_ += probs_[i] * von_neumann_entropy(sigmas_[i]);
}

namespace {

double xlogx(double x) { return x > 0 ? x * std::log2(x) : 0.0; }

}  // namespace

CurveProblem::ColumnTerms CurveProblem::column(const Eigen::VectorXd& w) const {
  auto d = Eigen::Index(dim());
  CMatrix M = CMatrix::Zero(d, d);
  ColumnTerms t;
  double q = 0;
  for (std::size_t i = 0; i < probs_.size(); ++i) {
    double a = probs_[i] * w(Eigen::Index(i));
    if (a <= 0) continue;
    M += a * sigmas_[i];
    q += a;
    t.info += xlogx(a);
  }
  if (q <= 0) return {};
  t.info -= xlogx(q);
  Eigen::SelfAdjointEigenSolver<CMatrix> es(M, Eigen::EigenvaluesOnly);
  t.entropy = entropy_of_spectrum(es.eigenvalues()) + xlogx(q);
  return t;
}

CurveProblem::Value CurveProblem::combine(double info_sum, double entropy_sum) const {
  double I = source_entropy_ + info_sum;  // S(X:C)
  double F = entropy_sum;                 // S(B|C)
  switch (kind_) {
    case CurveKind::Qct: return {I, F - floor_};
    case CurveKind::Rsp: return {I + F - floor_, F - floor_};
    case CurveKind::Entangled: return {I + F - floor_, F};
  }
  return {};
}

CurveProblem::Value CurveProblem::evaluate(const Eigen::MatrixXd& W) const {
  double is = 0, es = 0;
  for (Eigen::Index j = 0; j < W.cols(); ++j) {
    ColumnTerms t = column(W.col(j));
    is += t.info;
    es += t.entropy;
  }
  return combine(is, es);
}

CurveProblem::Value CurveProblem::evaluate(const Eigen::MatrixXd& W, Eigen::MatrixXd& grad_rate,
                                           Eigen::MatrixXd& grad_obj) const {
  const auto m = Eigen::Index(letters()), d = Eigen::Index(dim());
  Eigen::MatrixXd gI(m, W.cols()), gF(m, W.cols());
  double is = 0, es = 0;
  for (Eigen::Index j = 0; j < W.cols(); ++j) {
    CMatrix M = CMatrix::Zero(d, d);
    double q = 0, info = 0;
    for (Eigen::Index i = 0; i < m; ++i) {
      double a = probs_[std::size_t(i)] * W(i, j);
      if (a <= 0) continue;
      M += a * sigmas_[std::size_t(i)];
      q += a;
      info += xlogx(a);
    }
    if (q <= 1e-300) {
      // Empty column: moving mass eps*p_i into it contributes eps*p_i*S(sigma_i).
      for (Eigen::Index i = 0; i < m; ++i) {
        gF(i, j) = probs_[std::size_t(i)] * von_neumann_entropy(sigmas_[std::size_t(i)]);
        gI(i, j) = -xlogx(probs_[std::size_t(i)]);
      }
      continue;
    }
    info -= xlogx(q);
    Eigen::SelfAdjointEigenSolver<CMatrix> es_(M);
    RVector lam = es_.eigenvalues();
    is += info;
    es += entropy_of_spectrum(lam) + xlogx(q);
    RVector logrho(d);
    for (Eigen::Index k = 0; k < d; ++k) logrho(k) = std::log2(std::max(lam(k), 1e-14 * q) / q);
    const CMatrix& V = es_.eigenvectors();
    for (Eigen::Index i = 0; i < m; ++i) {
      double p = probs_[std::size_t(i)];
      // -tr(sigma_i log rho_j)
      CMatrix sv = sigmas_[std::size_t(i)] * V;
      double tr = 0;
      for (Eigen::Index k = 0; k < d; ++k) tr += logrho(k) * (V.col(k).adjoint() * sv.col(k))(0).real();
      gF(i, j) = -p * tr;
      gI(i, j) = p * (std::log2(std::max(W(i, j), 1e-15)) - std::log2(q));
    }
  }
  switch (kind_) {
    case CurveKind::Qct:
      grad_rate = gI;
      grad_obj = gF;
      break;
    case CurveKind::Rsp:
    case CurveKind::Entangled:
      grad_rate = gI + gF;
      grad_obj = gF;
      break;
  }
  return combine(is, es);
}

double CurveProblem::min_rate() const {
  Eigen::MatrixXd W = Eigen::MatrixXd::Zero(Eigen::Index(letters()), 1);
  W.setOnes();
  return evaluate(W).rate;
}

TradeoffPoint solve_curve(const Ensemble& ens, double R, CurveKind kind, const SolverParams& params) {
  return solve_curve(CurveProblem(ens, kind), R, params);
}

TradeoffPoint solve_curve(const BipartiteEnsemble& ens, double R, CurveKind kind,
                          const SolverParams& params) {
  return solve_curve(CurveProblem(ens, kind), R, params);
}

double brute_force_oracle(const Ensemble& ens, double R, CurveKind kind, double grid_step) {
  return brute_force_oracle(CurveProblem(ens, kind), {R}, grid_step).front();
}

double brute_force_oracle(const BipartiteEnsemble& ens, double R, CurveKind kind, double grid_step) {
  return brute_force_oracle(CurveProblem(ens, kind), {R}, grid_step).front();
}

// ---------------------------------------------------------------------------

AdditivityReport additivity_check(const Ensemble& e1, const Ensemble& e2, double R, CurveKind kind,
                                  const SolverParams& params, std::size_t splits) {
  detail::require(splits >= 1, "need at least one split");
  CurveProblem p1(e1, kind), p2(e2, kind);
  Ensemble prod = product(e1, e2);
  CurveProblem pp(prod, kind);

  AdditivityReport rep;
  rep.R = R;
  rep.lhs = solve_curve(pp, R, params).value;

  // R1 ranges over [min_rate1, R - min_rate2] on an even grid.
  double lo = p1.min_rate(), hi = R - p2.min_rate();
  rep.rhs = kInfeasible;
  std::optional<ClassicalChannel> c1, c2;
  double best_sum = kInfeasible;
  for (std::size_t s = 0; s <= splits && hi >= lo - params.tolerance; ++s) {
    double r1 = lo + (hi - lo) * double(s) / double(splits);
    TradeoffPoint a = solve_curve(p1, r1, params), b = solve_curve(p2, R - r1, params);
    if (!a.feasible() || !b.feasible()) continue;
    if (a.value + b.value < best_sum) {
      best_sum = a.value + b.value;
      c1 = a.channel;
      c2 = b.channel;
    }
  }
  rep.rhs = best_sum;
  if (c1 && c2) {
    const ClassicalChannel pc = c1->product(*c2);
    CurveProblem::Value v = pp.evaluate(pc.matrix());
    rep.product_rate = v.rate;
    rep.product_value = v.objective;
    rep.product_residual = std::abs(v.objective - best_sum);
    rep.upper_ok = v.rate <= R + 1e-9 && rep.product_residual <= 1e-9;
    // The default search over m + 1 letters can stall on the larger product
    // problem; also search the product's own alphabet seeded with its channel.
    SolverParams seeded = params;
    seeded.columns = std::size_t(pc.cols());
    seeded.warm_starts = {pc.matrix()};
    rep.lhs = std::min(rep.lhs, solve_curve(pp, R, seeded).value);
  }
  rep.equal_ok = std::abs(rep.lhs - rep.rhs) <= params.tolerance;
  return rep;
}

Ensemble mix(const std::vector<Ensemble>& ens, const std::vector<double>& w) {
  detail::require(!ens.empty() && ens.size() == w.size(), "one weight per ensemble");
  bool shared = true;
  for (const auto& e : ens) {
    if (e.size() != ens.front().size()) shared = false;
    else
      for (std::size_t i = 0; i < e.size() && shared; ++i)
        shared = e.states[i].amplitudes() == ens.front().states[i].amplitudes();
  }
  std::vector<double> p;
  std::vector<PureState> s;
  if (shared) {
    p.assign(ens.front().size(), 0.0);
    for (std::size_t k = 0; k < ens.size(); ++k)
      for (std::size_t i = 0; i < p.size(); ++i) p[i] += w[k] * ens[k].probs[i];
    s = ens.front().states;
  } else {
    for (std::size_t k = 0; k < ens.size(); ++k)
      for (std::size_t i = 0; i < ens[k].size(); ++i)
        if (w[k] * ens[k].probs[i] > 0) {
          p.push_back(w[k] * ens[k].probs[i]);
          s.push_back(ens[k].states[i]);
        }
  }
  double t = 0;
  for (double x : p) t += x;
  for (double& x : p) x /= t;
  return Ensemble(std::move(p), std::move(s));
}

AvsResult avs_curve(const std::vector<Ensemble>& ensembles, double weight_step, double R, CurveKind kind,
                    const SolverParams& params) {
  detail::require(!ensembles.empty(), "need at least one ensemble");
  detail::require(weight_step > 0 && weight_step <= 1, "weight step must lie in (0, 1]");
  const auto N = std::size_t(std::llround(1.0 / weight_step));
  const std::size_t L = ensembles.size();
  AvsResult best;
  best.value = -kInfeasible;
  std::vector<std::size_t> c(L, 0);
  // Enumerate compositions of N into L parts.
  auto visit = [&](const std::vector<std::size_t>& comp) {
    std::vector<double> w(L);
    for (std::size_t k = 0; k < L; ++k) w[k] = double(comp[k]) / double(N);
    std::vector<Ensemble> used;
    std::vector<double> uw;
    for (std::size_t k = 0; k < L; ++k)
      if (comp[k] > 0) {
        used.push_back(ensembles[k]);
        uw.push_back(w[k]);
      }
    double v = solve_curve(mix(used, uw), R, kind, params).value;
    ++best.evaluated;
    if (v > best.value) {
      best.value = v;
      best.weights = w;
    }
  };
  auto rec = [&](auto&& self, std::size_t k, std::size_t left) -> void {
    if (k + 1 == L) {
      c[k] = left;
      visit(c);
      return;
    }
    for (std::size_t a = 0; a <= left; ++a) {
      c[k] = a;
      self(self, k + 1, left - a);
    }
  };
  rec(rec, 0, N);
  return best;
}

EntangledEndpoints entangled_endpoints(const BipartiteEnsemble& ens) {
  EntangledEndpoints e;
  auto d = Eigen::Index(ens.dB);
  CMatrix avg = CMatrix::Zero(d, d);
  for (std::size_t i = 0; i < ens.size(); ++i) {
    CMatrix r = ens.reduced_b(i);
    avg += ens.probs[i] * r;
    e.E_floor += ens.probs[i] * von_neumann_entropy(r);
  }
  e.E_start = von_neumann_entropy(avg);
  e.R_start = e.E_start - e.E_floor;
  e.R_floor = shannon_entropy(ens.probs);
  return e;
}

double causality_bound(std::size_t D, double F) {
  detail::require(D >= 1, "dimension must be >= 1");
  detail::require(F > 0 && F <= 1, "fidelity must lie in (0, 1]");
  return std::log2(double(D)) + std::log2(F);
}

}  // namespace rsp
