#include "rsp/protocols.hpp"

#include <algorithm>
#include <cmath>

#include "rsp/sampling.hpp"

namespace rsp {

double Povm::completeness_defect() const {
  if (elements.empty()) return kInf;
  CMatrix s = CMatrix::Zero(elements[0].rows(), elements[0].cols());
  for (const auto& e : elements) s += e;
  return (s - CMatrix::Identity(s.rows(), s.cols())).cwiseAbs().maxCoeff();
}

double Povm::min_eigenvalue() const {
  double lo = kInf;
  for (const auto& e : elements) lo = std::min(lo, hermitian_eigenvalues(e).minCoeff());
  return lo;
}

CMatrix receiver_state_after(const CMatrix& a) {
  double tr = a.trace().real();
  detail::require(tr > 0, "outcome has zero probability");
  return a.transpose() / tr;
}

Povm rsp_povm(const PureState& psi, const UnitarySet& set) {
  detail::require(psi.dim() == set.D, "state and unitary set differ in dimension");
  const double c = double(set.D) / (double(set.K()) * (1.0 + set.epsilon));
  CMatrix bar = psi.projector().conjugate();
  Povm p;
  auto d = static_cast<Eigen::Index>(set.D);
  CMatrix fail = CMatrix::Identity(d, d);
  for (const auto& u : set.unitaries) {
    p.elements.push_back(c * u.matrix() * bar * u.matrix().adjoint());
    fail -= p.elements.back();
  }
  fail = (fail + fail.adjoint()) * 0.5;
  double lo = hermitian_eigenvalues(fail).minCoeff();
  if (lo < -kStateTol)
    throw NotRandomizing("failure element is not positive (min eigenvalue " + std::to_string(lo) +
                         "); the unitary set does not randomize at the stated epsilon");
  p.elements.push_back(std::move(fail));
  return p;
}

PiProtocol::PiProtocol(const PureState& psi, const UnitarySet& set)
    : psi_(psi), set_(&set), povm_(rsp_povm(psi, set)) {
  const double D = double(set.D);
  double acc = 0;
  for (std::size_t k = 0; k < set.K(); ++k) {
    acc += povm_.elements[k].trace().real() / D;
    cumulative_.push_back(acc);
  }
  fail_prob_ = povm_.elements.back().trace().real() / D;
  // Exact randomizers leave a failure weight at rounding level.
  if (fail_prob_ < 1e-13) fail_prob_ = 0;
  cumulative_.push_back(acc + fail_prob_);
}

PiProtocol::Measurement PiProtocol::measure(Rng& rng) const {
  double u = rng.uniform() * cumulative_.back();
  auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
  std::size_t idx = std::min<std::size_t>(std::size_t(it - cumulative_.begin()), K());
  if (idx == K()) {
    if (fail_prob_ == 0) idx = K() - 1;
    else return {std::nullopt, failure_state()};
  }
  return {idx, branch_state(idx)};
}

CMatrix PiProtocol::branch_state(std::size_t k) const {
  return receiver_state_after(povm_.elements.at(k));
}

CMatrix PiProtocol::failure_state() const {
  const CMatrix& f = povm_.elements.back();
  if (f.trace().real() <= 1e-13) return DensityOperator::maximally_mixed(set_->D).matrix();
  return receiver_state_after(f);
}

CMatrix PiProtocol::decode(std::size_t k, const CMatrix& pre) const {
  const CMatrix& u = set_->unitaries.at(k).matrix();
  return u.transpose() * pre * u.conjugate();
}

Transcript PiProtocol::run(Rng& rng, OnFailure mode) const {
  const double logD = std::log2(double(set_->D));
  Transcript t;
  t.protocol = "pi";
  t.input = "D=" + std::to_string(set_->D) + ",K=" + std::to_string(K());
  t.cbits_sent = pi_cbits(K());
  t.ebits_consumed = logD;
  Measurement m = measure(rng);
  CMatrix out;
  if (m.k) {
    t.message = m.k;
    t.success = true;
    out = decode(*m.k, m.pre);
  } else {
    switch (mode) {
      case OnFailure::Report:
        out = m.pre;
        break;
      case OnFailure::Resample: {
        std::size_t k = rng.below(K());
        t.message = k;
        out = decode(k, m.pre);
        break;
      }
      case OnFailure::Teleport:
        // Teleportation of a known pure state is exact.
        out = psi_.projector();
        t.success = true;
        break;
    }
  }
  if (mode == OnFailure::Resample) t.cbits_sent = std::log2(double(K()));
  if (mode == OnFailure::Teleport) {
    t.protocol = "pi+teleport";
    t.cbits_sent += 2 * logD;
    t.ebits_consumed += logD;
  }
  t.receiver_output = DensityOperator::normalized(out);
  t.fidelity_to_target = fidelity(psi_, t.receiver_output);
  return t;
}

Transcript run_protocol_pi(const PureState& psi, const UnitarySet& set, Rng& rng, OnFailure mode) {
  return PiProtocol(psi, set).run(rng, mode);
}

double pi_cbits(std::size_t K) { return std::log2(double(K) + 1.0); }

double pi_expected_cbits(std::size_t D, std::size_t K, double eps) {
  return pi_cbits(K) + 2.0 * std::log2(double(D)) * eps / (1.0 + eps);
}

double pi_expected_cbits_asymptotic(std::size_t D, double eps) {
  return (1.0 + 2.0 * eps / (1.0 + eps)) * std::log2(double(D));
}

double pi_formula_cbits(std::size_t D, double eps) {
  detail::require(D >= 2 && eps > 0, "bad parameters");
  double d = double(D);
  return std::log2(d) + 2.0 * std::log2(10.0 / eps) + std::log2(std::log2(20.0 * d / eps));
}

// ---------------------------------------------------------------------------

namespace {

struct ColumnBranches {
  CMatrix a0, a1;      // sender elements
  CMatrix zero, one;   // receiver states after each outcome
  double p0;
};

ColumnBranches column_branches(const PureState& psi) {
  auto d = static_cast<Eigen::Index>(psi.dim());
  ColumnBranches b;
  b.a0 = psi.projector().conjugate();
  b.a1 = CMatrix::Identity(d, d) - b.a0;
  b.p0 = b.a0.trace().real() / double(d);
  b.zero = receiver_state_after(b.a0);
  b.one = d > 1 ? receiver_state_after(b.a1) : CMatrix(b.zero);
  return b;
}

}  // namespace

double column_failure_probability(std::size_t D, std::size_t K) {
  return std::pow(1.0 - 1.0 / double(D), double(K));
}

Transcript column_method(const PureState& psi, std::size_t K, Rng& rng) {
  detail::require(K >= 1, "column method needs K >= 1");
  const std::size_t D = psi.dim();
  ColumnBranches b = column_branches(psi);
  Transcript t;
  t.protocol = "column";
  t.input = "D=" + std::to_string(D) + ",K=" + std::to_string(K);
  t.cbits_sent = std::log2(double(K));
  t.ebits_consumed = double(K) * std::log2(double(D));
  std::vector<std::size_t> zeros;
  for (std::size_t j = 0; j < K; ++j) {
    int o = rng.uniform() < b.p0 ? 0 : 1;
    t.outcomes.push_back(o);
    if (o == 0) zeros.push_back(j);
  }
  if (zeros.empty()) {
    t.receiver_output = DensityOperator::maximally_mixed(D);
  } else {
    t.message = zeros[rng.below(zeros.size())];
    t.success = true;
    t.receiver_output = DensityOperator::normalized(b.zero);
  }
  t.fidelity_to_target = fidelity(psi, t.receiver_output);
  return t;
}

// ---------------------------------------------------------------------------

Teleported teleport(const LabeledState& input, const std::string& label, Rng& rng) {
  const std::string la = "\x1f" "tA", lb = "\x1f" "tB";
  const std::size_t D = input.parts()[input.index_of(label)].dim;
  LabeledState full =
      tensor(input, LabeledState::from_pure({{la, D}, {lb, D}}, max_entangled(D)));
  UnitarySet w = weyl_set(D);
  const CVector phi = max_entangled(D).amplitudes();

  // Bell outcome m = (a, b) projects (label, A) onto (W_m (x) 1)|Phi>.
  std::vector<CMatrix> proj;
  std::vector<double> cum;
  double acc = 0;
  for (const auto& u : w.unitaries) {
    CVector v = kron(u.matrix(), CMatrix::Identity(Eigen::Index(D), Eigen::Index(D))) * phi;
    proj.push_back(embed_operator(full.parts(), {label, la}, v * v.adjoint()));
    acc += proj.back().cwiseProduct(full.matrix().transpose()).sum().real();
    cum.push_back(acc);
  }
  double u = rng.uniform() * acc;
  std::size_t m = std::min<std::size_t>(
      std::size_t(std::upper_bound(cum.begin(), cum.end(), u) - cum.begin()), cum.size() - 1);

  CMatrix post = proj[m] * full.matrix() * proj[m];
  LabeledState after(full.parts(), DensityOperator::normalized(post));
  Labels keep;
  for (const auto& p : full.parts())
    if (p.label != label && p.label != la) keep.push_back(p.label);
  LabeledState rest = partial_trace(after, keep);
  CMatrix fix = embed_operator(rest.parts(), {lb}, w.unitaries[m].matrix());
  CMatrix out = fix * rest.matrix() * fix.adjoint();

  std::vector<Part> parts = rest.parts();
  for (auto& p : parts)
    if (p.label == lb) p.label = label;
  Labels order;
  for (const auto& p : input.parts()) order.push_back(p.label);
  LabeledState result = permute(LabeledState(parts, DensityOperator::normalized(out)), order);

  Transcript t;
  t.protocol = "teleport";
  t.input = "D=" + std::to_string(D);
  t.message = m;
  t.success = true;
  t.cbits_sent = 2.0 * std::log2(double(D));
  t.ebits_consumed = std::log2(double(D));
  t.receiver_output = partial_trace(result, {label}).state();
  t.fidelity_to_target = fidelity(partial_trace(input, {label}).state(), t.receiver_output);
  return {std::move(t), std::move(result)};
}

// ---------------------------------------------------------------------------

double net_parameter(double eps_prime) {
  detail::require(eps_prime > 0 && eps_prime <= 1, "fidelity loss must lie in (0, 1]");
  return std::min(2.0, std::sqrt(4.0 * eps_prime));
}

Transcript net_only_protocol(const PureState& psi, const EpsilonNet& net, double eps_prime) {
  detail::require(psi.dim() == net.D, "state and net differ in dimension");
  std::size_t k = net.nearest(psi);
  Transcript t;
  t.protocol = "net";
  t.input = "D=" + std::to_string(net.D) + ",net=" + std::to_string(net.size());
  t.message = k;
  t.receiver_output = DensityOperator::from_pure(net.states[k]);
  t.fidelity_to_target = fidelity(psi, net.states[k]);
  t.success = t.fidelity_to_target >= 1.0 - eps_prime;
  t.cbits_sent = std::log2(double(net.size()));
  t.ebits_consumed = 0;
  return t;
}

// ---------------------------------------------------------------------------

double record_distance(const Record& a, const Record& b) {
  detail::require(a.size() == b.size(), "records have different message sets");
  double s = 0;
  for (std::size_t k = 0; k < a.size(); ++k) s += hermitian_trace_norm(a[k] - b[k]);
  return 0.5 * s;
}

Record pi_actual_record(const PiProtocol& pi) {
  const double D = double(pi.set().D), K = double(pi.K());
  const CMatrix fail = pi.povm().elements.back().transpose() / (K * D);
  Record r;
  for (std::size_t k = 0; k < pi.K(); ++k) r.push_back(pi.povm().elements[k].transpose() / D + fail);
  return r;
}

Record pi_simulated_record(const UnitarySet& set, const CMatrix& rho) {
  Record r;
  const double K = double(set.K());
  for (const auto& u : set.unitaries) r.push_back(u.matrix().conjugate() * rho * u.matrix().transpose() / K);
  return r;
}

CMatrix pi_output(const PiProtocol& pi) {
  Record r = pi_actual_record(pi);
  auto d = static_cast<Eigen::Index>(pi.set().D);
  CMatrix out = CMatrix::Zero(d, d);
  for (std::size_t k = 0; k < r.size(); ++k) out += pi.decode(k, r[k]);
  return out;
}

namespace {

constexpr std::size_t kRecordBudget = 4096;

std::size_t column_record_dim(std::size_t D, std::size_t K) {
  std::size_t n = 1;
  for (std::size_t j = 0; j < K; ++j) {
    n *= D;
    if (n > kRecordBudget)
      throw BudgetExceeded("column record on D^K > " + std::to_string(kRecordBudget) + " dimensions");
  }
  return n;
}

CMatrix kron_all(const std::vector<const CMatrix*>& fs) {
  CMatrix acc = CMatrix::Ones(1, 1);
  for (const CMatrix* f : fs) acc = kron(acc, *f);
  return acc;
}

}  // namespace

Record column_actual_record(const PureState& psi, std::size_t K) {
  const std::size_t D = psi.dim();
  const auto n = static_cast<Eigen::Index>(column_record_dim(D, K));
  ColumnBranches b = column_branches(psi);
  Record r(K, CMatrix::Zero(n, n));
  for (std::size_t mask = 0; mask < (std::size_t(1) << K); ++mask) {
    std::vector<const CMatrix*> fs;
    std::vector<std::size_t> zeros;
    double pr = 1;
    for (std::size_t j = 0; j < K; ++j) {
      bool one = (mask >> (K - 1 - j)) & 1;
      fs.push_back(one ? &b.one : &b.zero);
      pr *= one ? 1.0 - b.p0 : b.p0;
      if (!one) zeros.push_back(j);
    }
    if (pr == 0) continue;
    CMatrix st = kron_all(fs);
    if (zeros.empty())
      for (std::size_t k = 0; k < K; ++k) r[k] += pr / double(K) * st;
    else
      for (std::size_t k : zeros) r[k] += pr / double(zeros.size()) * st;
  }
  return r;
}

Record column_simulated_record(const CMatrix& rho, std::size_t K) {
  const auto D = static_cast<std::size_t>(rho.rows());
  const auto n = static_cast<Eigen::Index>(column_record_dim(D, K));
  const double eps = column_failure_probability(D, K);
  CMatrix mixed = CMatrix::Identity(rho.rows(), rho.cols()) / double(D);
  Record r;
  for (std::size_t k = 0; k < K; ++k) {
    std::vector<const CMatrix*> fs(K, &mixed);
    fs[k] = &rho;
    r.push_back((1.0 - eps) / double(K) * kron_all(fs) +
                eps / double(K) * CMatrix::Identity(n, n) / double(n));
  }
  return r;
}

CMatrix column_output(const PureState& psi, std::size_t K) {
  ColumnBranches b = column_branches(psi);
  double eps = column_failure_probability(psi.dim(), K);
  return (1.0 - eps) * b.zero + eps * b.one;
}

GapReport obliviousness_gap_pi(const PiProtocol& pi) {
  GapReport g;
  g.gap = record_distance(pi_actual_record(pi), pi_simulated_record(pi.set(), pi_output(pi)));
  g.bound = pi.set().epsilon;
  return g;
}

GapReport obliviousness_gap_column(const PureState& psi, std::size_t K) {
  GapReport g;
  g.gap = record_distance(column_actual_record(psi, K), column_simulated_record(column_output(psi, K), K));
  g.bound = column_failure_probability(psi.dim(), K);
  return g;
}

GapReport obliviousness_gap_empirical(ProtocolKind kind, const PureState& psi, const UnitarySet* set,
                                      std::size_t K, std::size_t trials, Rng& rng) {
  detail::require(trials >= 1, "trials must be >= 1");
  GapReport g;
  g.empirical = true;
  const double w = 1.0 / double(trials);
  if (kind == ProtocolKind::Pi) {
    detail::require(set != nullptr, "protocol Pi needs a unitary set");
    PiProtocol pi(psi, *set);
    std::vector<double> succ(pi.K(), 0.0), fail(pi.K(), 0.0);
    for (std::size_t t = 0; t < trials; ++t) {
      auto m = pi.measure(rng);
      if (m.k) succ[*m.k] += w;
      else fail[rng.below(pi.K())] += w;
    }
    Record emp;
    CMatrix fs = pi.failure_state();
    for (std::size_t k = 0; k < pi.K(); ++k) emp.push_back(succ[k] * pi.branch_state(k) + fail[k] * fs);
    g.gap = record_distance(emp, pi_simulated_record(*set, pi_output(pi)));
    g.bound = set->epsilon;
    g.sigma = 0.5 * std::sqrt(double(pi.K()) / double(trials));
    return g;
  }
  const std::size_t D = psi.dim();
  const auto n = static_cast<Eigen::Index>(column_record_dim(D, K));
  ColumnBranches b = column_branches(psi);
  Record emp(K, CMatrix::Zero(n, n));
  for (std::size_t t = 0; t < trials; ++t) {
    std::vector<const CMatrix*> fs;
    std::vector<std::size_t> zeros;
    for (std::size_t j = 0; j < K; ++j) {
      bool zero = rng.uniform() < b.p0;
      fs.push_back(zero ? &b.zero : &b.one);
      if (zero) zeros.push_back(j);
    }
    std::size_t k = zeros.empty() ? rng.below(K) : zeros[rng.below(zeros.size())];
    emp[k] += w * kron_all(fs);
  }
  g.gap = record_distance(emp, column_simulated_record(column_output(psi, K), K));
  g.bound = column_failure_probability(D, K);
  g.sigma = 0.5 * std::sqrt(double(K) / double(trials));
  return g;
}

// ---------------------------------------------------------------------------

CausalityReport causality_pi(const UnitarySet& set, std::size_t trials, Rng& rng) {
  const std::size_t D = set.D;
  std::vector<PiProtocol> pis;
  double fid = 0;
  for (std::size_t x = 0; x < D; ++x) {
    pis.emplace_back(PureState::basis(D, x), set);
    const auto& pi = pis.back();
    double pf = pi.failure_probability();
    fid += ((1.0 - pf) + pf * pi.failure_state()(Eigen::Index(x), Eigen::Index(x)).real()) / double(D);
  }
  CausalityReport r;
  r.trials = trials;
  r.alphabet = double(set.K()) + 1.0;
  std::size_t hits = 0;
  for (std::size_t t = 0; t < trials; ++t) {
    std::size_t x = rng.below(D);
    const auto& pi = pis[x];
    auto m = pi.measure(rng);
    std::size_t g = rng.below(set.K() + 1);
    CMatrix out = g == set.K() ? m.pre : pi.decode(g, m.pre);
    if (rng.uniform() < out(Eigen::Index(x), Eigen::Index(x)).real()) ++hits;
  }
  r.frequency = double(hits) / double(trials);
  r.fidelity = fid;
  r.lower = fid / r.alphabet;
  r.upper = 1.0 / double(D);
  r.sigma = std::sqrt(r.upper * (1.0 - r.upper) / double(trials));
  return r;
}

CausalityReport causality_column(std::size_t D, std::size_t K, std::size_t trials, Rng& rng) {
  std::vector<ColumnBranches> bs;
  for (std::size_t x = 0; x < D; ++x) bs.push_back(column_branches(PureState::basis(D, x)));
  const double eps = column_failure_probability(D, K);
  CausalityReport r;
  r.trials = trials;
  r.alphabet = double(K);
  // Failures announce a uniform copy holding (1 - |x><x|)/(D-1), orthogonal to |x>.
  r.fidelity = 1.0 - eps;
  std::size_t hits = 0;
  for (std::size_t t = 0; t < trials; ++t) {
    std::size_t x = rng.below(D);
    const auto& b = bs[x];
    std::vector<int> o(K);
    for (auto& v : o) v = rng.uniform() < b.p0 ? 0 : 1;
    std::size_t g = rng.below(K);
    const CMatrix& st = o[g] == 0 ? b.zero : b.one;
    if (rng.uniform() < st(Eigen::Index(x), Eigen::Index(x)).real()) ++hits;
  }
  r.frequency = double(hits) / double(trials);
  r.lower = r.fidelity / r.alphabet;
  r.upper = 1.0 / double(D);
  r.sigma = std::sqrt(r.upper * (1.0 - r.upper) / double(trials));
  return r;
}

}  // namespace rsp
