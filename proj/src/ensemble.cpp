#include "rsp/ensemble.hpp"

#include <cmath>

namespace rsp {

namespace {

void check_probs(const std::vector<double>& p, std::size_t n) {
  detail::require(!p.empty(), "ensemble must be non-empty");
  detail::require(p.size() == n, "one probability per state");
  double s = 0;
  for (double x : p) {
    detail::require(x >= 0 && std::isfinite(x), "probabilities must be nonnegative");
    s += x;
  }
  detail::require(std::abs(s - 1.0) <= 1e-12, "probabilities must sum to 1");
}

}  // namespace

Ensemble::Ensemble(std::vector<double> p, std::vector<PureState> s)
    : probs(std::move(p)), states(std::move(s)) {
  check_probs(probs, states.size());
  for (const auto& st : states) detail::require(st.dim() == states.front().dim(), "states differ in dimension");
}

CMatrix Ensemble::average() const {
  auto d = static_cast<Eigen::Index>(dim());
  CMatrix r = CMatrix::Zero(d, d);
  for (std::size_t i = 0; i < size(); ++i) r += probs[i] * states[i].projector();
  return r;
}

BipartiteEnsemble::BipartiteEnsemble(std::vector<double> p, std::vector<PureState> s, std::size_t a,
                                     std::size_t b)
    : probs(std::move(p)), states(std::move(s)), dA(a), dB(b) {
  check_probs(probs, states.size());
  detail::require(dA >= 1 && dB >= 1, "cut dimensions must be >= 1");
  for (const auto& st : states) detail::require(st.dim() == dA * dB, "state does not match the cut");
}

BipartiteEnsemble BipartiteEnsemble::from(const Ensemble& e) {
  return BipartiteEnsemble(e.probs, e.states, 1, e.dim());
}

CMatrix BipartiteEnsemble::amplitudes(std::size_t i) const {
  const CVector& v = states.at(i).amplitudes();
  CMatrix m(static_cast<Eigen::Index>(dA), static_cast<Eigen::Index>(dB));
  for (Eigen::Index a = 0; a < m.rows(); ++a)
    for (Eigen::Index b = 0; b < m.cols(); ++b) m(a, b) = v(a * m.cols() + b);
  return m;
}

CMatrix BipartiteEnsemble::reduced_b(std::size_t i) const {
  CMatrix m = amplitudes(i);
  return m.transpose() * m.conjugate();
}

std::vector<DensityOperator> BipartiteEnsemble::reduced_b() const {
  std::vector<DensityOperator> out;
  for (std::size_t i = 0; i < size(); ++i) out.push_back(DensityOperator::normalized(reduced_b(i)));
  return out;
}

Ensemble product(const Ensemble& a, const Ensemble& b) {
  std::vector<double> p;
  std::vector<PureState> s;
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) {
      p.push_back(a.probs[i] * b.probs[j]);
      s.push_back(PureState::normalized(kron(a.states[i].amplitudes(), b.states[j].amplitudes())));
    }
  // Products of exact weights can drift in the last bit.
  double t = 0;
  for (double x : p) t += x;
  for (double& x : p) x /= t;
  return Ensemble(std::move(p), std::move(s));
}

}  // namespace rsp
