#include "rsp/typicality.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <numeric>

namespace rsp {

namespace {
constexpr double kInfSurprisal = std::numeric_limits<double>::infinity();
}

std::vector<double> TypeVector::distribution() const {
  std::vector<double> p;
  for (std::size_t c : counts) p.push_back(n ? double(c) / double(n) : 0.0);
  return p;
}

TypeVector type_of(const Word& word, std::size_t alphabet) {
  detail::require(alphabet >= 1, "alphabet must be non-empty");
  TypeVector t{alphabet, std::vector<std::size_t>(alphabet, 0), word.size()};
  for (std::size_t x : word) {
    detail::require(x < alphabet, "letter out of range");
    ++t.counts[x];
  }
  return t;
}

std::uint64_t type_class_size(const TypeVector& t) {
  // Product of binomials C(remaining, c), each exact in 64 bits for desk-size n.
  std::uint64_t total = 1;
  std::size_t remaining = t.n;
  for (std::size_t c : t.counts) {
    std::uint64_t b = 1;
    for (std::size_t i = 1; i <= c; ++i) b = b * (remaining - c + i) / i;
    total *= b;
    remaining -= c;
  }
  return total;
}

std::vector<TypeVector> all_types(std::size_t n, std::size_t alphabet) {
  detail::require(alphabet >= 1, "alphabet must be non-empty");
  std::vector<TypeVector> out;
  std::vector<std::size_t> c(alphabet, 0);
  std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t pos, std::size_t left) {
    if (pos + 1 == alphabet) {
      c[pos] = left;
      out.push_back({alphabet, c, n});
      return;
    }
    for (std::size_t v = 0; v <= left; ++v) {
      c[pos] = v;
      rec(pos + 1, left - v);
    }
  };
  rec(0, n);
  return out;
}

Word representative(const TypeVector& t) {
  Word w;
  for (std::size_t x = 0; x < t.counts.size(); ++x) w.insert(w.end(), t.counts[x], x);
  return w;
}

TypeVector nearest_type(const std::vector<double>& p, std::size_t n) {
  detail::require(!p.empty(), "empty distribution");
  TypeVector t{p.size(), std::vector<std::size_t>(p.size(), 0), n};
  std::vector<std::pair<double, std::size_t>> rem;
  std::size_t used = 0;
  for (std::size_t x = 0; x < p.size(); ++x) {
    double v = p[x] * double(n);
    t.counts[x] = std::size_t(std::floor(v));
    used += t.counts[x];
    rem.push_back({v - std::floor(v), x});
  }
  std::stable_sort(rem.begin(), rem.end(), [](auto& a, auto& b) { return a.first > b.first; });
  for (std::size_t i = 0; used < n; ++i, ++used) ++t.counts[rem[i % rem.size()].second];
  return t;
}

EigenPairs canonical_eigen(const CMatrix& h) {
  EigenPairs ep = hermitian_eigen(h);
  const Eigen::Index n = ep.values.size();
  for (Eigen::Index j = 0; j < n; ++j) {
    auto col = ep.vectors.col(j);
    for (Eigen::Index i = 0; i < n; ++i)
      if (std::abs(col(i)) > 1e-9) {
        col *= std::conj(col(i)) / std::abs(col(i));
        break;
      }
  }
  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  auto lex_less = [&](Eigen::Index a, Eigen::Index b) {
    for (Eigen::Index i = 0; i < n; ++i) {
      Complex x = ep.vectors(i, a), y = ep.vectors(i, b);
      if (std::abs(x.real() - y.real()) > 1e-12) return x.real() > y.real();
      if (std::abs(x.imag() - y.imag()) > 1e-12) return x.imag() > y.imag();
    }
    return false;
  };
  std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
    double va = ep.values(a), vb = ep.values(b);
    if (std::abs(va - vb) > 1e-12) return va > vb;
    return lex_less(a, b);
  });
  EigenPairs out{RVector(n), CMatrix(n, n)};
  for (Eigen::Index j = 0; j < n; ++j) {
    out.values(j) = ep.values(order[std::size_t(j)]);
    out.vectors.col(j) = ep.vectors.col(order[std::size_t(j)]);
  }
  return out;
}

TypicalProjector::TypicalProjector(std::vector<EigenPairs> factors, double target, double delta)
    : factors_(std::move(factors)), target_(target), delta_(delta) {
  detail::require(!factors_.empty(), "typical projector needs n >= 1");
  detail::require(delta >= 0, "delta must be >= 0");
  for (const auto& f : factors_) {
    full_dim_ *= std::size_t(f.values.size());
    if (full_dim_ > kEnumerationBudget) throw BudgetExceeded("typical projector: d^n too large");
  }
  const double n = double(factors_.size());
  std::vector<std::vector<double>> surprisal;
  for (const auto& f : factors_) {
    std::vector<double> s;
    for (double v : f.values) s.push_back(v > kEigenClamp ? -std::log2(v) : kInfSurprisal);
    surprisal.push_back(std::move(s));
  }
  mask_.assign(full_dim_, false);
  std::vector<std::size_t> digit(factors_.size(), 0);
  for (std::size_t idx = 0; idx < full_dim_; ++idx) {
    double s = 0;
    for (std::size_t k = 0; k < digit.size(); ++k) s += surprisal[k][digit[k]];
    if (std::abs(s / n - target_) <= delta_ + 1e-12) {
      mask_[idx] = true;
      ++rank_;
    }
    for (std::size_t k = digit.size(); k-- > 0;) {
      if (++digit[k] < std::size_t(factors_[k].values.size())) break;
      digit[k] = 0;
    }
  }
}

namespace {

template <class F>
void for_each_typical(const TypicalProjector& p, F f) {
  const auto& fs = p.factors();
  std::vector<std::size_t> digit(fs.size(), 0);
  for (std::size_t idx = 0; idx < p.full_dim(); ++idx) {
    if (p.mask()[idx]) f(idx, digit);
    for (std::size_t k = digit.size(); k-- > 0;) {
      if (++digit[k] < std::size_t(fs[k].values.size())) break;
      digit[k] = 0;
    }
  }
}

}  // namespace

double TypicalProjector::trace_with(const std::vector<CMatrix>& sigmas) const {
  detail::require(sigmas.size() == factors_.size(), "need one operator per factor");
  std::vector<std::vector<double>> diag;
  for (std::size_t k = 0; k < sigmas.size(); ++k) {
    const CMatrix& v = factors_[k].vectors;
    detail::require(sigmas[k].rows() == v.rows(), "factor dimension mismatch");
    std::vector<double> d;
    for (Eigen::Index j = 0; j < v.cols(); ++j) d.push_back((v.col(j).adjoint() * sigmas[k] * v.col(j))(0, 0).real());
    diag.push_back(std::move(d));
  }
  double acc = 0;
  for_each_typical(*this, [&](std::size_t, const std::vector<std::size_t>& s) {
    double p = 1;
    for (std::size_t k = 0; k < s.size(); ++k) p *= diag[k][s[k]];
    acc += p;
  });
  return acc;
}

double TypicalProjector::probability() const {
  double acc = 0;
  for_each_typical(*this, [&](std::size_t, const std::vector<std::size_t>& s) {
    double p = 1;
    for (std::size_t k = 0; k < s.size(); ++k) p *= std::max(0.0, factors_[k].values(Eigen::Index(s[k])));
    acc += p;
  });
  return acc;
}

CMatrix TypicalProjector::range_basis(std::size_t budget) const {
  if (full_dim_ > budget) throw BudgetExceeded("typical projector: materialization exceeds budget");
  CMatrix basis(static_cast<Eigen::Index>(full_dim_), static_cast<Eigen::Index>(rank_));
  Eigen::Index col = 0;
  for_each_typical(*this, [&](std::size_t, const std::vector<std::size_t>& s) {
    CVector v = CVector::Ones(1);
    for (std::size_t k = 0; k < s.size(); ++k) v = kron(v, CVector(factors_[k].vectors.col(Eigen::Index(s[k]))));
    basis.col(col++) = v;
  });
  return basis;
}

CMatrix TypicalProjector::matrix(std::size_t budget) const {
  CMatrix b = range_basis(budget);
  return b * b.adjoint();
}

TypicalProjector typical_projector(const DensityOperator& rho, std::size_t n, double delta) {
  detail::require(n >= 1, "n must be >= 1");
  EigenPairs e = canonical_eigen(rho.matrix());
  return TypicalProjector(std::vector<EigenPairs>(n, e), von_neumann_entropy(rho), delta);
}

TypicalProjector cond_typical_projector(const std::vector<DensityOperator>& W, const Word& I,
                                        double delta) {
  detail::require(!I.empty(), "word must be non-empty");
  std::vector<EigenPairs> fs;
  std::vector<EigenPairs> cache;
  std::vector<double> ent;
  for (const auto& w : W) {
    cache.push_back(canonical_eigen(w.matrix()));
    ent.push_back(von_neumann_entropy(w));
  }
  double target = 0;
  for (std::size_t x : I) {
    detail::require(x < W.size(), "letter out of range");
    fs.push_back(cache[x]);
    target += ent[x];
  }
  return TypicalProjector(std::move(fs), target / double(I.size()), delta);
}

RankBounds rank_bounds(const TypicalProjector& p) {
  const double n = double(p.n());
  RankBounds b;
  b.upper = std::exp2(n * (p.target() + p.delta()));
  b.lower = p.probability() * std::exp2(n * (p.target() - p.delta()));
  double r = double(p.rank());
  b.holds = r <= b.upper * (1 + 1e-12) && r >= b.lower * (1 - 1e-12);
  return b;
}

LlnReport operator_lln_check(const std::vector<DensityOperator>& W, const std::vector<double>& P,
                             std::size_t n_min, std::size_t n_max, double delta, double eps) {
  detail::require(W.size() == P.size() && !W.empty(), "one probability per state");
  detail::require(n_min >= 1 && n_min <= n_max, "bad n range");
  LlnReport r;
  for (std::size_t n = n_min; n <= n_max; ++n) {
    TypeVector t = nearest_type(P, n);
    Word x = representative(t);
    auto q = t.distribution();
    CMatrix rho = CMatrix::Zero(W[0].matrix().rows(), W[0].matrix().cols());
    for (std::size_t i = 0; i < W.size(); ++i) rho += q[i] * W[i].matrix();
    TypicalProjector pi = typical_projector(DensityOperator(rho), n, delta);
    std::vector<CMatrix> sig;
    for (std::size_t k : x) sig.push_back(W[k].matrix());
    r.n.push_back(n);
    r.trace.push_back(pi.trace_with(sig));
  }
  r.increasing = true;
  for (std::size_t i = 1; i < r.trace.size(); ++i)
    if (r.trace[i] < r.trace[i - 1] - 1e-12) r.increasing = false;
  r.threshold = 0;
  for (std::size_t i = r.trace.size(); i-- > 0;) {
    if (r.trace[i] < 1.0 - eps) break;
    r.threshold = r.n[i];
  }
  return r;
}

double operator_chernoff_bound(std::size_t D, std::size_t M, double alpha, double eta) {
  return 2.0 * double(D) * std::exp2(-double(M) * alpha * eta * eta / (2.0 * std::numbers::ln2));
}

ChernoffReport operator_chernoff_check(const std::function<CMatrix(Rng&)>& sample,
                                       const CMatrix& mean, std::size_t M, double eta,
                                       std::size_t trials, Rng& rng) {
  detail::require(eta > 0 && eta <= 0.5, "eta must lie in (0, 1/2]");
  detail::require(M >= 1 && trials >= 1, "M and trials must be >= 1");
  const std::size_t D = std::size_t(mean.rows());
  ChernoffReport r;
  r.alpha = hermitian_eigenvalues(mean).minCoeff();
  r.vacuous = r.alpha <= 0;
  r.bound = r.vacuous ? kInfSurprisal : operator_chernoff_bound(D, M, r.alpha, eta);
  if (r.bound >= 1) r.vacuous = true;
  std::size_t hits = 0;
  for (std::size_t t = 0; t < trials; ++t) {
    CMatrix s = CMatrix::Zero(mean.rows(), mean.cols());
    for (std::size_t j = 0; j < M; ++j) s += sample(rng);
    s /= double(M);
    CMatrix lo = s - (1 - eta) * mean, hi = (1 + eta) * mean - s;
    if (hermitian_eigenvalues(lo).minCoeff() < -1e-12 || hermitian_eigenvalues(hi).minCoeff() < -1e-12) ++hits;
  }
  r.frequency = double(hits) / double(trials);
  double b = std::min(1.0, r.bound);
  r.sigma = std::sqrt(b * (1 - b) / double(trials));
  r.pass = r.frequency <= r.bound + 4 * r.sigma;
  return r;
}

GentleReport gentle_measurement_check(const DensityOperator& rho, const CMatrix& X) {
  detail::require(X.rows() == Eigen::Index(rho.dim()), "dimension mismatch");
  CMatrix s = psd_sqrt((X + X.adjoint()) * 0.5);
  GentleReport g;
  g.lhs = hermitian_trace_norm(rho.matrix() - s * rho.matrix() * s);
  double eps = std::max(0.0, 1.0 - (rho.matrix() * X).trace().real());
  g.rhs = std::sqrt(8.0 * eps);
  g.pass = g.lhs <= g.rhs + 1e-9;
  return g;
}

}  // namespace rsp
