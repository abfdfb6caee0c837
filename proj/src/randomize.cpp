#include "rsp/randomize.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "rsp/sampling.hpp"

namespace rsp {

UnitarySet UnitarySet::explicit_set(std::vector<Unitary> us, double epsilon) {
  detail::require(!us.empty(), "unitary set must be non-empty");
  UnitarySet s;
  s.D = us.front().dim();
  for (const auto& u : us) detail::require(u.dim() == s.D, "unitaries differ in dimension");
  s.epsilon = epsilon;
  s.unitaries = std::move(us);
  s.source = Source::Explicit;
  return s;
}

std::string to_string(UnitarySet::Source s) {
  switch (s) {
    case UnitarySet::Source::Haar: return "haar";
    case UnitarySet::Source::Weyl: return "weyl";
    default: return "explicit";
  }
}

std::size_t randomizing_set_size(std::size_t D, double eps) {
  detail::require(eps > 0 && eps <= 1, "epsilon must lie in (0, 1]");
  detail::require(D >= 1, "dimension must be >= 1");
  double k = (10.0 / eps) * (10.0 / eps) * double(D) * std::log2(20.0 * double(D) / eps);
  return static_cast<std::size_t>(std::ceil(k - 1e-9));
}

CMatrix twirl(const UnitarySet& set, const CMatrix& rho) {
  auto d = static_cast<Eigen::Index>(set.D);
  CMatrix acc = CMatrix::Zero(d, d);
  for (const auto& u : set.unitaries) acc += u.matrix() * rho * u.matrix().adjoint();
  return acc / double(set.K());
}

namespace {

// All U_k (or U_k*) stacked, so that U_k v for every k is one product.
struct Stack {
  CMatrix fwd, adj;
  Eigen::Index d, k;

  explicit Stack(const UnitarySet& s) : d(Eigen::Index(s.D)), k(Eigen::Index(s.K())) {
    fwd.resize(k * d, d);
    adj.resize(k * d, d);
    for (Eigen::Index i = 0; i < k; ++i) {
      fwd.block(i * d, 0, d, d) = s.unitaries[std::size_t(i)].matrix();
      adj.block(i * d, 0, d, d) = s.unitaries[std::size_t(i)].matrix().adjoint();
    }
  }

  // (1/K) sum (M_k v)(M_k v)^*
  CMatrix mix(const CMatrix& m, const CVector& v) const {
    CVector w = m * v;
    Eigen::Map<const CMatrix> cols(w.data(), d, k);
    return cols * cols.adjoint() / double(k);
  }
  CMatrix forward(const CVector& phi) const { return mix(fwd, phi); }
  CMatrix backward(const CVector& psi) const { return mix(adj, psi); }
};

struct Extreme {
  double value;
  CVector vec;
};

Extreme top(const CMatrix& h) {
  auto ep = hermitian_eigen(h);
  return {ep.values(0), ep.vectors.col(0)};
}
Extreme bottom(const CMatrix& h) {
  auto ep = hermitian_eigen(h);
  Eigen::Index n = ep.values.size() - 1;
  return {ep.values(n), ep.vectors.col(n)};
}

// Alternating ascent on <psi|R(phi)|psi>; `pick` selects top or bottom.
template <class Pick>
double ascend(const Stack& st, CVector phi, Pick pick) {
  double best = pick(st.forward(phi)).value, prev = best;
  for (int it = 0; it < 100; ++it) {
    CVector psi = pick(st.forward(phi)).vec;
    Extreme e = pick(st.backward(psi));
    phi = e.vec;
    best = e.value;
    if (std::abs(best - prev) < 1e-14) break;
    prev = best;
  }
  return best;
}

}  // namespace

VerifyReport verify_randomizing(const UnitarySet& set, std::size_t probes, std::size_t restarts,
                                Rng& rng) {
  detail::require(set.K() >= 1 && set.D >= 1, "empty unitary set");
  Stack st(set);
  double inv = 1.0 / double(set.D);
  double hi = -kInf, lo = kInf;
  auto consider = [&](const CVector& phi) {
    CMatrix r = st.forward(phi);
    hi = std::max(hi, top(r).value - inv);
    lo = std::min(lo, bottom(r).value - inv);
  };
  consider(PureState::basis(set.D, 0).amplitudes());
  for (std::size_t i = 0; i < probes; ++i) consider(haar_state(set.D, rng).amplitudes());
  for (std::size_t i = 0; i < restarts; ++i) {
    CVector start = haar_state(set.D, rng).amplitudes();
    hi = std::max(hi, ascend(st, start, top) - inv);
    lo = std::min(lo, ascend(st, start, bottom) - inv);
  }
  VerifyReport rep;
  rep.upper = hi;
  rep.lower = std::min(lo, 0.0);
  rep.dev_min = rep.lower;
  rep.dev_max = std::max(hi, -lo);
  rep.tolerance = set.epsilon * inv;
  // Exact randomizers have epsilon = 0 and a deviation at rounding level.
  rep.pass = rep.dev_max <= rep.tolerance + 1e-12;
  return rep;
}

UnitarySet haar_set(std::size_t D, std::size_t K, double eps, Rng& rng) {
  detail::require(K >= 1, "K must be >= 1");
  UnitarySet s;
  s.D = D;
  s.epsilon = eps;
  s.source = UnitarySet::Source::Haar;
  s.seed = rng.seed();
  s.stream = rng.stream();
  s.unitaries.reserve(K);
  for (std::size_t k = 0; k < K; ++k) s.unitaries.push_back(haar_unitary(D, rng));
  return s;
}

UnitarySet build_randomizing_set(std::size_t D, double eps, Rng& rng, std::size_t max_retries,
                                 std::size_t probes, std::size_t restarts) {
  detail::require(D >= 2, "build_randomizing_set needs D >= 2");
  std::size_t K = randomizing_set_size(D, eps);
  for (std::size_t attempt = 0; attempt < std::max<std::size_t>(1, max_retries); ++attempt) {
    Rng draw = rng.split(2 * attempt);
    Rng check = rng.split(2 * attempt + 1);
    UnitarySet s = haar_set(D, K, eps, draw);
    if (verify_randomizing(s, probes, restarts, check).pass) return s;
  }
  throw RetriesExhausted("no randomizing set found after " + std::to_string(max_retries) +
                         " attempts");
}

UnitarySet weyl_set(std::size_t D) {
  detail::require(D >= 1, "dimension must be >= 1");
  auto d = static_cast<Eigen::Index>(D);
  CMatrix X = CMatrix::Zero(d, d), Z = CMatrix::Zero(d, d);
  for (Eigen::Index j = 0; j < d; ++j) {
    X((j + 1) % d, j) = 1.0;
    Z(j, j) = std::polar(1.0, 2.0 * std::numbers::pi * double(j) / double(D));
  }
  UnitarySet s;
  s.D = D;
  s.epsilon = 0;
  s.source = UnitarySet::Source::Weyl;
  CMatrix zb = CMatrix::Identity(d, d);
  for (std::size_t b = 0; b < D; ++b) {
    CMatrix xa = CMatrix::Identity(d, d);
    for (std::size_t a = 0; a < D; ++a) {
      s.unitaries.emplace_back(xa * zb);
      xa = X * xa;
    }
    zb = Z * zb;
  }
  return s;
}

double phase_distance(const PureState& a, const PureState& b) {
  double ov = std::abs(a.amplitudes().dot(b.amplitudes()));
  return std::sqrt(std::max(0.0, 2.0 - 2.0 * ov));
}

double net_size_bound(std::size_t D, double eps) { return std::pow(5.0 / eps, 2.0 * double(D)); }

std::size_t EpsilonNet::nearest(const PureState& psi) const {
  detail::require(!states.empty(), "empty net");
  std::size_t best = 0;
  double ov = -1;
  for (std::size_t i = 0; i < states.size(); ++i) {
    double o = std::abs(states[i].amplitudes().dot(psi.amplitudes()));
    if (o > ov) {
      ov = o;
      best = i;
    }
  }
  return best;
}

EpsilonNet epsilon_net(std::size_t D, double eps, Rng& rng, std::size_t max_candidates,
                       std::size_t patience) {
  detail::require(eps > 0 && eps <= 2, "net parameter must lie in (0, 2]");
  detail::require(D >= 1, "dimension must be >= 1");
  EpsilonNet net;
  net.D = D;
  net.epsilon = eps;
  // Distance >= eps/2 is |<a|b>| <= 1 - eps^2/8.
  const double max_overlap = 1.0 - eps * eps / 8.0;
  auto d = static_cast<Eigen::Index>(D);
  CMatrix rows(0, d);  // conjugated net states, one per row
  std::size_t run = 0;
  while (net.candidates < max_candidates) {
    ++net.candidates;
    PureState c = haar_state(D, rng);
    bool ok = rows.rows() == 0 || (rows * c.amplitudes()).cwiseAbs().maxCoeff() <= max_overlap;
    if (ok) {
      net.states.push_back(c);
      rows.conservativeResize(rows.rows() + 1, d);
      rows.row(rows.rows() - 1) = c.amplitudes().adjoint();
      run = 0;
    } else if (++run >= patience) {
      net.saturated = true;
      break;
    }
  }
  return net;
}

std::vector<std::size_t> QCCompressionScheme::kept(std::size_t k) const {
  detail::require(k < blocks.size(), "block index out of range");
  std::vector<std::size_t> out;
  for (std::size_t b = 0; b < blocks.size(); ++b)
    if (b != k) out.insert(out.end(), blocks[b].begin(), blocks[b].end());
  std::sort(out.begin(), out.end());
  return out;
}

CMatrix QCCompressionScheme::projector(std::size_t k) const {
  auto d = static_cast<Eigen::Index>(D);
  CMatrix p = CMatrix::Zero(d, d);
  for (std::size_t i : kept(k)) p(Eigen::Index(i), Eigen::Index(i)) = 1.0;
  return p;
}

QCCompressionScheme qc_scheme(std::size_t D, double eps) {
  detail::require(D >= 1, "dimension must be >= 1");
  detail::require(eps > 0 && eps <= 1, "epsilon must lie in (0, 1]");
  QCCompressionScheme s;
  s.D = D;
  s.epsilon = eps;
  s.K = static_cast<std::size_t>(std::ceil(1.0 / eps - 1e-12));
  std::size_t w = D / s.K;
  std::size_t h0 = D - w * s.K;
  s.blocks.resize(s.K + 1);
  std::size_t next = 0;
  for (std::size_t i = 0; i < h0; ++i) s.blocks[0].push_back(next++);
  for (std::size_t k = 1; k <= s.K; ++k)
    for (std::size_t i = 0; i < w; ++i) s.blocks[k].push_back(next++);
  return s;
}

QCDescription qc_compress(const QCCompressionScheme& s, const PureState& psi) {
  detail::require(psi.dim() == s.D, "state dimension does not match the scheme");
  std::size_t best = 1;
  double bw = -1;
  for (std::size_t k = 1; k <= s.K; ++k) {
    double w = 0;
    for (std::size_t i : s.kept(k)) w += std::norm(psi[i]);
    if (w > bw + 1e-15) {
      bw = w;
      best = k;
    }
  }
  auto kept = s.kept(best);
  CVector xi(static_cast<Eigen::Index>(kept.size()));
  for (std::size_t j = 0; j < kept.size(); ++j) xi(Eigen::Index(j)) = psi[kept[j]];
  return {best, PureState::normalized(std::move(xi)), bw};
}

DensityOperator qc_decompress(const QCCompressionScheme& s, const QCDescription& d) {
  auto kept = s.kept(d.k);
  detail::require(kept.size() == d.xi.dim(), "description does not match the scheme");
  CVector v = CVector::Zero(static_cast<Eigen::Index>(s.D));
  for (std::size_t j = 0; j < kept.size(); ++j) v(Eigen::Index(kept[j])) = d.xi[j];
  return DensityOperator::from_pure(PureState(std::move(v)));
}

double universal_description_bound(std::size_t D, std::size_t S, double F) {
  detail::require(D >= 1 && S >= 1, "dimensions must be >= 1");
  double q = double(S) / double(D);
  detail::require(F <= 1.0, "fidelity must be <= 1");
  if (!(q < F)) detail::fail("bound requires q = S/D < F");
  return q * (1.0 - q) * double(D) / 6.0 - 2.0 * std::log2(double(D)) +
         std::log2(1.0 - std::sqrt((1.0 - F) / (1.0 - q)));
}

double net_only_cbit_bound(std::size_t D, double eps) {
  detail::require(eps > 0, "epsilon must be positive");
  return (4.0 + std::log2(1.0 / eps)) * double(D);
}

}  // namespace rsp
