#include "rsp/qmath.hpp"

#include <algorithm>
#include <cmath>

namespace rsp {

namespace {

double max_abs(const CMatrix& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

void require_same_dim(std::size_t a, std::size_t b) {
  if (a != b) detail::fail("dimension mismatch: " + std::to_string(a) + " vs " + std::to_string(b));
}

}  // namespace

PureState::PureState(CVector amplitudes) : amp_(std::move(amplitudes)) {
  detail::require(amp_.size() >= 1, "pure state needs dimension >= 1");
  double n = amp_.norm();
  if (!std::isfinite(n) || std::abs(n - 1.0) > kStateTol)
    detail::fail("pure state is not normalized (norm " + std::to_string(n) + ")");
}

PureState PureState::normalized(CVector v) {
  double n = v.norm();
  detail::require(v.size() >= 1 && n > 0 && std::isfinite(n), "cannot normalize a zero vector");
  return PureState(v / n);
}

PureState PureState::basis(std::size_t dim, std::size_t index) {
  detail::require(dim >= 1 && index < dim, "basis index out of range");
  CVector v = CVector::Zero(static_cast<Eigen::Index>(dim));
  v(static_cast<Eigen::Index>(index)) = 1.0;
  return PureState(std::move(v));
}

PureState PureState::uniform(std::size_t dim) {
  detail::require(dim >= 1, "dimension must be >= 1");
  CVector v = CVector::Constant(static_cast<Eigen::Index>(dim), 1.0 / std::sqrt(double(dim)));
  return normalized(std::move(v));
}

PureState PureState::conjugate() const { return PureState(amp_.conjugate()); }

DensityOperator::DensityOperator(CMatrix m) {
  detail::require(m.rows() >= 1 && m.rows() == m.cols(), "density operator must be square and non-empty");
  if (!m.allFinite()) detail::fail("density operator has non-finite entries");
  if (max_abs(m - m.adjoint()) > kStateTol) detail::fail("density operator is not Hermitian");
  CMatrix h = (m + m.adjoint()) * 0.5;
  double tr = h.trace().real();
  if (std::abs(tr - 1.0) > kStateTol)
    detail::fail("density operator trace is " + std::to_string(tr));
  double lo = hermitian_eigenvalues(h).minCoeff();
  if (lo < -kStateTol) detail::fail("density operator has negative eigenvalue " + std::to_string(lo));
  m_ = std::move(h);
}

DensityOperator DensityOperator::from_pure(const PureState& psi) {
  return DensityOperator(psi.projector());
}

DensityOperator DensityOperator::maximally_mixed(std::size_t dim) {
  detail::require(dim >= 1, "dimension must be >= 1");
  auto d = static_cast<Eigen::Index>(dim);
  return DensityOperator(CMatrix::Identity(d, d) / double(dim));
}

DensityOperator DensityOperator::normalized(const CMatrix& m) {
  detail::require(m.rows() >= 1 && m.rows() == m.cols(), "operator must be square");
  CMatrix h = (m + m.adjoint()) * 0.5;
  double tr = h.trace().real();
  detail::require(tr > 0 && std::isfinite(tr), "cannot normalize an operator with trace <= 0");
  return DensityOperator(h / tr);
}

double DensityOperator::purity() const { return (m_ * m_).trace().real(); }

Unitary::Unitary(CMatrix u) : u_(std::move(u)) {
  detail::require(u_.rows() >= 1 && u_.rows() == u_.cols(), "unitary must be square and non-empty");
  double d = unitarity_defect(u_);
  if (!(d <= kStateTol)) detail::fail("matrix is not unitary (defect " + std::to_string(d) + ")");
}

Unitary Unitary::identity(std::size_t dim) {
  auto d = static_cast<Eigen::Index>(dim);
  return Unitary(CMatrix::Identity(d, d), Unchecked{});
}
Unitary Unitary::adjoint() const { return Unitary(u_.adjoint(), Unchecked{}); }
Unitary Unitary::transpose() const { return Unitary(u_.transpose(), Unchecked{}); }
Unitary Unitary::conjugate() const { return Unitary(u_.conjugate(), Unchecked{}); }

double unitarity_defect(const CMatrix& u) {
  if (u.rows() != u.cols()) return INFINITY;
  return max_abs(u * u.adjoint() - CMatrix::Identity(u.rows(), u.cols()));
}

EigenPairs hermitian_eigen(const CMatrix& h) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(h);
  if (es.info() != Eigen::Success) throw Error("eigendecomposition failed");
  Eigen::Index n = h.rows();
  EigenPairs out{RVector(n), CMatrix(n, n)};
  for (Eigen::Index i = 0; i < n; ++i) {
    out.values(i) = es.eigenvalues()(n - 1 - i);
    out.vectors.col(i) = es.eigenvectors().col(n - 1 - i);
  }
  return out;
}

RVector hermitian_eigenvalues(const CMatrix& h) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(h, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw Error("eigendecomposition failed");
  return es.eigenvalues().reverse();
}

namespace {
template <class F>
CMatrix spectral_map(const CMatrix& h, F f) {
  EigenPairs ep = hermitian_eigen(h);
  RVector fv = ep.values.unaryExpr(f);
  return ep.vectors * fv.cast<Complex>().asDiagonal() * ep.vectors.adjoint();
}
}  // namespace

CMatrix psd_sqrt(const CMatrix& h) {
  return spectral_map(h, [](double x) { return x > 0 ? std::sqrt(x) : 0.0; });
}

CMatrix psd_log2(const CMatrix& h) {
  return spectral_map(h, [](double x) { return std::log2(std::max(x, kEigenClamp)); });
}

double trace_norm(const CMatrix& a) {
  Eigen::JacobiSVD<CMatrix> svd(a);
  return svd.singularValues().sum();
}

double hermitian_trace_norm(const CMatrix& h) {
  return hermitian_eigenvalues((h + h.adjoint()) * 0.5).cwiseAbs().sum();
}

CMatrix kron(const CMatrix& a, const CMatrix& b) {
  CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

CVector kron(const CVector& a, const CVector& b) {
  CVector out(a.size() * b.size());
  for (Eigen::Index i = 0; i < a.size(); ++i) out.segment(i * b.size(), b.size()) = a(i) * b;
  return out;
}

namespace {

// A unit-trace operator of purity ~1 is |v><v| for its top eigenvector.
bool rank_one(const DensityOperator& r) { return std::abs(r.purity() - 1.0) <= kStateTol; }

CVector top_vector(const CMatrix& m) { return hermitian_eigen(m).vectors.col(0); }

double clamp01(double x) { return std::clamp(x, 0.0, 1.0); }

}  // namespace

double fidelity(const DensityOperator& rho, const DensityOperator& sigma) {
  require_same_dim(rho.dim(), sigma.dim());
  if (rank_one(rho)) {
    CVector v = top_vector(rho.matrix());
    return clamp01((v.adjoint() * sigma.matrix() * v)(0, 0).real());
  }
  if (rank_one(sigma)) {
    CVector v = top_vector(sigma.matrix());
    return clamp01((v.adjoint() * rho.matrix() * v)(0, 0).real());
  }
  CMatrix s = psd_sqrt(rho.matrix());
  CMatrix m = s * sigma.matrix() * s;
  RVector ev = hermitian_eigenvalues((m + m.adjoint()) * 0.5);
  double acc = 0;
  for (double x : ev) acc += x > 0 ? std::sqrt(x) : 0.0;
  return clamp01(acc * acc);
}

double fidelity(const PureState& psi, const PureState& phi) {
  require_same_dim(psi.dim(), phi.dim());
  return clamp01(std::norm(psi.amplitudes().dot(phi.amplitudes())));
}

double fidelity(const PureState& psi, const DensityOperator& sigma) {
  require_same_dim(psi.dim(), sigma.dim());
  const CVector& v = psi.amplitudes();
  return clamp01((v.adjoint() * sigma.matrix() * v)(0, 0).real());
}

double trace_distance(const DensityOperator& rho, const DensityOperator& sigma) {
  require_same_dim(rho.dim(), sigma.dim());
  return clamp01(0.5 * hermitian_trace_norm(rho.matrix() - sigma.matrix()));
}

double shannon_entropy(std::span<const double> p) {
  double h = 0;
  for (double x : p)
    if (x > 0) h -= x * std::log2(x);
  return h;
}

double entropy_of_spectrum(const RVector& eigenvalues) {
  double h = 0;
  for (double x : eigenvalues) {
    x = std::min(x, 1.0);
    if (x > kEigenClamp) h -= x * std::log2(x);
  }
  return std::max(h, 0.0);
}

double von_neumann_entropy(const CMatrix& rho) {
  return entropy_of_spectrum(hermitian_eigenvalues((rho + rho.adjoint()) * 0.5));
}

double von_neumann_entropy(const DensityOperator& rho) { return von_neumann_entropy(rho.matrix()); }

PureState max_entangled(std::size_t dim) {
  detail::require(dim >= 1, "dimension must be >= 1");
  auto d = static_cast<Eigen::Index>(dim);
  CVector v = CVector::Zero(d * d);
  for (Eigen::Index j = 0; j < d; ++j) v(j * d + j) = 1.0 / std::sqrt(double(dim));
  return PureState::normalized(std::move(v));
}

}  // namespace rsp
