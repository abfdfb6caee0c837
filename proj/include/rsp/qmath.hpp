#pragma once

// Dense complex linear algebra and the quantum-information functionals the
// rest of the library is built on. Entropies are in bits throughout.

#include <complex>
#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "rsp/error.hpp"

namespace rsp {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RVector = Eigen::VectorXd;

// Tolerance on the type invariants (norm, hermiticity, trace, unitarity).
inline constexpr double kStateTol = 1e-10;
// Eigenvalues below this are treated as zero before taking logarithms.
// Invariant tolerances above are two orders larger than the clamp.
inline constexpr double kEigenClamp = 1e-12;

class PureState {
 public:
  // Throws InvalidArgument unless the vector is non-empty with unit norm.
  explicit PureState(CVector amplitudes);

  static PureState normalized(CVector v);
  static PureState basis(std::size_t dim, std::size_t index);
  // (|0> + |1> + ... ) / sqrt(dim)
  static PureState uniform(std::size_t dim);

  std::size_t dim() const { return static_cast<std::size_t>(amp_.size()); }
  const CVector& amplitudes() const { return amp_; }
  Complex operator[](std::size_t i) const { return amp_(static_cast<Eigen::Index>(i)); }

  CMatrix projector() const { return amp_ * amp_.adjoint(); }
  // Complex conjugate in the computational basis.
  PureState conjugate() const;

 private:
  CVector amp_;
};

class DensityOperator {
 public:
  // Throws InvalidArgument unless Hermitian, PSD and unit trace within kStateTol.
  explicit DensityOperator(CMatrix m);

  static DensityOperator from_pure(const PureState& psi);
  static DensityOperator maximally_mixed(std::size_t dim);
  // Renormalizes a nonzero PSD operator to unit trace.
  static DensityOperator normalized(const CMatrix& m);

  std::size_t dim() const { return static_cast<std::size_t>(m_.rows()); }
  const CMatrix& matrix() const { return m_; }

  double purity() const;

 private:
  CMatrix m_;
};

class Unitary {
 public:
  // Throws InvalidArgument unless U U^dagger = 1 within kStateTol (max-abs entry).
  explicit Unitary(CMatrix u);
  static Unitary identity(std::size_t dim);

  std::size_t dim() const { return static_cast<std::size_t>(u_.rows()); }
  const CMatrix& matrix() const { return u_; }

  Unitary adjoint() const;
  Unitary transpose() const;
  Unitary conjugate() const;

 private:
  struct Unchecked {};
  Unitary(CMatrix u, Unchecked) : u_(std::move(u)) {}
  CMatrix u_;
};

// max |(U U^dagger - 1)_ij|
double unitarity_defect(const CMatrix& u);

// ---------------------------------------------------------------------------
// Spectral helpers

struct EigenPairs {
  RVector values;   // descending
  CMatrix vectors;  // columns match values
};

// Eigendecomposition of a Hermitian matrix, eigenvalues sorted descending.
EigenPairs hermitian_eigen(const CMatrix& h);
RVector hermitian_eigenvalues(const CMatrix& h);

// f applied to the spectrum of a Hermitian matrix.
CMatrix psd_sqrt(const CMatrix& h);
// log2 of a PSD matrix with eigenvalues clamped at kEigenClamp.
CMatrix psd_log2(const CMatrix& h);

// Sum of singular values.
double trace_norm(const CMatrix& a);
// Sum of |eigenvalues| of a Hermitian matrix.
double hermitian_trace_norm(const CMatrix& h);

CMatrix kron(const CMatrix& a, const CMatrix& b);
CVector kron(const CVector& a, const CVector& b);

// ---------------------------------------------------------------------------
// Functionals

// Squared (Uhlmann) fidelity ||sqrt(rho) sqrt(sigma)||_1^2.
double fidelity(const DensityOperator& rho, const DensityOperator& sigma);
double fidelity(const PureState& psi, const PureState& phi);
double fidelity(const PureState& psi, const DensityOperator& sigma);

// Normalized trace distance 1/2 ||rho - sigma||_1.
double trace_distance(const DensityOperator& rho, const DensityOperator& sigma);

// Binary Shannon entropy of a probability vector (zeros contribute 0).
double shannon_entropy(std::span<const double> p);
// -sum x log2 x over the clamped spectrum of a PSD matrix (trace need not be 1).
double entropy_of_spectrum(const RVector& eigenvalues);
double von_neumann_entropy(const CMatrix& rho);
double von_neumann_entropy(const DensityOperator& rho);

// (1/sqrt(D)) sum_j |j>|j>
PureState max_entangled(std::size_t dim);

// ---------------------------------------------------------------------------
// Multipartite states

using Labels = std::vector<std::string>;

struct Part {
  std::string label;
  std::size_t dim;
  bool operator==(const Part&) const = default;
};

// A density operator on an ordered tensor product of labelled parts. Parts
// listed in `classical` are block diagonal in the computational basis.
class LabeledState {
 public:
  LabeledState(std::vector<Part> parts, DensityOperator rho,
               std::vector<std::string> classical = {});

  static LabeledState from_pure(std::vector<Part> parts, const PureState& psi);

  const std::vector<Part>& parts() const { return parts_; }
  const DensityOperator& state() const { return rho_; }
  const CMatrix& matrix() const { return rho_.matrix(); }
  const std::vector<std::string>& classical() const { return classical_; }
  std::size_t dim() const { return rho_.dim(); }

  bool has(std::string_view label) const;
  std::size_t index_of(std::string_view label) const;  // throws on unknown label
  std::vector<std::size_t> dims() const;

 private:
  std::vector<Part> parts_;
  DensityOperator rho_;
  std::vector<std::string> classical_;
};

LabeledState tensor(const LabeledState& a, const LabeledState& b);

// Keeps the listed parts, in the order they appear in `parts()`.
LabeledState partial_trace(const LabeledState& omega, const Labels& keep);

// Reorders the parts to `order` (a permutation of the labels).
LabeledState permute(const LabeledState& omega, const Labels& order);

// Full-space operator acting as `op` on `targets` (in the given order) and as
// the identity on every other part.
CMatrix embed_operator(const std::vector<Part>& parts, const Labels& targets,
                       const CMatrix& op);

// Entropy of the reduction to `labels`; the empty set gives 0.
double entropy(const LabeledState& omega, const Labels& labels);

double mutual_info(const LabeledState& omega, const Labels& x,
                   const Labels& y);
double cond_mutual_info(const LabeledState& omega, const Labels& x,
                        const Labels& y, const Labels& c);

}  // namespace rsp
