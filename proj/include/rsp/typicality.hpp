#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <vector>

#include "rsp/qmath.hpp"
#include "rsp/rng.hpp"

namespace rsp {

using Word = std::vector<std::size_t>;

struct TypeVector {
  std::size_t alphabet = 0;
  std::vector<std::size_t> counts;
  std::size_t n = 0;

  std::vector<double> distribution() const;
  bool operator==(const TypeVector&) const = default;
};

TypeVector type_of(const Word& word, std::size_t alphabet);
// Exact multinomial n! / prod counts!.
std::uint64_t type_class_size(const TypeVector& t);
// All types of length-n words over the alphabet, in lexicographic count order.
std::vector<TypeVector> all_types(std::size_t n, std::size_t alphabet);
// Some word of the type (letters in increasing order).
Word representative(const TypeVector& t);
// Count vector closest to n * p (largest remainders).
TypeVector nearest_type(const std::vector<double>& p, std::size_t n);

// Eigenbasis with eigenvalues descending; degenerate eigenvectors are phase
// fixed (first significant entry real positive) and ordered lexicographically.
EigenPairs canonical_eigen(const CMatrix& h);

// Projector onto the span of product eigenvectors e_{s_1} (x) ... (x) e_{s_n}
// whose eigenvalue product lambda satisfies |-(1/n) log2 lambda - target| <= delta.
// Kept in factored form; `matrix()` materializes it.
class TypicalProjector {
 public:
  // One (basis, eigenvalues) pair per tensor factor.
  TypicalProjector(std::vector<EigenPairs> factors, double target, double delta);

  std::size_t n() const { return factors_.size(); }
  std::size_t full_dim() const { return full_dim_; }
  std::size_t rank() const { return rank_; }
  double target() const { return target_; }
  double delta() const { return delta_; }
  const std::vector<EigenPairs>& factors() const { return factors_; }
  // Sequence membership, indexed in mixed radix (first factor most significant).
  const std::vector<bool>& mask() const { return mask_; }

  // tr((x)_k sigma_k  Pi) by enumeration over typical sequences.
  double trace_with(const std::vector<CMatrix>& sigmas) const;
  // Probability of the typical set under the factor eigenvalues themselves.
  double probability() const;

  // Throws BudgetExceeded above `budget` dimensions.
  CMatrix matrix(std::size_t budget = 4096) const;
  // Orthonormal basis of the range (columns), same budget.
  CMatrix range_basis(std::size_t budget = 4096) const;

 private:
  std::vector<EigenPairs> factors_;
  double target_, delta_;
  std::size_t full_dim_ = 1;
  std::size_t rank_ = 0;
  std::vector<bool> mask_;
};

// Enumeration budget on d^n for typical projectors.
inline constexpr std::size_t kEnumerationBudget = std::size_t(1) << 22;

// Pi^n_{rho,delta}
TypicalProjector typical_projector(const DensityOperator& rho, std::size_t n, double delta);
// Pi^n_{W,delta}(I) with entropy target H(W|P) = sum_x P(x) S(W_x), P the type of I.
TypicalProjector cond_typical_projector(const std::vector<DensityOperator>& W, const Word& I,
                                        double delta);

struct RankBounds {
  double lower;  // P(T) 2^{n (S - delta)}
  double upper;  // 2^{n (S + delta)}
  bool holds;
};
RankBounds rank_bounds(const TypicalProjector& p);

struct LlnReport {
  std::vector<std::size_t> n;
  std::vector<double> trace;  // tr(W_{x^n} Pi^n_{rho,delta})
  std::size_t threshold = 0;  // smallest n after which every value is >= 1 - eps (0 if never)
  bool increasing = false;    // nondecreasing over the sweep
};

// For each n in [n_min, n_max]: x^n is the nearest type to P and rho the
// average state under that type.
LlnReport operator_lln_check(const std::vector<DensityOperator>& W, const std::vector<double>& P,
                             std::size_t n_min, std::size_t n_max, double delta, double eps);

struct ChernoffReport {
  double frequency = 0;
  double bound = 0;
  double sigma = 0;
  double alpha = 0;
  bool vacuous = false;
  bool pass = false;
};

// 2 D 2^{-M alpha eta^2 / (2 ln 2)}
double operator_chernoff_bound(std::size_t D, std::size_t M, double alpha, double eta);

// Frequency with which (1/M) sum X_j leaves [(1-eta) A, (1+eta) A], with X_j
// drawn by `sample` and A = `mean`.
ChernoffReport operator_chernoff_check(const std::function<CMatrix(Rng&)>& sample,
                                       const CMatrix& mean, std::size_t M, double eta,
                                       std::size_t trials, Rng& rng);

struct GentleReport {
  double lhs = 0;  // || rho - sqrt(X) rho sqrt(X) ||_1
  double rhs = 0;  // sqrt(8 eps), eps = 1 - tr(rho X)
  bool pass = false;
};
GentleReport gentle_measurement_check(const DensityOperator& rho, const CMatrix& X);

}  // namespace rsp
