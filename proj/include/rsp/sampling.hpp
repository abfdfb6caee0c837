#pragma once

#include <cstddef>
#include <functional>
#include <limits>

#include "rsp/qmath.hpp"
#include "rsp/rng.hpp"

namespace rsp {

// Symmetric complex Gaussian vector: components i.i.d. N_C(0, variance/d), so
// E<G|G> = variance and E|G><G| = (variance/d) I.
struct GaussianVector {
  CVector vector;
  double variance;
};

GaussianVector gaussian_complex_vector(std::size_t d, double variance, Rng& rng);

// Haar-distributed unitary: QR of a complex Ginibre matrix, with the phases of
// R's diagonal pushed into Q.
Unitary haar_unitary(std::size_t dim, Rng& rng);
PureState haar_state(std::size_t dim, Rng& rng);
// Random mixed state of the given rank (Hilbert-Schmidt induced measure).
DensityOperator random_density(std::size_t dim, std::size_t rank, Rng& rng);
// Uniform point of the probability simplex scaled by Dirichlet(alpha,...).
std::vector<double> dirichlet(std::size_t n, double alpha, Rng& rng);

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// Rate function (nats) of X = Y^2, Y ~ N(0, variance).
double rate_function_gaussian_square(double x, double variance);
// sup_y [y x - ln E e^{yX}] by golden-section search; for cross-checking.
double rate_function_numeric(double x, double variance);

// Cramer bound on Pr{(1/N) sum X_i >= a}. The rate is converted to bits and
// the result is returned as 2^(-N inf_{x>=a} Lambda*(x) / ln 2).
double cramer_tail_bound(std::size_t n, double a, double variance);
// Frequency of {(1/N) sum X_i >= a} over `trials` samples.
double empirical_tail(std::size_t n, double a, double variance, std::size_t trials, Rng& rng);

// xi - ln(1 + xi); the Taylor lower bound xi^2 / 6 holds on [-1, 1].
double log_gap(double xi);

// Concentration of (1/K) sum tr(U_k phi U_k* P) for Haar U_k and rank-p P.
double concentration_bound(std::size_t K, std::size_t p, double eps);
// Frequency with which |mean - p/D| >= eps p / D over `trials` draws.
double concentration_frequency(std::size_t D, std::size_t p, std::size_t K, double eps,
                               std::size_t trials, Rng& rng);

}  // namespace rsp
