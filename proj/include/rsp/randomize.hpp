#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "rsp/qmath.hpp"
#include "rsp/rng.hpp"

namespace rsp {

struct UnitarySet {
  enum class Source { Haar, Weyl, Explicit };

  std::size_t D = 0;
  double epsilon = 0;
  std::vector<Unitary> unitaries;
  Source source = Source::Explicit;
  std::uint64_t seed = 0;  // Haar only
  std::uint64_t stream = 0;

  std::size_t K() const { return unitaries.size(); }
  static UnitarySet explicit_set(std::vector<Unitary> us, double epsilon);
};

std::string to_string(UnitarySet::Source s);

// ceil((10/eps)^2 D log2(20 D / eps))
std::size_t randomizing_set_size(std::size_t D, double eps);

// (1/K) sum U_k rho U_k*
CMatrix twirl(const UnitarySet& set, const CMatrix& rho);

struct VerifyReport {
  double upper = 0;    // sup over pure (phi, psi) of <psi|R(phi)|psi> - 1/D found
  double lower = 0;    // inf of the same, <= 0
  double dev_max = 0;  // max(upper, -lower)
  double dev_min = 0;  // == lower
  double tolerance = 0;
  bool pass = false;
  bool heuristic = true;  // a lower estimate of the true sup, not a certificate
};

// Searches for the worst pair by alternating eigenvector ascent from
// `restarts` random starts, plus `probes` random phi (each with the exact best
// psi). Passes when dev_max <= eps / D.
VerifyReport verify_randomizing(const UnitarySet& set, std::size_t probes, std::size_t restarts,
                                Rng& rng);

// K Haar unitaries with K from randomizing_set_size; each attempt uses its own
// stream split from `rng` and is re-verified. Throws RetriesExhausted.
UnitarySet build_randomizing_set(std::size_t D, double eps, Rng& rng, std::size_t max_retries = 3,
                                 std::size_t probes = 64, std::size_t restarts = 8);
UnitarySet haar_set(std::size_t D, std::size_t K, double eps, Rng& rng);

// X^a Z^b for a, b in [0, D): exact randomizer with D^2 elements.
UnitarySet weyl_set(std::size_t D);

struct EpsilonNet {
  std::size_t D = 0;
  double epsilon = 0;
  std::vector<PureState> states;
  bool saturated = false;  // stopped by the rejection run, not the budget
  std::size_t candidates = 0;

  std::size_t size() const { return states.size(); }
  // Index of the net state with the largest overlap.
  std::size_t nearest(const PureState& psi) const;
};

// min over phases of || |a> - e^{i t} |b> ||_2
double phase_distance(const PureState& a, const PureState& b);

// (5/eps)^(2D)
double net_size_bound(std::size_t D, double eps);

// Greedy random packing at phase distance eps/2. Candidates are Haar states;
// the packing is declared saturated after `patience` consecutive rejections.
EpsilonNet epsilon_net(std::size_t D, double eps, Rng& rng, std::size_t max_candidates = 2'000'000,
                       std::size_t patience = 20'000);

struct QCCompressionScheme {
  std::size_t D = 0;
  double epsilon = 0;
  std::size_t K = 0;
  // Computational-basis blocks H_0 .. H_K. P_k projects onto the complement of H_k.
  std::vector<std::vector<std::size_t>> blocks;

  std::vector<std::size_t> kept(std::size_t k) const;
  CMatrix projector(std::size_t k) const;
};

QCCompressionScheme qc_scheme(std::size_t D, double eps);

struct QCDescription {
  std::size_t k;    // in [1, K]
  PureState xi;     // coordinates in the kept basis of block k
  double weight;    // tr(psi P_k)
};

QCDescription qc_compress(const QCCompressionScheme& s, const PureState& psi);
DensityOperator qc_decompress(const QCCompressionScheme& s, const QCDescription& d);

// q(1-q)D/6 - 2 log2 D + log2(1 - sqrt((1-F)/(1-q))) with q = S/D.
double universal_description_bound(std::size_t D, std::size_t S, double F);
// (4 + log2(1/eps)) D
double net_only_cbit_bound(std::size_t D, double eps);

}  // namespace rsp
