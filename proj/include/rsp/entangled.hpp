#pragma once

#include <cstddef>
#include <optional>

#include "rsp/ensemble.hpp"
#include "rsp/protocols.hpp"
#include "rsp/rng.hpp"
#include "rsp/typicality.hpp"

namespace rsp {

// Cap on K D_T^2, the number of stored unitary entries.
inline constexpr double kEntangledEntryBudget = 3e7;

struct EntangledOptions {
  double delta = 0.1;                 // type window: abort when ||p - Q||_1 > delta
  std::optional<double> typical_delta;  // projector window, defaults to delta
  double epsilon = 0.1;               // randomization accuracy
  std::optional<std::size_t> K;       // unitary count, defaults to entangled_unitary_count
  std::size_t max_retries = 5;        // redraws when the good-choice check fails
  std::size_t budget = 4096;          // on d_B^n
};

// (1 + n log2 m + log2 D_T) * 2 / ((1 - 2 eps) eps^2) * 2^{n (chi + 2 delta)}, rounded up.
std::size_t entangled_unitary_count(std::size_t n, std::size_t m, std::size_t DT, double chi,
                                    double delta, double eps);

struct EntangledRound {
  Transcript transcript;
  bool aborted = false;
  TypeVector type;
  std::size_t K = 0;
  std::size_t typical_dim = 0;      // D_T = rank Pi
  double chi = 0;                   // of {Q(i), phi_i^B}
  double trace_pi = 0;              // tr pi_I
  double eps_cond = 0;              // 1 - tr(phi_I Pi(I))
  double eps_avg = 0;               // 1 - tr(phi_I Pi)
  double good_choice_deviation = 0; // max |eigenvalue of the twirl * D_T - 1|
  std::size_t attempts = 0;
  double fidelity_mixed = 0;        // F(receiver state, phi_I^B)
  double fidelity_uhlmann = 0;      // || Psi phi_I^dagger ||_1^2 over the sender's best isometry
  double fidelity_bound = 0;        // from the gentle-measurement chain
  double failure_probability = 0;
  double type_cbits = 0;            // log2 of the number of types
};

// One round of the type-class protocol for the block I of an entangled
// ensemble. Works on the typical subspace T of the average receiver state:
// pi_I is sandwiched by the two typical projectors, the sender measures
// A_k proportional to U_k pi_I^T U_k^* on the sender half of Phi_T with the square-root
// instrument, and the receiver applies U_k^T.
EntangledRound entangled_rsp_round(const Word& I, const BipartiteEnsemble& ens,
                                   const EntangledOptions& opt, Rng& rng);

struct PiChain {
  double trace_pi = 0;
  double eps = 0;          // max of the two typicality defects
  double large_margin = 0; // tr pi - (1 - 2 eps), >= 0
  double small_margin = 0; // min eigenvalue of c Pi - pi, >= 0 when the bound holds
  double scale = 0;        // 2^{-n (S(phi^B|Q) - delta)}
};

// The two operator facts about pi_I, checked as matrix inequalities.
PiChain pi_chain(const Word& I, const BipartiteEnsemble& ens, double delta, std::size_t budget = 4096);

}  // namespace rsp
