#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "rsp/qmath.hpp"
#include "rsp/randomize.hpp"
#include "rsp/rng.hpp"

namespace rsp {

// One protocol run. An empty `message` is the FAILURE symbol.
struct Transcript {
  std::string protocol;
  std::string input;
  std::optional<std::size_t> message;
  DensityOperator receiver_output = DensityOperator::maximally_mixed(1);
  bool success = false;
  double cbits_sent = 0;
  double ebits_consumed = 0;
  double fidelity_to_target = 0;
  std::vector<int> outcomes;  // per-copy results, column method only
};

struct Povm {
  std::vector<CMatrix> elements;

  std::size_t size() const { return elements.size(); }
  std::size_t dim() const { return elements.empty() ? 0 : std::size_t(elements[0].rows()); }
  // max-abs of sum - I
  double completeness_defect() const;
  // Smallest eigenvalue over all elements.
  double min_eigenvalue() const;
};

// Measuring A on the sender half of Phi_D leaves the receiver with A^T / tr A,
// with probability tr A / D.
CMatrix receiver_state_after(const CMatrix& a);

// A_k = D / (K (1 + eps)) U_k conj(psi) U_k^*, A_failure last. Throws
// NotRandomizing when A_failure has an eigenvalue below -kStateTol.
Povm rsp_povm(const PureState& psi, const UnitarySet& set);

// What the sender does after the FAILURE outcome.
enum class OnFailure {
  Report,    // announce FAILURE
  Resample,  // announce a uniformly random k instead
  Teleport,  // fall back to teleportation: always exact, costs 2 log D extra cbits
};

// Protocol Pi with the POVM prepared once for a fixed target.
class PiProtocol {
 public:
  PiProtocol(const PureState& psi, const UnitarySet& set);

  const Povm& povm() const { return povm_; }
  const PureState& target() const { return psi_; }
  const UnitarySet& set() const { return *set_; }
  std::size_t K() const { return set_->K(); }
  double failure_probability() const { return fail_prob_; }

  // Sender's outcome (empty on failure) and the receiver's state before decoding.
  struct Measurement {
    std::optional<std::size_t> k;
    CMatrix pre;
  };
  Measurement measure(Rng& rng) const;
  // Receiver applies U_k^T.
  CMatrix decode(std::size_t k, const CMatrix& pre) const;

  Transcript run(Rng& rng, OnFailure mode = OnFailure::Report) const;

  // Outcome state before decoding for message k, and for FAILURE.
  CMatrix branch_state(std::size_t k) const;
  CMatrix failure_state() const;

 private:
  PureState psi_;
  const UnitarySet* set_;
  Povm povm_;
  std::vector<double> cumulative_;
  double fail_prob_;
};

Transcript run_protocol_pi(const PureState& psi, const UnitarySet& set, Rng& rng,
                           OnFailure mode = OnFailure::Report);

// log2(K + 1)
double pi_cbits(std::size_t K);
// Expected cbits of Pi with teleportation fallback: log2(K+1) + 2 log2(D) eps/(1+eps).
double pi_expected_cbits(std::size_t D, std::size_t K, double eps);
// The same with the index cost counted as log2 D: (1 + 2 eps/(1+eps)) log2 D.
double pi_expected_cbits_asymptotic(std::size_t D, double eps);
// log2 D + 2 log2(10/eps) + log2 log2(20 D/eps)
double pi_formula_cbits(std::size_t D, double eps);

// K copies of Phi_D, each measured with (conj psi, 1 - conj psi). The sender
// announces a uniformly chosen copy with outcome 0; FAILURE when none.
Transcript column_method(const PureState& psi, std::size_t K, Rng& rng);
double column_failure_probability(std::size_t D, std::size_t K);

struct Teleported {
  Transcript transcript;
  LabeledState state;  // joint state with any reference systems, parts in input order
};

// Teleports part `label` of `input`; the Bell outcome is drawn from `rng`.
Teleported teleport(const LabeledState& input, const std::string& label, Rng& rng);

// Sends the index of the net state with the largest overlap. A run is a
// success when the fidelity reaches 1 - eps_prime.
Transcript net_only_protocol(const PureState& psi, const EpsilonNet& net, double eps_prime);
// Net parameter sqrt(4 eps') for the net-only protocol.
double net_parameter(double eps_prime);

// ---------------------------------------------------------------------------
// Obliviousness. A record is one (weighted, unnormalized) operator per
// message; the trace distance between records is half the summed trace norms.

using Record = std::vector<CMatrix>;

double record_distance(const Record& a, const Record& b);

// Pi with failure resampling: what the receiver holds, keyed by message.
Record pi_actual_record(const PiProtocol& pi);
// sum_k (1/K) |k><k| (x) conj(U_k) rho U_k^T
Record pi_simulated_record(const UnitarySet& set, const CMatrix& rho);
// Receiver's output averaged over the run, resampling failures.
CMatrix pi_output(const PiProtocol& pi);

// Column method with a uniform message on failure: records live on the K copies.
Record column_actual_record(const PureState& psi, std::size_t K);
// Failure (prob eps): uniform message with (I/D)^K; else message k with rho in
// copy k and I/D elsewhere.
Record column_simulated_record(const CMatrix& rho, std::size_t K);
CMatrix column_output(const PureState& psi, std::size_t K);

enum class ProtocolKind { Pi, Column };

struct GapReport {
  double gap = 0;    // exact value from the branch operators
  double bound = 0;  // the obliviousness parameter claimed for the protocol
  double sigma = 0;  // for empirical estimates
  bool empirical = false;
};

GapReport obliviousness_gap_pi(const PiProtocol& pi);
GapReport obliviousness_gap_column(const PureState& psi, std::size_t K);
// Monte Carlo estimate of the record from `trials` runs, compared with the simulator.
GapReport obliviousness_gap_empirical(ProtocolKind kind, const PureState& psi, const UnitarySet* set,
                                      std::size_t K, std::size_t trials, Rng& rng);

// ---------------------------------------------------------------------------
// Causality experiment: the sender encodes x in [0, D) as the basis state |x>;
// the receiver skips the forward message, guesses it uniformly over the
// protocol's message alphabet, decodes, and measures in the basis.

struct CausalityReport {
  std::size_t trials = 0;
  double frequency = 0;
  double sigma = 0;
  double fidelity = 0;  // mean fidelity of honest runs on the same inputs
  double alphabet = 0;  // 2^cbits
  double lower = 0;     // F / alphabet
  double upper = 0;     // 1 / D
};

CausalityReport causality_pi(const UnitarySet& set, std::size_t trials, Rng& rng);
CausalityReport causality_column(std::size_t D, std::size_t K, std::size_t trials, Rng& rng);

}  // namespace rsp
