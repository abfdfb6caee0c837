#pragma once

// Entropic cbit/ebit/qubit trade-off curves over auxiliary classical
// channels p(j|i), a grid oracle, and the bound calculators.

#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "rsp/ensemble.hpp"
#include "rsp/qmath.hpp"

namespace rsp {

// Row-stochastic matrix, rows indexed by the source letter i, columns by j.
class ClassicalChannel {
 public:
  explicit ClassicalChannel(Eigen::MatrixXd p);

  // All mass on column 0.
  static ClassicalChannel trivial(std::size_t m, std::size_t J);
  // j = i, remaining columns unused. Needs J >= m.
  static ClassicalChannel identity(std::size_t m, std::size_t J);

  std::size_t rows() const { return std::size_t(p_.rows()); }
  std::size_t cols() const { return std::size_t(p_.cols()); }
  const Eigen::MatrixXd& matrix() const { return p_; }
  double operator()(std::size_t i, std::size_t j) const { return p_(Eigen::Index(i), Eigen::Index(j)); }

  // Row-wise Kronecker product: channel on pairs of letters.
  ClassicalChannel product(const ClassicalChannel& o) const;
  // 16 hex digits identifying the matrix entries rounded to 1e-9.
  std::string hash() const;

 private:
  Eigen::MatrixXd p_;
};

enum class CurveKind { Qct, Rsp, Entangled };
std::string to_string(CurveKind k);
CurveKind parse_curve_kind(const std::string& s);  // qct | rsp | entangled

inline constexpr double kInfeasible = std::numeric_limits<double>::infinity();

struct TradeoffPoint {
  double R = 0;
  double value = kInfeasible;  // +inf when R is below the reachable rate
  std::optional<ClassicalChannel> channel;
  CurveKind kind = CurveKind::Rsp;
  double rate = 0;  // constrained quantity at the reported channel
  bool feasible() const { return channel.has_value(); }
};

// Parts A (m), B (d), C (J); A and C classical.
LabeledState assemble_omega(const Ensemble& ens, const ClassicalChannel& ch);
// Parts X (m), A (dA), B (dB), C (J); X and C classical.
LabeledState assemble_omega(const BipartiteEnsemble& ens, const ClassicalChannel& ch);

struct QctPoint {
  double R = 0;  // S(A:C)
  double Q = 0;  // S(A:B|C)
};
struct RspPoint {
  double R = 0;  // S(A:BC)
  double E = 0;  // S(A:B|C)
};
struct EntangledPoint {
  double R = 0;  // S(X:BC)
  double E = 0;  // S(B|C)
};

// Evaluated on the assembled state with the generic entropy routines.
QctPoint eval_qct_point(const Ensemble& ens, const ClassicalChannel& ch);
RspPoint eval_rsp_point(const Ensemble& ens, const ClassicalChannel& ch);
EntangledPoint eval_entangled_point(const BipartiteEnsemble& ens, const ClassicalChannel& ch);

// Point of the broken curve obtained by feeding a q.c.t. point into r.s.p.
inline RspPoint qct_to_rsp(const QctPoint& q) { return {q.R + q.Q, q.Q}; }

// The column-separable form used by the solver and the oracle. Every
// functional is sum_j f(column j) plus a constant, evaluated on the B
// reductions sigma_i.
class CurveProblem {
 public:
  CurveProblem(const Ensemble& ens, CurveKind kind);
  CurveProblem(const BipartiteEnsemble& ens, CurveKind kind);

  struct Value {
    double rate = 0;       // constrained quantity
    double objective = 0;  // minimized quantity
  };

  std::size_t letters() const { return probs_.size(); }
  std::size_t dim() const { return std::size_t(sigmas_.front().rows()); }
  CurveKind kind() const { return kind_; }
  const std::vector<double>& probs() const { return probs_; }
  // B reductions of the ensemble members.
  const std::vector<CMatrix>& sigmas() const { return sigmas_; }

  Value evaluate(const Eigen::MatrixXd& W) const;
  // Gradients of rate and objective with respect to W.
  Value evaluate(const Eigen::MatrixXd& W, Eigen::MatrixXd& grad_rate, Eigen::MatrixXd& grad_obj) const;

  // Contribution of one column with entries w_i = p(j|i).
  struct ColumnTerms {
    double info = 0;     // -q log q + sum_i p_i w_i log(p_i w_i)
    double entropy = 0;  // q S(rho_j)
  };
  ColumnTerms column(const Eigen::VectorXd& w) const;
  Value combine(double info_sum, double entropy_sum) const;

  // Rate reached by the trivial channel; the minimum over all channels.
  double min_rate() const;

 private:
  void init(std::vector<double> p, std::vector<CMatrix> sigmas, CurveKind kind);

  std::vector<double> probs_;
  std::vector<CMatrix> sigmas_;
  CurveKind kind_;
  double source_entropy_ = 0;  // H(p)
  double floor_ = 0;           // sum_i p_i S(sigma_i)
};

struct SolverParams {
  std::size_t starts = 32;
  double tolerance = 1e-3;
  std::uint64_t seed = 0;
  std::size_t outer_iterations = 15;
  std::size_t inner_iterations = 100;
  std::size_t deterministic_limit = 64;  // cap on deterministic starts
  std::optional<std::size_t> columns;     // defaults to m + 1
  std::vector<Eigen::MatrixXd> warm_starts;  // extra starts; kept as candidates when feasible
};

TradeoffPoint solve_curve(const CurveProblem& problem, double R, const SolverParams& params = {});
TradeoffPoint solve_curve(const Ensemble& ens, double R, CurveKind kind, const SolverParams& params = {});
TradeoffPoint solve_curve(const BipartiteEnsemble& ens, double R, CurveKind kind,
                          const SolverParams& params = {});

// Exhaustive minimum over stochastic matrices whose entries are multiples of
// grid_step, |J| = m + 1. One enumeration serves every R. Throws
// BudgetExceeded when the grid is larger than `budget` matrices.
inline constexpr double kOracleBudget = 5e8;
std::vector<double> brute_force_oracle(const CurveProblem& problem, const std::vector<double>& R,
                                       double grid_step = 0.05, double budget = kOracleBudget);
double brute_force_oracle(const Ensemble& ens, double R, CurveKind kind, double grid_step = 0.05);
double brute_force_oracle(const BipartiteEnsemble& ens, double R, CurveKind kind, double grid_step = 0.05);
// Number of grid matrices visited.
double oracle_grid_size(std::size_t m, std::size_t J, double grid_step);

struct AdditivityReport {
  double R = 0;                 // rate for the product ensemble
  double lhs = 0;               // N(E1 x E2, R), solver
  double rhs = 0;               // min over R1 + R2 = R of N(E1, R1) + N(E2, R2)
  double product_rate = 0;      // of the product of the two achieving channels
  double product_value = 0;
  double product_residual = 0;  // |product_value - (N1 + N2)| at the best split
  bool upper_ok = false;        // the product channel is feasible and achieves rhs
  bool equal_ok = false;        // |lhs - rhs| within tolerance
};

AdditivityReport additivity_check(const Ensemble& e1, const Ensemble& e2, double R, CurveKind kind,
                                  const SolverParams& params = {}, std::size_t splits = 8);

// Worst-case curve value over convex combinations of the members' weights
// taken on a grid with the given step. Members with the same state list mix
// their probabilities; otherwise the state lists are concatenated.
struct AvsResult {
  double value = 0;
  std::vector<double> weights;  // maximizing combination
  std::size_t evaluated = 0;
};
AvsResult avs_curve(const std::vector<Ensemble>& ensembles, double weight_step, double R, CurveKind kind,
                    const SolverParams& params = {});
Ensemble mix(const std::vector<Ensemble>& ensembles, const std::vector<double>& weights);

struct EntangledEndpoints {
  double R_start = 0;  // chi of {p_i, phi_i^B}
  double E_start = 0;  // S(sum p_i phi_i^B)
  double E_floor = 0;  // sum p_i S(phi_i^B)
  double R_floor = 0;  // H(p)
};
EntangledEndpoints entangled_endpoints(const BipartiteEnsemble& ens);

// log2 D + log2 F: cbits needed even with free back communication.
double causality_bound(std::size_t D, double F);

}  // namespace rsp
