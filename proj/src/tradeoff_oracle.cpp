#include <algorithm>
#include <cmath>

#include "rsp/tradeoff.hpp"

namespace rsp {

namespace {

double binom(double n, double k) {
  double c = 1;
  for (double i = 1; i <= k; ++i) c = c * (n - k + i) / i;
  return std::round(c);
}

void compositions(std::size_t N, std::size_t J, std::vector<std::size_t>& cur,
                  std::vector<std::vector<std::size_t>>& out) {
  if (cur.size() + 1 == J) {
    cur.push_back(N);
    out.push_back(cur);
    cur.pop_back();
    return;
  }
  for (std::size_t a = 0; a <= N; ++a) {
    cur.push_back(a);
    compositions(N - a, J, cur, out);
    cur.pop_back();
  }
}

}  // namespace

double oracle_grid_size(std::size_t m, std::size_t J, double grid_step) {
  double N = std::round(1.0 / grid_step);
  return std::pow(binom(N + double(J) - 1, double(J) - 1), double(m));
}

std::vector<double> brute_force_oracle(const CurveProblem& pb, const std::vector<double>& Rs, double grid_step,
                                       double budget) {
  detail::require(grid_step > 0 && grid_step <= 1, "grid step must lie in (0, 1]");
  const double Nd = std::round(1.0 / grid_step);
  detail::require(std::abs(Nd * grid_step - 1.0) < 1e-9, "1 / grid_step must be an integer");
  const auto N = std::size_t(Nd);
  const std::size_t m = pb.letters(), J = m + 1;
  if (oracle_grid_size(m, J, grid_step) > budget) throw BudgetExceeded("oracle grid exceeds the budget");
  const double table_size = std::pow(double(N + 1), double(m));
  if (table_size > 1e7) throw BudgetExceeded("oracle column table exceeds the budget");

  // Column terms for every grid column (w_1..w_m), keyed in base N+1 with
  // letter 0 least significant. Built from the normalized conditional state
  // and conditional distribution so it shares no code with the solver.
  const auto T = std::size_t(table_size);
  const auto d = Eigen::Index(pb.dim());
  const auto& p = pb.probs();
  const auto& sig = pb.sigmas();
  std::vector<double> tab_info(T, 0.0), tab_ent(T, 0.0);
  std::vector<double> joint(m);
  for (std::size_t key = 0; key < T; ++key) {
    std::size_t k = key;
    double q = 0;
    for (std::size_t i = 0; i < m; ++i) {
      joint[i] = p[i] * double(k % (N + 1)) / Nd;
      k /= N + 1;
      q += joint[i];
    }
    if (q <= 0) continue;
    std::vector<double> cond(m);
    CMatrix rho = CMatrix::Zero(d, d);
    for (std::size_t i = 0; i < m; ++i) {
      cond[i] = joint[i] / q;
      rho += cond[i] * sig[i];
    }
    tab_info[key] = -q * shannon_entropy(cond);
    tab_ent[key] = q * von_neumann_entropy(rho);
  }

  std::vector<std::vector<std::size_t>> rows;
  std::vector<std::size_t> cur;
  compositions(N, J, cur, rows);

  std::vector<double> sorted(Rs);
  std::sort(sorted.begin(), sorted.end());
  std::vector<double> bucket(sorted.size(), kInfeasible);

  std::vector<std::size_t> stride(m);
  for (std::size_t i = 0, s = 1; i < m; ++i, s *= N + 1) stride[i] = s;
  // keys[i] holds the partial column keys after rows 0..i-1.
  std::vector<std::vector<std::size_t>> keys(m + 1, std::vector<std::size_t>(J, 0));
  auto rec = [&](auto&& self, std::size_t i) -> void {
    if (i == m) {
      double is = 0, es = 0;
      for (std::size_t j = 0; j < J; ++j) {
        is += tab_info[keys[m][j]];
        es += tab_ent[keys[m][j]];
      }
      CurveProblem::Value v = pb.combine(is, es);
      auto it = std::lower_bound(sorted.begin(), sorted.end(), v.rate - 1e-12);
      if (it != sorted.end()) {
        auto r = std::size_t(it - sorted.begin());
        bucket[r] = std::min(bucket[r], v.objective);
      }
      return;
    }
    for (const auto& row : rows) {
      for (std::size_t j = 0; j < J; ++j) keys[i + 1][j] = keys[i][j] + row[j] * stride[i];
      self(self, i + 1);
    }
  };
  rec(rec, 0);

  for (std::size_t r = 1; r < bucket.size(); ++r) bucket[r] = std::min(bucket[r], bucket[r - 1]);
  std::vector<double> out(Rs.size());
  for (std::size_t r = 0; r < Rs.size(); ++r) {
    auto it = std::lower_bound(sorted.begin(), sorted.end(), Rs[r]);
    double v = bucket[std::size_t(it - sorted.begin())];
    out[r] = std::isfinite(v) ? std::max(0.0, v) : kInfeasible;
  }
  return out;
}

}  // namespace rsp
