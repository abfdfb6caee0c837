#include <algorithm>
#include <cmath>
#include <numeric>

#include "rsp/parallel.hpp"
#include "rsp/rng.hpp"
#include "rsp/sampling.hpp"
#include "rsp/tradeoff.hpp"

namespace rsp {

namespace {

using Mat = Eigen::MatrixXd;
using Value = CurveProblem::Value;

// Euclidean projection of each row onto the probability simplex.
void project_rows(Mat& W) {
  const Eigen::Index J = W.cols();
  std::vector<double> u(std::size_t(J), 0.0);
  for (Eigen::Index i = 0; i < W.rows(); ++i) {
    for (Eigen::Index j = 0; j < J; ++j) u[std::size_t(j)] = W(i, j);
    std::sort(u.begin(), u.end(), std::greater<>());
    double css = 0, theta = 0;
    for (Eigen::Index k = 0; k < J; ++k) {
      css += u[std::size_t(k)];
      double t = (css - 1.0) / double(k + 1);
      if (u[std::size_t(k)] - t > 0) theta = t;
    }
    for (Eigen::Index j = 0; j < J; ++j) W(i, j) = std::max(0.0, W(i, j) - theta);
    W.row(i) /= W.row(i).sum();
  }
}

struct Lagrangian {
  const CurveProblem& pb;
  double R, lambda, mu;

  double value(const Value& v) const {
    double s = std::max(0.0, v.rate - R + lambda / mu);
    return v.objective + 0.5 * mu * s * s;
  }
  double eval(const Mat& W, Value* out = nullptr) const {
    Value v = pb.evaluate(W);
    if (out) *out = v;
    return value(v);
  }
  double eval_grad(const Mat& W, Mat& G) const {
    Mat gr, go;
    Value v = pb.evaluate(W, gr, go);
    double s = std::max(0.0, v.rate - R + lambda / mu);
    G = go + mu * s * gr;
    return value(v);
  }
};

// Augmented-Lagrangian projected gradient with Armijo backtracking.
Mat local_search(const CurveProblem& pb, Mat W, double R, const SolverParams& prm) {
  Lagrangian L{pb, R, 0.0, 10.0};
  for (std::size_t outer = 0; outer < prm.outer_iterations; ++outer) {
    double step = 1.0;
    Mat G;
    for (std::size_t it = 0; it < prm.inner_iterations; ++it) {
      double f = L.eval_grad(W, G);
      bool moved = false;
      Mat Wn;
      for (int bt = 0; bt < 50; ++bt) {
        Wn = W - step * G;
        project_rows(Wn);
        double fn = L.eval(Wn);
        double dec = (G.array() * (Wn - W).array()).sum();
        if (fn <= f + 1e-4 * dec) {
          moved = true;
          break;
        }
        step *= 0.5;
      }
      if (!moved) break;
      double change = (Wn - W).cwiseAbs().maxCoeff();
      W = std::move(Wn);
      step = std::min(step * 2.0, 1e3);
      if (change < 1e-11) break;
    }
    Value v = pb.evaluate(W);
    double viol = v.rate - R;
    L.lambda = std::max(0.0, L.lambda + L.mu * viol);
    if (viol > 1e-9) L.mu = std::min(L.mu * 4.0, 1e9);
    else if (viol <= 1e-9 && outer > 3 && L.lambda == 0) break;
  }
  return W;
}

// Smallest step toward the trivial channel (which minimizes the rate) that
// restores feasibility.
Mat make_feasible(const CurveProblem& pb, const Mat& W, double R) {
  if (pb.evaluate(W).rate <= R) return W;
  Mat T = Mat::Zero(W.rows(), W.cols());
  T.col(0).setOnes();
  double lo = 0, hi = 1;
  for (int k = 0; k < 60; ++k) {
    double t = 0.5 * (lo + hi);
    if (pb.evaluate((1 - t) * W + t * T).rate <= R) hi = t;
    else lo = t;
  }
  Mat out = (1 - hi) * W + hi * T;
  project_rows(out);
  if (pb.evaluate(out).rate > R) out = T;
  return out;
}

struct Move {
  Eigen::Index i, a, b;
};

// Pattern search on mass transfers within rows, single and paired, keeping
// the rate at or below R.
Mat polish(const CurveProblem& pb, Mat W, double R) {
  std::vector<Move> moves;
  for (Eigen::Index i = 0; i < W.rows(); ++i)
    for (Eigen::Index a = 0; a < W.cols(); ++a)
      for (Eigen::Index b = 0; b < W.cols(); ++b)
        if (a != b) moves.push_back({i, a, b});
  const bool pairs = moves.size() <= 48;
  Value best = pb.evaluate(W);
  auto apply = [](Mat& M, const Move& mv, double h) {
    double amt = std::min(h, M(mv.i, mv.a));
    M(mv.i, mv.a) -= amt;
    M(mv.i, mv.b) += amt;
    return amt > 0;
  };
  auto try_accept = [&](const Mat& cand) {
    Value v = pb.evaluate(cand);
    if (v.rate <= R && v.objective < best.objective - 1e-14) {
      W = cand;
      best = v;
      return true;
    }
    return false;
  };
  for (double h = 0.05; h >= 1e-7; h *= 0.25) {
    for (int sweep = 0; sweep < 200; ++sweep) {
      bool improved = false;
      for (const auto& mv : moves) {
        Mat c = W;
        if (apply(c, mv, h) && try_accept(c)) improved = true;
      }
      if (pairs && !improved) {
        for (std::size_t x = 0; x < moves.size() && !improved; ++x)
          for (std::size_t y = x + 1; y < moves.size() && !improved; ++y) {
            if (moves[x].i == moves[y].i) continue;
            for (double s : {1.0, 0.5, 0.25}) {
              Mat c = W;
              if (apply(c, moves[x], h) && apply(c, moves[y], h * s) && try_accept(c)) {
                improved = true;
                break;
              }
              c = W;
              if (apply(c, moves[x], h * s) && apply(c, moves[y], h) && try_accept(c)) {
                improved = true;
                break;
              }
            }
          }
      }
      if (!improved) break;
    }
  }
  return W;
}

std::vector<Mat> starting_points(std::size_t m, std::size_t J, const SolverParams& prm) {
  std::vector<Mat> out;
  // Deterministic channels up to relabelling of the outputs: each row uses
  // either a column already in use or the next fresh one. Includes the
  // trivial and identity channels.
  std::vector<std::size_t> f;
  auto rec = [&](auto&& self, std::size_t used) -> void {
    if (out.size() >= prm.deterministic_limit) return;
    if (f.size() == m) {
      Mat W = Mat::Zero(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(J));
      for (std::size_t i = 0; i < m; ++i) W(Eigen::Index(i), Eigen::Index(f[i])) = 1;
      out.push_back(W);
      return;
    }
    for (std::size_t c = 0; c <= std::min(used, J - 1); ++c) {
      f.push_back(c);
      self(self, std::max(used, c + 1));
      f.pop_back();
    }
  };
  rec(rec, 0);
  for (const auto& w : prm.warm_starts)
    if (w.rows() == Eigen::Index(m) && w.cols() == Eigen::Index(J)) out.push_back(w);
  Rng base(prm.seed);
  for (std::size_t s = 0; s < prm.starts; ++s) {
    Rng r = base.split(s);
    Mat W(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(J));
    for (std::size_t i = 0; i < m; ++i) {
      auto row = dirichlet(J, 1.0, r);
      for (std::size_t j = 0; j < J; ++j) W(Eigen::Index(i), Eigen::Index(j)) = row[j];
    }
    out.push_back(W);
  }
  return out;
}

}  // namespace

TradeoffPoint solve_curve(const CurveProblem& pb, double R, const SolverParams& prm) {
  detail::require(std::isfinite(R) && R >= 0, "R must be finite and >= 0");
  const std::size_t m = pb.letters();
  const std::size_t J = prm.columns.value_or(m + 1);
  detail::require(J >= 1, "need at least one output letter");

  TradeoffPoint pt;
  pt.R = R;
  pt.kind = pb.kind();
  const double floor_rate = pb.min_rate();
  if (R < floor_rate - prm.tolerance) return pt;  // infeasible sentinel
  if (R < floor_rate) {
    ClassicalChannel t = ClassicalChannel::trivial(m, J);
    Value v = pb.evaluate(t.matrix());
    pt.value = std::max(0.0, v.objective);
    pt.rate = v.rate;
    pt.channel = t;
    return pt;
  }

  // Other channels can share the floor rate (orthogonal states), so search at
  // R == floor_rate too; the slack absorbs round-off in the rate.
  const double Rs = R + 1e-12;
  std::vector<Mat> starts = starting_points(m, J, prm);
  std::vector<Mat> results(starts.size());
  std::vector<Value> values(starts.size());
  parallel_for(starts.size(), [&](std::size_t s) {
    Mat W = local_search(pb, starts[s], Rs, prm);
    W = make_feasible(pb, W, Rs);
    values[s] = pb.evaluate(W);
    results[s] = std::move(W);
  });
  for (const auto& w : prm.warm_starts) {
    if (w.rows() != Eigen::Index(m) || w.cols() != Eigen::Index(J)) continue;
    Value v = pb.evaluate(w);
    if (v.rate > Rs) continue;
    starts.push_back(w);
    results.push_back(w);
    values.push_back(v);
  }

  // Polish the few best candidates; the rest rarely win.
  std::vector<std::size_t> order(starts.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return values[a].objective < values[b].objective; });
  const std::size_t keep = std::min<std::size_t>(4, order.size());
  parallel_for(keep, [&](std::size_t k) {
    std::size_t s = order[k];
    results[s] = polish(pb, results[s], Rs);
    values[s] = pb.evaluate(results[s]);
  });
  std::size_t best = order[0];
  for (std::size_t k = 0; k < keep; ++k)
    if (values[order[k]].objective < values[best].objective) best = order[k];

  Mat W = results[best];
  // Clean round-off so the channel validates exactly.
  for (Eigen::Index i = 0; i < W.rows(); ++i) {
    for (Eigen::Index j = 0; j < W.cols(); ++j)
      if (W(i, j) < 1e-15) W(i, j) = 0;
    W.row(i) /= W.row(i).sum();
  }
  pt.channel = ClassicalChannel(W);
  Value v = pb.evaluate(W);
  pt.value = std::max(0.0, v.objective);
  pt.rate = v.rate;
  return pt;
}

}  // namespace rsp
