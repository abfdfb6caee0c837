#pragma once

#include <cstddef>
#include <vector>

#include "rsp/qmath.hpp"

namespace rsp {

// Weighted pure states on one system.
struct Ensemble {
  std::vector<double> probs;
  std::vector<PureState> states;

  Ensemble(std::vector<double> p, std::vector<PureState> s);

  std::size_t size() const { return probs.size(); }
  std::size_t dim() const { return states.front().dim(); }
  // sum_i p_i psi_i
  CMatrix average() const;
};

// Weighted pure states on A (x) B with a fixed cut.
struct BipartiteEnsemble {
  std::vector<double> probs;
  std::vector<PureState> states;
  std::size_t dA = 1, dB = 1;

  BipartiteEnsemble(std::vector<double> p, std::vector<PureState> s, std::size_t dA, std::size_t dB);
  // A one-dimensional A register: B carries the whole state.
  static BipartiteEnsemble from(const Ensemble& e);

  std::size_t size() const { return probs.size(); }
  // phi_i^B
  CMatrix reduced_b(std::size_t i) const;
  std::vector<DensityOperator> reduced_b() const;
  // dA x dB amplitude matrix of phi_i.
  CMatrix amplitudes(std::size_t i) const;
};

// Pairs of states in lexicographic order with product probabilities.
Ensemble product(const Ensemble& a, const Ensemble& b);

}  // namespace rsp
