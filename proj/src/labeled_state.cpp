#include <algorithm>
#include <numeric>
#include <set>

#include "rsp/qmath.hpp"

namespace rsp {

namespace {

std::size_t product(const std::vector<std::size_t>& d) {
  return std::accumulate(d.begin(), d.end(), std::size_t{1}, std::multiplies<>());
}

std::vector<std::size_t> strides(const std::vector<std::size_t>& dims) {
  std::vector<std::size_t> s(dims.size(), 1);
  for (std::size_t i = dims.size(); i-- > 1;) s[i - 1] = s[i] * dims[i];
  return s;
}

// Flat offsets in the full space for every multi-index over the parts `sel`,
// taken in the order given (last one fastest).
std::vector<Eigen::Index> offsets(const std::vector<std::size_t>& dims,
                                  const std::vector<std::size_t>& sel) {
  auto st = strides(dims);
  std::vector<Eigen::Index> out{0};
  for (std::size_t p : sel) {
    std::vector<Eigen::Index> next;
    next.reserve(out.size() * dims[p]);
    for (Eigen::Index base : out)
      for (std::size_t k = 0; k < dims[p]; ++k)
        next.push_back(base + static_cast<Eigen::Index>(k * st[p]));
    out.swap(next);
  }
  return out;
}

std::vector<std::size_t> indices_of(const LabeledState& w, const Labels& labels) {
  std::vector<std::size_t> idx;
  for (const auto& l : labels) idx.push_back(w.index_of(l));
  std::set<std::size_t> uniq(idx.begin(), idx.end());
  detail::require(uniq.size() == idx.size(), "repeated label");
  return idx;
}

std::vector<std::size_t> complement(std::size_t n, const std::vector<std::size_t>& sel) {
  std::vector<std::size_t> rest;
  for (std::size_t i = 0; i < n; ++i)
    if (std::find(sel.begin(), sel.end(), i) == sel.end()) rest.push_back(i);
  return rest;
}

std::vector<std::string> kept_classical(const LabeledState& w, const std::vector<Part>& parts) {
  std::vector<std::string> c;
  for (const auto& l : w.classical())
    for (const auto& p : parts)
      if (p.label == l) c.push_back(l);
  return c;
}

}  // namespace

LabeledState::LabeledState(std::vector<Part> parts, DensityOperator rho,
                           std::vector<std::string> classical)
    : parts_(std::move(parts)), rho_(std::move(rho)), classical_(std::move(classical)) {
  detail::require(!parts_.empty(), "labeled state needs at least one part");
  std::set<std::string> names;
  for (const auto& p : parts_) {
    detail::require(p.dim >= 1, "part dimension must be >= 1");
    detail::require(names.insert(p.label).second, "duplicate label " + p.label);
  }
  auto d = dims();
  detail::require(product(d) == rho_.dim(), "part dimensions do not match the matrix");
  for (const auto& c : classical_) {
    std::size_t k = index_of(c);
    auto st = strides(d);
    const CMatrix& m = rho_.matrix();
    for (Eigen::Index i = 0; i < m.rows(); ++i)
      for (Eigen::Index j = 0; j < m.cols(); ++j) {
        std::size_t di = (std::size_t(i) / st[k]) % d[k];
        std::size_t dj = (std::size_t(j) / st[k]) % d[k];
        if (di != dj && std::abs(m(i, j)) > kStateTol)
          detail::fail("part " + c + " is declared classical but has coherences");
      }
  }
}

LabeledState LabeledState::from_pure(std::vector<Part> parts, const PureState& psi) {
  return LabeledState(std::move(parts), DensityOperator::from_pure(psi));
}

bool LabeledState::has(std::string_view label) const {
  return std::any_of(parts_.begin(), parts_.end(), [&](const Part& p) { return p.label == label; });
}

std::size_t LabeledState::index_of(std::string_view label) const {
  for (std::size_t i = 0; i < parts_.size(); ++i)
    if (parts_[i].label == label) return i;
  detail::fail("unknown label " + std::string(label));
}

std::vector<std::size_t> LabeledState::dims() const {
  std::vector<std::size_t> d;
  for (const auto& p : parts_) d.push_back(p.dim);
  return d;
}

LabeledState tensor(const LabeledState& a, const LabeledState& b) {
  auto parts = a.parts();
  parts.insert(parts.end(), b.parts().begin(), b.parts().end());
  auto cl = a.classical();
  cl.insert(cl.end(), b.classical().begin(), b.classical().end());
  return LabeledState(std::move(parts), DensityOperator(kron(a.matrix(), b.matrix())), std::move(cl));
}

LabeledState partial_trace(const LabeledState& omega, const Labels& keep) {
  auto sel = indices_of(omega, keep);
  detail::require(!sel.empty(), "partial trace must keep at least one part");
  std::sort(sel.begin(), sel.end());
  auto d = omega.dims();
  auto ok = offsets(d, sel);
  auto ot = offsets(d, complement(d.size(), sel));
  const CMatrix& m = omega.matrix();
  auto n = static_cast<Eigen::Index>(ok.size());
  CMatrix out = CMatrix::Zero(n, n);
  for (Eigen::Index r = 0; r < n; ++r)
    for (Eigen::Index c = 0; c < n; ++c) {
      Complex acc = 0;
      for (Eigen::Index t : ot) acc += m(ok[r] + t, ok[c] + t);
      out(r, c) = acc;
    }
  std::vector<Part> parts;
  for (std::size_t i : sel) parts.push_back(omega.parts()[i]);
  auto cl = kept_classical(omega, parts);
  return LabeledState(std::move(parts), DensityOperator::normalized(out), std::move(cl));
}

LabeledState permute(const LabeledState& omega, const Labels& order) {
  auto sel = indices_of(omega, order);
  detail::require(sel.size() == omega.parts().size(), "permutation must list every label");
  auto map = offsets(omega.dims(), sel);
  const CMatrix& m = omega.matrix();
  auto n = m.rows();
  CMatrix out(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) out(i, j) = m(map[i], map[j]);
  std::vector<Part> parts;
  for (std::size_t i : sel) parts.push_back(omega.parts()[i]);
  return LabeledState(std::move(parts), DensityOperator(out), omega.classical());
}

CMatrix embed_operator(const std::vector<Part>& parts, const Labels& targets, const CMatrix& op) {
  std::vector<std::size_t> d, sel;
  for (const auto& p : parts) d.push_back(p.dim);
  for (const auto& t : targets) {
    auto it = std::find_if(parts.begin(), parts.end(), [&](const Part& p) { return p.label == t; });
    detail::require(it != parts.end(), "unknown label " + t);
    sel.push_back(std::size_t(it - parts.begin()));
  }
  auto ot = offsets(d, sel);
  auto orest = offsets(d, complement(d.size(), sel));
  detail::require(op.rows() == Eigen::Index(ot.size()) && op.cols() == op.rows(),
                  "operator does not match target dimensions");
  auto n = static_cast<Eigen::Index>(product(d));
  CMatrix out = CMatrix::Zero(n, n);
  for (Eigen::Index b : orest)
    for (std::size_t a = 0; a < ot.size(); ++a)
      for (std::size_t c = 0; c < ot.size(); ++c) out(ot[a] + b, ot[c] + b) = op(Eigen::Index(a), Eigen::Index(c));
  return out;
}

double entropy(const LabeledState& omega, const Labels& labels) {
  if (labels.empty()) return 0.0;
  return von_neumann_entropy(partial_trace(omega, labels).state());
}

namespace {
Labels join(std::initializer_list<const Labels*> sets) {
  Labels out;
  std::set<std::string> seen;
  for (const Labels* s : sets)
    for (const auto& l : *s) {
      detail::require(seen.insert(l).second, "label sets overlap at " + l);
      out.push_back(l);
    }
  return out;
}
}  // namespace

double mutual_info(const LabeledState& omega, const Labels& x, const Labels& y) {
  Labels xy = join({&x, &y});
  return entropy(omega, x) + entropy(omega, y) - entropy(omega, xy);
}

double cond_mutual_info(const LabeledState& omega, const Labels& x, const Labels& y, const Labels& c) {
  Labels xyc = join({&x, &y, &c});
  return entropy(omega, join({&x, &c})) + entropy(omega, join({&y, &c})) - entropy(omega, xyc) -
         entropy(omega, c);
}

}  // namespace rsp
