#include "rsp/json_io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace rsp::io {

namespace {

void check_keys(const json& j, const std::set<std::string>& allowed, const char* what) {
  if (!j.is_object()) throw InvalidArgument(std::string(what) + ": expected an object");
  for (auto it = j.begin(); it != j.end(); ++it)
    if (!allowed.count(it.key())) throw InvalidArgument(std::string(what) + ": unknown key '" + it.key() + "'");
}

std::vector<double> numbers(const json& j, const char* what) {
  if (!j.is_array()) throw InvalidArgument(std::string(what) + ": expected an array of numbers");
  std::vector<double> v;
  for (const auto& x : j) {
    if (!x.is_number()) throw InvalidArgument(std::string(what) + ": expected numbers");
    v.push_back(x.get<double>());
  }
  return v;
}

std::size_t product(const std::vector<std::size_t>& d) {
  std::size_t p = 1;
  for (auto x : d) p *= x;
  return p;
}

CVector vector_from(const json& j, std::size_t dim) {
  check_keys(j, {"re", "im", "dims"}, "state");
  if (!j.contains("re")) throw InvalidArgument("state: missing 're'");
  auto re = numbers(j["re"], "re");
  std::vector<double> im = j.contains("im") ? numbers(j["im"], "im") : std::vector<double>(re.size(), 0.0);
  if (re.size() != im.size()) throw InvalidArgument("state: 're' and 'im' differ in length");
  if (dim && re.size() != dim) throw InvalidArgument("state: length does not match dims");
  CVector v(static_cast<Eigen::Index>(re.size()));
  for (std::size_t k = 0; k < re.size(); ++k) v(Eigen::Index(k)) = Complex(re[k], im[k]);
  return v;
}

}  // namespace

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  auto r = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, r.ptr);
}

json to_json(const PureState& psi, const std::vector<std::size_t>& dims) {
  json j;
  j["dims"] = dims.empty() ? std::vector<std::size_t>{psi.dim()} : dims;
  json re = json::array(), im = json::array();
  for (std::size_t k = 0; k < psi.dim(); ++k) {
    re.push_back(psi[k].real());
    im.push_back(psi[k].imag());
  }
  j["re"] = re;
  j["im"] = im;
  return j;
}

PureState pure_state_from_json(const json& j) {
  std::size_t dim = 0;
  if (j.contains("dims")) {
    auto d = j["dims"].get<std::vector<std::size_t>>();
    dim = product(d);
  }
  return PureState(vector_from(j, dim));
}

json to_json(const DensityOperator& rho) {
  json j;
  j["dims"] = {rho.dim()};
  json re = json::array(), im = json::array();
  for (Eigen::Index r = 0; r < rho.matrix().rows(); ++r) {
    json a = json::array(), b = json::array();
    for (Eigen::Index c = 0; c < rho.matrix().cols(); ++c) {
      a.push_back(rho.matrix()(r, c).real());
      b.push_back(rho.matrix()(r, c).imag());
    }
    re.push_back(a);
    im.push_back(b);
  }
  j["re"] = re;
  j["im"] = im;
  return j;
}

DensityOperator density_from_json(const json& j) {
  check_keys(j, {"dims", "re", "im"}, "density");
  const auto& re = j.at("re");
  const auto n = Eigen::Index(re.size());
  CMatrix m(n, n);
  for (Eigen::Index r = 0; r < n; ++r) {
    auto a = numbers(re[std::size_t(r)], "re");
    auto b = j.contains("im") ? numbers(j["im"][std::size_t(r)], "im") : std::vector<double>(a.size(), 0.0);
    if (Eigen::Index(a.size()) != n || Eigen::Index(b.size()) != n) throw InvalidArgument("density: not square");
    for (Eigen::Index c = 0; c < n; ++c) m(r, c) = Complex(a[std::size_t(c)], b[std::size_t(c)]);
  }
  return DensityOperator(m);
}

json to_json(const Transcript& t) {
  json j;
  j["protocol"] = t.protocol;
  j["input"] = t.input;
  j["message"] = t.message ? json(*t.message) : json(nullptr);
  j["success"] = t.success;
  j["cbits"] = t.cbits_sent;
  j["ebits"] = t.ebits_consumed;
  j["fidelity"] = t.fidelity_to_target;
  if (!t.outcomes.empty()) j["outcomes"] = t.outcomes;
  if (t.receiver_output.dim() <= 64) j["receiver_output"] = to_json(t.receiver_output);
  else j["receiver_dim"] = t.receiver_output.dim();
  return j;
}

json to_json(const ClassicalChannel& ch) {
  json rows = json::array();
  for (std::size_t i = 0; i < ch.rows(); ++i) {
    json r = json::array();
    for (std::size_t k = 0; k < ch.cols(); ++k) r.push_back(ch(i, k));
    rows.push_back(r);
  }
  return rows;
}

ClassicalChannel channel_from_json(const json& j) {
  if (!j.is_array() || j.empty()) throw InvalidArgument("channel: expected a non-empty array of rows");
  auto cols = j[0].size();
  Eigen::MatrixXd p(Eigen::Index(j.size()), Eigen::Index(cols));
  for (std::size_t i = 0; i < j.size(); ++i) {
    auto r = numbers(j[i], "channel row");
    if (r.size() != cols) throw InvalidArgument("channel: ragged rows");
    for (std::size_t k = 0; k < cols; ++k) p(Eigen::Index(i), Eigen::Index(k)) = r[k];
  }
  return ClassicalChannel(p);
}

Ensemble EnsembleFile::ensemble() const { return Ensemble(probs, states); }

BipartiteEnsemble EnsembleFile::bipartite() const {
  if (!cut) return BipartiteEnsemble::from(ensemble());
  return BipartiteEnsemble(probs, states, cut->first, cut->second);
}

EnsembleFile ensemble_from_json(const json& j) {
  check_keys(j, {"dims", "probs", "states", "cut"}, "ensemble");
  for (const char* k : {"dims", "probs", "states"})
    if (!j.contains(k)) throw InvalidArgument(std::string("ensemble: missing '") + k + "'");
  EnsembleFile f;
  for (const auto& d : j["dims"]) {
    if (!d.is_number_unsigned() || d.get<std::size_t>() == 0)
      throw InvalidArgument("ensemble: dims must be positive integers");
    f.dims.push_back(d.get<std::size_t>());
  }
  if (f.dims.empty()) throw InvalidArgument("ensemble: dims must be non-empty");
  f.probs = numbers(j["probs"], "probs");
  if (!j["states"].is_array()) throw InvalidArgument("ensemble: states must be an array");
  const std::size_t dim = product(f.dims);
  for (const auto& s : j["states"]) f.states.emplace_back(vector_from(s, dim));
  if (j.contains("cut")) {
    auto c = j["cut"].get<std::vector<std::size_t>>();
    if (c.size() != 2 || c[0] * c[1] != dim) throw InvalidArgument("ensemble: cut must be [dA, dB] with dA dB = dim");
    f.cut = std::make_pair(c[0], c[1]);
  }
  // Validates probabilities and dimensions.
  (void)f.ensemble();
  return f;
}

json to_json(const EnsembleFile& f) {
  json j;
  j["dims"] = f.dims;
  j["probs"] = f.probs;
  json st = json::array();
  for (const auto& s : f.states) {
    json e = to_json(s);
    e.erase("dims");
    st.push_back(e);
  }
  j["states"] = st;
  if (f.cut) j["cut"] = {f.cut->first, f.cut->second};
  return j;
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw InvalidArgument(path + ": " + e.what());
  }
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write " + path);
  out << text;
  if (!out) throw Error("write failed: " + path);
}

}  // namespace rsp::io
