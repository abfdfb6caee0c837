#pragma once

// JSON and CSV serialization. Doubles are written with enough digits to
// round-trip exactly.

#include <string>
#include <variant>

#include <json.hpp>

#include "rsp/ensemble.hpp"
#include "rsp/protocols.hpp"
#include "rsp/qmath.hpp"
#include "rsp/tradeoff.hpp"

namespace rsp::io {

using json = nlohmann::ordered_json;

// {dims, re, im} with flat amplitude vectors.
json to_json(const PureState& psi, const std::vector<std::size_t>& dims = {});
PureState pure_state_from_json(const json& j);
// {dims, re, im} with row-major nested arrays.
json to_json(const DensityOperator& rho);
DensityOperator density_from_json(const json& j);

json to_json(const Transcript& t);
json to_json(const ClassicalChannel& ch);
ClassicalChannel channel_from_json(const json& j);

// {dims, probs, states: [{re, im}], cut?: [dA, dB]}. Unknown keys are
// rejected. Without a cut the file describes an Ensemble.
struct EnsembleFile {
  std::vector<std::size_t> dims;
  std::vector<double> probs;
  std::vector<PureState> states;
  std::optional<std::pair<std::size_t, std::size_t>> cut;

  Ensemble ensemble() const;
  BipartiteEnsemble bipartite() const;  // dA = 1 without a cut
};
EnsembleFile ensemble_from_json(const json& j);
json to_json(const EnsembleFile& f);

json read_json_file(const std::string& path);
// Overwrites `path`; throws Error on I/O failure.
void write_text_file(const std::string& path, const std::string& text);

// Shortest decimal form that parses back to the same double; inf/nan as
// "inf", "-inf", "nan".
std::string format_double(double x);

}  // namespace rsp::io
