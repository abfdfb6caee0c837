#include "rsp/cli.hpp"

#include <chrono>
#include <cmath>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "rsp/entangled.hpp"
#include "rsp/json_io.hpp"
#include "rsp/parallel.hpp"
#include "rsp/protocols.hpp"
#include "rsp/randomize.hpp"
#include "rsp/sampling.hpp"
#include "rsp/tradeoff.hpp"
#include "rsp/typicality.hpp"

namespace rsp::cli {

namespace {

using io::json;

struct Usage : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Global {
  std::optional<std::uint64_t> seed;
  std::string out;
  std::string format = "json";
  unsigned threads = 1;
};

// What a command produced: the primary document and, for some commands,
// extra files written next to --out.
struct Result {
  std::string text;
  std::vector<std::pair<std::string, std::string>> sidecars;  // suffix, contents
  int code = kOk;
};

Rng seeded(const Global& g, const char* cmd) {
  if (!g.seed) throw Usage(std::string(cmd) + ": --seed is required");
  return Rng(*g.seed);
}

// Flat object -> CSV row; arrays of flat objects -> header + rows.
std::string csv_cell(const json& v) {
  if (v.is_number_float()) return io::format_double(v.get<double>());
  if (v.is_string()) return v.get<std::string>();
  if (v.is_null()) return "";
  return v.dump();
}

std::string emit(const json& doc, const std::string& format) {
  if (format == "json") return doc.dump(2) + "\n";
  std::vector<json> rows;
  if (doc.is_array())
    for (const auto& r : doc) rows.push_back(r);
  else
    rows.push_back(doc);
  std::string s;
  if (format == "jsonl") {
    for (const auto& r : rows) s += r.dump() + "\n";
    return s;
  }
  if (rows.empty()) return s;
  bool first = true;
  for (auto it = rows[0].begin(); it != rows[0].end(); ++it) {
    s += (first ? "" : ",") + it.key();
    first = false;
  }
  s += "\n";
  for (const auto& r : rows) {
    first = true;
    for (auto it = rows[0].begin(); it != rows[0].end(); ++it) {
      s += (first ? "" : ",") + (r.contains(it.key()) ? csv_cell(r[it.key()]) : std::string());
      first = false;
    }
    s += "\n";
  }
  return s;
}

// JSON numbers cannot be inf; non-finite values become strings.
json num(double x) { return std::isfinite(x) ? json(x) : json(io::format_double(x)); }

std::vector<double> parse_list(const std::string& s) {
  std::vector<double> v;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    try {
      v.push_back(std::stod(tok));
    } catch (const std::exception&) {
      throw Usage("not a number: '" + tok + "'");
    }
  }
  return v;
}

double binomial_sigma(double p, double n) { return n > 0 ? std::sqrt(p * (1 - p) / n) : 0.0; }

// ---------------------------------------------------------------------------
// randomize

struct RandomizeArgs {
  std::size_t D = 2;
  double epsilon = 0.5;
  std::string mode = "haar";
  std::size_t probes = 64, restarts = 8, retries = 3;
  std::size_t K = 0;  // 0: size from the size formula
  double max_entries = 5e7;  // K D^2
};

Result cmd_randomize(const Global& g, const RandomizeArgs& a) {
  Rng rng = seeded(g, "randomize");
  json r;
  r["D"] = a.D;
  r["epsilon"] = a.epsilon;
  r["mode"] = a.mode;
  UnitarySet set;
  if (a.mode == "weyl") {
    set = weyl_set(a.D);
  } else {
    std::size_t K = a.K ? a.K : randomizing_set_size(a.D, a.epsilon);
    r["K"] = K;
    if (double(K) * double(a.D * a.D) > a.max_entries)
      throw BudgetExceeded("set of " + std::to_string(K) + " unitaries exceeds the memory budget");
    if (a.K) {
      // Explicit size: one draw, verified below.
      set = haar_set(a.D, K, a.epsilon, rng);
    } else {
      try {
        set = build_randomizing_set(a.D, a.epsilon, rng, a.retries, a.probes, a.restarts);
      } catch (const RetriesExhausted& e) {
        r["pass"] = false;
        r["error"] = e.what();
        return {emit(r, g.format), {}, kVerificationFailed};
      }
    }
  }
  Rng check = rng.split(0xc0ffee);
  VerifyReport v = verify_randomizing(set, a.probes, a.restarts, check);
  r["K"] = set.K();
  r["dev_max"] = v.dev_max;
  r["dev_min"] = v.dev_min;
  r["tolerance"] = v.tolerance;
  r["heuristic"] = v.heuristic;
  r["pass"] = v.pass;
  return {emit(r, g.format), {}, v.pass ? kOk : kVerificationFailed};
}

// ---------------------------------------------------------------------------
// rsp

struct RspArgs {
  std::string protocol;
  std::size_t D = 2;
  std::string set = "weyl";
  double epsilon = 0.5;
  std::size_t K = 3;
  std::size_t trials = 1000;
  std::string on_failure = "report";
  std::string state;
};

Result cmd_rsp(const Global& g, const RspArgs& a) {
  Rng rng = seeded(g, "rsp");
  std::optional<PureState> fixed;
  if (!a.state.empty()) fixed = io::pure_state_from_json(io::read_json_file(a.state));
  const std::size_t D = fixed ? fixed->dim() : a.D;
  detail::require(D >= 2, "dimension must be >= 2");
  detail::require(a.trials >= 1, "need at least one trial");

  std::optional<UnitarySet> set;
  std::optional<EpsilonNet> net;
  OnFailure mode = OnFailure::Report;
  if (a.on_failure == "resample") mode = OnFailure::Resample;
  else if (a.on_failure == "teleport") mode = OnFailure::Teleport;

  if (a.protocol == "pi") {
    Rng setup = rng.split(~std::uint64_t(0));
    set = a.set == "weyl" ? weyl_set(D) : build_randomizing_set(D, a.epsilon, setup);
  } else if (a.protocol == "net") {
    Rng setup = rng.split(~std::uint64_t(0));
    net = epsilon_net(D, net_parameter(a.epsilon), setup);
  } else if (a.protocol != "column" && a.protocol != "teleport") {
    throw Usage("unknown protocol: " + a.protocol);
  }

  std::vector<Transcript> ts(a.trials);
  parallel_for(a.trials, [&](std::size_t t) {
    Rng r = rng.split(t);
    PureState psi = fixed ? *fixed : haar_state(D, r);
    if (a.protocol == "pi") ts[t] = run_protocol_pi(psi, *set, r, mode);
    else if (a.protocol == "column") ts[t] = column_method(psi, a.K, r);
    else if (a.protocol == "net") ts[t] = net_only_protocol(psi, *net, a.epsilon);
    else ts[t] = teleport(LabeledState::from_pure({{"S", D}}, psi), "S", r).transcript;
  });

  double succ = 0, fid = 0, cb = 0, eb = 0;
  for (const auto& t : ts) {
    succ += t.success;
    fid += t.fidelity_to_target;
    cb += t.cbits_sent;
    eb += t.ebits_consumed;
  }
  const double n = double(a.trials);
  json s;
  s["protocol"] = a.protocol;
  s["D"] = D;
  if (set) s["K"] = set->K();
  if (a.protocol == "column") s["K"] = a.K;
  if (net) s["net_size"] = net->size();
  s["trials"] = a.trials;
  s["success_rate"] = succ / n;
  s["success_sigma"] = binomial_sigma(succ / n, n);
  s["mean_fidelity"] = fid / n;
  s["cbits"] = cb / n;
  s["ebits"] = eb / n;

  if (g.format == "jsonl") {
    json rows = json::array();
    for (const auto& t : ts) rows.push_back(io::to_json(t));
    rows.push_back(json{{"summary", s}});
    return {emit(rows, g.format), {}, kOk};
  }
  return {emit(s, g.format), {}, kOk};
}

// ---------------------------------------------------------------------------
// tradeoff

struct TradeoffArgs {
  std::string ensemble;
  std::string kind = "rsp";
  std::optional<double> r_min, r_max;
  std::size_t steps = 20;
  double grid_step = 0.05;
  bool oracle = false;
  bool qct_to_rsp = false;
  std::size_t starts = 32;
  double tolerance = 1e-3;
};

Result cmd_tradeoff(const Global& g, const TradeoffArgs& a) {
  if (!g.seed) throw Usage("tradeoff: --seed is required");
  CurveKind kind = parse_curve_kind(a.kind);
  if (a.qct_to_rsp && kind != CurveKind::Qct) throw Usage("--qct-to-rsp needs --kind qct");
  detail::require(a.steps >= 1, "--steps must be >= 1");
  io::EnsembleFile f = io::ensemble_from_json(io::read_json_file(a.ensemble));
  BipartiteEnsemble bip = f.bipartite();
  CurveProblem pb(bip, kind);

  double lo = a.r_min.value_or(kind == CurveKind::Qct ? 0.0 : pb.min_rate());
  double hi = a.r_max.value_or(shannon_entropy(bip.probs));
  if (hi < lo) hi = lo;
  std::vector<double> Rs;
  for (std::size_t k = 0; k < a.steps; ++k)
    Rs.push_back(a.steps == 1 ? lo : lo + (hi - lo) * double(k) / double(a.steps - 1));

  SolverParams prm;
  prm.seed = *g.seed;
  prm.starts = a.starts;
  prm.tolerance = a.tolerance;
  std::vector<TradeoffPoint> pts(Rs.size());
  for (std::size_t k = 0; k < Rs.size(); ++k) pts[k] = solve_curve(pb, Rs[k], prm);
  std::vector<double> orc;
  if (a.oracle) orc = brute_force_oracle(pb, Rs, a.grid_step);

  json rows = json::array(), channels = json::array();
  for (std::size_t k = 0; k < pts.size(); ++k) {
    const auto& p = pts[k];
    json r;
    r["R"] = p.R;
    r["value"] = num(p.value);
    r["channel_hash"] = p.channel ? p.channel->hash() : "";
    if (a.oracle) r["oracle"] = num(orc[k]);
    if (a.qct_to_rsp) {
      RspPoint t = qct_to_rsp({p.R, p.value});
      r["rsp_R"] = num(t.R);
      r["rsp_E"] = num(t.E);
    }
    rows.push_back(r);
    json c;
    c["R"] = p.R;
    c["rate"] = p.rate;
    c["channel_hash"] = p.channel ? p.channel->hash() : "";
    c["channel"] = p.channel ? io::to_json(*p.channel) : json(nullptr);
    channels.push_back(c);
  }
  if (g.format == "json") {
    json doc;
    doc["kind"] = a.kind;
    for (std::size_t k = 0; k < rows.size(); ++k) {
      rows[k]["rate"] = channels[k]["rate"];
      rows[k]["channel"] = channels[k]["channel"];
    }
    doc["points"] = rows;
    return {emit(doc, "json"), {}, kOk};
  }
  json side;
  side["kind"] = a.kind;
  side["points"] = channels;
  std::string fmt = g.format == "jsonl" ? "jsonl" : "csv";
  return {emit(rows, fmt), {{".channels.json", side.dump(2) + "\n"}}, kOk};
}

// ---------------------------------------------------------------------------
// entangled

struct EntangledArgs {
  std::string ensemble;
  std::size_t n = 4;
  std::size_t rounds = 20;
  EntangledOptions opt;
  std::optional<std::size_t> K;
  std::optional<double> typical_delta;
};

Result cmd_entangled(const Global& g, EntangledArgs a) {
  Rng rng = seeded(g, "entangled");
  io::EnsembleFile f = io::ensemble_from_json(io::read_json_file(a.ensemble));
  BipartiteEnsemble ens = f.bipartite();
  a.opt.K = a.K;
  a.opt.typical_delta = a.typical_delta;
  detail::require(a.n >= 1 && a.rounds >= 1, "--n and --rounds must be >= 1");

  std::vector<EntangledRound> out(a.rounds);
  std::vector<Word> words(a.rounds);
  parallel_for(a.rounds, [&](std::size_t t) {
    Rng r = rng.split(t);
    Word I(a.n);
    for (auto& x : I) {
      double u = r.uniform(), c = 0;
      x = ens.size() - 1;
      for (std::size_t i = 0; i < ens.size(); ++i) {
        c += ens.probs[i];
        if (u < c) {
          x = i;
          break;
        }
      }
    }
    words[t] = I;
    Rng run = r.split(1);
    out[t] = entangled_rsp_round(I, ens, a.opt, run);
  });

  json rows = json::array();
  double aborts = 0, fm = 0, fu = 0, fb = 0, cb = 0, eb = 0, ran = 0;
  for (std::size_t t = 0; t < a.rounds; ++t) {
    const auto& e = out[t];
    json r;
    r["round"] = t;
    r["aborted"] = e.aborted;
    r["success"] = e.transcript.success;
    r["K"] = e.K;
    r["typical_dim"] = e.typical_dim;
    r["fidelity_mixed"] = e.fidelity_mixed;
    r["fidelity_uhlmann"] = e.fidelity_uhlmann;
    r["fidelity_bound"] = e.fidelity_bound;
    r["cbits"] = e.transcript.cbits_sent;
    r["ebits"] = e.transcript.ebits_consumed;
    rows.push_back(r);
    if (e.aborted) {
      ++aborts;
      continue;
    }
    ++ran;
    fm += e.fidelity_mixed;
    fu += e.fidelity_uhlmann;
    fb += e.fidelity_bound;
    cb += e.transcript.cbits_sent;
    eb += e.transcript.ebits_consumed;
  }
  EntangledEndpoints ep = entangled_endpoints(ens);
  json s;
  s["n"] = a.n;
  s["rounds"] = a.rounds;
  s["abort_rate"] = aborts / double(a.rounds);
  double d = std::max(1.0, ran);
  s["mean_fidelity_mixed"] = fm / d;
  s["mean_fidelity_uhlmann"] = fu / d;
  s["mean_fidelity_bound"] = fb / d;
  s["cbits_per_symbol"] = cb / d / double(a.n);
  s["ebits_per_symbol"] = eb / d / double(a.n);
  s["chi"] = ep.R_start;
  s["E_start"] = ep.E_start;
  s["E_floor"] = ep.E_floor;
  if (g.format == "json") return {emit(s, "json"), {}, kOk};
  if (g.format == "csv") return {emit(rows, "csv"), {}, kOk};
  rows.push_back(json{{"summary", s}});
  return {emit(rows, "jsonl"), {}, kOk};
}

// ---------------------------------------------------------------------------
// typicality

struct TypicalityArgs {
  std::string eigenvalues = "0.75,0.25";
  std::size_t n_min = 1, n_max = 10;
  double delta = 0.1;
};

Result cmd_typicality(const Global& g, const TypicalityArgs& a) {
  std::vector<double> ev = parse_list(a.eigenvalues);
  detail::require(!ev.empty(), "need eigenvalues");
  detail::require(a.n_min >= 1 && a.n_min <= a.n_max, "need 1 <= n-min <= n-max");
  RVector diag(Eigen::Index(ev.size()));
  for (std::size_t k = 0; k < ev.size(); ++k) diag(Eigen::Index(k)) = ev[k];
  DensityOperator rho(diag.cast<Complex>().asDiagonal().toDenseMatrix());
  json rows = json::array();
  bool ok = true;
  for (std::size_t n = a.n_min; n <= a.n_max; ++n) {
    TypicalProjector P = typical_projector(rho, n, a.delta);
    RankBounds b = rank_bounds(P);
    json r;
    r["n"] = n;
    r["rank"] = P.rank();
    r["probability"] = P.probability();
    r["lower"] = b.lower;
    r["upper"] = b.upper;
    r["holds"] = b.holds;
    ok = ok && b.holds;
    rows.push_back(r);
  }
  return {emit(rows, g.format), {}, ok ? kOk : kVerificationFailed};
}

// ---------------------------------------------------------------------------
// verify-all: a quick self-check across modules.

Result cmd_verify_all(const Global& g) {
  Rng rng = seeded(g, "verify-all");
  json rows = json::array();
  bool all = true;
  auto add = [&](const std::string& name, bool pass, double value) {
    rows.push_back(json{{"check", name}, {"pass", pass}, {"value", num(value)}});
    all = all && pass;
  };

  {
    double worst = 0;
    for (std::size_t D = 2; D <= 5; ++D) {
      Rng r = rng.split(D);
      worst = std::max(worst, verify_randomizing(weyl_set(D), 16, 2, r).dev_max);
    }
    add("weyl_exact", worst <= 1e-10, worst);
  }
  {
    UnitarySet s = weyl_set(4);
    double worst = 0;
    bool ok = true;
    for (std::size_t t = 0; t < 200; ++t) {
      Rng r = rng.split(100 + t);
      PureState psi = haar_state(4, r);
      Transcript tr = run_protocol_pi(psi, s, r);
      ok = ok && tr.success;
      worst = std::max(worst, trace_distance(tr.receiver_output, DensityOperator::from_pure(psi)));
    }
    add("pi_weyl_exact", ok && worst <= 1e-9, worst);
  }
  {
    const std::size_t N = 4000;
    double fails = 0;
    for (std::size_t t = 0; t < N; ++t) {
      Rng r = rng.split(10'000 + t);
      fails += !column_method(haar_state(2, r), 3, r).success;
    }
    double p = column_failure_probability(2, 3), f = fails / double(N);
    add("column_failure_rate", std::abs(f - p) <= 4 * binomial_sigma(p, double(N)), f);
  }
  add("causality_bound", std::abs(causality_bound(4, 0.9) - (2 + std::log2(0.9))) <= 1e-12,
      causality_bound(4, 0.9));
  {
    CVector a(2), b(2);
    a << 1, 0;
    b << M_SQRT1_2, M_SQRT1_2;
    Ensemble e({0.5, 0.5}, {PureState(a), PureState(b)});
    CurveProblem pb(e, CurveKind::Rsp);
    std::vector<double> Rs{0.7, 0.85, 0.95};
    auto o = brute_force_oracle(pb, Rs, 0.05);
    SolverParams prm;
    prm.seed = *g.seed;
    prm.starts = 8;
    double worst = 0;
    for (std::size_t k = 0; k < Rs.size(); ++k)
      worst = std::max(worst, std::abs(solve_curve(pb, Rs[k], prm).value - o[k]));
    add("tradeoff_vs_oracle", worst <= 0.3, worst);
  }
  {
    CMatrix d = CMatrix::Zero(2, 2);
    d(0, 0) = 0.75;
    d(1, 1) = 0.25;
    bool ok = true;
    for (std::size_t n = 1; n <= 8; ++n) ok = ok && rank_bounds(typical_projector(DensityOperator(d), n, 0.1)).holds;
    add("typical_rank_bounds", ok, 8);
  }
  {
    bool ok = true;
    double worst = 0;
    for (std::size_t t = 0; t < 50; ++t) {
      Rng r = rng.split(50'000 + t);
      DensityOperator rho = random_density(3, 3, r);
      CMatrix X = random_density(3, 3, r).matrix();
      X /= hermitian_eigenvalues(X).maxCoeff();
      GentleReport gr = gentle_measurement_check(rho, X);
      ok = ok && gr.pass;
      worst = std::max(worst, gr.lhs - gr.rhs);
    }
    add("gentle_measurement", ok, worst);
  }
  return {emit(rows, g.format), {}, all ? kOk : kVerificationFailed};
}

json echo_options(const CLI::App* app) {
  json c = json::object();
  for (const CLI::Option* o : app->get_options()) {
    if (o->count() == 0 || o->get_name() == "--help") continue;
    const auto& res = o->results();
    if (o->get_expected_max() == 0) c[o->get_name()] = true;
    else if (res.size() == 1) c[o->get_name()] = res[0];
    else c[o->get_name()] = res;
  }
  return c;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Remote state preparation simulation and trade-off toolkit", "rsp"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);
  app.fallthrough();

  Global g;
  std::uint64_t seed = 0;
  auto* seed_opt = app.add_option("--seed", seed, "RNG seed (required for stochastic commands)");
  app.add_option("--out", g.out, "Output file (default: stdout)");
  app.add_option("--format", g.format, "Output format")->check(CLI::IsMember({"json", "csv", "jsonl"}));
  app.add_option("--threads", g.threads, "Worker threads, 0 = all cores");

  RandomizeArgs ra;
  auto* sr = app.add_subcommand("randomize", "Build and verify a randomizing unitary set");
  sr->add_option("--dim,-D", ra.D, "Dimension")->required()->check(CLI::Range(std::size_t(2), std::size_t(4096)));
  sr->add_option("--epsilon", ra.epsilon, "Randomization accuracy")->check(CLI::Range(1e-6, 1.0));
  sr->add_option("--mode", ra.mode, "haar or weyl")->check(CLI::IsMember({"haar", "weyl"}));
  sr->add_option("--probes", ra.probes, "Verifier random probes");
  sr->add_option("--restarts", ra.restarts, "Verifier ascent restarts");
  sr->add_option("--retries", ra.retries, "Redraws allowed when verification fails");
  sr->add_option("--K", ra.K, "Set size for haar mode (default from the size formula)")
      ->check(CLI::Range(std::size_t(1), std::size_t(100000000)));

  RspArgs pa;
  auto* sp = app.add_subcommand("rsp", "Run a batch of remote state preparation transcripts");
  sp->add_option("--protocol", pa.protocol, "pi | column | net | teleport")
      ->required()
      ->check(CLI::IsMember({"pi", "column", "net", "teleport"}));
  sp->add_option("--dim,-D", pa.D, "Dimension")->check(CLI::Range(std::size_t(2), std::size_t(4096)));
  sp->add_option("--set", pa.set, "Unitary set for pi")->check(CLI::IsMember({"weyl", "haar"}));
  sp->add_option("--epsilon", pa.epsilon, "Set accuracy (pi/haar) or target infidelity (net)")
      ->check(CLI::Range(1e-6, 1.0));
  sp->add_option("--K", pa.K, "Copies for the column method")->check(CLI::Range(std::size_t(1), std::size_t(64)));
  sp->add_option("--trials", pa.trials, "Number of transcripts");
  sp->add_option("--on-failure", pa.on_failure, "report | resample | teleport")
      ->check(CLI::IsMember({"report", "resample", "teleport"}));
  sp->add_option("--state", pa.state, "Fixed target state file {dims, re, im}");

  TradeoffArgs ta;
  double r_min = 0, r_max = 0;
  auto* st = app.add_subcommand("tradeoff", "Sweep a trade-off curve");
  st->add_option("--ensemble", ta.ensemble, "Ensemble file")->required();
  st->add_option("--kind", ta.kind, "qct | rsp | entangled")->check(CLI::IsMember({"qct", "rsp", "entangled"}));
  auto* rmin_opt = st->add_option("--r-min", r_min, "Lowest rate");
  auto* rmax_opt = st->add_option("--r-max", r_max, "Highest rate");
  st->add_option("--steps", ta.steps, "Sweep points");
  st->add_option("--grid-step", ta.grid_step, "Oracle grid step");
  st->add_flag("--oracle", ta.oracle, "Add the brute-force oracle column");
  st->add_flag("--qct-to-rsp", ta.qct_to_rsp, "Add the transformed (R+Q, Q) columns");
  st->add_option("--starts", ta.starts, "Random solver starts");
  st->add_option("--tolerance", ta.tolerance, "Solver tolerance in bits");

  EntangledArgs ea;
  std::size_t ek = 0;
  double etd = 0;
  auto* se = app.add_subcommand("entangled", "Run rounds of the type-class protocol on a bipartite ensemble");
  se->add_option("--ensemble", ea.ensemble, "Ensemble file (with cut)")->required();
  se->add_option("--n", ea.n, "Block length");
  se->add_option("--rounds", ea.rounds, "Number of blocks");
  se->add_option("--delta", ea.opt.delta, "Type window");
  auto* etd_opt = se->add_option("--typical-delta", etd, "Typical projector window");
  se->add_option("--epsilon", ea.opt.epsilon, "Randomization accuracy");
  auto* ek_opt = se->add_option("--K", ek, "Unitary count (default from the rate formula)");
  se->add_option("--max-retries", ea.opt.max_retries, "Redraws of the unitary family");
  se->add_option("--budget", ea.opt.budget, "Cap on d_B^n");

  TypicalityArgs ya;
  auto* sy = app.add_subcommand("typicality", "Typical projector rank and probability sweep");
  sy->add_option("--eigenvalues", ya.eigenvalues, "Comma-separated spectrum");
  sy->add_option("--n-min", ya.n_min, "Smallest block length");
  sy->add_option("--n-max", ya.n_max, "Largest block length");
  sy->add_option("--delta", ya.delta, "Window");

  auto* sv = app.add_subcommand("verify-all", "Quick self-check of every module");

  std::vector<std::string> argv_s{"rsp"};
  argv_s.insert(argv_s.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& s : argv_s) argv.push_back(s.data());

  try {
    app.parse(int(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  if (seed_opt->count()) g.seed = seed;
  thread_setting().store(g.threads);
  if (rmin_opt->count()) ta.r_min = r_min;
  if (rmax_opt->count()) ta.r_max = r_max;
  if (ek_opt->count()) ea.K = ek;
  if (etd_opt->count()) ea.typical_delta = etd;

  CLI::App* sub = app.get_subcommands().front();
  auto t0 = std::chrono::steady_clock::now();
  Result res;
  try {
    if (sub == sr) res = cmd_randomize(g, ra);
    else if (sub == sp) res = cmd_rsp(g, pa);
    else if (sub == st) res = cmd_tradeoff(g, ta);
    else if (sub == se) res = cmd_entangled(g, ea);
    else if (sub == sy) res = cmd_typicality(g, ya);
    else if (sub == sv) res = cmd_verify_all(g);
  } catch (const Usage& e) {
    err << "usage error: " << e.what() << "\n";
    return kUsage;
  } catch (const BudgetExceeded& e) {
    err << "budget exceeded: " << e.what() << "\n";
    return kBudgetExceeded;
  } catch (const RetriesExhausted& e) {
    err << "verification failed: " << e.what() << "\n";
    return kVerificationFailed;
  } catch (const NotRandomizing& e) {
    err << "verification failed: " << e.what() << "\n";
    return kVerificationFailed;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  }
  double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  json meta;
  meta["command"] = sub->get_name();
  json config = echo_options(&app);
  config.update(echo_options(sub));
  meta["config"] = config;
  meta["seed"] = g.seed ? json(*g.seed) : json(nullptr);
  meta["wall_time_s"] = wall;
  meta["version"] = kVersion;
  meta["exit_code"] = res.code;

  try {
    if (g.out.empty()) {
      out << res.text;
      err << json{{"meta", meta}}.dump() << "\n";
    } else {
      io::write_text_file(g.out, res.text);
      for (const auto& [suffix, text] : res.sidecars) io::write_text_file(g.out + suffix, text);
      io::write_text_file(g.out + ".meta.json", meta.dump(2) + "\n");
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  }
  return res.code;
}

}  // namespace rsp::cli
