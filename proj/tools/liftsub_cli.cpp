// liftsub: sample lifts, build and verify clique subdivisions, audit
// pseudorandom properties, run exact oracles and threshold sweeps.
//
// Exit codes: 0 success / property holds, 1 verified failure, 2 usage or
// input error.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "liftsub/builder.hpp"
#include "liftsub/connector.hpp"
#include "liftsub/experiments.hpp"
#include "liftsub/json_io.hpp"
#include "liftsub/lift.hpp"
#include "liftsub/oracle.hpp"
#include "liftsub/pseudo_props.hpp"
#include "liftsub/simple_graph.hpp"
#include "liftsub/verifier.hpp"

using namespace liftsub;
using nlohmann::json;

namespace {

constexpr int kOk = 0;
constexpr int kFail = 1;
constexpr int kUsage = 2;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string read_text(const std::string& path) {
  if (path.empty() || path == "-") return {std::istreambuf_iterator<char>(std::cin), {}};
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read " + path);
  return {std::istreambuf_iterator<char>(in), {}};
}

void write_text(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text << std::flush;
    return;
  }
  std::ofstream out(path);
  if (!out) throw UsageError("cannot write " + path);
  out << text;
}

struct Common {
  std::uint64_t seed = 0;
  bool seed_given = false;
  std::string input;
  std::string output;
  std::string format = "json";
};

void add_common(CLI::App* cmd, Common& c, bool with_input = true) {
  cmd->add_option("--seed", c.seed, "RNG seed (default 0, logged to stderr)");
  if (with_input) cmd->add_option("--input", c.input, "input lift file (- for stdin)");
  cmd->add_option("--output", c.output, "output file (default stdout)");
  cmd->add_option("--format", c.format, "output format")->check(CLI::IsMember({"json", "text"}));
}

void log_seed(const Common& c, CLI::App* cmd) {
  if (cmd->count("--seed") == 0) std::cerr << "seed: " << c.seed << " (default)\n";
}

LiftGraph require_lift(const Common& c) {
  if (c.input.empty()) throw UsageError("--input is required");
  return deserialize_lift(read_text(c.input));
}

std::vector<std::size_t> parse_size_list(const std::string& text, const std::string& flag) {
  std::vector<std::size_t> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      const long long v = std::stoll(item, &used);
      if (used != item.size() || v < 0) throw std::invalid_argument(item);
      out.push_back(static_cast<std::size_t>(v));
    } catch (const std::exception&) {
      throw UsageError(flag + ": '" + item + "' is not a non-negative integer");
    }
  }
  if (out.empty()) throw UsageError(flag + ": empty list");
  return out;
}

std::vector<double> parse_real_list(const std::string& text, const std::string& flag) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      const double v = std::stod(item, &used);
      if (used != item.size() || !(v > 0)) throw std::invalid_argument(item);
      out.push_back(v);
    } catch (const std::exception&) {
      throw UsageError(flag + ": '" + item + "' is not a positive number");
    }
  }
  if (out.empty()) throw UsageError(flag + ": empty list");
  return out;
}

// "a-b,c-d" -> layer pairs
std::vector<LayerPair> parse_layer_pairs(const std::string& text) {
  std::vector<LayerPair> out;
  if (text.empty()) return out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto key = parse_pair_key(item);
    if (!key) {
      // parse_pair_key insists on i < j; forbidden pairs may be (a, a) or (b, a)
      const auto dash = item.find('-');
      try {
        if (dash == std::string::npos) throw std::invalid_argument(item);
        out.emplace_back(static_cast<std::uint32_t>(std::stoul(item.substr(0, dash))),
                         static_cast<std::uint32_t>(std::stoul(item.substr(dash + 1))));
      } catch (const std::exception&) {
        throw UsageError("--pairs: '" + item + "' is not of the form a-b");
      }
      continue;
    }
    out.emplace_back(static_cast<std::uint32_t>(key->first), static_cast<std::uint32_t>(key->second));
  }
  return out;
}

json vertices_json(const std::vector<VertexId>& vs) { return to_json_value(vs); }

BuilderKind parse_builder(const std::string& s) {
  if (s == "large") return BuilderKind::Large;
  if (s == "small") return BuilderKind::Small;
  return BuilderKind::Auto;
}

// ---------------------------------------------------------------------------

struct SampleOpts {
  Common c;
  std::size_t n = 0;
  std::size_t ell = 0;
};

int cmd_sample(const SampleOpts& o) {
  const LiftGraph g = sample_uniform_lift(complete_base(o.n), o.ell, o.c.seed);
  if (o.c.format == "text") {
    write_text(o.c.output, format_edge_list(to_simple_graph(g)));
  } else {
    write_text(o.c.output, serialize_lift(g));
  }
  return kOk;
}

struct BuildOpts {
  Common c;
  std::string builder = "auto";
  double epsilon = 0.1;
  bool paper_constants = false;
  bool random_choice = false;
  double prune_multiplier = 0.0;
  double star_multiplier = 0.0;
};

int cmd_build(const BuildOpts& o) {
  const LiftGraph g = require_lift(o.c);
  BuildConfig cfg = o.paper_constants ? BuildConfig::asymptotic(o.epsilon) : BuildConfig{};
  cfg.epsilon = o.epsilon;
  cfg.seed = o.c.seed;
  cfg.retry.seed = o.c.seed;
  cfg.random_choice = o.random_choice;
  if (o.prune_multiplier > 0) cfg.prune_multiplier = o.prune_multiplier;
  if (o.star_multiplier > 0) cfg.star_multiplier = o.star_multiplier;
  const BuildOutcome out = build(g, parse_builder(o.builder), cfg);
  for (const auto& w : out.warnings) std::cerr << "warning: " << w << "\n";
  if (o.c.format == "text") {
    std::ostringstream os;
    os << "builder: " << out.builder << "\n";
    if (out.ok()) {
      os << "order: " << out.stats.achieved_order << "\nvertices: " << out.stats.total_vertices
         << "\nmax path length: " << out.stats.max_path_length << "\n";
    } else {
      os << "failed at " << out.failure->stage << ": " << out.failure->reason << "\n";
    }
    write_text(o.c.output, os.str());
  } else {
    write_text(o.c.output, serialize_outcome(out));
  }
  return out.ok() ? kOk : kFail;
}

struct VerifyOpts {
  Common c;
  std::string certificate;
};

int cmd_verify(const VerifyOpts& o) {
  if (o.c.input.empty()) throw UsageError("--input is required");
  if (o.certificate.empty()) throw UsageError("--certificate is required");
  const LiftGraph g = deserialize_lift(read_text(o.c.input));
  const SubdivisionCertificate cert = deserialize_certificate(read_text(o.certificate));
  const Verdict v = verify_certificate(g, cert);
  if (o.c.format == "text") {
    std::ostringstream os;
    os << (v.passed ? "PASS" : "FAIL") << " order " << certificate_order(cert) << "\n";
    for (const auto& x : v.violations) os << to_string(x.kind) << ": " << x.detail << "\n";
    write_text(o.c.output, os.str());
  } else {
    json doc;
    doc["passed"] = v.passed;
    doc["order"] = certificate_order(cert);
    doc["vertex_count"] = certificate_vertex_count(cert);
    json vs = json::array();
    for (const auto& x : v.violations)
      vs.push_back({{"kind", to_string(x.kind)}, {"pair", pair_key(x.pair.first, x.pair.second)}, {"detail", x.detail}});
    doc["violations"] = vs;
    write_text(o.c.output, doc.dump(2) + "\n");
  }
  return v.passed ? kOk : kFail;
}

// ---------------------------------------------------------------------------

struct PropsOpts {
  Common c;
  std::size_t m = 1;
  std::string mode = "sampled";
  std::size_t trials = 1000;
  double epsilon = 1.0 / 9.0;
  std::string sizes = "1,2,8";
  std::size_t ell = 0;
  std::string pairs;
  std::size_t D = 0;
  std::string state;
};

int emit(const Common& c, const json& doc, bool holds) {
  if (c.format == "text") {
    std::ostringstream os;
    for (auto it = doc.begin(); it != doc.end(); ++it) os << it.key() << ": " << it.value().dump() << "\n";
    write_text(c.output, os.str());
  } else {
    write_text(c.output, doc.dump(2) + "\n");
  }
  return holds ? kOk : kFail;
}

int cmd_props_joined(const PropsOpts& o) {
  const LiftGraph g = require_lift(o.c);
  const JoinMode mode = o.mode == "exhaustive" ? JoinMode::Exhaustive : JoinMode::Sampled;
  const JoinedVerdict v = check_joined(g, o.m, mode, o.trials, o.c.seed);
  json doc{{"property", "joined"}, {"m", o.m}, {"mode", o.mode}, {"holds", v.holds}, {"trials", v.trials}};
  doc["witness"] = v.witness ? json{vertices_json(v.witness->first), vertices_json(v.witness->second)} : json(nullptr);
  return emit(o.c, doc, v.holds);
}

int cmd_props_expansion(const PropsOpts& o) {
  const LiftGraph g = require_lift(o.c);
  std::vector<VertexId> all;
  for (std::size_t s = 0; s < g.num_vertices(); ++s) all.push_back(g.vertex_at(s));
  const auto sizes = parse_size_list(o.sizes, "--sizes");
  const ExpansionReport r = check_expansion_into(g, all, o.epsilon, sizes, o.trials, o.c.seed);
  json per = json::array();
  for (const auto& s : r.per_size)
    per.push_back({{"size", s.size}, {"tested", s.tested}, {"violations", s.violations}, {"exhaustive", s.exhaustive},
                   {"worst_ratio", s.worst_ratio}});
  json doc{{"property", "expansion"}, {"epsilon", r.epsilon},       {"tested_sets", r.tested_sets},
           {"violations", r.violations}, {"worst_ratio", r.worst_ratio}, {"per_size", per}};
  doc["violating_set"] = r.violating_set ? vertices_json(*r.violating_set) : json(nullptr);
  return emit(o.c, doc, r.violations == 0);
}

int cmd_props_cross(const PropsOpts& o) {
  const LiftGraph g = require_lift(o.c);
  const std::size_t n = g.num_fibers();
  if (g.ell() < n) throw UsageError("cross-matching uses the neighbourhoods of n vertices of fiber 0; needs ell >= n");
  FiberSet host = FiberSet::all(n);
  host.erase(0);
  std::vector<std::vector<VertexId>> ts;
  for (std::uint32_t a = 0; a < n; ++a) ts.push_back(g.neighbors({0, a}));
  const CrossMatching cm = find_cross_matching(g, ts, host);
  const std::size_t pairs = n * (n - 1) / 2;
  json doc{{"property", "cross-matching"},
           {"transversals", n},
           {"edges", cm.edges.size()},
           {"covered_pairs", cm.covered_pairs.size()},
           {"uncovered_pairs", cm.uncovered_pairs(n)},
           {"uncovered_fraction", pairs ? static_cast<double>(cm.uncovered_pairs(n)) / static_cast<double>(pairs) : 0.0}};
  return emit(o.c, doc, true);
}

int cmd_props_avoidance(const PropsOpts& o) {
  if (o.ell == 0) throw UsageError("--ell is required");
  const auto f = parse_layer_pairs(o.pairs);
  const AvoidanceEstimate e = estimate_avoidance_probability(f, o.ell, o.trials, o.c.seed);
  const double bound = std::exp(-static_cast<double>(f.size()) / (2.0 * static_cast<double>(o.ell)));
  json doc{{"property", "avoidance"}, {"ell", o.ell},       {"pairs", f.size()},       {"trials", e.trials},
           {"estimate", e.estimate},  {"ci99_lower", e.lower}, {"ci99_upper", e.upper}, {"bound", bound}};
  return emit(o.c, doc, e.lower <= bound);
}

int cmd_props_extendable(const PropsOpts& o) {
  const LiftGraph g = require_lift(o.c);
  ExtendabilityParams params = ExtendabilityParams::asymptotic_defaults(g.num_fibers(), g.ell());
  if (o.D) params = ExtendabilityParams(o.D, o.m);
  EmbeddingState s = o.state.empty() ? EmbeddingState(g, params) : EmbeddingState::deserialize(g, read_text(o.state));
  const auto sizes = parse_size_list(o.sizes, "--sizes");
  const ExtendabilityReport r = check_extendable(g, s, sizes, o.trials, o.c.seed);
  json per = json::array();
  for (const auto& x : r.per_size)
    per.push_back({{"size", x.size}, {"tested", x.tested}, {"violations", x.violations}, {"exhaustive", x.exhaustive},
                   {"worst_margin", x.worst_margin}});
  json doc{{"property", "extendable"}, {"D", s.params().D},         {"m", s.params().m},
           {"tested_sets", r.tested_sets}, {"violations", r.violations}, {"worst_margin", r.worst_margin},
           {"per_size", per}};
  doc["violating_set"] = r.violating_set ? vertices_json(*r.violating_set) : json(nullptr);
  return emit(o.c, doc, r.violations == 0);
}

// ---------------------------------------------------------------------------

struct OracleOpts {
  Common c;
  std::size_t b = 0;
  std::size_t max_nodes = 24;
  std::uint64_t max_states = 100'000'000;
  double time_limit = 60.0;
  std::size_t ell = 0;
  std::string pairs;
  std::size_t samples = 10'000;

  OracleBudget budget() const {
    OracleBudget bud;
    bud.max_nodes = max_nodes;
    bud.max_states = max_states;
    bud.time_limit = std::chrono::milliseconds(static_cast<long long>(time_limit * 1000));
    return bud;
  }
};

SimpleGraph require_graph(const Common& c) {
  if (c.input.empty()) throw UsageError("--input is required");
  const std::string text = read_text(c.input);
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && text[first] == '{') return to_simple_graph(deserialize_lift(text));
  return parse_edge_list(text);
}

json graph_certificate_json(const GraphCertificate& cert) {
  json paths = json::object();
  for (const auto& [k, p] : cert.paths) paths[pair_key(k.first, k.second)] = p;
  return {{"branch", cert.branch}, {"paths", paths}};
}

int cmd_oracle_hajos(const OracleOpts& o) {
  const SimpleGraph h = require_graph(o.c);
  const HajosResult r = exact_hajos_number(h, o.budget());
  json doc{{"oracle", "hajos"}, {"vertices", h.num_vertices()}, {"value", r.value},
           {"exact", r.exact},   {"upper_bound", r.upper_bound},   {"states", r.states}};
  doc["certificate"] = r.certificate ? graph_certificate_json(*r.certificate) : json(nullptr);
  return emit(o.c, doc, r.exact);
}

int cmd_oracle_max_edges(const OracleOpts& o) {
  const SimpleGraph h = require_graph(o.c);
  const MaxEdgesResult r = max_edges_on_b_subset(h, o.b, o.budget());
  json doc{{"oracle", "max-edges"}, {"b", o.b}, {"value", r.value}, {"exact", r.exact}, {"subset", r.subset}};
  return emit(o.c, doc, r.exact);
}

int cmd_oracle_counting(const OracleOpts& o) {
  const SimpleGraph h = require_graph(o.c);
  const CountingResult r = subdivision_nonexistence_by_counting(h, o.b, o.budget());
  const bool no = r.verdict == CountingVerdict::NoSubdivision;
  json doc{{"oracle", "counting"},        {"b", o.b},
           {"verdict", no ? "no" : "inconclusive"}, {"threshold", r.threshold},
           {"max_edges", r.max_edges.value}, {"max_edges_exact", r.max_edges.exact}};
  return emit(o.c, doc, true);
}

int cmd_oracle_property_p(const OracleOpts& o) {
  const LiftGraph g = require_lift(o.c);
  const PropertyPSearch r = search_property_P_violator(g, o.budget(), o.c.seed, o.samples);
  json doc{{"oracle", "property-p"}, {"examined", r.examined}, {"exhaustive", r.exhaustive},
           {"sampled", r.budget_exhausted}};
  doc["violator"] = r.violator ? vertices_json(*r.violator) : json(nullptr);
  return emit(o.c, doc, !r.violator.has_value());
}

int cmd_oracle_avoidance(const OracleOpts& o) {
  if (o.ell == 0) throw UsageError("--ell is required");
  const auto f = parse_layer_pairs(o.pairs);
  const Rational p = exact_avoidance_probability(f, o.ell);
  const double bound = std::exp(-static_cast<double>(f.size()) / (2.0 * static_cast<double>(o.ell)));
  json doc{{"oracle", "avoidance"}, {"ell", o.ell},       {"numerator", p.num},
           {"denominator", p.den},  {"value", p.value()}, {"bound", bound}};
  return emit(o.c, doc, p.value() <= bound);
}

// ---------------------------------------------------------------------------

struct SweepOpts {
  Common c;
  std::string n_list;
  std::string ell_list;
  std::string ratio_list;
  std::size_t trials = 1;
  std::size_t workers = 0;
  double time_budget = 0.0;
  std::string builder = "auto";
  double epsilon = 0.1;
  bool paper_constants = false;
  std::string summary;
  std::string certificates;
};

int cmd_sweep(const SweepOpts& o) {
  SweepConfig cfg;
  cfg.n_values = parse_size_list(o.n_list, "--n-list");
  if (!o.ell_list.empty()) cfg.ell_values = parse_size_list(o.ell_list, "--ell-list");
  if (!o.ratio_list.empty()) cfg.ratio_values = parse_real_list(o.ratio_list, "--ratio-list");
  if (cfg.ell_values.empty() && cfg.ratio_values.empty()) throw UsageError("one of --ell-list / --ratio-list is required");
  cfg.trials = o.trials;
  cfg.seed = o.c.seed;
  cfg.builder = parse_builder(o.builder);
  cfg.build = o.paper_constants ? BuildConfig::asymptotic(o.epsilon) : BuildConfig{};
  cfg.build.epsilon = o.epsilon;
  cfg.workers = o.workers;
  cfg.time_budget_s = o.time_budget;
  const bool to_stdout = o.c.output.empty() || o.c.output == "-";
  cfg.csv_path = to_stdout ? "" : o.c.output;
  cfg.certificate_dir = o.certificates;
  const SweepResult r = run_sweep(cfg);
  if (to_stdout) {
    std::cout << kSweepCsvHeader << "\n";
    for (const auto& row : r.rows) std::cout << format_csv_row(row) << "\n";
  }
  const std::string summary = summarize_sweep(cfg, r);
  if (!o.summary.empty()) {
    write_text(o.summary, summary);
  } else {
    std::cerr << summary;
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Random lifts of complete graphs: sampling, clique subdivisions, audits and oracles"};
  app.require_subcommand(1);

  SampleOpts sample;
  auto* c_sample = app.add_subcommand("sample", "sample a uniform random lift of K_n");
  add_common(c_sample, sample.c, false);
  c_sample->add_option("--n", sample.n, "base clique order")->required()->check(CLI::PositiveNumber);
  c_sample->add_option("--ell", sample.ell, "lift order")->required()->check(CLI::PositiveNumber);

  BuildOpts bopt;
  auto* c_build = app.add_subcommand("build", "build a clique subdivision certificate");
  add_common(c_build, bopt.c);
  c_build->add_option("--builder", bopt.builder, "pipeline")->check(CLI::IsMember({"large", "small", "auto"}));
  c_build->add_option("--epsilon", bopt.epsilon, "epsilon")->check(CLI::Range(1e-9, 1.0));
  c_build->add_flag("--paper-constants", bopt.paper_constants, "use the asymptotic constants");
  c_build->add_flag("--random-choice", bopt.random_choice, "seed-driven branch selection");
  c_build->add_option("--prune-multiplier", bopt.prune_multiplier, "small-ell pruning threshold / (eps b)")
      ->check(CLI::PositiveNumber);
  c_build->add_option("--star-multiplier", bopt.star_multiplier, "small-ell star size / (eps b)")
      ->check(CLI::PositiveNumber);

  VerifyOpts vopt;
  auto* c_verify = app.add_subcommand("verify", "verify a certificate against a lift");
  add_common(c_verify, vopt.c);
  c_verify->add_option("--certificate", vopt.certificate, "certificate file");

  PropsOpts popt;
  auto* c_props = app.add_subcommand("props", "pseudorandomness audits");
  c_props->require_subcommand(1);
  auto* p_joined = c_props->add_subcommand("joined", "m-joinedness");
  auto* p_exp = c_props->add_subcommand("expansion", "expansion into V(G)");
  auto* p_cross = c_props->add_subcommand("cross-matching", "greedy cross-matching between transversals");
  auto* p_avoid = c_props->add_subcommand("avoidance", "Monte Carlo avoidance probability");
  auto* p_ext = c_props->add_subcommand("extendable", "(D,m)-extendability audit");
  for (auto* p : {p_joined, p_exp, p_cross, p_avoid, p_ext}) add_common(p, popt.c, p != p_avoid);
  p_joined->add_option("--m", popt.m, "set size")->check(CLI::PositiveNumber);
  p_joined->add_option("--mode", popt.mode)->check(CLI::IsMember({"exhaustive", "sampled"}));
  for (auto* p : {p_joined, p_exp, p_avoid, p_ext}) p->add_option("--trials", popt.trials)->check(CLI::PositiveNumber);
  p_exp->add_option("--epsilon", popt.epsilon)->check(CLI::Range(1e-9, 0.5));
  for (auto* p : {p_exp, p_ext}) p->add_option("--sizes", popt.sizes, "comma-separated set sizes");
  p_avoid->add_option("--ell", popt.ell)->check(CLI::PositiveNumber);
  p_avoid->add_option("--pairs", popt.pairs, "forbidden pairs a-b,...");
  p_ext->add_option("--D", popt.D, "degree parameter (default n^0.99)");
  p_ext->add_option("--m", popt.m, "set-size parameter, used with --D");
  p_ext->add_option("--state", popt.state, "embedding state file (default: empty S)");

  OracleOpts oopt;
  auto* c_oracle = app.add_subcommand("oracle", "exact oracles at tiny scale");
  c_oracle->require_subcommand(1);
  auto* o_hajos = c_oracle->add_subcommand("hajos", "exact Hajos number");
  auto* o_max = c_oracle->add_subcommand("max-edges", "max edges on a b-subset");
  auto* o_count = c_oracle->add_subcommand("counting", "edge-count nonexistence criterion");
  auto* o_pp = c_oracle->add_subcommand("property-p", "search for a property (P) violator");
  auto* o_avoid = c_oracle->add_subcommand("avoidance", "exact avoidance probability");
  for (auto* p : {o_hajos, o_max, o_count, o_pp, o_avoid}) {
    add_common(p, oopt.c, p != o_avoid);
    p->add_option("--max-nodes", oopt.max_nodes);
    p->add_option("--max-states", oopt.max_states);
    p->add_option("--time-limit", oopt.time_limit, "seconds");
  }
  for (auto* p : {o_max, o_count}) p->add_option("--b", oopt.b)->required();
  o_pp->add_option("--samples", oopt.samples);
  o_avoid->add_option("--ell", oopt.ell)->check(CLI::PositiveNumber);
  o_avoid->add_option("--pairs", oopt.pairs, "forbidden pairs a-b,...");

  SweepOpts sopt;
  sopt.workers = default_worker_count();
  auto* c_sweep = app.add_subcommand("sweep", "seeded threshold sweep to CSV");
  add_common(c_sweep, sopt.c, false);
  c_sweep->add_option("--n-list", sopt.n_list, "comma-separated n values")->required();
  c_sweep->add_option("--ell-list", sopt.ell_list, "comma-separated ell values");
  c_sweep->add_option("--ratio-list", sopt.ratio_list, "comma-separated ell/n ratios");
  c_sweep->add_option("--trials", sopt.trials)->check(CLI::PositiveNumber);
  c_sweep->add_option("--workers", sopt.workers, "worker threads (default $LIFTSUB_WORKERS)")
      ->check(CLI::PositiveNumber);
  c_sweep->add_option("--time-budget", sopt.time_budget, "seconds; later trials are skipped");
  c_sweep->add_option("--builder", sopt.builder)->check(CLI::IsMember({"large", "small", "auto"}));
  c_sweep->add_option("--epsilon", sopt.epsilon)->check(CLI::Range(1e-9, 1.0));
  c_sweep->add_flag("--paper-constants", sopt.paper_constants);
  c_sweep->add_option("--summary", sopt.summary, "summary output file (default stderr)");
  c_sweep->add_option("--certificates", sopt.certificates, "directory for certificates of successful rows");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    if (*c_sample) {
      log_seed(sample.c, c_sample);
      return cmd_sample(sample);
    }
    if (*c_build) {
      log_seed(bopt.c, c_build);
      return cmd_build(bopt);
    }
    if (*c_verify) return cmd_verify(vopt);
    if (*p_joined) return cmd_props_joined(popt);
    if (*p_exp) return cmd_props_expansion(popt);
    if (*p_cross) return cmd_props_cross(popt);
    if (*p_avoid) return cmd_props_avoidance(popt);
    if (*p_ext) return cmd_props_extendable(popt);
    if (*o_hajos) return cmd_oracle_hajos(oopt);
    if (*o_max) return cmd_oracle_max_edges(oopt);
    if (*o_count) return cmd_oracle_counting(oopt);
    if (*o_pp) return cmd_oracle_property_p(oopt);
    if (*o_avoid) return cmd_oracle_avoidance(oopt);
    if (*c_sweep) {
      log_seed(sopt.c, c_sweep);
      return cmd_sweep(sopt);
    }
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kUsage;
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kUsage;
  } catch (const PreconditionError& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return kUsage;
  } catch (const BudgetExceeded& e) {
    std::cerr << "refused: " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}
