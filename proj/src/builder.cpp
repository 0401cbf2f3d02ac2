#include "liftsub/builder.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <set>

#include "liftsub/json_io.hpp"
#include "liftsub/pseudo_props.hpp"
#include "liftsub/rng.hpp"

namespace liftsub {

using nlohmann::json;

double target_order(std::size_t n, std::size_t ell) {
  if (ell < 2) throw PreconditionError("target_order requires ell >= 2");
  const double l = static_cast<double>(ell);
  return std::sqrt(2.0 * static_cast<double>(n) * l / (1.0 - 1.0 / l));
}

BuildConfig BuildConfig::asymptotic(double epsilon) {
  BuildConfig cfg;
  cfg.epsilon = epsilon;
  cfg.cross_matching = CrossMatchingRule::AsymptoticWindow;
  cfg.prune_multiplier = 1.0 / 40.0;
  cfg.star_multiplier = 1.0 / 40.0;
  cfg.uniform_stars = true;
  return cfg;
}

namespace {

void require_complete_base(const LiftGraph& g) {
  if (!g.base().is_complete()) throw PreconditionError("the builders expect a lift of a complete graph");
}

ExtendabilityParams params_for(const BuildConfig& cfg, std::size_t n, std::size_t ell) {
  return cfg.params.value_or(ExtendabilityParams::asymptotic_defaults(n, ell));
}

void fill_vertex_stats(BuildOutcome& out) {
  const auto& cert = *out.certificate;
  out.stats.achieved_order = cert.branch.size();
  out.stats.branch_vertices = cert.branch.size();
  out.stats.internal_vertices = 0;
  out.stats.max_path_length = 0;
  for (const auto& [key, path] : cert.paths) {
    out.stats.internal_vertices += path.size() - 2;
    out.stats.max_path_length = std::max(out.stats.max_path_length, path.size() - 1);
  }
  out.stats.total_vertices = certificate_vertex_count(cert);
}

// Self-verification gate: a certificate leaves a builder only if it passes.
BuildOutcome finish(const LiftGraph& g, BuildOutcome out, SubdivisionCertificate cert) {
  const Verdict verdict = verify_certificate(g, cert);
  if (!verdict.passed) {
    out.failure = BuildFailure{"self-verification", std::string(to_string(verdict.violations.front().kind)) + ": " +
                                                        verdict.violations.front().detail};
    return out;
  }
  out.certificate = std::move(cert);
  fill_vertex_stats(out);
  return out;
}

BuildOutcome fail(BuildOutcome out, std::string stage, std::string reason) {
  out.failure = BuildFailure{std::move(stage), std::move(reason)};
  return out;
}

}  // namespace

// ---------------------------------------------------------------------------
// large ell
// ---------------------------------------------------------------------------

BuildOutcome build_large_ell(const LiftGraph& g, const BuildConfig& cfg) {
  require_complete_base(g);
  if (!(cfg.epsilon > 0.0)) throw PreconditionError("epsilon must be positive");
  if (!(cfg.effective_gamma() > 0.0)) throw PreconditionError("gamma must be positive");
  const std::size_t n = g.num_fibers();
  const std::size_t ell = g.ell();

  BuildOutcome out;
  out.builder = "large";
  out.stats.requested_order = n;
  if (static_cast<double>(ell) < (1.0 + cfg.epsilon) * static_cast<double>(n))
    out.warnings.push_back("ell = " + std::to_string(ell) + " is below (1+eps) n; running as an experiment");
  if (ell < n) return fail(std::move(out), "branch-infeasible", "a fiber has fewer than n vertices");

  Rng rng = make_rng(cfg.seed, {0x6c61726765ULL});
  std::uint32_t w_fiber = 0;
  std::vector<std::uint32_t> layers(ell);
  std::iota(layers.begin(), layers.end(), 0u);
  if (cfg.random_choice) {
    w_fiber = static_cast<std::uint32_t>(uniform_below(rng, n));
    std::shuffle(layers.begin(), layers.end(), rng);
    layers.resize(n);
    std::sort(layers.begin(), layers.end());
  }
  layers.resize(n);

  std::vector<VertexId> branch;
  for (auto a : layers) branch.push_back({w_fiber, a});
  if (n == 1) return finish(g, std::move(out), SubdivisionCertificate{branch, {}});

  FiberSet host = FiberSet::all(n);
  host.erase(w_fiber);
  std::vector<std::vector<VertexId>> transversals;
  for (auto w : branch) transversals.push_back(g.neighbors(w));

  const ExtendabilityParams params = params_for(cfg, n, ell);
  const std::size_t max_len = params.path_length_bound();
  out.stats.path_length_bound = max_len;
  EmbeddingState s(g, params, host);
  for (const auto& t : transversals)
    for (auto v : t) s.add_vertex(v);

  // The pair (i, j) is routed between link[i][j] in V_i and link[j][i] in V_j.
  std::map<BranchPair, std::vector<VertexId>> inner;  // V_i-to-V_j section of each path
  std::vector<char> used(g.num_vertices(), 0);

  const double gamma = cfg.effective_gamma();
  const bool want_matching =
      cfg.cross_matching == CrossMatchingRule::Always ||
      (cfg.cross_matching == CrossMatchingRule::AsymptoticWindow &&
       static_cast<double>(ell) <= gamma * gamma * gamma * static_cast<double>(n) * static_cast<double>(n) / 48.0);
  if (want_matching) {
    const CrossMatching cm = find_cross_matching(g, transversals, host);
    for (const auto& e : cm.edges) {
      s.add_edge(g, e.u, e.v);
      used[g.slot(e.u)] = used[g.slot(e.v)] = 1;
      inner[e.pair] = {e.u, e.v};
    }
    out.stats.cross_matching_edges = cm.edges.size();
  }

  // Template: pair the free vertices of V_i and V_j for every uncovered pair.
  std::vector<std::pair<VertexId, VertexId>> todo;
  std::vector<BranchPair> todo_pairs;
  std::vector<std::size_t> cursor(n, 0);
  auto next_free = [&](std::size_t i) -> std::optional<VertexId> {
    auto& c = cursor[i];
    while (c < transversals[i].size() && used[g.slot(transversals[i][c])]) ++c;
    if (c == transversals[i].size()) return std::nullopt;
    return transversals[i][c];
  };
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (inner.contains({i, j})) continue;
      const auto x = next_free(i);
      const auto y = next_free(j);
      if (!x || !y)
        return fail(std::move(out), "template-infeasible", "no free neighbour left for pair " + pair_key(i, j));
      used[g.slot(*x)] = used[g.slot(*y)] = 1;
      todo.emplace_back(*x, *y);
      todo_pairs.push_back({i, j});
    }
  }

  RetryPolicy retry = cfg.retry;
  retry.seed = derive_seed(cfg.seed, {retry.seed, 0x7265747279ULL});
  const BatchResult routed = batch_connect(g, s, todo, retry, max_len);
  if (!routed.ok())
    return fail(std::move(out), "connector-exhausted",
                std::to_string(routed.failed.size()) + " of " + std::to_string(todo.size()) +
                    " template pairs unrouted; first: " + routed.failure_reasons.front());
  for (std::size_t k = 0; k < todo.size(); ++k) {
    inner[todo_pairs[k]] = routed.paths[k]->path;
    if (routed.paths[k]->length() == 1) ++out.stats.direct_edges;
  }
  out.stats.connector_paths = todo.size();

  SubdivisionCertificate cert;
  cert.branch = branch;
  for (auto& [key, mid] : inner) {
    std::vector<VertexId> path;
    path.reserve(mid.size() + 2);
    path.push_back(branch[key.first]);
    path.insert(path.end(), mid.begin(), mid.end());
    path.push_back(branch[key.second]);
    cert.paths[key] = std::move(path);
  }
  return finish(g, std::move(out), std::move(cert));
}

// ---------------------------------------------------------------------------
// small ell
// ---------------------------------------------------------------------------

BuildOutcome build_small_ell(const LiftGraph& g, const BuildConfig& cfg) {
  require_complete_base(g);
  if (!(cfg.epsilon > 0.0 && cfg.epsilon < 1.0)) throw PreconditionError("epsilon must lie in (0, 1)");
  const std::size_t n = g.num_fibers();
  const std::size_t ell = g.ell();
  if (ell < 2) throw PreconditionError("the small-ell builder requires ell >= 2");
  const double eps = cfg.epsilon;

  BuildOutcome out;
  out.builder = "small";

  // Stage 1: fibers split into F1 (branch side) and F2 (reserved), B in F1.
  const auto f1_size = static_cast<std::size_t>(std::ceil((1.0 - eps) * static_cast<double>(n) - 1e-9));
  std::size_t b = static_cast<std::size_t>(std::ceil((1.0 - 2.0 * eps) * target_order(n, ell) - 1e-9));
  if (b > f1_size) {
    out.warnings.push_back("b = " + std::to_string(b) + " exceeds |F1| = " + std::to_string(f1_size) + "; clamped");
    b = f1_size;
  }
  out.stats.requested_order = b;
  if (b == 0) return fail(std::move(out), "branch-infeasible", "no room for branch vertices");

  Rng rng = make_rng(cfg.seed, {0x736d616c6cULL});
  std::vector<std::uint32_t> fibers(n);
  std::iota(fibers.begin(), fibers.end(), 0u);
  if (cfg.random_choice) std::shuffle(fibers.begin(), fibers.end(), rng);
  std::vector<std::uint32_t> f1(fibers.begin(), fibers.begin() + static_cast<std::ptrdiff_t>(f1_size));
  std::vector<std::uint32_t> f2(fibers.begin() + static_cast<std::ptrdiff_t>(f1_size), fibers.end());
  std::sort(f1.begin(), f1.end());
  std::sort(f2.begin(), f2.end());
  std::vector<char> in_f1(n, 0);
  for (auto f : f1) in_f1[f] = 1;

  std::vector<VertexId> B;
  for (std::size_t i = 0; i < b; ++i)
    B.push_back({f1[i], cfg.random_choice ? static_cast<std::uint32_t>(uniform_below(rng, ell)) : 0u});
  std::vector<char> in_b(g.num_vertices(), 0);
  for (auto v : B) in_b[g.slot(v)] = 1;

  // joined[i][j]: empty = missing; {B_i, B_j} = direct; {B_i, w, B_j} = length two
  std::vector<std::vector<std::vector<VertexId>>> joined(b, std::vector<std::vector<VertexId>>(b));
  std::vector<std::size_t> missing(b, b - 1);
  auto join = [&](std::size_t i, std::size_t j, std::vector<VertexId> path) {
    joined[j][i] = std::vector<VertexId>(path.rbegin(), path.rend());
    joined[i][j] = std::move(path);
    --missing[i];
    --missing[j];
  };

  // Stage 2: direct edges inside B.
  for (std::size_t i = 0; i < b; ++i)
    for (std::size_t j = i + 1; j < b; ++j)
      if (g.is_edge(B[i], B[j])) {
        join(i, j, {B[i], B[j]});
        ++out.stats.direct_edges;
      }

  // Stage 3: length-2 paths through distinct middles in F1 \ B.
  std::vector<std::vector<std::vector<VertexId>>> middles(b, std::vector<std::vector<VertexId>>(b));
  for (std::size_t i = 0; i < b; ++i)
    for (std::size_t j = i + 1; j < b; ++j) {
      if (!joined[i][j].empty()) continue;
      for (auto f : f1) {
        if (f == B[i].fiber || f == B[j].fiber) continue;
        const auto wi = g.neighbor_in(B[i], f);
        const auto wj = g.neighbor_in(B[j], f);
        if (wi && wj && *wi == *wj && !in_b[g.slot(*wi)]) middles[i][j].push_back(*wi);
      }
    }
  std::vector<char> middle_used(g.num_vertices(), 0);
  std::vector<char> active(b, 1);
  for (;;) {
    std::size_t pick = b;
    for (std::size_t i = 0; i < b; ++i)
      if (active[i] && missing[i] > 0 && (pick == b || missing[i] > missing[pick])) pick = i;
    if (pick == b) break;
    bool progressed = false;
    for (std::size_t j = 0; j < b && !progressed; ++j) {
      if (j == pick || !joined[pick][j].empty()) continue;
      const auto& cand = middles[std::min(pick, j)][std::max(pick, j)];
      for (const auto& w : cand) {
        if (middle_used[g.slot(w)]) continue;
        middle_used[g.slot(w)] = 1;
        join(pick, j, {B[pick], w, B[j]});
        ++out.stats.length2_paths;
        progressed = true;
        break;
      }
    }
    if (!progressed) active[pick] = 0;
  }

  // Stage 4: prune vertices still missing too many connections.
  const double threshold = cfg.prune_multiplier * eps * static_cast<double>(b);
  std::vector<char> alive(b, 1);
  for (std::size_t i = 0; i < b; ++i)
    if (static_cast<double>(missing[i]) > threshold) {
      alive[i] = 0;
      ++out.stats.pruned_branch;
    }
  const std::size_t survivors = b - out.stats.pruned_branch;
  if (static_cast<double>(survivors) < cfg.prune_floor * static_cast<double>(b))
    return fail(std::move(out), "pruned-too-many",
                std::to_string(survivors) + " of " + std::to_string(b) + " branch vertices survive pruning");

  auto missing_partners = [&](std::size_t i) {
    std::vector<std::size_t> partners;
    for (std::size_t j = 0; j < b; ++j)
      if (j != i && alive[j] && joined[i][j].empty()) partners.push_back(j);
    return partners;
  };

  // Stage 5: vertex-disjoint stars from surviving centres into F2.
  const auto star_cap = static_cast<std::size_t>(std::ceil(cfg.star_multiplier * eps * static_cast<double>(b) - 1e-9));
  const std::size_t fiber_cap = std::max<std::size_t>(1, ell / 2);
  std::vector<std::size_t> saturation(n, 0);
  std::vector<char> leaf_used(g.num_vertices(), 0);
  std::vector<std::vector<VertexId>> leaves(b);
  std::vector<std::size_t> need(b, 0);
  for (std::size_t i = 0; i < b; ++i)
    if (alive[i]) need[i] = cfg.uniform_stars ? std::max<std::size_t>(star_cap, 1) : missing_partners(i).size();
  std::vector<std::size_t> centres;
  for (std::size_t i = 0; i < b; ++i)
    if (alive[i]) centres.push_back(i);
  std::stable_sort(centres.begin(), centres.end(), [&](std::size_t p, std::size_t q) { return need[p] > need[q]; });
  for (std::size_t c : centres) {
    if (need[c] == 0) continue;
    std::vector<VertexId> got;
    for (auto f : f2) {
      if (got.size() == need[c]) break;
      const auto w = g.neighbor_in(B[c], f);
      if (!w || leaf_used[g.slot(*w)] || saturation[f] >= fiber_cap) continue;
      got.push_back(*w);
    }
    if (got.size() < need[c]) {
      alive[c] = 0;
      ++out.stats.dropped_branch;
      continue;
    }
    for (auto w : got) {
      leaf_used[g.slot(w)] = 1;
      ++saturation[w.fiber];
    }
    leaves[c] = std::move(got);
  }

  // Stage 6: route the remaining pairs between star leaves inside F2.
  FiberSet host(n, f2);
  const ExtendabilityParams params = params_for(cfg, n, ell);
  const std::size_t max_len = params.path_length_bound();
  out.stats.path_length_bound = max_len;
  std::map<BranchPair, std::vector<VertexId>> routed_paths;
  if (!f2.empty()) {
    EmbeddingState s(g, params, host);
    for (std::size_t i = 0; i < b; ++i)
      for (auto w : leaves[i]) s.add_vertex(w);
    std::vector<std::size_t> next_leaf(b, 0);
    std::vector<std::pair<VertexId, VertexId>> todo;
    std::vector<BranchPair> todo_pairs;
    for (std::size_t i = 0; i < b; ++i) {
      if (!alive[i]) continue;
      for (std::size_t j = i + 1; j < b; ++j) {
        if (!alive[j] || !joined[i][j].empty()) continue;
        if (next_leaf[i] == leaves[i].size() || next_leaf[j] == leaves[j].size()) continue;
        todo.emplace_back(leaves[i][next_leaf[i]++], leaves[j][next_leaf[j]++]);
        todo_pairs.push_back({i, j});
      }
    }
    RetryPolicy retry = cfg.retry;
    retry.seed = derive_seed(cfg.seed, {retry.seed, 0x7265747279ULL});
    const BatchResult routed = batch_connect(g, s, todo, retry, max_len);
    for (std::size_t k = 0; k < todo.size(); ++k) {
      if (!routed.paths[k]) continue;
      const auto [i, j] = todo_pairs[k];
      std::vector<VertexId> path{B[i]};
      path.insert(path.end(), routed.paths[k]->path.begin(), routed.paths[k]->path.end());
      path.push_back(B[j]);
      routed_paths[{i, j}] = std::move(path);
      ++out.stats.connector_paths;
    }
  }

  // Centres still missing a connection are dropped, most-deficient first.
  for (;;) {
    std::size_t worst = b, worst_missing = 0;
    for (std::size_t i = 0; i < b; ++i) {
      if (!alive[i]) continue;
      std::size_t miss = 0;
      for (std::size_t j = 0; j < b; ++j)
        if (j != i && alive[j] && joined[i][j].empty() && !routed_paths.contains({std::min(i, j), std::max(i, j)}))
          ++miss;
      if (miss > worst_missing) {
        worst = i;
        worst_missing = miss;
      }
    }
    if (worst == b) break;
    alive[worst] = 0;
    ++out.stats.dropped_branch;
  }

  SubdivisionCertificate cert;
  std::vector<std::size_t> kept;
  for (std::size_t i = 0; i < b; ++i)
    if (alive[i]) kept.push_back(i);
  for (auto i : kept) cert.branch.push_back(B[i]);
  std::size_t direct = 0, two = 0, routed = 0;
  for (std::size_t p = 0; p < kept.size(); ++p)
    for (std::size_t q = p + 1; q < kept.size(); ++q) {
      const std::size_t i = kept[p], j = kept[q];
      if (!joined[i][j].empty()) {
        cert.paths[{p, q}] = joined[i][j];
        (joined[i][j].size() == 2 ? direct : two)++;
      } else {
        cert.paths[{p, q}] = routed_paths.at({i, j});
        ++routed;
      }
    }
  out.stats.direct_edges = direct;
  out.stats.length2_paths = two;
  out.stats.connector_paths = routed;
  if (cert.branch.empty()) return fail(std::move(out), "connector-exhausted", "no branch vertex survived");
  return finish(g, std::move(out), std::move(cert));
}

// ---------------------------------------------------------------------------

BuildOutcome build(const LiftGraph& g, BuilderKind kind, const BuildConfig& cfg) {
  const double n = static_cast<double>(g.num_fibers());
  const double ell = static_cast<double>(g.ell());
  switch (kind) {
    case BuilderKind::Large: return build_large_ell(g, cfg);
    case BuilderKind::Small: return build_small_ell(g, cfg);
    case BuilderKind::Auto: break;
  }
  if (ell >= (1.0 + cfg.epsilon) * n) return build_large_ell(g, cfg);
  if (ell <= (1.0 - cfg.epsilon) * n && g.ell() >= 2) return build_small_ell(g, cfg);
  BuildOutcome large = build_large_ell(g, cfg);
  if (g.ell() < 2) return large;
  BuildOutcome small = build_small_ell(g, cfg);
  if (!large.ok()) return small.ok() ? small : large;
  if (!small.ok()) return large;
  return small.stats.achieved_order > large.stats.achieved_order ? small : large;
}

std::string serialize_outcome(const BuildOutcome& outcome) {
  json doc;
  doc["builder"] = outcome.builder;
  if (outcome.certificate) {
    doc["certificate"] = json::parse(serialize_certificate(*outcome.certificate));
  } else {
    doc["certificate"] = nullptr;
  }
  if (outcome.failure) {
    doc["failure"] = {{"stage", outcome.failure->stage}, {"reason", outcome.failure->reason}};
  } else {
    doc["failure"] = nullptr;
  }
  const auto& st = outcome.stats;
  doc["stats"] = {{"requested_order", st.requested_order},
                  {"achieved_order", st.achieved_order},
                  {"direct_edges", st.direct_edges},
                  {"cross_matching_edges", st.cross_matching_edges},
                  {"length2_paths", st.length2_paths},
                  {"connector_paths", st.connector_paths},
                  {"pruned_branch", st.pruned_branch},
                  {"dropped_branch", st.dropped_branch},
                  {"branch_vertices", st.branch_vertices},
                  {"internal_vertices", st.internal_vertices},
                  {"total_vertices", st.total_vertices},
                  {"max_path_length", st.max_path_length},
                  {"path_length_bound", st.path_length_bound}};
  doc["warnings"] = outcome.warnings;
  return doc.dump() + "\n";
}

}  // namespace liftsub
