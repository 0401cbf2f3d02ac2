#include "liftsub/connector.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "liftsub/json_io.hpp"
#include "liftsub/rng.hpp"

namespace liftsub {

using nlohmann::json;

ExtendabilityParams::ExtendabilityParams(std::size_t d, std::size_t m_) : D(d), m(m_) {
  if (D < 3) throw PreconditionError("extendability requires D >= 3");
  if (m < 1) throw PreconditionError("extendability requires m >= 1");
}

ExtendabilityParams ExtendabilityParams::asymptotic_defaults(std::size_t n, std::size_t ell) {
  const double nd = static_cast<double>(std::max<std::size_t>(n, 2));
  const auto d = static_cast<std::size_t>(std::floor(std::pow(nd, 0.99)));
  const auto m = static_cast<std::size_t>(std::ceil(5.0 * static_cast<double>(ell) * std::log(nd)));
  return {std::max<std::size_t>(d, 3), std::max<std::size_t>(m, 1)};
}

std::size_t ExtendabilityParams::path_length_bound() const {
  const double ratio = std::log(2.0 * static_cast<double>(m)) / std::log(static_cast<double>(D) - 1.0);
  return 3 * static_cast<std::size_t>(std::max(1.0, std::ceil(ratio - 1e-12)));
}

// ---------------------------------------------------------------------------

EmbeddingState::EmbeddingState(const LiftGraph& g, ExtendabilityParams params, FiberSet host)
    : params_(params),
      host_(host.universe() == 0 ? FiberSet::all(g.num_fibers()) : std::move(host)),
      num_fibers_(g.num_fibers()),
      ell_(g.ell()),
      in_s_(g.num_vertices(), 0),
      degree_(g.num_vertices(), 0) {
  if (host_.universe() != num_fibers_) throw PreconditionError("host fiber set does not match the lift");
}

void EmbeddingState::add_vertex(VertexId v) {
  if (!in_host(v)) throw PreconditionError("vertex " + to_string(v) + " is outside the host");
  auto& flag = in_s_[slot(v)];
  if (!flag) {
    flag = 1;
    ++num_vertices_;
  }
}

void EmbeddingState::add_edge(const LiftGraph& g, VertexId u, VertexId v) {
  if (!in_host(u) || !in_host(v) || !g.is_edge(u, v))
    throw PreconditionError(to_string(u) + "-" + to_string(v) + " is not a host edge");
  const LiftEdge e = u < v ? LiftEdge{u, v} : LiftEdge{v, u};
  if (edges_.contains(e)) throw PreconditionError(to_string(u) + "-" + to_string(v) + " is already in S");
  if (s_degree(u) + 1 > params_.D || s_degree(v) + 1 > params_.D)
    throw PreconditionError("adding " + to_string(u) + "-" + to_string(v) + " exceeds the degree cap D");
  add_vertex(u);
  add_vertex(v);
  edges_.insert(e);
  ++degree_[slot(u)];
  ++degree_[slot(v)];
}

std::vector<VertexId> EmbeddingState::vertices() const {
  std::vector<VertexId> out;
  out.reserve(num_vertices_);
  for (std::size_t s = 0; s < in_s_.size(); ++s)
    if (in_s_[s]) out.push_back({static_cast<std::uint32_t>(s / ell_), static_cast<std::uint32_t>(s % ell_)});
  return out;
}

void EmbeddingState::check_invariants() const {
  std::vector<std::uint32_t> deg(degree_.size(), 0);
  for (const auto& [u, v] : edges_) {
    if (!contains(u) || !contains(v)) throw std::logic_error("edge endpoint missing from S");
    ++deg[slot(u)];
    ++deg[slot(v)];
  }
  if (deg != degree_) throw std::logic_error("S-degrees disagree with the edge set");
  for (auto d : deg)
    if (d > params_.D) throw std::logic_error("S-degree exceeds D");
  const auto count = static_cast<std::size_t>(std::count(in_s_.begin(), in_s_.end(), 1));
  if (count != num_vertices_) throw std::logic_error("vertex count out of sync");
}

std::string EmbeddingState::serialize() const {
  json doc;
  doc["n"] = num_fibers_;
  doc["ell"] = ell_;
  doc["params"] = {{"D", params_.D}, {"m", params_.m}};
  doc["host_fibers"] = host_.members();
  doc["vertices"] = to_json_value(vertices());
  json edges = json::array();
  for (const auto& [u, v] : edges_) edges.push_back({to_json_value(u), to_json_value(v)});
  doc["edges"] = std::move(edges);
  return doc.dump() + "\n";
}

EmbeddingState EmbeddingState::deserialize(const LiftGraph& g, std::string_view text) {
  const json doc = parse_document(text);
  if (!doc.is_object()) throw ParseError("<document>", "expected an object");
  for (const char* f : {"n", "ell", "params", "host_fibers", "vertices", "edges"})
    if (!doc.contains(f)) throw ParseError(f, "missing");
  if (doc["n"] != g.num_fibers()) throw ParseError("n", "does not match the lift");
  if (doc["ell"] != g.ell()) throw ParseError("ell", "does not match the lift");
  ExtendabilityParams params;
  try {
    params = ExtendabilityParams(doc["params"].at("D").get<std::size_t>(), doc["params"].at("m").get<std::size_t>());
  } catch (const json::exception& e) {
    throw ParseError("params", e.what());
  } catch (const PreconditionError& e) {
    throw ParseError("params", e.what());
  }
  std::vector<std::uint32_t> fibers;
  try {
    fibers = doc["host_fibers"].get<std::vector<std::uint32_t>>();
  } catch (const json::exception& e) {
    throw ParseError("host_fibers", e.what());
  }
  EmbeddingState s(g, params, FiberSet(g.num_fibers(), fibers));
  for (auto v : vertices_from_json(doc["vertices"], "vertices")) {
    if (!s.in_host(v)) throw ParseError("vertices", to_string(v) + " is outside the host");
    s.add_vertex(v);
  }
  if (!doc["edges"].is_array()) throw ParseError("edges", "expected an array");
  for (std::size_t k = 0; k < doc["edges"].size(); ++k) {
    const std::string field = "edges[" + std::to_string(k) + "]";
    const auto ends = vertices_from_json(doc["edges"][k], field);
    if (ends.size() != 2) throw ParseError(field, "expected two endpoints");
    try {
      s.add_edge(g, ends[0], ends[1]);
    } catch (const PreconditionError& e) {
      throw ParseError(field, e.what());
    }
  }
  return s;
}

// ---------------------------------------------------------------------------

namespace {

constexpr std::uint32_t kUnseen = std::numeric_limits<std::uint32_t>::max();

struct Side {
  VertexId root;
  std::vector<std::uint32_t> dist;
  std::vector<std::size_t> parent;
  std::vector<std::size_t> frontier;
  std::uint32_t depth = 0;
};

}  // namespace

PathResult connect(const LiftGraph& g, EmbeddingState& s, VertexId u, VertexId v, std::size_t max_len,
                   std::optional<std::uint64_t> tie_seed) {
  if (u == v) throw PreconditionError("connect requires distinct endpoints");
  if (!s.contains(u) || !s.contains(v)) throw PreconditionError("connect endpoints must belong to S");
  const std::size_t cap = s.params().D;
  if (2 * s.s_degree(u) > cap || 2 * s.s_degree(v) > cap)
    throw PreconditionError("endpoint S-degree exceeds D/2");
  if (max_len == 0) max_len = s.params().path_length_bound();

  auto commit = [&](std::vector<VertexId> path) {
    for (std::size_t k = 0; k + 1 < path.size(); ++k) s.add_edge(g, path[k], path[k + 1]);
    return PathResult{std::move(path)};
  };

  if (g.is_edge(u, v)) return commit({u, v});

  const std::size_t total = g.num_vertices();
  auto free_vertex = [&](VertexId w) { return s.in_host(w) && !s.contains(w); };

  std::optional<Rng> rng;
  if (tie_seed) rng.emplace(*tie_seed);

  Side sides[2] = {{u, std::vector<std::uint32_t>(total, kUnseen), std::vector<std::size_t>(total, 0), {g.slot(u)}, 0},
                   {v, std::vector<std::uint32_t>(total, kUnseen), std::vector<std::size_t>(total, 0), {g.slot(v)}, 0}};
  sides[0].dist[g.slot(u)] = 0;
  sides[1].dist[g.slot(v)] = 0;

  std::vector<VertexId> nbrs;
  while (sides[0].depth + sides[1].depth < max_len && !sides[0].frontier.empty() && !sides[1].frontier.empty()) {
    const int a = sides[0].frontier.size() <= sides[1].frontier.size() ? 0 : 1;
    Side& me = sides[a];
    Side& other = sides[1 - a];

    // Meeting candidates of this level: (length, meeting slot, slot on my side).
    struct Meet {
      std::size_t length;
      VertexId at;
      std::size_t from;
    };
    std::vector<Meet> meets;
    std::vector<std::size_t> next;
    for (std::size_t x : me.frontier) {
      nbrs.clear();
      g.for_each_neighbor(g.vertex_at(x), [&](VertexId w) { nbrs.push_back(w); });
      if (rng) std::shuffle(nbrs.begin(), nbrs.end(), *rng);
      for (VertexId w : nbrs) {
        const std::size_t sw = g.slot(w);
        if (w == other.root) {
          meets.push_back({me.depth + 1u, w, x});
          continue;
        }
        if (!free_vertex(w)) continue;
        if (other.dist[sw] != kUnseen && me.dist[sw] == kUnseen)
          meets.push_back({me.depth + 1u + other.dist[sw], w, x});
        if (me.dist[sw] == kUnseen) {
          me.dist[sw] = me.depth + 1;
          me.parent[sw] = x;
          next.push_back(sw);
        }
      }
    }
    me.frontier = std::move(next);
    ++me.depth;

    if (meets.empty()) continue;
    const std::size_t best_len =
        std::min_element(meets.begin(), meets.end(), [](const Meet& p, const Meet& q) { return p.length < q.length; })
            ->length;
    if (best_len > max_len) break;
    std::vector<Meet> best;
    for (const auto& m : meets)
      if (m.length == best_len) best.push_back(m);
    const Meet pick = rng ? best[uniform_below(*rng, best.size())]
                          : *std::min_element(best.begin(), best.end(), [](const Meet& p, const Meet& q) {
                              return std::tie(p.at, p.from) < std::tie(q.at, q.from);
                            });

    // Half on my side: my root ... from, [at]; half on the other side: at ... other root.
    std::vector<VertexId> mine;
    for (std::size_t x = pick.from;; x = me.parent[x]) {
      mine.push_back(g.vertex_at(x));
      if (x == g.slot(me.root)) break;
    }
    std::reverse(mine.begin(), mine.end());
    if (pick.at != other.root) {
      for (std::size_t x = g.slot(pick.at);; x = other.parent[x]) {
        mine.push_back(g.vertex_at(x));
        if (x == g.slot(other.root)) break;
      }
    } else {
      mine.push_back(other.root);
    }
    if (a == 1) std::reverse(mine.begin(), mine.end());
    return commit(std::move(mine));
  }
  throw NoPathWithinBudget("no " + to_string(u) + "-" + to_string(v) + " path of length <= " +
                           std::to_string(max_len) + " avoids S");
}

BatchResult batch_connect(const LiftGraph& g, EmbeddingState& s, std::span<const std::pair<VertexId, VertexId>> pairs,
                          const RetryPolicy& policy, std::size_t max_len) {
  for (const auto& [x, y] : pairs)
    if (!s.contains(x) || !s.contains(y))
      throw PreconditionError("pair endpoint " + to_string(s.contains(x) ? y : x) + " is not in S");

  const EmbeddingState snapshot = s;
  std::optional<BatchResult> best;
  std::optional<EmbeddingState> best_state;

  std::vector<std::size_t> order(pairs.size());
  std::iota(order.begin(), order.end(), 0);
  const std::size_t attempts = std::max<std::size_t>(policy.attempts, 1);
  std::size_t ran = 0;
  for (std::size_t attempt = 0; attempt < attempts; ++attempt) {
    ++ran;
    EmbeddingState work = snapshot;
    BatchResult res;
    res.paths.resize(pairs.size());
    res.attempts_used = attempt + 1;
    std::optional<std::uint64_t> tie;
    if (attempt > 0) tie = derive_seed(policy.seed, {attempt});
    std::size_t call = 0;
    for (std::size_t idx : order) {
      const auto [x, y] = pairs[idx];
      std::optional<std::uint64_t> call_seed;
      if (tie) call_seed = derive_seed(*tie, {call++});
      try {
        res.paths[idx] = connect(g, work, x, y, max_len, call_seed);
      } catch (const NoPathWithinBudget& e) {
        res.failed.push_back(idx);
        res.failure_reasons.emplace_back(e.what());
      } catch (const PreconditionError& e) {
        res.failed.push_back(idx);
        res.failure_reasons.emplace_back(e.what());
      }
    }
    const bool better = !best || res.failed.size() < best->failed.size();
    if (better) {
      best = res;
      best_state = work;
    }
    if (res.failed.empty()) break;
    // failed pairs go first next time, the rest keep their relative order
    std::vector<std::size_t> reordered(res.failed.begin(), res.failed.end());
    std::vector<char> is_failed(pairs.size(), 0);
    for (auto f : res.failed) is_failed[f] = 1;
    for (auto idx : order)
      if (!is_failed[idx]) reordered.push_back(idx);
    order = std::move(reordered);
  }
  if (pairs.empty()) best = BatchResult{};
  else s = std::move(*best_state);
  // report failures in index order
  std::vector<std::size_t> perm(best->failed.size());
  std::iota(perm.begin(), perm.end(), 0);
  std::sort(perm.begin(), perm.end(), [&](std::size_t p, std::size_t q) { return best->failed[p] < best->failed[q]; });
  BatchResult out;
  out.paths = std::move(best->paths);
  out.attempts_used = pairs.empty() ? 0 : ran;
  for (auto p : perm) {
    out.failed.push_back(best->failed[p]);
    out.failure_reasons.push_back(best->failure_reasons[p]);
  }
  return out;
}

// ---------------------------------------------------------------------------

long long extendability_margin(const LiftGraph& g, const EmbeddingState& s, std::span<const VertexId> u) {
  std::vector<VertexId> outside;
  long long correction = 0;
  for (VertexId x : u) {
    if (s.contains(x)) correction += static_cast<long long>(s.s_degree(x)) - 1;
    g.for_each_neighbor(x, [&](VertexId w) {
      if (s.in_host(w) && !s.contains(w)) outside.push_back(w);
    });
  }
  std::sort(outside.begin(), outside.end());
  const auto lhs = static_cast<long long>(std::unique(outside.begin(), outside.end()) - outside.begin());
  const long long rhs = static_cast<long long>(s.params().D - 1) * static_cast<long long>(u.size()) - correction;
  return lhs - rhs;
}

ExtendabilityReport check_extendable(const LiftGraph& g, const EmbeddingState& s, std::span<const std::size_t> set_sizes,
                                     std::size_t trials, std::uint64_t seed) {
  std::vector<VertexId> host_vertices;
  for (auto f : s.host().members())
    for (std::uint32_t a = 0; a < g.ell(); ++a) host_vertices.push_back({f, a});

  ExtendabilityReport report;
  report.worst_margin = std::numeric_limits<long long>::max();
  Rng rng = make_rng(seed, {0x657874ULL});
  std::vector<VertexId> u;
  for (std::size_t size : set_sizes) {
    if (size == 0 || size > 2 * s.params().m)
      throw PreconditionError("set size " + std::to_string(size) + " outside [1, 2m]");
    if (size > host_vertices.size()) throw PreconditionError("set size exceeds the host vertex count");
    ExtendabilityReport::SizeStats stats;
    stats.size = size;
    stats.exhaustive = size == 1;
    stats.worst_margin = std::numeric_limits<long long>::max();
    const std::size_t rounds = size == 1 ? host_vertices.size() : trials;
    for (std::size_t r = 0; r < rounds; ++r) {
      if (size == 1) {
        u.assign(1, host_vertices[r]);
      } else {
        u.clear();
        for (std::size_t i = 0; i < size; ++i) {
          const std::size_t j = i + uniform_below(rng, host_vertices.size() - i);
          std::swap(host_vertices[i], host_vertices[j]);
          u.push_back(host_vertices[i]);
        }
      }
      const long long margin = extendability_margin(g, s, u);
      ++stats.tested;
      stats.worst_margin = std::min(stats.worst_margin, margin);
      if (margin < 0) {
        ++stats.violations;
        if (!report.violating_set) {
          report.violating_set = u;
          std::sort(report.violating_set->begin(), report.violating_set->end());
        }
      }
    }
    report.tested_sets += stats.tested;
    report.violations += stats.violations;
    report.worst_margin = std::min(report.worst_margin, stats.worst_margin);
    report.per_size.push_back(stats);
  }
  return report;
}

}  // namespace liftsub
