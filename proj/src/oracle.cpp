#include "liftsub/oracle.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <string>
#include <unordered_set>

#include "liftsub/rng.hpp"

namespace liftsub {

namespace {

using Mask = std::uint64_t;
constexpr std::size_t kMaskBits = 64;
constexpr std::size_t kMemoCap = 4'000'000;

Mask bit(std::uint32_t v) { return Mask{1} << v; }
int popcount(Mask m) { return std::popcount(m); }

std::vector<Mask> adjacency_masks(const SimpleGraph& h) {
  if (h.num_vertices() > kMaskBits)
    throw PreconditionError("exact oracles support at most " + std::to_string(kMaskBits) + " vertices");
  std::vector<Mask> adj(h.num_vertices(), 0);
  for (std::uint32_t v = 0; v < h.num_vertices(); ++v)
    for (auto w : h.neighbors(v)) adj[v] |= bit(w);
  return adj;
}

class Meter {
 public:
  explicit Meter(const OracleBudget& b)
      : max_states_(b.max_states), deadline_(std::chrono::steady_clock::now() + b.time_limit) {}

  void tick() {
    if (++states_ > max_states_) throw BudgetExceeded("state budget of " + std::to_string(max_states_) + " exhausted");
    if ((states_ & 0xfff) == 0 && std::chrono::steady_clock::now() > deadline_)
      throw BudgetExceeded("time limit exhausted");
  }
  std::uint64_t states() const { return states_; }

 private:
  std::uint64_t max_states_;
  std::chrono::steady_clock::time_point deadline_;
  std::uint64_t states_ = 0;
};

// Disjoint-path routing for a fixed branch set.
class PathSearch {
 public:
  PathSearch(const std::vector<Mask>& adj, std::span<const std::uint32_t> branch, Meter& meter)
      : adj_(adj), branch_(branch.begin(), branch.end()), meter_(meter) {
    all_ = adj.size() == kMaskBits ? ~Mask{0} : (bit(static_cast<std::uint32_t>(adj.size())) - 1);
    for (auto v : branch_) branch_mask_ |= bit(v);
    for (std::size_t i = 0; i < branch_.size(); ++i)
      for (std::size_t j = i + 1; j < branch_.size(); ++j)
        if (!(adj_[branch_[i]] & bit(branch_[j]))) pairs_.push_back({i, j});
    routes_.resize(pairs_.size());
  }

  std::optional<GraphCertificate> run() {
    std::vector<char> remaining(pairs_.size(), 1);
    if (!solve(0, remaining, pairs_.size())) return std::nullopt;
    GraphCertificate cert;
    cert.branch = branch_;
    for (std::size_t i = 0; i < branch_.size(); ++i)
      for (std::size_t j = i + 1; j < branch_.size(); ++j) cert.paths[{i, j}] = {branch_[i], branch_[j]};
    for (std::size_t p = 0; p < pairs_.size(); ++p) cert.paths[pairs_[p]] = routes_[p];
    return cert;
  }

 private:
  std::string key(Mask used, const std::vector<char>& remaining) const {
    std::string k(reinterpret_cast<const char*>(&used), sizeof used);
    k.append(remaining.begin(), remaining.end());
    return k;
  }

  // BFS distances to `target` through free vertices; -1 when unreachable.
  std::vector<int> distances_to(std::uint32_t target, Mask free) const {
    std::vector<int> dist(adj_.size(), -1);
    dist[target] = 0;
    Mask frontier = bit(target), seen = bit(target);
    for (int d = 1; frontier; ++d) {
      Mask next = 0;
      for (Mask f = frontier; f; f &= f - 1) next |= adj_[std::countr_zero(f)];
      next &= free & ~seen;
      seen |= next;
      for (Mask f = next; f; f &= f - 1) dist[std::countr_zero(f)] = d;
      frontier = next;
    }
    return dist;
  }

  bool solve(Mask used, std::vector<char>& remaining, std::size_t left) {
    if (left == 0) return true;
    meter_.tick();
    const std::string k = key(used, remaining);
    if (failed_.contains(k)) return false;

    const Mask free = all_ & ~branch_mask_ & ~used;
    std::vector<int> need(branch_.size(), 0);
    for (std::size_t p = 0; p < pairs_.size(); ++p)
      if (remaining[p]) {
        ++need[pairs_[p].first];
        ++need[pairs_[p].second];
      }
    for (std::size_t i = 0; i < branch_.size(); ++i)
      if (popcount(adj_[branch_[i]] & free) < need[i]) return remember(k);

    // Pair order: fewest free common neighbours first.
    std::size_t pick = pairs_.size();
    int pick_common = 0;
    for (std::size_t p = 0; p < pairs_.size(); ++p) {
      if (!remaining[p]) continue;
      const int common = popcount(adj_[branch_[pairs_[p].first]] & adj_[branch_[pairs_[p].second]] & free);
      if (pick == pairs_.size() || common < pick_common) {
        pick = p;
        pick_common = common;
      }
    }
    const std::uint32_t a = branch_[pairs_[pick].first];
    const std::uint32_t b = branch_[pairs_[pick].second];
    const std::vector<int> dist = distances_to(b, free);
    int shortest = -1;
    for (Mask f = adj_[a] & free; f; f &= f - 1) {
      const int d = dist[std::countr_zero(f)];
      if (d > 0 && (shortest < 0 || d + 1 < shortest)) shortest = d + 1;
    }
    if (shortest < 0) return remember(k);

    // Reachability for every other remaining pair.
    for (std::size_t p = 0; p < pairs_.size(); ++p) {
      if (!remaining[p] || p == pick) continue;
      const auto other = distances_to(branch_[pairs_[p].second], free);
      bool ok = false;
      for (Mask f = adj_[branch_[pairs_[p].first]] & free; f && !ok; f &= f - 1) ok = other[std::countr_zero(f)] > 0;
      if (!ok) return remember(k);
    }

    remaining[pick] = 0;
    std::vector<std::uint32_t> path{a};
    const int max_len = popcount(free) + 1;
    for (int len = shortest; len <= max_len; ++len) {
      if (extend(path, len, b, free, dist, used, remaining, left - 1, pick)) return true;
    }
    remaining[pick] = 1;
    return remember(k);
  }

  bool extend(std::vector<std::uint32_t>& path, int len, std::uint32_t target, Mask free, const std::vector<int>& dist,
              Mask used, std::vector<char>& remaining, std::size_t left, std::size_t pair_index) {
    const std::uint32_t cur = path.back();
    const int step = static_cast<int>(path.size());  // index of the next vertex
    if (step == len) {
      if (!(adj_[cur] & bit(target))) return false;
      Mask internal = 0;
      for (std::size_t k = 1; k < path.size(); ++k) internal |= bit(path[k]);
      if (!solve(used | internal, remaining, left)) return false;
      routes_[pair_index] = path;
      routes_[pair_index].push_back(target);
      return true;
    }
    for (Mask f = adj_[cur] & free; f; f &= f - 1) {
      const auto next = static_cast<std::uint32_t>(std::countr_zero(f));
      const int d = dist[next];
      if (d <= 0 || d > len - step) continue;
      meter_.tick();
      path.push_back(next);
      const bool ok = extend(path, len, target, free & ~bit(next), dist, used, remaining, left, pair_index);
      path.pop_back();
      if (ok) return true;
    }
    return false;
  }

  bool remember(const std::string& k) {
    if (failed_.size() < kMemoCap) failed_.insert(k);
    return false;
  }

  const std::vector<Mask>& adj_;
  std::vector<std::uint32_t> branch_;
  Meter& meter_;
  Mask all_ = 0;
  Mask branch_mask_ = 0;
  std::vector<BranchPair> pairs_;  // non-adjacent branch pairs needing a route
  std::vector<std::vector<std::uint32_t>> routes_;
  std::unordered_set<std::string> failed_;
};

std::size_t count_components(const SimpleGraph& h) {
  std::vector<std::uint32_t> parent(h.num_vertices());
  std::iota(parent.begin(), parent.end(), 0u);
  auto find = [&](std::uint32_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  std::size_t comps = h.num_vertices();
  for (auto [u, v] : h.edges()) {
    const auto ru = find(u), rv = find(v);
    if (ru != rv) {
      parent[ru] = rv;
      --comps;
    }
  }
  return comps;
}

std::size_t trivial_lower_bound(const SimpleGraph& h) {
  if (h.num_vertices() == 0) return 0;
  if (h.num_edges() == 0) return 1;
  if (h.num_edges() + count_components(h) > h.num_vertices()) return 3;  // contains a cycle
  return 2;
}

long long counting_threshold(std::size_t b, std::size_t n) {
  const auto bb = static_cast<long long>(b);
  return bb * (bb - 1) / 2 + bb - static_cast<long long>(n);
}

}  // namespace

std::optional<GraphCertificate> find_subdivision_with_branch_set(const SimpleGraph& h,
                                                                 std::span<const std::uint32_t> branch,
                                                                 const OracleBudget& budget) {
  const auto adj = adjacency_masks(h);
  for (auto v : branch)
    if (v >= h.num_vertices()) throw PreconditionError("branch vertex " + std::to_string(v) + " out of range");
  Meter meter(budget);
  return PathSearch(adj, branch, meter).run();
}

HajosResult exact_hajos_number(const SimpleGraph& h, const OracleBudget& budget) {
  const std::size_t n = h.num_vertices();
  if (n > budget.max_nodes)
    throw PreconditionError("graph has " + std::to_string(n) + " vertices; oracle budget allows " +
                            std::to_string(budget.max_nodes));
  HajosResult result;
  if (n == 0) return result;
  const auto adj = adjacency_masks(h);
  Meter meter(budget);
  const std::size_t top = std::min(n, h.max_degree() + 1);
  std::size_t b = top;
  try {
    for (; b >= 1; --b) {
      std::vector<std::uint32_t> cand;
      for (std::uint32_t v = 0; v < n; ++v)
        if (h.degree(v) + 1 >= b) cand.push_back(v);
      if (cand.size() < b) continue;
      const long long threshold = counting_threshold(b, n);
      const long long full = static_cast<long long>(b) * static_cast<long long>(b - 1) / 2;

      std::vector<std::uint32_t> chosen;
      std::optional<GraphCertificate> found;
      // Branch sets in lexicographic order, pruned by the edge-count bound.
      auto enumerate = [&](auto&& self, std::size_t start, long long edges) -> void {
        const std::size_t k = chosen.size();
        if (k == b) {
          found = PathSearch(adj, chosen, meter).run();
          return;
        }
        const long long k_after = static_cast<long long>(k) + 1;
        for (std::size_t idx = start; idx + (b - k) <= cand.size() && !found; ++idx) {
          meter.tick();
          const std::uint32_t v = cand[idx];
          long long e = edges;
          for (auto u : chosen) e += (adj[v] >> u) & 1;
          if (e + (full - k_after * (k_after - 1) / 2) < threshold) continue;
          chosen.push_back(v);
          self(self, idx + 1, e);
          chosen.pop_back();
        }
      };
      enumerate(enumerate, 0, 0);
      if (found) {
        result.value = b;
        result.upper_bound = b;
        result.certificate = std::move(found);
        result.states = meter.states();
        return result;
      }
    }
  } catch (const BudgetExceeded&) {
    result.exact = false;
    result.value = trivial_lower_bound(h);
    result.upper_bound = b;
    result.states = meter.states();
    return result;
  }
  result.states = meter.states();
  return result;
}

MaxEdgesResult max_edges_on_b_subset(const SimpleGraph& h, std::size_t b, const OracleBudget& budget) {
  const std::size_t n = h.num_vertices();
  MaxEdgesResult result;
  if (b > n || b == 0) return result;
  const auto adj = adjacency_masks(h);

  std::vector<std::uint32_t> order(n);
  std::iota(order.begin(), order.end(), 0u);
  std::stable_sort(order.begin(), order.end(), [&](auto x, auto y) { return h.degree(x) > h.degree(y); });

  Meter meter(budget);
  long long best = -1;
  std::vector<std::uint32_t> chosen;
  Mask chosen_mask = 0;
  std::vector<long long> from_chosen, among_rest;

  auto dfs = [&](auto&& self, std::size_t idx, long long edges) -> void {
    meter.tick();
    const std::size_t k = b - chosen.size();
    if (k == 0) {
      if (edges > best) {
        best = edges;
        result.subset = chosen;
      }
      return;
    }
    if (n - idx < k) return;
    Mask rest = 0;
    for (std::size_t t = idx; t < n; ++t) rest |= bit(order[t]);
    from_chosen.clear();
    among_rest.clear();
    for (std::size_t t = idx; t < n; ++t) {
      const auto v = order[t];
      from_chosen.push_back(popcount(adj[v] & chosen_mask));
      among_rest.push_back(std::min<long long>(static_cast<long long>(k) - 1, popcount(adj[v] & rest & ~bit(v))));
    }
    auto top_sum = [k](std::vector<long long>& xs) {
      std::nth_element(xs.begin(), xs.begin() + static_cast<std::ptrdiff_t>(k - 1), xs.end(), std::greater<>());
      return std::accumulate(xs.begin(), xs.begin() + static_cast<std::ptrdiff_t>(k), 0LL);
    };
    const long long bound = edges + top_sum(from_chosen) + top_sum(among_rest) / 2;
    if (bound <= best) return;

    const auto v = order[idx];
    chosen.push_back(v);
    chosen_mask |= bit(v);
    self(self, idx + 1, edges + popcount(adj[v] & (chosen_mask & ~bit(v))));
    chosen.pop_back();
    chosen_mask &= ~bit(v);
    self(self, idx + 1, edges);
  };

  try {
    dfs(dfs, 0, 0);
  } catch (const BudgetExceeded&) {
    result.exact = false;
  }
  result.value = best < 0 ? 0 : static_cast<std::size_t>(best);
  std::sort(result.subset.begin(), result.subset.end());
  return result;
}

CountingResult subdivision_nonexistence_by_counting(const SimpleGraph& h, std::size_t b, const OracleBudget& budget) {
  CountingResult result;
  result.threshold = counting_threshold(b, h.num_vertices());
  if (b > h.num_vertices()) {
    result.verdict = CountingVerdict::NoSubdivision;
    return result;
  }
  if (result.threshold <= 0) return result;
  result.max_edges = max_edges_on_b_subset(h, b, budget);
  if (result.max_edges.exact && static_cast<long long>(result.max_edges.value) < result.threshold)
    result.verdict = CountingVerdict::NoSubdivision;
  return result;
}

CountingResult subdivision_nonexistence_by_counting(const LiftGraph& g, std::size_t b, const OracleBudget& budget) {
  return subdivision_nonexistence_by_counting(to_simple_graph(g), b, budget);
}

bool check_property_P(const LiftGraph& g, std::span<const VertexId> x) {
  const std::size_t ell = g.ell();
  std::vector<std::int32_t> pos(g.num_vertices(), -1);
  std::int32_t count = 0;
  for (auto v : x) {
    if (!g.contains(v)) throw PreconditionError("vertex " + to_string(v) + " is not in the lift");
    auto& p = pos[g.slot(v)];
    if (p < 0) p = count++;
  }
  std::vector<std::uint8_t> shared(static_cast<std::size_t>(count) * static_cast<std::size_t>(count), 0);
  std::vector<std::int32_t> inside;
  for (std::uint32_t f = 0; f < g.num_fibers(); ++f) {
    for (std::uint32_t a = 0; a < ell; ++a) {
      const VertexId w{f, a};
      if (pos[g.slot(w)] >= 0) continue;
      inside.clear();
      g.for_each_neighbor(w, [&](VertexId u) {
        if (pos[g.slot(u)] >= 0) inside.push_back(pos[g.slot(u)]);
      });
      for (std::size_t p = 0; p < inside.size(); ++p)
        for (std::size_t q = p + 1; q < inside.size(); ++q) {
          const auto lo = std::min(inside[p], inside[q]), hi = std::max(inside[p], inside[q]);
          if (++shared[static_cast<std::size_t>(lo) * static_cast<std::size_t>(count) + static_cast<std::size_t>(hi)] >= 2)
            return true;
        }
    }
  }
  return false;
}

PropertyPSearch search_property_P_violator(const LiftGraph& g, const OracleBudget& budget, std::uint64_t seed,
                                           std::size_t samples) {
  const std::size_t n = g.num_fibers();
  const std::size_t total = g.num_vertices();
  PropertyPSearch result;
  if (n > total) return result;
  std::vector<VertexId> all;
  for (std::uint32_t s = 0; s < total; ++s) all.push_back(g.vertex_at(s));

  const double combos = std::exp(std::lgamma(static_cast<double>(total) + 1) - std::lgamma(static_cast<double>(n) + 1) -
                                 std::lgamma(static_cast<double>(total - n) + 1));
  std::vector<VertexId> x(n);
  if (combos <= static_cast<double>(budget.max_states)) {
    result.exhaustive = true;
    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    for (;;) {
      for (std::size_t k = 0; k < n; ++k) x[k] = all[idx[k]];
      ++result.examined;
      if (!check_property_P(g, x)) {
        result.violator = x;
        return result;
      }
      std::size_t k = n;
      while (k > 0 && idx[k - 1] == total - n + k - 1) --k;
      if (k == 0) break;
      ++idx[k - 1];
      for (std::size_t t = k; t < n; ++t) idx[t] = idx[t - 1] + 1;
    }
    return result;
  }
  result.budget_exhausted = true;
  for (std::size_t t = 0; t < samples; ++t) {
    Rng rng = make_rng(seed, {t});
    x.clear();
    std::sample(all.begin(), all.end(), std::back_inserter(x), static_cast<std::ptrdiff_t>(n), rng);
    ++result.examined;
    if (!check_property_P(g, x)) {
      result.violator = x;
      return result;
    }
  }
  return result;
}

std::int64_t permanent(const std::vector<std::vector<std::uint8_t>>& a) {
  const std::size_t n = a.size();
  if (n > kMaxPermanentOrder) throw PreconditionError("permanent order above " + std::to_string(kMaxPermanentOrder));
  for (const auto& row : a)
    if (row.size() != n) throw PreconditionError("permanent needs a square matrix");
  if (n == 0) return 1;
  std::vector<std::int64_t> row_sum(n, 0);
  std::int64_t total = 0;
  std::uint32_t gray = 0;
  for (std::uint32_t k = 1; k < (1u << n); ++k) {
    const std::uint32_t next = k ^ (k >> 1);
    const auto col = static_cast<std::size_t>(std::countr_zero(next ^ gray));
    const std::int64_t sign = (next >> col) & 1 ? 1 : -1;
    gray = next;
    std::int64_t prod = 1;
    for (std::size_t i = 0; i < n; ++i) {
      row_sum[i] += sign * a[i][col];
      prod *= row_sum[i];
    }
    total += (std::popcount(gray) % 2 == 0) ? prod : -prod;
  }
  return n % 2 == 0 ? total : -total;
}

Rational exact_avoidance_probability(std::span<const LayerPair> forbidden, std::size_t ell) {
  if (ell == 0) throw PreconditionError("ell must be positive");
  if (ell > kMaxPermanentOrder)
    throw PreconditionError("exact avoidance probability refused for ell > " + std::to_string(kMaxPermanentOrder));
  std::vector<std::vector<std::uint8_t>> m(ell, std::vector<std::uint8_t>(ell, 1));
  for (auto [a, b] : forbidden) {
    if (a >= ell || b >= ell) throw PreconditionError("forbidden pair outside [0, ell)");
    m[a][b] = 0;
  }
  std::int64_t fact = 1;
  for (std::size_t k = 2; k <= ell; ++k) fact *= static_cast<std::int64_t>(k);
  const std::int64_t num = permanent(m);
  const std::int64_t g = std::gcd(num, fact);
  return {num / g, fact / g};
}

}  // namespace liftsub
