#include "liftsub/pseudo_props.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "liftsub/rng.hpp"

namespace liftsub {

namespace {

double binomial_double(std::size_t n, std::size_t k) {
  if (k > n) return 0.0;
  k = std::min(k, n - k);
  double r = 1.0;
  for (std::size_t i = 1; i <= k; ++i) r = r * static_cast<double>(n - k + i) / static_cast<double>(i);
  return r;
}

// Uniform k-subset of [0, n) by partial Fisher-Yates over a scratch buffer.
void sample_subset(Rng& rng, std::vector<std::size_t>& pool, std::size_t k, std::vector<std::size_t>& out) {
  out.clear();
  const std::size_t n = pool.size();
  for (std::size_t i = 0; i < k; ++i) {
    const std::size_t j = i + uniform_below(rng, n - i);
    std::swap(pool[i], pool[j]);
    out.push_back(pool[i]);
  }
}

}  // namespace

JoinedVerdict check_joined(const LiftGraph& g, std::size_t m, JoinMode mode, std::size_t trials, std::uint64_t seed,
                           double budget) {
  if (m == 0) throw PreconditionError("m must be at least 1");
  const std::size_t total = g.num_vertices();
  JoinedVerdict verdict;
  verdict.mode = mode;
  if (2 * m > total) return verdict;  // no two disjoint m-sets exist

  auto to_vertices = [&](const std::vector<std::size_t>& slots) {
    std::vector<VertexId> out;
    out.reserve(slots.size());
    for (auto s : slots) out.push_back(g.vertex_at(s));
    return out;
  };

  if (mode == JoinMode::Exhaustive) {
    const double pairs = binomial_double(total, m) * binomial_double(total, m);
    if (pairs > budget)
      throw BudgetExceeded("exhaustive joinedness check needs " + std::to_string(pairs) +
                           " set pairs, budget is " + std::to_string(budget));
    // For each A, a disjoint B with no crossing edge exists iff at least m
    // vertices lie outside the closed neighbourhood of A.
    std::vector<std::size_t> combo(m);
    std::iota(combo.begin(), combo.end(), 0);
    std::vector<std::uint32_t> stamp(total, 0);
    std::uint32_t epoch = 0;
    for (;;) {
      ++epoch;
      for (auto s : combo) {
        stamp[s] = epoch;
        g.for_each_neighbor(g.vertex_at(s), [&](VertexId w) { stamp[g.slot(w)] = epoch; });
      }
      std::vector<std::size_t> rest;
      for (std::size_t s = 0; s < total && rest.size() < m; ++s)
        if (stamp[s] != epoch) rest.push_back(s);
      if (rest.size() == m) {
        verdict.holds = false;
        verdict.witness.emplace(to_vertices(combo), to_vertices(rest));
        return verdict;
      }
      // next combination in lexicographic order
      std::size_t i = m;
      while (i > 0 && combo[i - 1] == total - m + (i - 1)) --i;
      if (i == 0) break;
      ++combo[i - 1];
      for (std::size_t k = i; k < m; ++k) combo[k] = combo[k - 1] + 1;
    }
    return verdict;
  }

  verdict.trials = trials;
  Rng rng = make_rng(seed, {0x6a6f696eULL, m});
  std::vector<std::size_t> pool(total);
  std::iota(pool.begin(), pool.end(), 0);
  std::vector<std::size_t> drawn;
  std::vector<std::uint32_t> in_b(total, 0);
  for (std::size_t t = 1; t <= trials; ++t) {
    sample_subset(rng, pool, 2 * m, drawn);
    std::vector<std::size_t> a(drawn.begin(), drawn.begin() + static_cast<std::ptrdiff_t>(m));
    std::vector<std::size_t> b(drawn.begin() + static_cast<std::ptrdiff_t>(m), drawn.end());
    const auto stamp = static_cast<std::uint32_t>(t);
    for (auto s : b) in_b[s] = stamp;
    bool crossing = false;
    for (auto s : a) {
      g.for_each_neighbor(g.vertex_at(s), [&](VertexId w) { crossing = crossing || in_b[g.slot(w)] == stamp; });
      if (crossing) break;
    }
    if (!crossing) {
      std::sort(a.begin(), a.end());
      std::sort(b.begin(), b.end());
      verdict.holds = false;
      verdict.witness.emplace(to_vertices(a), to_vertices(b));
      return verdict;
    }
  }
  return verdict;
}

double expansion_bound(std::size_t n, std::size_t ell, double epsilon, std::size_t set_size) {
  const double linear = epsilon * static_cast<double>(n) * static_cast<double>(set_size);
  const double cap = std::pow(epsilon, 6) * static_cast<double>(ell) * static_cast<double>(n);
  return std::min(linear, cap);
}

ExpansionReport check_expansion_into(const LiftGraph& g, std::span<const VertexId> target, double epsilon,
                                     std::span<const std::size_t> set_sizes, std::size_t trials, std::uint64_t seed) {
  if (!(epsilon > 0.0 && epsilon <= 0.5)) throw PreconditionError("epsilon must lie in (0, 1/2]");
  const std::size_t n = g.num_fibers();
  const std::size_t ell = g.ell();
  const std::size_t total = g.num_vertices();

  std::vector<char> in_target(total, 0);
  std::vector<std::size_t> per_fiber(n, 0);
  for (auto v : target) {
    if (!g.contains(v)) throw PreconditionError("target vertex " + to_string(v) + " is not in the lift");
    if (!in_target[g.slot(v)]) {
      in_target[g.slot(v)] = 1;
      ++per_fiber[v.fiber];
    }
  }
  const double need = std::max(9.0 * epsilon * static_cast<double>(ell),
                               static_cast<double>(ell) - static_cast<double>(n));
  for (std::uint32_t f = 0; f < n; ++f)
    if (static_cast<double>(per_fiber[f]) < need)
      throw PreconditionError("fiber " + std::to_string(f) + " holds " + std::to_string(per_fiber[f]) +
                              " target vertices, need at least " + std::to_string(need));

  ExpansionReport report;
  report.epsilon = epsilon;
  report.worst_ratio = std::numeric_limits<double>::infinity();

  std::vector<std::uint32_t> stamp(total, 0);
  std::uint32_t epoch = 0;
  auto measure = [&](std::span<const std::size_t> u) {
    ++epoch;
    std::size_t hit = 0;
    auto mark = [&](std::size_t s) {
      if (stamp[s] != epoch) {
        stamp[s] = epoch;
        hit += in_target[s];
      }
    };
    for (auto s : u) {
      mark(s);
      g.for_each_neighbor(g.vertex_at(s), [&](VertexId w) { mark(g.slot(w)); });
    }
    return hit;
  };

  Rng rng = make_rng(seed, {0x657870ULL});
  std::vector<std::size_t> pool(total);
  std::iota(pool.begin(), pool.end(), 0);
  std::vector<std::size_t> u;

  for (std::size_t size : set_sizes) {
    if (size == 0 || size > total) throw PreconditionError("set size " + std::to_string(size) + " out of range");
    ExpansionReport::SizeStats stats;
    stats.size = size;
    stats.exhaustive = size == 1;
    stats.worst_ratio = std::numeric_limits<double>::infinity();
    const double bound = expansion_bound(n, ell, epsilon, size);
    const std::size_t rounds = size == 1 ? total : trials;
    for (std::size_t r = 0; r < rounds; ++r) {
      if (size == 1) {
        u.assign(1, r);
      } else {
        sample_subset(rng, pool, size, u);
      }
      const double ratio = static_cast<double>(measure(u)) / bound;
      ++stats.tested;
      stats.worst_ratio = std::min(stats.worst_ratio, ratio);
      if (ratio < 1.0) {
        ++stats.violations;
        if (!report.violating_set) {
          std::vector<VertexId> vs;
          for (auto s : u) vs.push_back(g.vertex_at(s));
          std::sort(vs.begin(), vs.end());
          report.violating_set = std::move(vs);
        }
      }
    }
    report.tested_sets += stats.tested;
    report.violations += stats.violations;
    report.worst_ratio = std::min(report.worst_ratio, stats.worst_ratio);
    report.per_size.push_back(stats);
  }
  return report;
}

CrossMatching find_cross_matching(const LiftGraph& g, std::span<const std::vector<VertexId>> transversals,
                                  const FiberSet& host_in) {
  const FiberSet host = host_in.universe() == 0 ? FiberSet::all(g.num_fibers()) : host_in;
  if (host.universe() != g.num_fibers()) throw PreconditionError("host fiber set does not match the lift");
  const auto host_fibers = host.members();
  const std::size_t t = transversals.size();

  constexpr std::uint32_t kNone = std::numeric_limits<std::uint32_t>::max();
  std::vector<std::uint32_t> owner(g.num_vertices(), kNone);
  // by_fiber[i][f] = vertex of transversal i in fiber f
  std::vector<std::vector<VertexId>> by_fiber(t, std::vector<VertexId>(g.num_fibers()));
  for (std::uint32_t i = 0; i < t; ++i) {
    const auto& tr = transversals[i];
    if (tr.size() != host.size())
      throw PreconditionError("transversal " + std::to_string(i) + " has " + std::to_string(tr.size()) +
                              " vertices, expected one per host fiber (" + std::to_string(host.size()) + ")");
    std::vector<char> seen(g.num_fibers(), 0);
    for (auto v : tr) {
      if (!g.contains(v) || !host.contains(v.fiber))
        throw PreconditionError("transversal " + std::to_string(i) + " contains " + to_string(v) +
                                " outside the host fibers");
      if (seen[v.fiber]) throw PreconditionError("transversal " + std::to_string(i) + " repeats fiber " + std::to_string(v.fiber));
      seen[v.fiber] = 1;
      if (owner[g.slot(v)] != kNone)
        throw PreconditionError("transversals " + std::to_string(owner[g.slot(v)]) + " and " + std::to_string(i) +
                                " share " + to_string(v));
      owner[g.slot(v)] = i;
      by_fiber[i][v.fiber] = v;
    }
  }

  CrossMatching result;
  std::vector<char> used(g.num_vertices(), 0);
  bool added = true;
  while (added) {
    added = false;
    for (std::uint32_t i = 0; i < t; ++i) {
      for (std::uint32_t j = i + 1; j < t; ++j) {
        if (result.covered_pairs.contains({i, j})) continue;
        bool done = false;
        for (auto f : host_fibers) {
          const VertexId x = by_fiber[i][f];
          if (used[g.slot(x)]) continue;
          g.for_each_neighbor(x, [&](VertexId y) {
            if (done) return;
            const auto sy = g.slot(y);
            if (owner[sy] == j && !used[sy]) {
              used[g.slot(x)] = used[sy] = 1;
              result.edges.push_back({x, y, {i, j}});
              result.covered_pairs.insert({i, j});
              done = true;
            }
          });
          if (done) break;
        }
        added = added || done;
      }
    }
  }
  return result;
}

std::pair<double, double> wilson_interval(std::size_t successes, std::size_t trials, double z) {
  if (trials == 0) return {0.0, 1.0};
  const double nn = static_cast<double>(trials);
  const double p = static_cast<double>(successes) / nn;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / nn;
  const double centre = (p + z2 / (2.0 * nn)) / denom;
  const double half = z * std::sqrt(p * (1.0 - p) / nn + z2 / (4.0 * nn * nn)) / denom;
  return {std::max(0.0, centre - half), std::min(1.0, centre + half)};
}

AvoidanceEstimate estimate_avoidance_probability(std::span<const LayerPair> forbidden, std::size_t ell,
                                                 std::size_t trials, std::uint64_t seed) {
  if (ell == 0) throw PreconditionError("ell must be at least 1");
  if (trials == 0) throw PreconditionError("trials must be at least 1");
  std::vector<char> banned(ell * ell, 0);
  for (const auto& [a, b] : forbidden) {
    if (a >= ell || b >= ell) throw PreconditionError("forbidden pair outside [ell] x [ell]");
    banned[std::size_t{a} * ell + b] = 1;
  }
  AvoidanceEstimate est;
  est.trials = trials;
  std::vector<std::uint32_t> perm(ell);
  if (forbidden.empty()) {
    est.avoided = trials;
  } else {
    for (std::size_t t = 0; t < trials; ++t) {
      Rng rng = make_rng(seed, {t});
      std::iota(perm.begin(), perm.end(), 0u);
      std::shuffle(perm.begin(), perm.end(), rng);
      bool hit = false;
      for (std::size_t a = 0; a < ell && !hit; ++a) hit = banned[a * ell + perm[a]];
      est.avoided += hit ? 0 : 1;
    }
  }
  est.estimate = static_cast<double>(est.avoided) / static_cast<double>(trials);
  std::tie(est.lower, est.upper) = wilson_interval(est.avoided, trials, kZ99);
  if (est.avoided == trials) est.upper = 1.0;
  return est;
}

}  // namespace liftsub
