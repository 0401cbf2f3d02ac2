#pragma once

#include <algorithm>
#include <concepts>
#include <cstddef>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "liftsub/lift.hpp"

namespace liftsub {

using BranchPair = std::pair<std::size_t, std::size_t>;

/// Witness that a host graph contains a subdivision of K_b: b branch
/// vertices plus one path per unordered branch pair (i, j), i < j, running
/// from branch[i] to branch[j].
template <class Vertex>
struct BasicCertificate {
  std::vector<Vertex> branch;
  std::map<BranchPair, std::vector<Vertex>> paths;

  friend bool operator==(const BasicCertificate&, const BasicCertificate&) = default;
};

using SubdivisionCertificate = BasicCertificate<VertexId>;

enum class ViolationKind {
  InvalidVertex,         // vertex not in the host graph
  BranchCollision,       // two branch slots hold the same vertex
  MissingPair,           // no path recorded for a required pair
  UnexpectedPair,        // key with i >= j or j >= b
  WrongEndpoints,        // path does not run branch[i] -> branch[j]
  DegeneratePath,        // fewer than two vertices, or a vertex repeats within the path
  MissingEdge,           // consecutive path vertices are not adjacent
  ReusedInternalVertex,  // internal vertex shared by two paths
  InternalIsBranch,      // internal vertex coincides with a branch vertex
};

std::string_view to_string(ViolationKind k);

struct Violation {
  ViolationKind kind;
  BranchPair pair{0, 0};
  std::string detail;
};

struct Verdict {
  bool passed = true;
  std::vector<Violation> violations;

  bool has(ViolationKind k) const {
    return std::any_of(violations.begin(), violations.end(), [k](const Violation& v) { return v.kind == k; });
  }
};

template <class G, class Vertex>
concept HostGraph = requires(const G& g, Vertex u, Vertex v) {
  { g.contains(u) } -> std::convertible_to<bool>;
  { g.is_edge(u, v) } -> std::convertible_to<bool>;
};

namespace detail {
template <class Vertex>
std::string describe(const Vertex& v) {
  if constexpr (std::is_same_v<Vertex, VertexId>) {
    return to_string(v);
  } else {
    std::ostringstream os;
    os << v;
    return os.str();
  }
}
}  // namespace detail

/// Checks every certificate invariant against `host` and lists each
/// violation found. Never throws on malformed certificates.
template <class Vertex, class G>
  requires HostGraph<G, Vertex>
Verdict verify_certificate(const G& host, const BasicCertificate<Vertex>& cert) {
  using detail::describe;
  Verdict verdict;
  auto report = [&](ViolationKind k, BranchPair p, std::string detail) {
    verdict.violations.push_back({k, p, std::move(detail)});
  };

  const std::size_t b = cert.branch.size();
  std::map<Vertex, std::size_t> branch_index;
  for (std::size_t i = 0; i < b; ++i) {
    const Vertex& v = cert.branch[i];
    if (!host.contains(v)) report(ViolationKind::InvalidVertex, {i, i}, "branch " + std::to_string(i) + " " + describe(v));
    auto [it, fresh] = branch_index.emplace(v, i);
    if (!fresh)
      report(ViolationKind::BranchCollision, {it->second, i},
             "branch " + std::to_string(it->second) + " and " + std::to_string(i) + " are both " + describe(v));
  }

  for (std::size_t i = 0; i < b; ++i)
    for (std::size_t j = i + 1; j < b; ++j)
      if (!cert.paths.contains({i, j}))
        report(ViolationKind::MissingPair, {i, j}, "no path for pair " + pair_key(i, j));

  std::map<Vertex, BranchPair> internal_owner;
  for (const auto& [key, path] : cert.paths) {
    const auto [i, j] = key;
    const std::string name = pair_key(i, j);
    if (i >= j || j >= b) {
      report(ViolationKind::UnexpectedPair, key, "path key " + name + " is not a pair i < j < " + std::to_string(b));
      continue;
    }
    if (path.size() < 2) {
      report(ViolationKind::DegeneratePath, key, "path " + name + " has fewer than two vertices");
      continue;
    }
    if (path.front() != cert.branch[i] || path.back() != cert.branch[j])
      report(ViolationKind::WrongEndpoints, key,
             "path " + name + " runs " + describe(path.front()) + " -> " + describe(path.back()));

    std::set<Vertex> in_path;
    for (std::size_t k = 0; k < path.size(); ++k) {
      const Vertex& v = path[k];
      if (!host.contains(v)) report(ViolationKind::InvalidVertex, key, "path " + name + " visits " + describe(v));
      if (!in_path.insert(v).second)
        report(ViolationKind::DegeneratePath, key, "path " + name + " repeats " + describe(v));
      if (k + 1 < path.size() && !host.is_edge(v, path[k + 1]))
        report(ViolationKind::MissingEdge, key,
               "path " + name + " uses non-edge " + describe(v) + "-" + describe(path[k + 1]));
      if (k == 0 || k + 1 == path.size()) continue;
      if (branch_index.contains(v)) {
        report(ViolationKind::InternalIsBranch, key, "path " + name + " passes through branch vertex " + describe(v));
        continue;
      }
      auto [it, fresh] = internal_owner.emplace(v, key);
      if (!fresh && it->second != key)
        report(ViolationKind::ReusedInternalVertex, key,
               "internal vertex " + describe(v) + " used by paths " + pair_key(it->second.first, it->second.second) +
                   " and " + name);
    }
  }
  verdict.passed = verdict.violations.empty();
  return verdict;
}

template <class Vertex>
std::size_t certificate_order(const BasicCertificate<Vertex>& cert) {
  return cert.branch.size();
}

/// Distinct vertices across branch vertices and all paths.
template <class Vertex>
std::size_t certificate_vertex_count(const BasicCertificate<Vertex>& cert) {
  std::set<Vertex> all(cert.branch.begin(), cert.branch.end());
  for (const auto& [key, path] : cert.paths) all.insert(path.begin(), path.end());
  return all.size();
}

/// Canonical text form: {"branch": [[f,l],...], "paths": {"i-j": [[f,l],...]}}
std::string serialize_certificate(const SubdivisionCertificate& cert);
SubdivisionCertificate deserialize_certificate(std::string_view text);

}  // namespace liftsub
