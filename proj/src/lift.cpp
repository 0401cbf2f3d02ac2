#include "liftsub/lift.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <numeric>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "liftsub/rng.hpp"

namespace liftsub {

using nlohmann::json;

std::ostream& operator<<(std::ostream& os, VertexId v) {
  return os << '(' << v.fiber << ',' << v.layer << ')';
}

std::string to_string(VertexId v) {
  return "(" + std::to_string(v.fiber) + "," + std::to_string(v.layer) + ")";
}

BaseGraph::BaseGraph(std::size_t num_vertices, std::vector<BaseEdge> edges)
    : n_(num_vertices), edges_(std::move(edges)) {
  for (const auto& [i, j] : edges_) {
    if (i >= n_ || j >= n_)
      throw PreconditionError("base edge (" + std::to_string(i) + "," + std::to_string(j) +
                              ") has an endpoint outside [0, " + std::to_string(n_) + ")");
    if (i == j) throw PreconditionError("base edge (" + std::to_string(i) + "," + std::to_string(j) + ") is a loop");
  }
  for (auto& e : edges_)
    if (e.first > e.second) std::swap(e.first, e.second);
  std::sort(edges_.begin(), edges_.end());
  if (std::adjacent_find(edges_.begin(), edges_.end()) != edges_.end())
    throw PreconditionError("duplicate base edge");

  std::vector<std::size_t> deg(n_, 0);
  for (const auto& [i, j] : edges_) {
    ++deg[i];
    ++deg[j];
  }
  offsets_.assign(n_ + 1, 0);
  for (std::size_t v = 0; v < n_; ++v) offsets_[v + 1] = offsets_[v] + deg[v];
  incidence_.resize(offsets_[n_]);
  std::vector<std::size_t> fill(offsets_.begin(), offsets_.end() - 1);
  for (std::uint32_t e = 0; e < edges_.size(); ++e) {
    const auto [i, j] = edges_[e];
    incidence_[fill[i]++] = {j, e};
    incidence_[fill[j]++] = {i, e};
  }
  for (std::size_t v = 0; v < n_; ++v)
    std::sort(incidence_.begin() + offsets_[v], incidence_.begin() + offsets_[v + 1],
              [](const Incidence& a, const Incidence& b) { return a.neighbor < b.neighbor; });
}

BaseGraph BaseGraph::complete(std::size_t n) {
  std::vector<BaseEdge> edges;
  edges.reserve(n * (n > 0 ? n - 1 : 0) / 2);
  for (std::uint32_t i = 0; i < n; ++i)
    for (std::uint32_t j = i + 1; j < n; ++j) edges.emplace_back(i, j);
  return BaseGraph(n, std::move(edges));
}

std::optional<std::uint32_t> BaseGraph::edge_index(std::uint32_t i, std::uint32_t j) const {
  if (i >= n_ || j >= n_ || i == j) return std::nullopt;
  auto inc = incident(i);
  auto it = std::lower_bound(inc.begin(), inc.end(), j,
                             [](const Incidence& a, std::uint32_t x) { return a.neighbor < x; });
  if (it == inc.end() || it->neighbor != j) return std::nullopt;
  return it->edge;
}

LiftGraph::LiftGraph(BaseGraph base, std::size_t ell, std::vector<std::vector<std::uint32_t>> matchings)
    : base_(std::move(base)), ell_(ell) {
  if (ell_ == 0) throw PreconditionError("ell must be at least 1");
  if (matchings.size() != base_.num_edges())
    throw PreconditionError("expected one matching per base edge (" + std::to_string(base_.num_edges()) +
                            "), got " + std::to_string(matchings.size()));
  forward_.resize(base_.num_edges() * ell_);
  inverse_.resize(base_.num_edges() * ell_);
  std::vector<char> seen(ell_);
  for (std::size_t e = 0; e < matchings.size(); ++e) {
    const auto& perm = matchings[e];
    if (perm.size() != ell_) throw PreconditionError("matching " + std::to_string(e) + " has wrong length");
    std::fill(seen.begin(), seen.end(), 0);
    for (std::size_t a = 0; a < ell_; ++a) {
      const std::uint32_t b = perm[a];
      if (b >= ell_ || seen[b]) throw PreconditionError("matching " + std::to_string(e) + " is not a bijection");
      seen[b] = 1;
      forward_[e * ell_ + a] = b;
      inverse_[e * ell_ + b] = static_cast<std::uint32_t>(a);
    }
  }
}

std::optional<VertexId> LiftGraph::neighbor_in(VertexId v, std::uint32_t fiber) const {
  if (!contains(v)) return std::nullopt;
  const auto e = base_.edge_index(v.fiber, fiber);
  if (!e) return std::nullopt;
  return VertexId{fiber, partner_layer(v, {fiber, *e})};
}

std::vector<VertexId> LiftGraph::neighbors(VertexId v) const {
  if (!contains(v)) throw std::out_of_range("vertex " + to_string(v) + " is not in the lift");
  std::vector<VertexId> out;
  out.reserve(base_.degree(v.fiber));
  for_each_neighbor(v, [&](VertexId w) { out.push_back(w); });
  return out;
}

bool LiftGraph::is_edge(VertexId u, VertexId v) const {
  if (!contains(u) || !contains(v) || u.fiber == v.fiber) return false;
  const auto w = neighbor_in(u, v.fiber);
  return w && w->layer == v.layer;
}

FiberSet::FiberSet(std::size_t num_fibers, std::span<const std::uint32_t> members) : in_(num_fibers, 0) {
  for (auto f : members) insert(f);
}

void FiberSet::insert(std::uint32_t fiber) {
  if (fiber >= in_.size()) throw PreconditionError("fiber " + std::to_string(fiber) + " out of range");
  if (!in_[fiber]) {
    in_[fiber] = 1;
    ++count_;
  }
}

void FiberSet::erase(std::uint32_t fiber) {
  if (fiber < in_.size() && in_[fiber]) {
    in_[fiber] = 0;
    --count_;
  }
}

std::vector<std::uint32_t> FiberSet::members() const {
  std::vector<std::uint32_t> out;
  for (std::uint32_t f = 0; f < in_.size(); ++f)
    if (in_[f]) out.push_back(f);
  return out;
}

BaseGraph complete_base(std::size_t n) {
  if (n == 0) throw PreconditionError("complete_base requires n >= 1");
  return BaseGraph::complete(n);
}

LiftGraph sample_uniform_lift(const BaseGraph& base, std::size_t ell, std::uint64_t seed) {
  if (ell == 0) throw PreconditionError("ell must be at least 1");
  std::vector<std::vector<std::uint32_t>> matchings;
  matchings.reserve(base.num_edges());
  for (const auto& [i, j] : base.edges()) {
    Rng rng = make_rng(seed, {i, j});
    std::vector<std::uint32_t> perm(ell);
    std::iota(perm.begin(), perm.end(), 0u);
    std::shuffle(perm.begin(), perm.end(), rng);
    matchings.push_back(std::move(perm));
  }
  return LiftGraph(base, ell, std::move(matchings));
}

std::string pair_key(std::size_t i, std::size_t j) { return std::to_string(i) + "-" + std::to_string(j); }

std::optional<std::pair<std::size_t, std::size_t>> parse_pair_key(std::string_view key) {
  const auto dash = key.find('-');
  if (dash == std::string_view::npos || dash == 0 || dash + 1 == key.size()) return std::nullopt;
  std::size_t i = 0, j = 0;
  const char* first = key.data();
  const char* mid = key.data() + dash;
  const char* last = key.data() + key.size();
  if (auto r = std::from_chars(first, mid, i); r.ec != std::errc{} || r.ptr != mid) return std::nullopt;
  if (auto r = std::from_chars(mid + 1, last, j); r.ec != std::errc{} || r.ptr != last) return std::nullopt;
  return std::make_pair(i, j);
}

std::string serialize_lift(const LiftGraph& g) {
  json doc;
  doc["n"] = g.num_fibers();
  doc["ell"] = g.ell();
  json edges = json::array();
  for (const auto& [i, j] : g.base().edges()) edges.push_back({i, j});
  doc["base_edges"] = std::move(edges);
  json matchings = json::object();
  for (std::size_t e = 0; e < g.base().num_edges(); ++e) {
    const auto [i, j] = g.base().edges()[e];
    auto perm = g.matching(e);
    matchings[pair_key(i, j)] = std::vector<std::uint32_t>(perm.begin(), perm.end());
  }
  doc["matchings"] = std::move(matchings);
  return doc.dump() + "\n";
}

namespace {

std::size_t read_count(const json& doc, const char* field) {
  if (!doc.contains(field)) throw ParseError(field, "missing");
  const auto& v = doc.at(field);
  if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<long long>() >= 0))
    throw ParseError(field, "expected a non-negative integer");
  return v.get<std::size_t>();
}

}  // namespace

LiftGraph deserialize_lift(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError("<document>", e.what());
  }
  if (!doc.is_object()) throw ParseError("<document>", "expected an object");

  const std::size_t n = read_count(doc, "n");
  const std::size_t ell = read_count(doc, "ell");
  if (ell == 0) throw ParseError("ell", "must be at least 1");

  if (!doc.contains("base_edges") || !doc["base_edges"].is_array()) throw ParseError("base_edges", "expected an array");
  std::vector<BaseEdge> edges;
  for (std::size_t k = 0; k < doc["base_edges"].size(); ++k) {
    const auto& e = doc["base_edges"][k];
    const std::string field = "base_edges[" + std::to_string(k) + "]";
    if (!e.is_array() || e.size() != 2 || !e[0].is_number_unsigned() || !e[1].is_number_unsigned())
      throw ParseError(field, "expected a pair of non-negative integers");
    const auto i = e[0].get<std::uint64_t>(), j = e[1].get<std::uint64_t>();
    if (i >= j) throw ParseError(field, "expected i < j");
    if (j >= n) throw ParseError(field, "endpoint out of range");
    edges.emplace_back(static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(j));
  }
  if (!std::is_sorted(edges.begin(), edges.end())) throw ParseError("base_edges", "not sorted");
  if (std::adjacent_find(edges.begin(), edges.end()) != edges.end()) throw ParseError("base_edges", "duplicate edge");
  BaseGraph base(n, edges);

  if (!doc.contains("matchings") || !doc["matchings"].is_object()) throw ParseError("matchings", "expected an object");
  const auto& mdoc = doc["matchings"];
  for (const auto& [key, value] : mdoc.items()) {
    const auto ij = parse_pair_key(key);
    if (!ij || ij->first >= n || ij->second >= n ||
        !base.edge_index(static_cast<std::uint32_t>(ij->first), static_cast<std::uint32_t>(ij->second)) ||
        ij->first >= ij->second)
      throw ParseError("matchings." + key, "key does not name a base edge i-j with i < j");
  }
  std::vector<std::vector<std::uint32_t>> matchings;
  std::vector<char> seen(ell);
  for (const auto& [i, j] : base.edges()) {
    const std::string key = pair_key(i, j);
    const std::string field = "matchings." + key;
    if (!mdoc.contains(key)) throw ParseError(field, "missing entry for base edge");
    const auto& arr = mdoc[key];
    if (!arr.is_array() || arr.size() != ell) throw ParseError(field, "expected an array of length ell");
    std::vector<std::uint32_t> perm(ell);
    std::fill(seen.begin(), seen.end(), 0);
    for (std::size_t a = 0; a < ell; ++a) {
      if (!arr[a].is_number_unsigned()) throw ParseError(field, "entries must be non-negative integers");
      const auto b = arr[a].get<std::uint64_t>();
      if (b >= ell) throw ParseError(field, "layer out of range");
      if (seen[b]) throw ParseError(field, "not a bijection (layer " + std::to_string(b) + " repeated)");
      seen[b] = 1;
      perm[a] = static_cast<std::uint32_t>(b);
    }
    matchings.push_back(std::move(perm));
  }
  return LiftGraph(std::move(base), ell, std::move(matchings));
}

LiftGraph read_lift_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return deserialize_lift(ss.str());
}

void write_lift_file(const std::string& path, const LiftGraph& g) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << serialize_lift(g);
}

}  // namespace liftsub
