#ifndef TAUTRING_STABLE_GRAPH_HPP
#define TAUTRING_STABLE_GRAPH_HPP

#include <algorithm>
#include <compare>
#include <numeric>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "tautring/error.hpp"

namespace tautring {

struct Leg {
  int label = 0;   // 1-based marking
  int vertex = 0;
  auto operator<=>(const Leg&) const = default;
};

/// Dual graph of a stable curve.
///
/// Half-edges are indexed globally; `edges` pairs them up and every
/// half-edge belongs to exactly one edge. Legs are kept sorted by label.
struct StableGraph {
  std::vector<int> genera;
  std::vector<Leg> legs;
  std::vector<int> half_edge_vertex;
  std::vector<std::pair<int, int>> edges;

  auto operator<=>(const StableGraph&) const = default;

  int num_vertices() const { return static_cast<int>(genera.size()); }
  int num_edges() const { return static_cast<int>(edges.size()); }
  int num_half_edges() const { return static_cast<int>(half_edge_vertex.size()); }
  int num_legs() const { return static_cast<int>(legs.size()); }

  int components() const;
  int betti() const { return num_edges() - num_vertices() + components(); }
  int genus() const {
    return std::accumulate(genera.begin(), genera.end(), 0) + betti();
  }
  int valence(int v) const;
  int leg_vertex(int label) const;
  bool is_loop(int e) const {
    return half_edge_vertex[edges[e].first] == half_edge_vertex[edges[e].second];
  }
  /// partner[h] is the other half of h's edge.
  std::vector<int> half_edge_partner() const;
  std::vector<int> half_edge_edge() const;

  /// Vertex with genus g and legs 1..n, no edges.
  static StableGraph smooth(int g, int n);
  /// Append an edge between vertices a and b; returns the edge index.
  int add_edge(int a, int b);
};

/// A special point of a vertex: a leg (by label) or a half-edge (by index).
struct SpecialPoint {
  bool is_leg = false;
  int id = 0;
  auto operator<=>(const SpecialPoint&) const = default;
};

/// Special points at v in the fixed order used for factor spaces of gluing
/// maps: legs by increasing label, then half-edges by increasing index.
/// The j-th entry becomes marking j+1 of the factor M_{g(v), n(v)}.
std::vector<SpecialPoint> special_points(const StableGraph& G, int v);

inline bool stable_type(int g, int n) { return g >= 0 && n >= 0 && 2 * g - 2 + n > 0; }
inline int moduli_dimension(int g, int n) { return 3 * g - 3 + n; }

enum class Violation { None, Structure, LegLabels, Connectivity, Stability, TotalGenus };

struct ValidationReport {
  Violation violation = Violation::None;
  std::string message;
  bool ok() const { return violation == Violation::None; }
};

std::string to_string(Violation v);

/// Checks every stable-graph invariant; reports the first violated one.
/// `expected_genus`, when given, is the declared ambient genus.
ValidationReport validate(const StableGraph& G, std::optional<int> expected_genus = std::nullopt);

inline void require_valid(const StableGraph& G) {
  auto r = validate(G);
  if (!r.ok()) throw InvalidInput("invalid stable graph: " + r.message);
}

/// f: source -> target contracting the source edges outside Im(edge_injection).
struct GraphMorphism {
  StableGraph source;
  StableGraph target;
  std::vector<int> vertex_map;           // source vertex -> target vertex
  std::vector<int> edge_injection;       // target edge -> source edge (beta)
  std::vector<int> half_edge_injection;  // target half-edge -> source half-edge
  std::vector<int> leg_map;              // source leg position -> target leg position
};

/// Contract the listed edges. Loops add one to the genus of their vertex;
/// other edges merge vertices, adding genera. The target keeps the
/// remaining edges in source order with half-edges (2i, 2i+1).
std::pair<StableGraph, GraphMorphism> contract_edges(const StableGraph& G,
                                                     const std::vector<int>& edge_subset);

nlohmann::json to_json(const StableGraph& G);
StableGraph graph_from_json(const nlohmann::json& j);

// ---------------------------------------------------------------------------

inline int StableGraph::components() const {
  const int n = num_vertices();
  if (n == 0) return 0;
  std::vector<int> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  int comps = n;
  for (auto [a, b] : edges) {
    int ra = find(half_edge_vertex[a]), rb = find(half_edge_vertex[b]);
    if (ra != rb) {
      parent[ra] = rb;
      --comps;
    }
  }
  return comps;
}

inline int StableGraph::valence(int v) const {
  int c = 0;
  for (const auto& l : legs) c += (l.vertex == v);
  for (int hv : half_edge_vertex) c += (hv == v);
  return c;
}

inline int StableGraph::leg_vertex(int label) const {
  for (const auto& l : legs)
    if (l.label == label) return l.vertex;
  throw InvalidInput("no leg with label " + std::to_string(label));
}

inline std::vector<int> StableGraph::half_edge_partner() const {
  std::vector<int> p(half_edge_vertex.size(), -1);
  for (auto [a, b] : edges) {
    p[a] = b;
    p[b] = a;
  }
  return p;
}

inline std::vector<int> StableGraph::half_edge_edge() const {
  std::vector<int> p(half_edge_vertex.size(), -1);
  for (int e = 0; e < num_edges(); ++e) p[edges[e].first] = p[edges[e].second] = e;
  return p;
}

inline StableGraph StableGraph::smooth(int g, int n) {
  StableGraph G;
  G.genera = {g};
  for (int i = 1; i <= n; ++i) G.legs.push_back({i, 0});
  return G;
}

inline int StableGraph::add_edge(int a, int b) {
  int h = num_half_edges();
  half_edge_vertex.push_back(a);
  half_edge_vertex.push_back(b);
  edges.emplace_back(h, h + 1);
  return num_edges() - 1;
}

inline std::vector<SpecialPoint> special_points(const StableGraph& G, int v) {
  std::vector<SpecialPoint> sp;
  for (const auto& l : G.legs)
    if (l.vertex == v) sp.push_back({true, l.label});
  for (int h = 0; h < G.num_half_edges(); ++h)
    if (G.half_edge_vertex[h] == v) sp.push_back({false, h});
  return sp;
}

inline std::string to_string(Violation v) {
  switch (v) {
    case Violation::None: return "none";
    case Violation::Structure: return "structure";
    case Violation::LegLabels: return "leg labels";
    case Violation::Connectivity: return "connectivity";
    case Violation::Stability: return "stability";
    case Violation::TotalGenus: return "total genus";
  }
  return "unknown";
}

inline ValidationReport validate(const StableGraph& G, std::optional<int> expected_genus) {
  auto fail = [](Violation v, std::string msg) { return ValidationReport{v, std::move(msg)}; };
  const int nv = G.num_vertices();
  if (nv == 0) return fail(Violation::Structure, "graph has no vertices");
  for (int g : G.genera)
    if (g < 0) return fail(Violation::Structure, "negative vertex genus");
  for (int hv : G.half_edge_vertex)
    if (hv < 0 || hv >= nv) return fail(Violation::Structure, "half-edge on missing vertex");
  std::vector<int> seen(G.half_edge_vertex.size(), 0);
  for (auto [a, b] : G.edges) {
    if (a < 0 || b < 0 || a >= G.num_half_edges() || b >= G.num_half_edges() || a == b)
      return fail(Violation::Structure, "edge references invalid half-edge");
    ++seen[a];
    ++seen[b];
  }
  for (int s : seen)
    if (s != 1) return fail(Violation::Structure, "half-edge not in exactly one edge");
  for (int i = 0; i < G.num_legs(); ++i) {
    if (G.legs[i].label != i + 1)
      return fail(Violation::LegLabels, "leg labels are not exactly 1..n in order");
    if (G.legs[i].vertex < 0 || G.legs[i].vertex >= nv)
      return fail(Violation::Structure, "leg on missing vertex");
  }
  if (G.components() != 1) return fail(Violation::Connectivity, "graph is disconnected");
  for (int v = 0; v < nv; ++v)
    if (2 * G.genera[v] - 2 + G.valence(v) <= 0)
      return fail(Violation::Stability, "vertex " + std::to_string(v) + " is unstable");
  if (expected_genus && G.genus() != *expected_genus)
    return fail(Violation::TotalGenus, "total genus " + std::to_string(G.genus()) +
                                           " differs from declared " +
                                           std::to_string(*expected_genus));
  return {};
}

inline std::pair<StableGraph, GraphMorphism> contract_edges(const StableGraph& G,
                                                            const std::vector<int>& edge_subset) {
  const int nv = G.num_vertices();
  std::vector<char> contracted(G.num_edges(), 0);
  for (int e : edge_subset) {
    if (e < 0 || e >= G.num_edges()) throw InvalidInput("contract_edges: no such edge");
    contracted[e] = 1;
  }
  std::vector<int> parent(nv);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (int e = 0; e < G.num_edges(); ++e) {
    if (!contracted[e]) continue;
    int a = find(G.half_edge_vertex[G.edges[e].first]);
    int b = find(G.half_edge_vertex[G.edges[e].second]);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
  std::vector<int> root_index(nv, -1), vmap(nv);
  StableGraph T;
  for (int v = 0; v < nv; ++v) {
    int r = find(v);
    if (root_index[r] < 0) {
      root_index[r] = T.num_vertices();
      T.genera.push_back(0);
    }
    vmap[v] = root_index[r];
    T.genera[vmap[v]] += G.genera[v];
  }
  // genus gained inside each class: contracted edges - (vertices - 1)
  std::vector<int> cls_edges(T.num_vertices(), 0), cls_verts(T.num_vertices(), 0);
  for (int v = 0; v < nv; ++v) ++cls_verts[vmap[v]];
  for (int e = 0; e < G.num_edges(); ++e)
    if (contracted[e]) ++cls_edges[vmap[G.half_edge_vertex[G.edges[e].first]]];
  for (int c = 0; c < T.num_vertices(); ++c) T.genera[c] += cls_edges[c] - (cls_verts[c] - 1);
  for (const auto& l : G.legs) T.legs.push_back({l.label, vmap[l.vertex]});

  GraphMorphism f;
  for (int e = 0; e < G.num_edges(); ++e) {
    if (contracted[e]) continue;
    auto [a, b] = G.edges[e];
    T.add_edge(vmap[G.half_edge_vertex[a]], vmap[G.half_edge_vertex[b]]);
    f.edge_injection.push_back(e);
    f.half_edge_injection.push_back(a);
    f.half_edge_injection.push_back(b);
  }
  f.source = G;
  f.target = T;
  f.vertex_map = vmap;
  f.leg_map.resize(G.num_legs());
  std::iota(f.leg_map.begin(), f.leg_map.end(), 0);
  return {std::move(T), std::move(f)};
}

inline nlohmann::json to_json(const StableGraph& G) {
  nlohmann::json j;
  j["vertices"] = G.genera;
  j["legs"] = nlohmann::json::array();
  for (const auto& l : G.legs) j["legs"].push_back({l.label, l.vertex});
  j["edges"] = nlohmann::json::array();
  for (auto [a, b] : G.edges)
    j["edges"].push_back({{G.half_edge_vertex[a], a}, {G.half_edge_vertex[b], b}});
  return j;
}

inline StableGraph graph_from_json(const nlohmann::json& j) {
  try {
    StableGraph G;
    G.genera = j.at("vertices").get<std::vector<int>>();
    for (const auto& l : j.at("legs")) G.legs.push_back({l.at(0).get<int>(), l.at(1).get<int>()});
    std::sort(G.legs.begin(), G.legs.end());
    const auto& edges = j.at("edges");
    G.half_edge_vertex.assign(2 * edges.size(), -1);
    for (const auto& e : edges) {
      int va = e.at(0).at(0).get<int>(), ha = e.at(0).at(1).get<int>();
      int vb = e.at(1).at(0).get<int>(), hb = e.at(1).at(1).get<int>();
      if (ha < 0 || hb < 0 || ha >= G.num_half_edges() || hb >= G.num_half_edges() ||
          G.half_edge_vertex[ha] != -1 || G.half_edge_vertex[hb] != -1 || ha == hb)
        throw InvalidInput("half-edge indices must be a permutation of 0..2E-1");
      G.half_edge_vertex[ha] = va;
      G.half_edge_vertex[hb] = vb;
      G.edges.emplace_back(ha, hb);
    }
    return G;
  } catch (const nlohmann::json::exception& e) {
    throw InvalidInput(std::string("malformed stable graph JSON: ") + e.what());
  }
}

}  // namespace tautring

#endif  // TAUTRING_STABLE_GRAPH_HPP
