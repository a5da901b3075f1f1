#ifndef TAUTRING_GCOVER_HPP
#define TAUTRING_GCOVER_HPP

#include <algorithm>
#include <map>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "tautring/calculus.hpp"
#include "tautring/canonical.hpp"
#include "tautring/error.hpp"
#include "tautring/rational.hpp"
#include "tautring/stable_graph.hpp"

namespace tautring {

/// Monodromy data of a double cover: entry 1 marks one ramification point,
/// entry 0 marks a pair of points swapped by the involution. Legs are
/// numbered in order, two consecutive legs per 0-entry.
struct MonodromyData {
  std::vector<int> xi;

  int ones() const { return static_cast<int>(std::count(xi.begin(), xi.end(), 1)); }
  int num_legs() const { return static_cast<int>(xi.size()) * 2 - ones(); }

  /// Target genus from 2g - 2 = 2(2h - 2) + ones; throws if not an integer >= 0.
  int target_genus(int g) const {
    validate(g);
    return (2 * g + 2 - ones()) / 4;
  }

  void validate(int g) const {
    for (int a : xi)
      if (a != 0 && a != 1) throw InvalidInput("monodromy entries must be 0 or 1");
    if (g < 0) throw InvalidInput("negative genus");
    const int r = 2 * g + 2 - ones();
    if (ones() % 2 != 0) throw InvalidInput("number of ramification entries must be even");
    if (r < 0 || r % 4 != 0)
      throw InvalidInput("monodromy data violates Riemann-Hurwitz for genus " + std::to_string(g));
  }

  /// leg label -> label of its image under the involution (1-based, index 0 unused).
  std::vector<int> leg_involution() const {
    std::vector<int> inv(num_legs() + 1, 0);
    int next = 1;
    for (int a : xi) {
      if (a == 1) {
        inv[next] = next;
        ++next;
      } else {
        inv[next] = next + 1;
        inv[next + 1] = next;
        next += 2;
      }
    }
    return inv;
  }

  /// All-ramified data (1^{2g-2}) of a genus-g double cover of a genus-1 curve.
  static MonodromyData bielliptic(int g) { return {std::vector<int>(2 * g - 2, 1)}; }
};

/// A stable graph with an involution and stabilizers on half-edges and legs.
struct AdmissibleGGraph {
  StableGraph graph;
  std::vector<int> vertex_action;
  std::vector<int> half_edge_action;
  std::vector<int> leg_action;              // leg position -> leg position
  std::vector<char> half_edge_stabilizer;   // 1 = Z/2
  std::vector<char> leg_stabilizer;         // 1 = Z/2 (a ramification marking)
};

struct RiemannHurwitzResult {
  bool ok = true;
  std::string message;
  int quotient_genus = 0;
  int quotient_betti = 0;
};

/// Per-vertex and global Riemann-Hurwitz consistency; `target_genus` when given
/// is the declared genus of the quotient.
RiemannHurwitzResult riemann_hurwitz_check(const AdmissibleGGraph& a,
                                           std::optional<int> target_genus = std::nullopt);

/// An admissible G-graph with a generic structure f: Gamma -> target. The source
/// graph is the target with vertices substituted; target edge i is source edge i.
struct GenericStructure {
  AdmissibleGGraph source;
  StableGraph target;
  GraphMorphism morphism;
  std::vector<int> representatives;  // N: least target edge of each edge orbit
  std::vector<int> excess_edges;     // Im(beta) minus N
  std::vector<StableGraph> pieces;   // vertex substitutions, one per target vertex
};

std::vector<GenericStructure> enumerate_generic_structures(const StableGraph& target, int g,
                                                           const MonodromyData& xi, long budget);

/// prod over excess edges (h,h') of (-psi_h - psi_h') on the target's factors.
/// `alternative` picks the greatest orbit member instead of the least as N.
FactoredClass excess_top_chern(const GenericStructure& s, bool alternative = false);

enum class TermKind { Property, BoundarySupported, Hyperelliptic, BiellipticMultiple };

struct Classification {
  TermKind kind = TermKind::Property;
  int property = 0;            // 1..7 when kind == Property
  Rational multiplicity = 0;   // positive when kind == BiellipticMultiple
  bool tautological() const { return kind != TermKind::BiellipticMultiple; }
  std::string rule() const;
};

/// Every numbered property (1..7) forcing a tautological term that s satisfies.
std::vector<int> tautological_properties(const GenericStructure& s);
Classification classify_term(const GenericStructure& s);

struct HurwitzPullbackTerm {
  GenericStructure structure;
  FactoredClass excess;
  Classification classification;
};

struct HurwitzPullback {
  StableGraph A;
  StableGraph B;
  int g = 0;
  MonodromyData xi;
  std::vector<HurwitzPullbackTerm> terms;
  Rational c = 0;  // total bielliptic multiplicity
};

/// Genus-2 vertex with `loops` loops, half-edges (2i, 2i+1).
StableGraph loop_tower(int loops);

HurwitzPullback pullback_hurwitz(const StableGraph& A, int g, const MonodromyData& xi, long budget);

nlohmann::json to_json(const GenericStructure& s);
nlohmann::json to_json(const HurwitzPullback& p);

// ---------------------------------------------------------------------------

inline RiemannHurwitzResult riemann_hurwitz_check(const AdmissibleGGraph& a,
                                                  std::optional<int> target_genus) {
  RiemannHurwitzResult r;
  auto fail = [&](std::string m) {
    r.ok = false;
    r.message = std::move(m);
    return r;
  };
  const StableGraph& G = a.graph;
  const int nv = G.num_vertices(), nh = G.num_half_edges(), nl = G.num_legs();
  if (static_cast<int>(a.vertex_action.size()) != nv || static_cast<int>(a.half_edge_action.size()) != nh ||
      static_cast<int>(a.leg_action.size()) != nl || static_cast<int>(a.half_edge_stabilizer.size()) != nh ||
      static_cast<int>(a.leg_stabilizer.size()) != nl)
    return fail("action data does not match graph shape");
  for (int v = 0; v < nv; ++v)
    if (a.vertex_action[v] < 0 || a.vertex_action[v] >= nv || a.vertex_action[a.vertex_action[v]] != v ||
        G.genera[a.vertex_action[v]] != G.genera[v])
      return fail("vertex action is not a genus-preserving involution");
  auto partner = G.half_edge_partner();
  for (int h = 0; h < nh; ++h) {
    const int s = a.half_edge_action[h];
    if (s < 0 || s >= nh || a.half_edge_action[s] != h) return fail("half-edge action is not an involution");
    if (G.half_edge_vertex[s] != a.vertex_action[G.half_edge_vertex[h]])
      return fail("half-edge action does not cover the vertex action");
    if (a.half_edge_action[partner[h]] != partner[s]) return fail("half-edge action does not preserve edges");
    if (s == partner[h]) return fail("involution swaps the two branches of a node");
    if (a.half_edge_stabilizer[h] != (s == h)) return fail("half-edge stabilizer differs from its fixedness");
  }
  for (int i = 0; i < nl; ++i) {
    const int j = a.leg_action[i];
    if (j < 0 || j >= nl || a.leg_action[j] != i) return fail("leg action is not an involution");
    if (G.legs[j].vertex != a.vertex_action[G.legs[i].vertex])
      return fail("leg action does not cover the vertex action");
    if (a.leg_stabilizer[i] && j != i) return fail("ramification marking is moved by the involution");
    if (!a.leg_stabilizer[i] && j == i) return fail("fixed marking without ramification");
  }
  int qgenus = 0, qverts = 0, qedges = 0;
  for (int v = 0; v < nv; ++v) {
    const int w = a.vertex_action[v];
    if (w < v) continue;
    ++qverts;
    if (w != v) {
      qgenus += G.genera[v];
      continue;
    }
    int ram = 0;
    for (int i = 0; i < nl; ++i) ram += (G.legs[i].vertex == v && a.leg_stabilizer[i]);
    for (int h = 0; h < nh; ++h) ram += (G.half_edge_vertex[h] == v && a.half_edge_stabilizer[h]);
    const int twice = 2 * G.genera[v] + 2 - ram;
    if (twice < 0 || twice % 4 != 0)
      return fail("vertex " + std::to_string(v) + ": genus " + std::to_string(G.genera[v]) + " with " +
                  std::to_string(ram) + " ramification points has no double cover (parity)");
    qgenus += twice / 4;
  }
  auto edge_of = G.half_edge_edge();
  for (int e = 0; e < G.num_edges(); ++e) {
    const int img = edge_of[a.half_edge_action[G.edges[e].first]];
    if (img >= e) ++qedges;
  }
  r.quotient_betti = qedges - qverts + 1;
  r.quotient_genus = qgenus + r.quotient_betti;
  if (target_genus && r.quotient_genus != *target_genus)
    return fail("quotient genus " + std::to_string(r.quotient_genus) + " differs from " +
                std::to_string(*target_genus));
  return r;
}

namespace detail {

inline std::vector<int> encode(const Isomorphism& s) {
  std::vector<int> k = s.half_edge;
  k.insert(k.end(), s.vertex.begin(), s.vertex.end());
  return k;
}

inline Isomorphism conjugate(const Isomorphism& tau, const Isomorphism& sigma) {
  auto inv = [](const std::vector<int>& p) {
    std::vector<int> q(p.size());
    for (size_t i = 0; i < p.size(); ++i) q[p[i]] = static_cast<int>(i);
    return q;
  };
  const auto th = inv(tau.half_edge), tv = inv(tau.vertex);
  Isomorphism r;
  r.half_edge.resize(sigma.half_edge.size());
  r.vertex.resize(sigma.vertex.size());
  for (size_t h = 0; h < r.half_edge.size(); ++h) r.half_edge[h] = tau.half_edge[sigma.half_edge[th[h]]];
  for (size_t v = 0; v < r.vertex.size(); ++v) r.vertex[v] = tau.vertex[sigma.vertex[tv[v]]];
  return r;
}

inline AdmissibleGGraph make_admissible(const StableGraph& G, const Isomorphism& sigma,
                                        const std::vector<int>& leg_inv) {
  AdmissibleGGraph a;
  a.graph = G;
  a.vertex_action = sigma.vertex;
  a.half_edge_action = sigma.half_edge;
  for (int i = 0; i < G.num_legs(); ++i) {
    a.leg_action.push_back(leg_inv[G.legs[i].label] - 1);
    a.leg_stabilizer.push_back(leg_inv[G.legs[i].label] == G.legs[i].label);
  }
  for (int h = 0; h < G.num_half_edges(); ++h) a.half_edge_stabilizer.push_back(sigma.half_edge[h] == h);
  return a;
}

}  // namespace detail

inline std::vector<GenericStructure> enumerate_generic_structures(const StableGraph& target, int g,
                                                                  const MonodromyData& xi, long budget) {
  auto rep = validate(target, g);
  if (!rep.ok()) throw InvalidInput("invalid target graph: " + rep.message);
  const int h = xi.target_genus(g);
  if (target.num_legs() != xi.num_legs())
    throw InvalidInput("target has " + std::to_string(target.num_legs()) + " legs but monodromy data needs " +
                       std::to_string(xi.num_legs()));
  if (budget <= 0) throw InvalidInput("budget must be positive");
  const auto leg_inv = xi.leg_involution();
  const std::vector<int> leg_target(leg_inv.begin() + 1, leg_inv.end());
  const int k = target.num_edges();
  long work = 0;
  auto tick = [&] {
    if (++work > budget)
      throw BudgetExceeded("admissible graph enumeration exceeds budget of " + std::to_string(budget));
  };
  std::vector<GenericStructure> out;
  try {
    detail::for_each_piece_tuple(target, k, budget, [&](const std::vector<StableGraph>& pieces, int) {
      tick();
      const detail::Substitution sub = detail::substitute(target, pieces);
      const StableGraph& G = sub.graph;
      const auto edge_of = G.half_edge_edge();
      const int base_half = 2 * k;
      // automorphisms over the target: fix legs and every target half-edge
      std::vector<Isomorphism> over;
      for_each_isomorphism(G, G, {}, [&](const Isomorphism& t) {
        tick();
        bool fixes = true;
        for (int x = 0; x < base_half && fixes; ++x) fixes = t.half_edge[x] == x;
        if (fixes) over.push_back(t);
        return true;
      });
      std::vector<Isomorphism> involutions;
      for_each_isomorphism(G, G, leg_target, [&](const Isomorphism& s) {
        tick();
        for (int x = 0; x < G.num_half_edges(); ++x)
          if (s.half_edge[s.half_edge[x]] != x) return true;
        for (int v = 0; v < G.num_vertices(); ++v)
          if (s.vertex[s.vertex[v]] != v) return true;
        // generic: every new edge is the image of a target edge
        for (int e = k; e < G.num_edges(); ++e)
          if (edge_of[s.half_edge[G.edges[e].first]] >= k) return true;
        auto a = detail::make_admissible(G, s, leg_inv);
        if (!riemann_hurwitz_check(a, h).ok) return true;
        involutions.push_back(s);
        return true;
      });
      for (const auto& s : involutions) {
        const auto key = detail::encode(s);
        bool least = true;
        for (const auto& t : over)
          if (detail::encode(detail::conjugate(t, s)) < key) {
            least = false;
            break;
          }
        if (!least) continue;
        GenericStructure gs;
        gs.source = detail::make_admissible(G, s, leg_inv);
        gs.target = target;
        gs.pieces = pieces;
        auto& f = gs.morphism;
        f.source = G;
        f.target = target;
        f.vertex_map = sub.owner;
        for (int e = 0; e < k; ++e) f.edge_injection.push_back(e);
        for (int x = 0; x < base_half; ++x) f.half_edge_injection.push_back(x);
        f.leg_map.resize(G.num_legs());
        std::iota(f.leg_map.begin(), f.leg_map.end(), 0);
        for (int e = 0; e < k; ++e) {
          const int img = edge_of[s.half_edge[G.edges[e].first]];
          if (img < k && img < e) gs.excess_edges.push_back(e);
          else gs.representatives.push_back(e);
        }
        out.push_back(std::move(gs));
      }
    });
  } catch (const BudgetExceeded& e) {
    throw BudgetExceeded(std::string("generic structure enumeration: ") + e.what());
  }
  return out;
}

inline FactoredClass excess_top_chern(const GenericStructure& s, bool alternative) {
  const StableGraph& T = s.target;
  std::vector<std::pair<int, int>> factors;
  std::vector<Decoration> base;
  for (int v = 0; v < T.num_vertices(); ++v) {
    factors.emplace_back(T.genera[v], T.valence(v));
    base.push_back(Decoration::zero(StableGraph::smooth(T.genera[v], T.valence(v))));
  }
  // target half-edge -> (factor, marking index)
  std::vector<std::pair<int, int>> slot(T.num_half_edges());
  for (int v = 0; v < T.num_vertices(); ++v) {
    auto sp = special_points(T, v);
    for (size_t j = 0; j < sp.size(); ++j)
      if (!sp[j].is_leg) slot[sp[j].id] = {v, static_cast<int>(j)};
  }
  std::vector<int> excess = s.excess_edges;
  if (alternative) {
    // swap the roles inside each two-element orbit of target edges
    const auto edge_of = s.source.graph.half_edge_edge();
    excess.clear();
    for (int e : s.representatives) {
      const int img = edge_of[s.source.half_edge_action[s.source.graph.edges[e].first]];
      if (img != e && img < T.num_edges()) excess.push_back(e);
    }
  }
  using Mono = std::vector<Decoration>;
  std::vector<std::pair<Mono, Rational>> poly{{base, Rational(1)}};
  for (int e : excess) {
    std::vector<std::pair<Mono, Rational>> next;
    for (const auto& [m, c] : poly)
      for (int x : {T.edges[e].first, T.edges[e].second}) {
        Mono m2 = m;
        ++m2[slot[x].first].psi_leg[slot[x].second];
        next.emplace_back(std::move(m2), -c);
      }
    poly = std::move(next);
  }
  FactoredClass out(factors);
  for (const auto& [m, c] : poly) {
    FactoredClass::Key key;
    bool fits = true;
    for (size_t v = 0; v < m.size(); ++v) {
      auto G = StableGraph::smooth(factors[v].first, factors[v].second);
      fits = fits && m[v].within_bounds(G);
      key.push_back(DecoratedStratum::canonical(G, m[v]));
    }
    if (fits) out.add(key, c);
  }
  return out;
}

inline std::string Classification::rule() const {
  switch (kind) {
    case TermKind::Property: return "property-" + std::to_string(property);
    case TermKind::BoundarySupported: return "boundary-supported";
    case TermKind::Hyperelliptic: return "hyperelliptic";
    case TermKind::BiellipticMultiple: return "bielliptic-multiple";
  }
  return "unknown";
}

namespace detail {

inline void require_tower(const GenericStructure& s) {
  const StableGraph& T = s.target;
  int genus2 = 0;
  for (int x : T.genera) genus2 += (x == 2);
  bool loops_only = true;
  for (int e = 0; e < T.num_edges(); ++e) loops_only = loops_only && T.is_loop(e);
  if (T.num_vertices() != 1 || genus2 != 1 || !loops_only)
    throw InvalidInput("classification needs a tower target: one genus-2 vertex with loops");
}

inline bool moves_vertex(const AdmissibleGGraph& a) {
  for (int v = 0; v < a.graph.num_vertices(); ++v)
    if (a.vertex_action[v] != v) return true;
  return false;
}

}  // namespace detail

inline std::vector<int> tautological_properties(const GenericStructure& s) {
  detail::require_tower(s);
  const AdmissibleGGraph& a = s.source;
  const StableGraph& G = a.graph;
  std::vector<int> props;
  if (!s.excess_edges.empty()) props.push_back(1);
  if (std::find(G.genera.begin(), G.genera.end(), 2) == G.genera.end()) props.push_back(2);
  if (detail::moves_vertex(a)) props.push_back(3);
  if (riemann_hurwitz_check(a).quotient_betti >= 1) props.push_back(4);
  bool loop = false, fixed_edge = false;
  const auto edge_of = G.half_edge_edge();
  for (int e = 0; e < G.num_edges(); ++e) {
    loop = loop || G.is_loop(e);
    fixed_edge = fixed_edge || edge_of[a.half_edge_action[G.edges[e].first]] == e;
  }
  if (loop) props.push_back(5);
  if (fixed_edge) props.push_back(6);
  std::map<std::pair<int, int>, int> mult;
  for (auto [x, y] : G.edges) {
    int u = G.half_edge_vertex[x], w = G.half_edge_vertex[y];
    if (u != w) ++mult[{std::min(u, w), std::max(u, w)}];
  }
  for (const auto& [pair, m] : mult)
    if (m != 2) {
      props.push_back(7);
      break;
    }
  return props;
}

inline Classification classify_term(const GenericStructure& s) {
  detail::require_tower(s);
  const AdmissibleGGraph& a = s.source;
  const StableGraph& G = a.graph;
  Classification c;
  const auto rh = riemann_hurwitz_check(a);
  if (!rh.ok) throw InvariantViolation("structure fails Riemann-Hurwitz: " + rh.message);
  if (rh.quotient_genus == 0) {
    c.kind = TermKind::Hyperelliptic;
    return c;
  }
  if (rh.quotient_genus != 1) throw InvalidInput("classification supports target genus 0 or 1 only");
  auto props = tautological_properties(s);
  if (!props.empty()) {
    c.kind = TermKind::Property;
    c.property = props.front();
    return c;
  }
  // final case: one genus-2 vertex, genus-0 satellites joined by swapped edge pairs
  const int v0 = static_cast<int>(std::find(G.genera.begin(), G.genera.end(), 2) - G.genera.begin());
  for (int v = 0; v < G.num_vertices(); ++v) {
    if (v != v0 && G.genera[v] != 0) throw InvariantViolation("final case: vertex of unexpected genus");
    int ram = 0;
    for (int i = 0; i < G.num_legs(); ++i) ram += (G.legs[i].vertex == v && a.leg_stabilizer[i]);
    if (ram != 2) throw InvariantViolation("final case: vertex without exactly two ramification markings");
  }
  std::map<std::pair<int, int>, std::vector<int>> bundles;
  for (auto [x, y] : G.edges) {
    int u = G.half_edge_vertex[x], w = G.half_edge_vertex[y];
    if (u > w) std::swap(u, w), std::swap(x, y);
    bundles[{u, w}].push_back(x);
  }
  for (const auto& [pair, xs] : bundles)
    if (xs.size() != 2 || a.half_edge_action[xs[0]] != xs[1])
      throw InvariantViolation("final case: adjacent vertices not joined by a swapped edge pair");
  std::vector<char> touches(G.num_vertices(), 0);
  for (const auto& [pair, xs] : bundles) {
    if (pair.first == v0) touches[pair.second] = 1;
    if (pair.second == v0) touches[pair.first] = 1;
  }
  for (int v = 0; v < G.num_vertices(); ++v)
    if (v != v0 && !touches[v]) {
      c.kind = TermKind::BoundarySupported;
      return c;
    }
  // degree of the forgetful image: orderings of the ramification markings on
  // the genus-2 vertex, halved when the involution fixes all its markings
  int ram = 0;
  bool all_fixed = true;
  for (int i = 0; i < G.num_legs(); ++i)
    if (G.legs[i].vertex == v0) {
      ram += a.leg_stabilizer[i];
      all_fixed = all_fixed && a.leg_action[i] == i;
    }
  for (int x = 0; x < G.num_half_edges(); ++x)
    if (G.half_edge_vertex[x] == v0) all_fixed = all_fixed && a.half_edge_action[x] == x;
  c.kind = TermKind::BiellipticMultiple;
  c.multiplicity = Rational(factorial(ram)) / (all_fixed ? 2 : 1);
  if (c.multiplicity <= 0) throw InvariantViolation("bielliptic multiplicity is not positive");
  return c;
}

inline StableGraph loop_tower(int loops) {
  if (loops < 0) throw InvalidInput("negative loop count");
  StableGraph A = StableGraph::smooth(2, 0);
  for (int i = 0; i < loops; ++i) A.add_edge(0, 0);
  return A;
}

namespace detail {

// After forgetting legs, each satellite contracts and its target half-edge
// lands on the genus-2 vertex; the involution must pair these exactly as the
// loops of A pair their half-edges.
inline bool bielliptic_shape_ok(const GenericStructure& s) {
  const AdmissibleGGraph& a = s.source;
  const StableGraph& G = a.graph;
  const int v0 = static_cast<int>(std::find(G.genera.begin(), G.genera.end(), 2) - G.genera.begin());
  const auto partner = G.half_edge_partner();
  const int k = s.target.num_edges();
  std::vector<int> slot(2 * k, -1);
  for (int x = 0; x < 2 * k; ++x) {
    const int v = G.half_edge_vertex[x];
    if (v == v0) {
      slot[x] = x;
      continue;
    }
    std::vector<int> hs;
    for (int y = 0; y < G.num_half_edges(); ++y)
      if (G.half_edge_vertex[y] == v && y != x) hs.push_back(y);
    if (hs.size() != 1 || G.half_edge_vertex[partner[hs[0]]] != v0) return false;
    slot[x] = partner[hs[0]];
  }
  for (int e = 0; e < k; ++e) {
    auto [p, q] = s.target.edges[e];
    if (a.half_edge_action[slot[p]] != slot[q]) return false;
  }
  return true;
}

}  // namespace detail

inline HurwitzPullback pullback_hurwitz(const StableGraph& A, int g, const MonodromyData& xi, long budget) {
  bool loops_only = A.num_vertices() == 1 && A.num_legs() == 0;
  for (int e = 0; e < A.num_edges() && loops_only; ++e) loops_only = A.is_loop(e);
  if (!loops_only) throw InvalidInput("pullback_hurwitz: A must be one vertex with loops and no legs");
  if (A.genus() != g) throw InvalidInput("pullback_hurwitz: genus of A differs from g");
  HurwitzPullback out;
  out.A = A;
  out.g = g;
  out.xi = xi;
  out.B = A;
  for (int i = 1; i <= xi.num_legs(); ++i) out.B.legs.push_back({i, 0});
  for (auto& s : enumerate_generic_structures(out.B, g, xi, budget)) {
    HurwitzPullbackTerm t{s, excess_top_chern(s), classify_term(s)};
    if (t.classification.kind == TermKind::BiellipticMultiple) {
      if (!tautological_properties(s).empty()) throw InvariantViolation("bielliptic term satisfies a tautological property");
      if (!detail::bielliptic_shape_ok(s)) throw InvariantViolation("bielliptic term has the wrong conjugate pairs");
      out.c += t.classification.multiplicity;
    }
    out.terms.push_back(std::move(t));
  }
  return out;
}

inline nlohmann::json to_json(const GenericStructure& s) {
  nlohmann::json j;
  j["graph"] = to_json(s.source.graph);
  j["vertex_action"] = s.source.vertex_action;
  j["half_edge_action"] = s.source.half_edge_action;
  j["leg_action"] = s.source.leg_action;
  j["half_edge_stabilizer"] = nlohmann::json::array();
  for (char c : s.source.half_edge_stabilizer) j["half_edge_stabilizer"].push_back(c ? "Z/2" : "0");
  j["leg_stabilizer"] = nlohmann::json::array();
  for (char c : s.source.leg_stabilizer) j["leg_stabilizer"].push_back(c ? "Z/2" : "0");
  j["target"] = to_json(s.target);
  j["beta"] = s.morphism.edge_injection;
  j["vertex_map"] = s.morphism.vertex_map;
  j["representatives"] = s.representatives;
  j["excess_edges"] = s.excess_edges;
  return j;
}

inline nlohmann::json to_json(const HurwitzPullback& p) {
  nlohmann::json j;
  j["g"] = p.g;
  j["xi"] = p.xi.xi;
  j["A"] = to_json(p.A);
  j["B"] = to_json(p.B);
  j["terms"] = nlohmann::json::array();
  std::map<std::string, int> summary;
  for (const auto& t : p.terms) {
    nlohmann::json tj;
    tj["structure"] = to_json(t.structure);
    tj["excess"] = to_json(t.excess);
    tj["classification"] = t.classification.rule();
    tj["tautological"] = t.classification.tautological();
    tj["coefficient"] = t.classification.kind == TermKind::BiellipticMultiple
                            ? nlohmann::json(to_fraction_string(t.classification.multiplicity))
                            : nlohmann::json(nullptr);
    j["terms"].push_back(tj);
    ++summary[t.classification.rule()];
  }
  j["summary"] = summary;
  j["c"] = to_fraction_string(p.c);
  return j;
}

}  // namespace tautring

#endif  // TAUTRING_GCOVER_HPP
