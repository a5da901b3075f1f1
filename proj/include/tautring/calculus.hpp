#ifndef TAUTRING_CALCULUS_HPP
#define TAUTRING_CALCULUS_HPP

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "tautring/canonical.hpp"
#include "tautring/correlators.hpp"
#include "tautring/decoration.hpp"
#include "tautring/enumerate.hpp"
#include "tautring/error.hpp"
#include "tautring/rational.hpp"
#include "tautring/stable_graph.hpp"
#include "tautring/tautclass.hpp"

namespace tautring {

/// The gluing map of a stable graph, from the product of its vertex spaces.
/// Factor v is M_{g_v, n_v}; its markings are the special points of v in
/// the order given by special_points().
struct GluingMapSpec {
  int g = 0;
  int n = 0;
  StableGraph graph;
  std::vector<std::pair<int, int>> factors;

  static GluingMapSpec from_graph(const StableGraph& G) {
    require_valid(G);
    GluingMapSpec s{G.genus(), G.num_legs(), G, {}};
    for (int v = 0; v < G.num_vertices(); ++v) s.factors.emplace_back(G.genera[v], G.valence(v));
    return s;
  }

  void validate() const {
    auto r = tautring::validate(graph, g);
    if (!r.ok()) throw InvalidInput("invalid gluing spec: " + r.message);
    if (graph.num_legs() != n) throw InvalidInput("invalid gluing spec: leg count differs from n");
    if (static_cast<int>(factors.size()) != graph.num_vertices())
      throw InvalidInput("invalid gluing spec: factor count differs from vertex count");
    for (int v = 0; v < graph.num_vertices(); ++v)
      if (factors[v] != std::make_pair(graph.genera[v], graph.valence(v)))
        throw InvalidInput("invalid gluing spec: factor " + std::to_string(v) + " has wrong type");
  }
};

/// A sum of tensor products of decorated strata on the factors of a gluing map.
class FactoredClass {
 public:
  using Key = std::vector<DecoratedStratum>;

  explicit FactoredClass(std::vector<std::pair<int, int>> factors) : factors_(std::move(factors)) {
    for (auto [g, n] : factors_)
      if (!stable_type(g, n)) throw InvalidInput("unstable factor in FactoredClass");
  }

  const std::vector<std::pair<int, int>>& factors() const { return factors_; }
  const std::map<Key, Rational>& terms() const { return terms_; }
  bool empty() const { return terms_.empty(); }

  void add(const Key& k, const Rational& c) {
    if (c == 0) return;
    auto [it, inserted] = terms_.try_emplace(k, c);
    if (!inserted) {
      it->second += c;
      if (it->second == 0) terms_.erase(it);
    }
  }

  /// x_1 (x) x_2 (x) ... expanded bilinearly.
  static FactoredClass tensor(const std::vector<TautClass>& xs) {
    std::vector<std::pair<int, int>> f;
    for (const auto& x : xs) f.emplace_back(x.genus(), x.markings());
    FactoredClass out(f);
    std::vector<std::pair<Key, Rational>> acc{{Key{}, Rational(1)}};
    for (const auto& x : xs) {
      std::vector<std::pair<Key, Rational>> next;
      for (const auto& [k, c] : acc)
        for (const auto& [s, d] : x.terms()) {
          Key k2 = k;
          k2.push_back(s);
          next.emplace_back(std::move(k2), c * d);
        }
      acc = std::move(next);
    }
    for (const auto& [k, c] : acc) out.add(k, c);
    return out;
  }

  bool operator==(const FactoredClass& o) const {
    return factors_ == o.factors_ && terms_ == o.terms_;
  }
  FactoredClass& operator+=(const FactoredClass& o) {
    if (factors_ != o.factors_) throw InvalidInput("FactoredClass factor mismatch");
    for (const auto& [k, c] : o.terms_) add(k, c);
    return *this;
  }
  FactoredClass& operator*=(const Rational& r) {
    if (r == 0) terms_.clear();
    for (auto& [k, c] : terms_) c *= r;
    return *this;
  }

 private:
  std::vector<std::pair<int, int>> factors_;
  std::map<Key, Rational> terms_;
};

TautClass multiply(const TautClass& A, const TautClass& B);
Rational integrate_top(const TautClass& A);
/// integrate_top(A * B) without assembling the product.
Rational integrate_product(const TautClass& A, const TautClass& B);

TautClass pullback_forgetful(const TautClass& A);
TautClass pushforward_forgetful(const TautClass& A);

struct GluingOptions {
  int excess_sign = -1;  // sign of the excess factor; only test harnesses change it
};

FactoredClass pullback_gluing(const GluingMapSpec& spec, const TautClass& A,
                              const GluingOptions& opt = {});
TautClass pushforward_gluing(const GluingMapSpec& spec, const FactoredClass& F);

/// Pushforward to factor i: integrate every other factor.
TautClass project_to_factor(const FactoredClass& F, int i);
/// Integral over the product of all factors.
Rational integrate_top(const FactoredClass& F);
/// Factorwise product of two classes on the same factors.
FactoredClass multiply(const FactoredClass& X, const FactoredClass& Y);

nlohmann::json to_json(const FactoredClass& F);

// ---------------------------------------------------------------------------

namespace detail {

/// A base graph with every vertex v replaced by a stable graph whose legs are
/// the special points of v. Base edges keep their half-edge indices and come
/// first; piece edges are appended in vertex order.
struct Substitution {
  StableGraph graph;
  std::vector<StableGraph> pieces;
  std::vector<int> owner;                  // vertex -> base vertex
  std::vector<int> local_vertex;           // vertex -> vertex of its piece
  std::vector<int> local_half_edge;        // half-edge -> piece half-edge, -1 on base half-edges
  std::vector<int> leg_local;              // leg position -> leg label in its piece
  std::vector<int> base_half_edge_local;   // base half-edge -> leg label in its piece
  int base_edges = 0;
};

inline Substitution substitute(const StableGraph& base, std::vector<StableGraph> pieces) {
  Substitution s;
  const int nv = base.num_vertices();
  std::vector<int> offset(nv);
  for (int v = 0; v < nv; ++v) {
    offset[v] = s.graph.num_vertices();
    for (int x = 0; x < pieces[v].num_vertices(); ++x) {
      s.graph.genera.push_back(pieces[v].genera[x]);
      s.owner.push_back(v);
      s.local_vertex.push_back(x);
    }
  }
  s.graph.half_edge_vertex.assign(base.num_half_edges(), -1);
  s.leg_local.assign(base.num_legs(), 0);
  s.base_half_edge_local.assign(base.num_half_edges(), 0);
  for (int v = 0; v < nv; ++v) {
    auto sp = special_points(base, v);
    for (size_t j = 0; j < sp.size(); ++j) {
      const int local = static_cast<int>(j) + 1;
      const int w = offset[v] + pieces[v].leg_vertex(local);
      if (sp[j].is_leg) {
        s.leg_local[sp[j].id - 1] = local;
      } else {
        s.graph.half_edge_vertex[sp[j].id] = w;
        s.base_half_edge_local[sp[j].id] = local;
      }
    }
  }
  for (int i = 0; i < base.num_legs(); ++i) {
    const int v = base.legs[i].vertex;
    s.graph.legs.push_back({base.legs[i].label, offset[v] + pieces[v].leg_vertex(s.leg_local[i])});
  }
  s.graph.edges = base.edges;
  s.local_half_edge.assign(base.num_half_edges(), -1);
  for (int v = 0; v < nv; ++v)
    for (auto [a, b] : pieces[v].edges) {
      s.graph.add_edge(offset[v] + pieces[v].half_edge_vertex[a],
                       offset[v] + pieces[v].half_edge_vertex[b]);
      s.local_half_edge.push_back(a);
      s.local_half_edge.push_back(b);
    }
  s.base_edges = base.num_edges();
  s.pieces = std::move(pieces);
  return s;
}

inline std::vector<Decoration> split_decoration(const Substitution& s, const Decoration& D) {
  std::vector<Decoration> out;
  for (const auto& P : s.pieces) out.push_back(Decoration::zero(P));
  for (int w = 0; w < s.graph.num_vertices(); ++w) out[s.owner[w]].kappa[s.local_vertex[w]] = D.kappa[w];
  for (int i = 0; i < s.graph.num_legs(); ++i)
    out[s.owner[s.graph.legs[i].vertex]].psi_leg[s.leg_local[i] - 1] = D.psi_leg[i];
  for (int h = 0; h < s.graph.num_half_edges(); ++h) {
    auto& x = out[s.owner[s.graph.half_edge_vertex[h]]];
    if (s.local_half_edge[h] >= 0) x.psi_half_edge[s.local_half_edge[h]] = D.psi_half_edge[h];
    else x.psi_leg[s.base_half_edge_local[h] - 1] = D.psi_half_edge[h];
  }
  return out;
}

inline Decoration join_decoration(const Substitution& s, const std::vector<Decoration>& xs) {
  Decoration D = Decoration::zero(s.graph);
  for (int w = 0; w < s.graph.num_vertices(); ++w) D.kappa[w] = xs[s.owner[w]].kappa[s.local_vertex[w]];
  for (int i = 0; i < s.graph.num_legs(); ++i)
    D.psi_leg[i] = xs[s.owner[s.graph.legs[i].vertex]].psi_leg[s.leg_local[i] - 1];
  for (int h = 0; h < s.graph.num_half_edges(); ++h) {
    const auto& x = xs[s.owner[s.graph.half_edge_vertex[h]]];
    D.psi_half_edge[h] = s.local_half_edge[h] >= 0 ? x.psi_half_edge[s.local_half_edge[h]]
                                                   : x.psi_leg[s.base_half_edge_local[h] - 1];
  }
  return D;
}

/// Calls visit(pieces, new_edges) for every tuple of stable graphs, one per
/// base vertex, with at most `max_new_edges` edges in total.
template <class Visit>
void for_each_piece_tuple(const StableGraph& base, int max_new_edges, long budget, Visit&& visit) {
  const int nv = base.num_vertices();
  std::vector<StableGraph> pieces(nv);
  std::function<void(int, int)> rec = [&](int v, int used) {
    if (v == nv) {
      visit(pieces, used);
      return;
    }
    const int g = base.genera[v], n = base.valence(v);
    const int cap = std::min(max_new_edges - used, moduli_dimension(g, n));
    for (int e = 0; e <= cap; ++e)
      for (const auto& P : stable_graphs_with_edges(g, n, e, budget)) {
        pieces[v] = P;
        rec(v + 1, used + e);
      }
  };
  rec(0, 0);
}

/// How a second graph B sits inside a substitution: the base edges it shares,
/// and an identification of B with the contraction of the other base edges.
struct BStructure {
  std::vector<int> overlap;                       // shared base edges
  std::vector<int> half_edge;                     // B half-edge -> half-edge
  std::vector<std::vector<int>> vertex_preimage;  // B vertex -> vertices
};

/// Enumerates the generic common degenerations of `base` and `B`: every edge
/// comes from the base or from B. visit(substitution, structure).
template <class Visit>
void for_each_common_degeneration(const StableGraph& base, const StableGraph& B, Visit&& visit,
                                  long budget = kDefaultGraphBudget) {
  const StableGraph Bc = canonicalize(B).graph;
  const int eb = B.num_edges(), ea = base.num_edges();
  for_each_piece_tuple(base, eb, budget, [&](const std::vector<StableGraph>& pieces, int t) {
    const int need = eb - t;
    if (need > ea) return;
    const Substitution s = substitute(base, pieces);
    std::vector<char> pick(ea, 0);
    std::fill(pick.end() - need, pick.end(), 1);
    do {
      std::vector<int> overlap, contract;
      for (int e = 0; e < ea; ++e) (pick[e] ? overlap : contract).push_back(e);
      auto [T, f] = contract_edges(s.graph, contract);
      if (T.num_vertices() != B.num_vertices() || canonicalize(T).graph != Bc) continue;
      for_each_isomorphism(B, T, {}, [&](const Isomorphism& iso) {
        BStructure bs;
        bs.overlap = overlap;
        bs.half_edge.resize(B.num_half_edges());
        for (int h = 0; h < B.num_half_edges(); ++h)
          bs.half_edge[h] = f.half_edge_injection[iso.half_edge[h]];
        bs.vertex_preimage.assign(B.num_vertices(), {});
        std::vector<int> inv(T.num_vertices());
        for (int u = 0; u < B.num_vertices(); ++u) inv[iso.vertex[u]] = u;
        for (int w = 0; w < s.graph.num_vertices(); ++w)
          bs.vertex_preimage[inv[f.vertex_map[w]]].push_back(w);
        visit(s, bs);
        return true;
      });
    } while (std::next_permutation(pick.begin(), pick.end()));
  });
}

using Poly = std::vector<std::pair<Decoration, Rational>>;

inline void prune(Poly& p, const StableGraph& G) {
  p.erase(std::remove_if(p.begin(), p.end(),
                         [&](const auto& t) { return t.second == 0 || !t.first.within_bounds(G); }),
          p.end());
}

inline void mul_kappa(Poly& p, const StableGraph& G, const std::vector<int>& vertices, int a) {
  Poly next;
  for (const auto& [d, c] : p)
    for (int w : vertices) {
      Decoration e = d;
      e.add_kappa(w, a);
      next.emplace_back(std::move(e), c);
    }
  p = std::move(next);
  prune(p, G);
}

inline void mul_psi(Poly& p, const StableGraph& G, bool leg, int idx, int exponent) {
  if (exponent == 0) return;
  for (auto& [d, c] : p) (leg ? d.psi_leg[idx] : d.psi_half_edge[idx]) += exponent;
  prune(p, G);
}

/// Multiplies by sign * (psi_a + psi_b) for half-edges a, b.
inline void mul_edge_excess(Poly& p, const StableGraph& G, int a, int b, int sign) {
  Poly next;
  for (const auto& [d, c] : p) {
    Decoration x = d, y = d;
    ++x.psi_half_edge[a];
    ++y.psi_half_edge[b];
    next.emplace_back(std::move(x), c * sign);
    next.emplace_back(std::move(y), c * sign);
  }
  p = std::move(next);
  prune(p, G);
}

inline Poly collapse(const Poly& p) {
  std::map<Decoration, Rational> m;
  for (const auto& [d, c] : p) m[d] += c;
  Poly out;
  for (auto& [d, c] : m)
    if (c != 0) out.emplace_back(d, c);
  return out;
}

/// Decoration on the common degeneration: pullbacks of both monomials times
/// the excess factor over shared edges.
inline Poly common_decoration(const Substitution& s, const BStructure& bs, const Decoration* base_deco,
                              const Decoration& b_deco, int excess_sign) {
  const StableGraph& G = s.graph;
  Poly p{{Decoration::zero(G), Rational(1)}};
  if (base_deco) {
    for (int i = 0; i < G.num_legs(); ++i) mul_psi(p, G, true, i, base_deco->psi_leg[i]);
    for (int h = 0; h < static_cast<int>(base_deco->psi_half_edge.size()); ++h)
      mul_psi(p, G, false, h, base_deco->psi_half_edge[h]);
    for (int v = 0; v < static_cast<int>(base_deco->kappa.size()); ++v) {
      std::vector<int> pre;
      for (int w = 0; w < G.num_vertices(); ++w)
        if (s.owner[w] == v) pre.push_back(w);
      for (int a : base_deco->kappa[v]) mul_kappa(p, G, pre, a);
    }
  }
  for (int i = 0; i < G.num_legs(); ++i) mul_psi(p, G, true, i, b_deco.psi_leg[i]);
  for (int h = 0; h < static_cast<int>(b_deco.psi_half_edge.size()); ++h)
    mul_psi(p, G, false, bs.half_edge[h], b_deco.psi_half_edge[h]);
  for (int u = 0; u < static_cast<int>(b_deco.kappa.size()); ++u)
    for (int a : b_deco.kappa[u]) mul_kappa(p, G, bs.vertex_preimage[u], a);
  for (int e : bs.overlap) mul_edge_excess(p, G, G.edges[e].first, G.edges[e].second, excess_sign);
  return collapse(p);
}

/// Adds c * xi_{G*}(D) = c |Aut G| [G, D].
inline void add_xi(TautClass& out, const StableGraph& G, const Decoration& D, const Rational& c,
                   const Integer& aut) {
  out.add(G, D, c * Rational(aut));
}

inline void add_xi(TautClass& out, const StableGraph& G, const Decoration& D, const Rational& c) {
  if (c == 0 || !D.within_bounds(G)) return;
  add_xi(out, G, D, c, automorphism_count(G));
}

inline std::vector<int> vertex_psi(const StableGraph& G, const Decoration& D, int v) {
  std::vector<int> a;
  for (int i = 0; i < G.num_legs(); ++i)
    if (G.legs[i].vertex == v) a.push_back(D.psi_leg[i]);
  for (int h = 0; h < G.num_half_edges(); ++h)
    if (G.half_edge_vertex[h] == v) a.push_back(D.psi_half_edge[h]);
  return a;
}

/// Integral of xi_{G*}(D): the product of vertex integrals.
inline Rational integrate_xi(const StableGraph& G, const Decoration& D) {
  Rational r = 1;
  for (int v = 0; v < G.num_vertices() && r != 0; ++v)
    r *= vertex_integral(G.genera[v], vertex_psi(G, D, v), D.kappa[v]);
  return r;
}

/// Calls visit(graph, decoration poly, xi-coefficient) for every term of
/// [A, mA] * [B, mB] written as a combination of xi-pushforwards.
template <class Visit>
void for_each_product_term(const DecoratedStratum& A, const DecoratedStratum& B, Visit&& visit) {
  const DecoratedStratum* big = &A;
  const DecoratedStratum* small = &B;
  if (B.graph.num_edges() > A.graph.num_edges()) std::swap(big, small);
  const Rational norm(1, graph_automorphisms(big->graph) * graph_automorphisms(small->graph));
  for_each_common_degeneration(big->graph, small->graph, [&](const Substitution& s, const BStructure& bs) {
    Integer pieces_aut = 1;
    for (const auto& P : s.pieces) pieces_aut *= graph_automorphisms(P);
    Poly p = common_decoration(s, bs, &big->decoration, small->decoration, -1);
    if (!p.empty()) visit(s.graph, p, norm / Rational(pieces_aut));
  });
}

inline Rational stratum_integral(const DecoratedStratum& s) {
  if (s.codimension() != moduli_dimension(s.graph.genus(), s.graph.num_legs())) return 0;
  return integrate_xi(s.graph, s.decoration) / Rational(graph_automorphisms(s.graph));
}

}  // namespace detail

inline TautClass multiply(const TautClass& A, const TautClass& B) {
  A.check_ambient(B);
  TautClass out(A.genus(), A.markings());
  for (const auto& [sa, ca] : A.terms())
    for (const auto& [sb, cb] : B.terms()) {
      const Rational c = ca * cb;
      detail::for_each_product_term(sa, sb, [&](const StableGraph& G, const detail::Poly& p,
                                                const Rational& k) {
        const Integer aut = automorphism_count(G);
        for (const auto& [d, e] : p) detail::add_xi(out, G, d, c * k * e, aut);
      });
    }
  return out;
}

inline Rational integrate_top(const TautClass& A) {
  Rational r = 0;
  for (const auto& [s, c] : A.terms()) r += c * detail::stratum_integral(s);
  return r;
}

inline Rational integrate_product(const TautClass& A, const TautClass& B) {
  A.check_ambient(B);
  const int dim = A.dimension();
  Rational r = 0;
  for (const auto& [sa, ca] : A.terms())
    for (const auto& [sb, cb] : B.terms()) {
      if (sa.codimension() + sb.codimension() != dim) continue;
      const Rational c = ca * cb;
      detail::for_each_product_term(sa, sb, [&](const StableGraph& G, const detail::Poly& p,
                                                const Rational& k) {
        for (const auto& [d, e] : p) r += c * k * e * detail::integrate_xi(G, d);
      });
    }
  return r;
}

inline TautClass pullback_forgetful(const TautClass& A) {
  const int n = A.markings();
  TautClass out(A.genus(), n + 1);
  for (const auto& [s, c] : A.terms()) {
    const StableGraph& G = s.graph;
    const Decoration& D = s.decoration;
    const Rational k = c / Rational(graph_automorphisms(G));
    for (int v = 0; v < G.num_vertices(); ++v) {
      // new leg on v; kappa_b -> kappa_b - psi_new^b
      StableGraph Gv = G;
      Gv.legs.push_back({n + 1, v});
      const auto& kv = D.kappa[v];
      const int m = static_cast<int>(kv.size());
      for (unsigned long mask = 0; mask < (1ul << m); ++mask) {
        Decoration E = D;
        E.kappa[v].clear();
        int e = 0;
        for (int i = 0; i < m; ++i) {
          if ((mask >> i) & 1ul) e += kv[i];
          else E.kappa[v].push_back(kv[i]);
        }
        E.psi_leg.push_back(e);
        detail::add_xi(out, Gv, E, __builtin_popcountl(mask) % 2 ? -k : k);
      }
      // psi_i -> psi_i - D_i: a bubble carrying i and the new leg
      for (const auto& sp : special_points(G, v)) {
        const int a = sp.is_leg ? D.psi_leg[sp.id - 1] : D.psi_half_edge[sp.id];
        if (a == 0) continue;
        StableGraph H = G;
        const int w = H.num_vertices();
        H.genera.push_back(0);
        if (sp.is_leg) H.legs[sp.id - 1].vertex = w;
        else H.half_edge_vertex[sp.id] = w;
        H.legs.push_back({n + 1, w});
        H.add_edge(v, w);
        Decoration E = D;
        E.kappa.push_back({});
        (sp.is_leg ? E.psi_leg[sp.id - 1] : E.psi_half_edge[sp.id]) = 0;
        E.psi_leg.push_back(0);
        E.psi_half_edge.push_back(a - 1);  // y, on v
        E.psi_half_edge.push_back(0);      // x, on the bubble
        detail::add_xi(out, H, E, -k);
      }
    }
  }
  return out;
}

inline TautClass pushforward_forgetful(const TautClass& A) {
  const int n = A.markings() - 1;
  if (n < 0) throw InvalidInput("pushforward_forgetful: ambient has no marking to forget");
  if (!stable_type(A.genus(), n))
    throw InvalidInput("pushforward_forgetful: target (g,n) is unstable");
  TautClass out(A.genus(), n);
  for (const auto& [s, c] : A.terms()) {
    const StableGraph& G = s.graph;
    const Decoration& D = s.decoration;
    const Rational k = c / Rational(graph_automorphisms(G));
    const int v = G.legs[n].vertex;
    const int gv = G.genera[v];
    const int nv = G.valence(v) - 1;
    if (gv == 0 && nv == 2) {
      // v becomes unstable and is removed
      if (D.vertex_degree(G, v) != 0) continue;
      auto partner = G.half_edge_partner();
      auto edge_of = G.half_edge_edge();
      std::vector<int> vnew(G.num_vertices(), -1);
      StableGraph H;
      Decoration E;
      for (int w = 0; w < G.num_vertices(); ++w) {
        if (w == v) continue;
        vnew[w] = H.num_vertices();
        H.genera.push_back(G.genera[w]);
        E.kappa.push_back(D.kappa[w]);
      }
      std::vector<int> at_v;
      for (int h = 0; h < G.num_half_edges(); ++h)
        if (G.half_edge_vertex[h] == v) at_v.push_back(h);
      for (int i = 0; i < n; ++i) {
        const Leg& l = G.legs[i];
        if (l.vertex == v) {
          const int h2 = partner[at_v.at(0)];
          H.legs.push_back({l.label, vnew[G.half_edge_vertex[h2]]});
          E.psi_leg.push_back(D.psi_half_edge[h2]);
        } else {
          H.legs.push_back({l.label, vnew[l.vertex]});
          E.psi_leg.push_back(D.psi_leg[i]);
        }
      }
      for (int e = 0; e < G.num_edges(); ++e) {
        auto [a, b] = G.edges[e];
        if (G.half_edge_vertex[a] == v || G.half_edge_vertex[b] == v) continue;
        H.add_edge(vnew[G.half_edge_vertex[a]], vnew[G.half_edge_vertex[b]]);
        E.psi_half_edge.push_back(D.psi_half_edge[a]);
        E.psi_half_edge.push_back(D.psi_half_edge[b]);
      }
      if (at_v.size() == 2) {
        const int a = partner[at_v[0]], b = partner[at_v[1]];
        if (edge_of[a] == edge_of[b]) throw InvariantViolation("forgetful pushforward: loop at a (0,3) vertex");
        H.add_edge(vnew[G.half_edge_vertex[a]], vnew[G.half_edge_vertex[b]]);
        E.psi_half_edge.push_back(D.psi_half_edge[a]);
        E.psi_half_edge.push_back(D.psi_half_edge[b]);
      }
      detail::add_xi(out, H, E, k);
      continue;
    }
    StableGraph H = G;
    H.legs.pop_back();
    Decoration base = D;
    const int cexp = base.psi_leg.back();
    base.psi_leg.pop_back();
    const auto kv = D.kappa[v];
    const int m = static_cast<int>(kv.size());
    // kappa_b = pi^* kappa_b + psi_{n+1}^b, then pi_*(psi_{n+1}^{e}) = kappa_{e-1}
    for (unsigned long mask = 0; mask < (1ul << m); ++mask) {
      int e = cexp;
      std::vector<int> kept;
      for (int i = 0; i < m; ++i) {
        if ((mask >> i) & 1ul) e += kv[i];
        else kept.push_back(kv[i]);
      }
      if (e == 0) continue;
      Decoration E = base;
      E.kappa[v] = kept;
      if (e == 1) {
        detail::add_xi(out, H, E, k * (2 * gv - 2 + nv));
      } else {
        E.add_kappa(v, e - 1);
        detail::add_xi(out, H, E, k);
      }
    }
    if (cexp == 0) {
      // psi_i = pi^* psi_i + D_i; the section D_i pushes forward to 1
      for (const auto& sp : special_points(H, v)) {
        int& a = sp.is_leg ? base.psi_leg[sp.id - 1] : base.psi_half_edge[sp.id];
        if (a == 0) continue;
        --a;
        detail::add_xi(out, H, base, k);
        ++a;
      }
    }
  }
  return out;
}

inline FactoredClass pullback_gluing(const GluingMapSpec& spec, const TautClass& A,
                                     const GluingOptions& opt) {
  spec.validate();
  if (A.genus() != spec.g || A.markings() != spec.n)
    throw InvalidInput("pullback_gluing: class does not live on the spec target");
  FactoredClass out(spec.factors);
  for (const auto& [s, c] : A.terms()) {
    const Rational k = c / Rational(graph_automorphisms(s.graph));
    detail::for_each_common_degeneration(
        spec.graph, s.graph, [&](const detail::Substitution& sub, const detail::BStructure& bs) {
          auto p = detail::common_decoration(sub, bs, nullptr, s.decoration, opt.excess_sign);
          for (const auto& [d, e] : p) {
            auto parts = detail::split_decoration(sub, d);
            FactoredClass::Key key;
            for (size_t v = 0; v < parts.size(); ++v)
              key.push_back(DecoratedStratum::canonical(sub.pieces[v], parts[v]));
            out.add(key, k * e);
          }
        });
  }
  return out;
}

inline TautClass pushforward_gluing(const GluingMapSpec& spec, const FactoredClass& F) {
  spec.validate();
  if (F.factors() != spec.factors) throw InvalidInput("pushforward_gluing: factors differ from spec");
  TautClass out(spec.g, spec.n);
  for (const auto& [key, c] : F.terms()) {
    std::vector<StableGraph> pieces;
    std::vector<Decoration> decos;
    Integer aut = 1;
    for (const auto& s : key) {
      pieces.push_back(s.graph);
      decos.push_back(s.decoration);
      aut *= graph_automorphisms(s.graph);
    }
    auto sub = detail::substitute(spec.graph, pieces);
    detail::add_xi(out, sub.graph, detail::join_decoration(sub, decos), c / Rational(aut));
  }
  return out;
}

inline TautClass project_to_factor(const FactoredClass& F, int i) {
  const auto& f = F.factors();
  if (i < 0 || i >= static_cast<int>(f.size())) throw InvalidInput("project_to_factor: no such factor");
  TautClass out(f[i].first, f[i].second);
  for (const auto& [key, c] : F.terms()) {
    Rational r = c;
    for (size_t j = 0; j < key.size() && r != 0; ++j)
      if (static_cast<int>(j) != i) r *= detail::stratum_integral(key[j]);
    out.add(key[i], r);
  }
  return out;
}

inline Rational integrate_top(const FactoredClass& F) {
  Rational r = 0;
  for (const auto& [key, c] : F.terms()) {
    Rational t = c;
    for (const auto& s : key) t *= detail::stratum_integral(s);
    r += t;
  }
  return r;
}

inline FactoredClass multiply(const FactoredClass& X, const FactoredClass& Y) {
  if (X.factors() != Y.factors()) throw InvalidInput("FactoredClass factor mismatch");
  FactoredClass out(X.factors());
  for (const auto& [kx, cx] : X.terms())
    for (const auto& [ky, cy] : Y.terms()) {
      std::vector<TautClass> prods;
      for (size_t v = 0; v < kx.size(); ++v) {
        auto [g, n] = X.factors()[v];
        TautClass a(g, n), b(g, n);
        a.add(kx[v], 1);
        b.add(ky[v], 1);
        prods.push_back(multiply(a, b));
      }
      FactoredClass t = FactoredClass::tensor(prods);
      t *= cx * cy;
      out += t;
    }
  return out;
}

inline nlohmann::json to_json(const FactoredClass& F) {
  nlohmann::json j;
  j["factors"] = nlohmann::json::array();
  for (auto [g, n] : F.factors()) j["factors"].push_back({g, n});
  j["terms"] = nlohmann::json::array();
  for (const auto& [key, c] : F.terms()) {
    nlohmann::json t;
    t["coeff"] = to_fraction_string(c);
    t["factors"] = nlohmann::json::array();
    for (const auto& s : key) t["factors"].push_back(to_json(s, Rational(1)));
    j["terms"].push_back(t);
  }
  return j;
}

}  // namespace tautring

#endif  // TAUTRING_CALCULUS_HPP
