#ifndef TAUTRING_CANONICAL_HPP
#define TAUTRING_CANONICAL_HPP

#include <algorithm>
#include <array>
#include <functional>
#include <map>
#include <numeric>
#include <tuple>
#include <utility>
#include <vector>

#include "tautring/decoration.hpp"
#include "tautring/rational.hpp"
#include "tautring/stable_graph.hpp"

namespace tautring {

struct CanonicalForm {
  StableGraph graph;
  Decoration decoration;
  /// Automorphisms of the decorated graph, counted on half-edges (so a
  /// loop whose two sides carry equal psi powers contributes a factor 2).
  Integer automorphisms;
  std::vector<int> vertex_perm;     // old vertex -> canonical vertex
  std::vector<int> half_edge_perm;  // old half-edge -> canonical half-edge
};

/// Canonical form of a decorated stable graph: color refinement on
/// vertices followed by exhaustive individualization. Multi-edges and loops
/// are handled as bundles whose internal symmetries are counted in closed
/// form. Two decorated graphs are isomorphic (legs fixed) iff their
/// canonical graph and decoration coincide.
CanonicalForm canonicalize(const StableGraph& G, const Decoration& D);

inline CanonicalForm canonicalize(const StableGraph& G) {
  return canonicalize(G, Decoration::zero(G));
}

inline Integer automorphism_count(const StableGraph& G) { return canonicalize(G).automorphisms; }

/// An isomorphism G -> H given on vertices and half-edges.
struct Isomorphism {
  std::vector<int> vertex;
  std::vector<int> half_edge;
};

/// Calls `visit` for every isomorphism G -> H that sends leg `l` of G to
/// leg `leg_target[l-1]` of H (identity when `leg_target` is empty).
/// Enumeration stops early when `visit` returns false.
void for_each_isomorphism(const StableGraph& G, const StableGraph& H,
                          const std::vector<int>& leg_target,
                          const std::function<bool(const Isomorphism&)>& visit);

// ---------------------------------------------------------------------------

namespace detail {

// One edge seen from an ordered vertex pair: psi exponents on each side.
using SidePair = std::pair<int, int>;

struct BundleView {
  // bundles[v] maps neighbour w != v to the sorted list of (psi at v, psi at w)
  std::vector<std::map<int, std::vector<SidePair>>> bundles;
  // loops[v]: sorted list of (min psi, max psi)
  std::vector<std::vector<SidePair>> loops;
};

inline BundleView make_bundles(const StableGraph& G, const Decoration& D) {
  BundleView b;
  b.bundles.resize(G.num_vertices());
  b.loops.resize(G.num_vertices());
  for (auto [x, y] : G.edges) {
    int u = G.half_edge_vertex[x], w = G.half_edge_vertex[y];
    int px = D.psi_half_edge[x], py = D.psi_half_edge[y];
    if (u == w) {
      b.loops[u].emplace_back(std::min(px, py), std::max(px, py));
    } else {
      b.bundles[u][w].emplace_back(px, py);
      b.bundles[w][u].emplace_back(py, px);
    }
  }
  for (auto& m : b.bundles)
    for (auto& [w, list] : m) std::sort(list.begin(), list.end());
  for (auto& l : b.loops) std::sort(l.begin(), l.end());
  return b;
}

// Replace arbitrary signatures by their rank, keeping order.
template <class Sig>
std::vector<int> rank_signatures(const std::vector<Sig>& sigs) {
  std::vector<Sig> sorted = sigs;
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  std::vector<int> c(sigs.size());
  for (size_t i = 0; i < sigs.size(); ++i)
    c[i] = static_cast<int>(std::lower_bound(sorted.begin(), sorted.end(), sigs[i]) - sorted.begin());
  return c;
}

inline int count_distinct(const std::vector<int>& c) {
  std::vector<int> s = c;
  std::sort(s.begin(), s.end());
  return static_cast<int>(std::unique(s.begin(), s.end()) - s.begin());
}

class Canonicalizer {
 public:
  Canonicalizer(const StableGraph& G, const Decoration& D)
      : G_(G), D_(D), view_(make_bundles(G, D)) {}

  CanonicalForm run() {
    const int n = G_.num_vertices();
    std::vector<std::vector<int>> init(n);
    for (int v = 0; v < n; ++v) {
      auto& s = init[v];
      s.push_back(G_.genera[v]);
      s.push_back(G_.valence(v));
      s.push_back(static_cast<int>(D_.kappa[v].size()));
      s.insert(s.end(), D_.kappa[v].begin(), D_.kappa[v].end());
      for (int i = 0; i < G_.num_legs(); ++i)
        if (G_.legs[i].vertex == v) {
          s.push_back(G_.legs[i].label);
          s.push_back(D_.psi_leg[i]);
        }
      s.push_back(-1);
      for (auto [a, b] : view_.loops[v]) {
        s.push_back(a);
        s.push_back(b);
      }
    }
    search(refine(rank_signatures(init)));

    CanonicalForm out;
    out.vertex_perm.assign(n, 0);
    for (int i = 0; i < n; ++i) out.vertex_perm[best_order_[i]] = i;
    build_output(out);
    out.automorphisms = Integer(leaf_matches_) * bundle_symmetry();
    return out;
  }

 private:
  std::vector<int> refine(std::vector<int> color) const {
    const int n = G_.num_vertices();
    int classes = count_distinct(color);
    while (true) {
      using Sig = std::pair<int, std::vector<std::pair<int, std::vector<SidePair>>>>;
      std::vector<Sig> sigs(n);
      for (int v = 0; v < n; ++v) {
        sigs[v].first = color[v];
        for (const auto& [w, list] : view_.bundles[v]) sigs[v].second.emplace_back(color[w], list);
        std::sort(sigs[v].second.begin(), sigs[v].second.end());
      }
      auto next = rank_signatures(sigs);
      int nc = count_distinct(next);
      if (nc == classes) return next;
      color = std::move(next);
      classes = nc;
    }
  }

  void search(const std::vector<int>& color) {
    const int n = G_.num_vertices();
    if (count_distinct(color) == n) {
      std::vector<int> order(n);
      for (int v = 0; v < n; ++v) order[color[v]] = v;
      auto cert = certificate(order);
      if (best_cert_.empty() || cert < best_cert_) {
        best_cert_ = std::move(cert);
        best_order_ = order;
        leaf_matches_ = 1;
      } else if (cert == best_cert_) {
        ++leaf_matches_;
      }
      return;
    }
    // first non-singleton cell in colour order
    std::vector<int> size(n, 0);
    for (int c : color) ++size[c];
    int target = 0;
    while (size[target] < 2) ++target;
    for (int v = 0; v < n; ++v) {
      if (color[v] != target) continue;
      std::vector<int> split(n);
      for (int w = 0; w < n; ++w) split[w] = 2 * color[w] + ((color[w] == target && w != v) ? 1 : 0);
      search(refine(rank_signatures(split)));
    }
  }

  // Serialization of the graph relabeled by `order` (new index -> old vertex).
  std::vector<long> certificate(const std::vector<int>& order) const {
    const int n = G_.num_vertices();
    std::vector<int> pos(n);
    for (int i = 0; i < n; ++i) pos[order[i]] = i;
    std::vector<long> c;
    for (int i = 0; i < n; ++i) {
      int v = order[i];
      c.push_back(G_.genera[v]);
      c.push_back(static_cast<long>(D_.kappa[v].size()));
      c.insert(c.end(), D_.kappa[v].begin(), D_.kappa[v].end());
    }
    for (int i = 0; i < G_.num_legs(); ++i) {
      c.push_back(pos[G_.legs[i].vertex]);
      c.push_back(D_.psi_leg[i]);
    }
    for (const auto& e : oriented_edges(pos)) c.insert(c.end(), e.begin(), e.end());
    return c;
  }

  // Edges as (v1, v2, psi1, psi2) in canonical orientation and order.
  std::vector<std::array<int, 4>> oriented_edges(const std::vector<int>& pos) const {
    std::vector<std::array<int, 4>> es;
    for (auto [x, y] : G_.edges) {
      std::array<int, 4> a{pos[G_.half_edge_vertex[x]], pos[G_.half_edge_vertex[y]],
                           D_.psi_half_edge[x], D_.psi_half_edge[y]};
      std::array<int, 4> b{a[1], a[0], a[3], a[2]};
      es.push_back(std::min(a, b));
    }
    std::sort(es.begin(), es.end());
    return es;
  }

  void build_output(CanonicalForm& out) const {
    const auto& pos = out.vertex_perm;
    const int n = G_.num_vertices();
    out.graph.genera.resize(n);
    out.decoration.kappa.resize(n);
    for (int v = 0; v < n; ++v) {
      out.graph.genera[pos[v]] = G_.genera[v];
      out.decoration.kappa[pos[v]] = D_.kappa[v];
    }
    for (int i = 0; i < G_.num_legs(); ++i)
      out.graph.legs.push_back({G_.legs[i].label, pos[G_.legs[i].vertex]});
    out.decoration.psi_leg = D_.psi_leg;

    // Match each old edge to a slot of the sorted canonical edge list.
    struct Item {
      std::array<int, 4> key;
      int x, y;  // old half-edges in canonical orientation
    };
    std::vector<Item> items;
    for (auto [x, y] : G_.edges) {
      std::array<int, 4> a{pos[G_.half_edge_vertex[x]], pos[G_.half_edge_vertex[y]],
                           D_.psi_half_edge[x], D_.psi_half_edge[y]};
      std::array<int, 4> b{a[1], a[0], a[3], a[2]};
      if (b < a) items.push_back({b, y, x});
      else items.push_back({a, x, y});
    }
    std::stable_sort(items.begin(), items.end(),
                     [](const Item& p, const Item& q) { return p.key < q.key; });
    out.half_edge_perm.assign(G_.num_half_edges(), -1);
    for (const auto& it : items) {
      int e = out.graph.add_edge(it.key[0], it.key[1]);
      out.decoration.psi_half_edge.push_back(it.key[2]);
      out.decoration.psi_half_edge.push_back(it.key[3]);
      out.half_edge_perm[it.x] = out.graph.edges[e].first;
      out.half_edge_perm[it.y] = out.graph.edges[e].second;
    }
  }

  Integer bundle_symmetry() const {
    Integer s = 1;
    auto runs = [&](const std::vector<SidePair>& list, bool loop) {
      for (size_t i = 0; i < list.size();) {
        size_t j = i;
        while (j < list.size() && list[j] == list[i]) ++j;
        long k = static_cast<long>(j - i);
        s *= factorial(k);
        if (loop && list[i].first == list[i].second) s *= Integer(1) << static_cast<unsigned>(k);
        i = j;
      }
    };
    for (int v = 0; v < G_.num_vertices(); ++v) {
      runs(view_.loops[v], true);
      for (const auto& [w, list] : view_.bundles[v])
        if (w > v) runs(list, false);
    }
    return s;
  }

  const StableGraph& G_;
  const Decoration& D_;
  BundleView view_;
  std::vector<long> best_cert_;
  std::vector<int> best_order_;
  long leaf_matches_ = 0;
};

}  // namespace detail

inline CanonicalForm canonicalize(const StableGraph& G, const Decoration& D) {
  if (!D.fits(G)) throw InvalidInput("decoration does not match graph shape");
  std::vector<std::vector<int>> kappa = D.kappa;
  for (auto& k : kappa) std::sort(k.begin(), k.end());
  Decoration sorted{kappa, D.psi_leg, D.psi_half_edge};
  return detail::Canonicalizer(G, sorted).run();
}

namespace detail {

class IsoSearch {
 public:
  IsoSearch(const StableGraph& G, const StableGraph& H, const std::vector<int>& leg_target,
            const std::function<bool(const Isomorphism&)>& visit)
      : G_(G), H_(H), visit_(visit) {
    const int n = G.num_vertices();
    leg_target_ = leg_target;
    if (leg_target_.empty()) {
      leg_target_.resize(G.num_legs());
      std::iota(leg_target_.begin(), leg_target_.end(), 1);
    }
    multG_ = multiplicities(G);
    multH_ = multiplicities(H);
    // legs each vertex must receive, as sorted label lists
    legsG_.resize(n);
    legsH_.resize(H.num_vertices());
    for (const auto& l : G.legs) legsG_[l.vertex].push_back(leg_target_[l.label - 1]);
    for (const auto& l : H.legs) legsH_[l.vertex].push_back(l.label);
    for (auto& v : legsG_) std::sort(v.begin(), v.end());
    for (auto& v : legsH_) std::sort(v.begin(), v.end());
    // visit vertices with legs / high valence first
    order_.resize(n);
    std::iota(order_.begin(), order_.end(), 0);
    std::stable_sort(order_.begin(), order_.end(), [&](int a, int b) {
      return std::make_pair(-static_cast<int>(legsG_[a].size()), -G.valence(a)) <
             std::make_pair(-static_cast<int>(legsG_[b].size()), -G.valence(b));
    });
  }

  void run() {
    if (G_.num_vertices() != H_.num_vertices() || G_.num_edges() != H_.num_edges() ||
        G_.num_legs() != H_.num_legs())
      return;
    vmap_.assign(G_.num_vertices(), -1);
    used_.assign(H_.num_vertices(), 0);
    assign(0);
  }

 private:
  static std::vector<std::vector<int>> multiplicities(const StableGraph& X) {
    std::vector<std::vector<int>> m(X.num_vertices(), std::vector<int>(X.num_vertices(), 0));
    for (auto [a, b] : X.edges) {
      int u = X.half_edge_vertex[a], w = X.half_edge_vertex[b];
      ++m[u][w];
      if (u != w) ++m[w][u];
    }
    return m;
  }

  bool assign(size_t idx) {
    if (idx == order_.size()) return map_half_edges();
    int v = order_[idx];
    for (int w = 0; w < H_.num_vertices(); ++w) {
      if (used_[w] || H_.genera[w] != G_.genera[v] || H_.valence(w) != G_.valence(v) ||
          multH_[w][w] != multG_[v][v] || legsH_[w] != legsG_[v])
        continue;
      bool ok = true;
      for (size_t j = 0; j < idx && ok; ++j) {
        int u = order_[j];
        ok = multG_[v][u] == multH_[w][vmap_[u]];
      }
      if (!ok) continue;
      vmap_[v] = w;
      used_[w] = 1;
      bool cont = assign(idx + 1);
      used_[w] = 0;
      vmap_[v] = -1;
      if (!cont) return false;
    }
    return true;
  }

  struct Block {
    std::vector<std::pair<int, int>> g_edges;  // oriented half-edge pairs in G
    std::vector<std::pair<int, int>> h_edges;  // matching orientation in H
    bool loop = false;
  };

  bool map_half_edges() {
    std::map<std::pair<int, int>, Block> blocks;
    for (auto [a, b] : G_.edges) {
      int u = G_.half_edge_vertex[a], w = G_.half_edge_vertex[b];
      if (u > w) {
        std::swap(a, b);
        std::swap(u, w);
      }
      auto& blk = blocks[{u, w}];
      blk.loop = (u == w);
      blk.g_edges.emplace_back(a, b);
    }
    for (auto [a, b] : H_.edges) {
      int u = H_.half_edge_vertex[a], w = H_.half_edge_vertex[b];
      // find the G block mapping onto (u, w)
      for (auto& [key, blk] : blocks) {
        int iu = vmap_[key.first], iw = vmap_[key.second];
        if (iu == u && iw == w) {
          blk.h_edges.emplace_back(a, b);
          break;
        }
        if (iu == w && iw == u) {
          blk.h_edges.emplace_back(b, a);
          break;
        }
      }
    }
    blocks_.clear();
    for (auto& [key, blk] : blocks) blocks_.push_back(std::move(blk));
    iso_.vertex = vmap_;
    iso_.half_edge.assign(G_.num_half_edges(), -1);
    return permute_block(0);
  }

  bool permute_block(size_t bi) {
    if (bi == blocks_.size()) return visit_(iso_);
    const Block& blk = blocks_[bi];
    std::vector<int> perm(blk.g_edges.size());
    std::iota(perm.begin(), perm.end(), 0);
    do {
      const unsigned flips = blk.loop ? (1u << blk.g_edges.size()) : 1u;
      for (unsigned mask = 0; mask < flips; ++mask) {
        for (size_t i = 0; i < perm.size(); ++i) {
          auto [ga, gb] = blk.g_edges[i];
          auto [ha, hb] = blk.h_edges[perm[i]];
          if (mask & (1u << i)) std::swap(ha, hb);
          iso_.half_edge[ga] = ha;
          iso_.half_edge[gb] = hb;
        }
        if (!permute_block(bi + 1)) return false;
      }
    } while (std::next_permutation(perm.begin(), perm.end()));
    return true;
  }

  const StableGraph& G_;
  const StableGraph& H_;
  const std::function<bool(const Isomorphism&)>& visit_;
  std::vector<int> leg_target_;
  std::vector<std::vector<int>> multG_, multH_, legsG_, legsH_;
  std::vector<int> order_, vmap_;
  std::vector<char> used_;
  std::vector<Block> blocks_;
  Isomorphism iso_;
};

}  // namespace detail

inline void for_each_isomorphism(const StableGraph& G, const StableGraph& H,
                                 const std::vector<int>& leg_target,
                                 const std::function<bool(const Isomorphism&)>& visit) {
  detail::IsoSearch(G, H, leg_target, visit).run();
}

}  // namespace tautring

#endif  // TAUTRING_CANONICAL_HPP
