#ifndef TAUTRING_DECORATION_HPP
#define TAUTRING_DECORATION_HPP

#include <algorithm>
#include <compare>
#include <numeric>
#include <vector>

#include "tautring/stable_graph.hpp"

namespace tautring {

/// A kappa/psi monomial on the vertex spaces of a stable graph.
///
/// kappa[v] is the sorted multiset of kappa indices at vertex v (kappa_a has
/// degree a); psi_leg[label-1] and psi_half_edge[h] are psi exponents.
struct Decoration {
  std::vector<std::vector<int>> kappa;
  std::vector<int> psi_leg;
  std::vector<int> psi_half_edge;

  auto operator<=>(const Decoration&) const = default;

  static Decoration zero(const StableGraph& G) {
    Decoration d;
    d.kappa.assign(G.num_vertices(), {});
    d.psi_leg.assign(G.num_legs(), 0);
    d.psi_half_edge.assign(G.num_half_edges(), 0);
    return d;
  }

  bool fits(const StableGraph& G) const {
    return static_cast<int>(kappa.size()) == G.num_vertices() &&
           static_cast<int>(psi_leg.size()) == G.num_legs() &&
           static_cast<int>(psi_half_edge.size()) == G.num_half_edges();
  }

  int degree() const {
    int d = 0;
    for (const auto& k : kappa) d = std::accumulate(k.begin(), k.end(), d);
    d = std::accumulate(psi_leg.begin(), psi_leg.end(), d);
    return std::accumulate(psi_half_edge.begin(), psi_half_edge.end(), d);
  }

  int vertex_degree(const StableGraph& G, int v) const {
    int d = std::accumulate(kappa[v].begin(), kappa[v].end(), 0);
    for (int i = 0; i < G.num_legs(); ++i)
      if (G.legs[i].vertex == v) d += psi_leg[i];
    for (int h = 0; h < G.num_half_edges(); ++h)
      if (G.half_edge_vertex[h] == v) d += psi_half_edge[h];
    return d;
  }

  /// True iff no vertex carries more degree than its moduli dimension.
  bool within_bounds(const StableGraph& G) const {
    for (int v = 0; v < G.num_vertices(); ++v)
      if (vertex_degree(G, v) > moduli_dimension(G.genera[v], G.valence(v))) return false;
    return true;
  }

  void add_kappa(int v, int a) {
    auto& k = kappa[v];
    k.insert(std::upper_bound(k.begin(), k.end(), a), a);
  }
};

}  // namespace tautring

#endif  // TAUTRING_DECORATION_HPP
