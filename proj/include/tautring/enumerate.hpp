#ifndef TAUTRING_ENUMERATE_HPP
#define TAUTRING_ENUMERATE_HPP

#include <deque>
#include <map>
#include <mutex>
#include <set>
#include <string>
#include <vector>

#include "tautring/canonical.hpp"
#include "tautring/error.hpp"
#include "tautring/stable_graph.hpp"

namespace tautring {

inline constexpr long kDefaultGraphBudget = 200000;

/// All stable graphs of type (g,n) with at most `max_edges` edges, one
/// canonical representative per isomorphism class (legs fixed). Sorted by
/// edge count, then by canonical form. Throws BudgetExceeded once more than
/// `budget` graphs would be produced.
std::vector<StableGraph> enumerate_stable_graphs(int g, int n, int max_edges,
                                                 long budget = kDefaultGraphBudget);

/// Graphs of type (g,n) with exactly `edges` edges (cached).
const std::vector<StableGraph>& stable_graphs_with_edges(int g, int n, int edges,
                                                         long budget = kDefaultGraphBudget);

// ---------------------------------------------------------------------------

namespace detail {

struct GraphLevels {
  std::deque<std::vector<StableGraph>> levels;  // levels[e] = graphs with e edges; deque keeps references stable
};

inline std::mutex& enumeration_mutex() {
  static std::mutex m;
  return m;
}

inline std::map<std::pair<int, int>, GraphLevels>& enumeration_cache() {
  static std::map<std::pair<int, int>, GraphLevels> c;
  return c;
}

// Every one-edge degeneration of G: a new loop at a positive-genus vertex, or
// a vertex split into two stable pieces joined by a new edge.
template <class Sink>
void for_each_degeneration(const StableGraph& G, Sink&& sink) {
  for (int v = 0; v < G.num_vertices(); ++v) {
    if (G.genera[v] >= 1) {
      StableGraph D = G;
      D.genera[v] -= 1;
      D.add_edge(v, v);
      sink(std::move(D));
    }
    auto sp = special_points(G, v);
    const int m = static_cast<int>(sp.size());
    if (m > 62) throw BudgetExceeded("vertex with more than 62 special points");
    const int gv = G.genera[v];
    // masks containing special point 0 (the other side is the complement)
    const unsigned long limit = m == 0 ? 1ul : (1ul << (m - 1));
    for (unsigned long half = 0; half < limit; ++half) {
      unsigned long mask = m == 0 ? 0ul : ((half << 1) | 1ul);
      int in = __builtin_popcountl(mask);
      int out = m - in;
      for (int g1 = 0; g1 <= gv; ++g1) {
        int g2 = gv - g1;
        if (m == 0 && g1 > g2) continue;
        if (2 * g1 - 1 + in <= 0 || 2 * g2 - 1 + out <= 0) continue;
        StableGraph D = G;
        const int w = D.num_vertices();
        D.genera[v] = g1;
        D.genera.push_back(g2);
        for (int j = 0; j < m; ++j) {
          if (mask & (1ul << j)) continue;
          if (sp[j].is_leg) {
            for (auto& l : D.legs)
              if (l.label == sp[j].id) l.vertex = w;
          } else {
            D.half_edge_vertex[sp[j].id] = w;
          }
        }
        D.add_edge(v, w);
        sink(std::move(D));
      }
    }
  }
}

}  // namespace detail

inline const std::vector<StableGraph>& stable_graphs_with_edges(int g, int n, int edges,
                                                                long budget) {
  if (!stable_type(g, n))
    throw InvalidInput("unstable type (g,n) = (" + std::to_string(g) + "," + std::to_string(n) + ")");
  if (edges < 0 || edges > moduli_dimension(g, n))
    throw InvalidInput("edge count outside 0..3g-3+n");
  std::lock_guard<std::mutex> lock(detail::enumeration_mutex());
  auto& lv = detail::enumeration_cache()[{g, n}].levels;
  long total = 0;
  for (const auto& l : lv) total += static_cast<long>(l.size());
  if (lv.empty()) {
    lv.push_back({StableGraph::smooth(g, n)});
    total = 1;
  }
  while (static_cast<int>(lv.size()) <= edges) {
    std::set<StableGraph> next;
    for (const auto& G : lv.back()) {
      detail::for_each_degeneration(G, [&](StableGraph D) {
        next.insert(canonicalize(D).graph);
        if (total + static_cast<long>(next.size()) > budget)
          throw BudgetExceeded("stable graph enumeration for (" + std::to_string(g) + "," +
                               std::to_string(n) + ") exceeds budget of " +
                               std::to_string(budget) + " graphs");
      });
    }
    total += static_cast<long>(next.size());
    lv.emplace_back(next.begin(), next.end());
  }
  long needed = 0;
  for (int e = 0; e <= edges; ++e) needed += static_cast<long>(lv[e].size());
  if (needed > budget)
    throw BudgetExceeded("stable graph enumeration for (" + std::to_string(g) + "," +
                         std::to_string(n) + ") exceeds budget of " + std::to_string(budget) +
                         " graphs");
  return lv[edges];
}

inline std::vector<StableGraph> enumerate_stable_graphs(int g, int n, int max_edges, long budget) {
  if (!stable_type(g, n))
    throw InvalidInput("unstable type (g,n) = (" + std::to_string(g) + "," + std::to_string(n) + ")");
  if (max_edges < 0 || max_edges > moduli_dimension(g, n))
    throw InvalidInput("max_edges must lie in 0..3g-3+n");
  std::vector<StableGraph> out;
  for (int e = 0; e <= max_edges; ++e) {
    const auto& lv = stable_graphs_with_edges(g, n, e, budget);
    out.insert(out.end(), lv.begin(), lv.end());
  }
  return out;
}

}  // namespace tautring

#endif  // TAUTRING_ENUMERATE_HPP
