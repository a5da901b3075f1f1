#ifndef TAUTRING_TAUTCLASS_HPP
#define TAUTRING_TAUTCLASS_HPP

#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "tautring/canonical.hpp"
#include "tautring/decoration.hpp"
#include "tautring/error.hpp"
#include "tautring/rational.hpp"
#include "tautring/stable_graph.hpp"

namespace tautring {

/// A decorated stratum in canonical form. As a class it stands for
/// (1/|Aut(graph)|) * xi_* (decoration monomial), where xi is the gluing map
/// of the graph and Aut counts undecorated automorphisms.
struct DecoratedStratum {
  StableGraph graph;
  Decoration decoration;

  auto operator<=>(const DecoratedStratum&) const = default;

  /// Canonical representative of the isomorphism class of (G, D).
  static DecoratedStratum canonical(const StableGraph& G, const Decoration& D) {
    auto cf = canonicalize(G, D);
    return {std::move(cf.graph), std::move(cf.decoration)};
  }

  int codimension() const { return graph.num_edges() + decoration.degree(); }
};

/// Cached |Aut(G)| for canonical graphs.
inline Integer graph_automorphisms(const StableGraph& G) {
  static std::mutex mutex;
  static std::map<StableGraph, Integer> cache;
  {
    std::lock_guard<std::mutex> lock(mutex);
    auto it = cache.find(G);
    if (it != cache.end()) return it->second;
  }
  Integer a = automorphism_count(G);
  std::lock_guard<std::mutex> lock(mutex);
  cache.emplace(G, a);
  return a;
}

/// Formal rational combination of decorated strata on M_{g,n}.
class TautClass {
 public:
  TautClass(int g, int n) : g_(g), n_(n) {
    if (!stable_type(g, n))
      throw InvalidInput("unstable ambient (" + std::to_string(g) + "," + std::to_string(n) + ")");
  }

  int genus() const { return g_; }
  int markings() const { return n_; }
  int dimension() const { return moduli_dimension(g_, n_); }
  const std::map<DecoratedStratum, Rational>& terms() const { return terms_; }
  bool empty() const { return terms_.empty(); }
  size_t size() const { return terms_.size(); }

  /// Adds c * [s]; s must already be canonical.
  void add(const DecoratedStratum& s, const Rational& c) {
    if (c == 0) return;
    auto [it, inserted] = terms_.try_emplace(s, c);
    if (!inserted) {
      it->second += c;
      if (it->second == 0) terms_.erase(it);
    }
  }

  /// Adds c * [G, D], canonicalizing. Terms exceeding a vertex dimension are zero.
  void add(const StableGraph& G, const Decoration& D, const Rational& c) {
    if (c == 0 || !D.within_bounds(G)) return;
    add(DecoratedStratum::canonical(G, D), c);
  }

  TautClass& operator+=(const TautClass& o) {
    check_ambient(o);
    for (const auto& [s, c] : o.terms_) add(s, c);
    return *this;
  }
  TautClass& operator-=(const TautClass& o) {
    check_ambient(o);
    for (const auto& [s, c] : o.terms_) add(s, -c);
    return *this;
  }
  TautClass& operator*=(const Rational& r) {
    if (r == 0) terms_.clear();
    for (auto& [s, c] : terms_) c *= r;
    return *this;
  }
  friend TautClass operator+(TautClass a, const TautClass& b) { return a += b; }
  friend TautClass operator-(TautClass a, const TautClass& b) { return a -= b; }
  friend TautClass operator*(const Rational& r, TautClass a) { return a *= r; }
  friend TautClass operator-(TautClass a) { return a *= Rational(-1); }

  bool operator==(const TautClass& o) const {
    return g_ == o.g_ && n_ == o.n_ && terms_ == o.terms_;
  }

  void check_ambient(const TautClass& o) const {
    if (g_ != o.g_ || n_ != o.n_)
      throw InvalidInput("ambient mismatch: (" + std::to_string(g_) + "," + std::to_string(n_) +
                         ") vs (" + std::to_string(o.g_) + "," + std::to_string(o.n_) + ")");
  }

 private:
  int g_;
  int n_;
  std::map<DecoratedStratum, Rational> terms_;
};

/// The class [G, D] with coefficient one.
inline TautClass make_stratum(const StableGraph& G, const Decoration& D) {
  require_valid(G);
  if (!D.fits(G)) throw InvalidInput("decoration does not match graph shape");
  for (const auto& k : D.kappa)
    for (int a : k)
      if (a <= 0) throw InvalidInput("kappa indices must be positive");
  for (int p : D.psi_leg)
    if (p < 0) throw InvalidInput("negative psi exponent");
  for (int p : D.psi_half_edge)
    if (p < 0) throw InvalidInput("negative psi exponent");
  if (!D.within_bounds(G)) throw InvalidInput("decoration exceeds vertex dimension");
  TautClass t(G.genus(), G.num_legs());
  t.add(DecoratedStratum::canonical(G, D), 1);
  return t;
}

inline TautClass make_stratum(const StableGraph& G) { return make_stratum(G, Decoration::zero(G)); }

/// a*A + b*B.
inline TautClass combine(const Rational& a, const TautClass& A, const Rational& b,
                         const TautClass& B) {
  A.check_ambient(B);
  TautClass out(A.genus(), A.markings());
  for (const auto& [s, c] : A.terms()) out.add(s, a * c);
  for (const auto& [s, c] : B.terms()) out.add(s, b * c);
  return out;
}

/// Codimension-k part of A.
inline TautClass degree_slice(const TautClass& A, int k) {
  if (k < 0 || k > A.dimension()) throw InvalidInput("degree_slice: k out of range");
  TautClass out(A.genus(), A.markings());
  for (const auto& [s, c] : A.terms())
    if (s.codimension() == k) out.add(s, c);
  return out;
}

// Frequently used generators ------------------------------------------------

inline TautClass fundamental_class(int g, int n) { return make_stratum(StableGraph::smooth(g, n)); }

inline TautClass psi_class(int g, int n, int leg, int exponent = 1) {
  auto G = StableGraph::smooth(g, n);
  auto D = Decoration::zero(G);
  D.psi_leg.at(leg - 1) = exponent;
  return make_stratum(G, D);
}

inline TautClass kappa_class(int g, int n, int a) {
  auto G = StableGraph::smooth(g, n);
  auto D = Decoration::zero(G);
  D.kappa[0].push_back(a);
  return make_stratum(G, D);
}

/// Irreducible boundary class: one genus g-1 vertex with a loop.
inline TautClass delta_irr(int g, int n) {
  auto G = StableGraph::smooth(g - 1, n);
  G.add_edge(0, 0);
  return make_stratum(G);
}

/// Separating boundary class: genus g1 carrying `legs1`, genus g-g1 the rest.
inline TautClass delta_separating(int g, int n, int g1, const std::vector<int>& legs1) {
  StableGraph G;
  G.genera = {g1, g - g1};
  for (int i = 1; i <= n; ++i) {
    bool first = std::find(legs1.begin(), legs1.end(), i) != legs1.end();
    G.legs.push_back({i, first ? 0 : 1});
  }
  G.add_edge(0, 1);
  return make_stratum(G);
}

// JSON ------------------------------------------------------------------------

inline nlohmann::json to_json(const DecoratedStratum& s, const Rational& c) {
  nlohmann::json j;
  j["graph"] = to_json(s.graph);
  j["kappa"] = s.decoration.kappa;
  j["psi"] = {{"legs", s.decoration.psi_leg}, {"half_edges", s.decoration.psi_half_edge}};
  j["coeff"] = to_fraction_string(c);
  return j;
}

inline nlohmann::json to_json(const TautClass& t) {
  nlohmann::json j = nlohmann::json::array();
  for (const auto& [s, c] : t.terms()) j.push_back(to_json(s, c));
  return j;
}

/// Reads the term list; `ambient` is required only for an empty list.
inline TautClass tautclass_from_json(const nlohmann::json& j,
                                     std::optional<std::pair<int, int>> ambient = std::nullopt) {
  try {
    if (!j.is_array()) throw InvalidInput("TautClass JSON must be a list of terms");
    if (j.empty()) {
      if (!ambient) throw InvalidInput("empty TautClass JSON needs an explicit ambient");
      return TautClass(ambient->first, ambient->second);
    }
    std::optional<TautClass> out;
    for (const auto& term : j) {
      StableGraph G = graph_from_json(term.at("graph"));
      Decoration D;
      D.kappa = term.at("kappa").get<std::vector<std::vector<int>>>();
      D.psi_leg = term.at("psi").at("legs").get<std::vector<int>>();
      D.psi_half_edge = term.at("psi").at("half_edges").get<std::vector<int>>();
      TautClass one = make_stratum(G, D);
      one *= parse_fraction(term.at("coeff").get<std::string>());
      if (!out) out.emplace(one.genus(), one.markings());
      *out += one;
    }
    if (ambient && (out->genus() != ambient->first || out->markings() != ambient->second))
      throw InvalidInput("TautClass JSON ambient mismatch");
    return *out;
  } catch (const nlohmann::json::exception& e) {
    throw InvalidInput(std::string("malformed TautClass JSON: ") + e.what());
  }
}

}  // namespace tautring

#endif  // TAUTRING_TAUTCLASS_HPP
