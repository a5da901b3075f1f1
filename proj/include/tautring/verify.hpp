#ifndef TAUTRING_VERIFY_HPP
#define TAUTRING_VERIFY_HPP

#include <random>
#include <string>
#include <vector>

#include "json.hpp"
#include "tautring/calculus.hpp"
#include "tautring/gorenstein.hpp"

namespace tautring {

struct Check {
  std::string name;
  bool pass = false;
  std::string detail;
};

inline constexpr unsigned long kDefaultSeed = 20240611;

/// (1/(2g-2+n)) pi_*(pi^* a . psi_{n+1}) == a for every generator a of codimension <= 1.
inline std::vector<Check> forgetful_psi_checks(int g, int n) {
  if (!stable_type(g, n)) throw InvalidInput("unstable (g,n)");
  std::vector<Check> out;
  const Rational scale = Rational(1) / (2 * g - 2 + n);
  for (int k = 0; k <= std::min(1, moduli_dimension(g, n)); ++k)
    for (const auto& s : generator_basis(g, n, k)) {
      TautClass a(g, n);
      a.add(s, 1);
      TautClass r = pushforward_forgetful(multiply(pullback_forgetful(a), psi_class(g, n + 1, n + 1)));
      r *= scale;
      Check c;
      c.name = "forgetful-psi (" + std::to_string(g) + "," + std::to_string(n) + ") " + to_json(a)[0].dump();
      c.pass = r == a;
      if (!c.pass) c.detail = "got " + to_json(r).dump();
      out.push_back(std::move(c));
    }
  return out;
}

/// Self-intersection of the elliptic-tail locus: with phi gluing a genus-1
/// tail onto M_{g,1}, phi^* phi_* (1 x 1) = (delta_{1,0} - psi_1) x 1 + 1 x (-psi_1)
/// and its first-factor pushforward is -1/24.
inline std::vector<Check> elliptic_tail_checks(int g, const GluingOptions& opt = {}) {
  if (g < 2) throw InvalidInput("elliptic-tail check needs g >= 2");
  StableGraph G;
  G.genera = {g, 1};
  G.add_edge(0, 1);
  const auto spec = GluingMapSpec::from_graph(G);
  const TautClass alpha = fundamental_class(g, 1);
  const auto push = pushforward_gluing(spec, FactoredClass::tensor({alpha, fundamental_class(1, 1)}));
  const auto back = pullback_gluing(spec, push, opt);
  auto expected = FactoredClass::tensor({delta_separating(g, 1, 1, {}) - psi_class(g, 1, 1), fundamental_class(1, 1)});
  expected += FactoredClass::tensor({alpha, Rational(-1) * psi_class(1, 1, 1)});
  std::vector<Check> out;
  out.push_back({"elliptic-tail expansion g=" + std::to_string(g), back == expected,
                 back == expected ? "" : "got " + to_json(back).dump()});
  const TautClass proj = project_to_factor(back, 0);
  const TautClass target = Rational(-1, 24) * alpha;
  out.push_back({"elliptic-tail projection = -1/24 g=" + std::to_string(g), proj == target,
                 proj == target ? "" : "got " + to_json(proj).dump()});
  return out;
}

namespace detail {

inline Rational random_coeff(std::mt19937_64& rng) {
  Rational c(static_cast<long>(rng() % 9) - 4);
  c /= static_cast<long>(rng() % 3 + 1);
  return c == 0 ? Rational(1) : c;
}

inline TautClass random_of_degree(int g, int n, int k, std::mt19937_64& rng) {
  TautClass out(g, n);
  if (k < 0 || k > moduli_dimension(g, n)) return out;
  const auto basis = generator_basis(g, n, k);
  for (int t = 0; t < 2; ++t) out.add(basis[rng() % basis.size()], random_coeff(rng));
  return out;
}

inline FactoredClass random_factored(const GluingMapSpec& spec, int k, std::mt19937_64& rng) {
  std::vector<TautClass> parts;
  int left = k;
  for (size_t i = 0; i < spec.factors.size(); ++i) {
    auto [g, n] = spec.factors[i];
    const int d = moduli_dimension(g, n);
    const int deg = i + 1 == spec.factors.size() ? left : static_cast<int>(rng() % (std::min(d, left) + 1));
    parts.push_back(random_of_degree(g, n, deg, rng));
    left -= deg;
  }
  return FactoredClass::tensor(parts);
}

}  // namespace detail

struct ProjectionReport {
  int pairs = 0;
  int mismatches = 0;
  int nonzero = 0;
};

/// integrate(f_* x . y) == integrate(x . f^* y) on seeded random pairs, cycling
/// through the forgetful maps (0,5)->(0,4), (1,2)->(1,1) and the elliptic-tail
/// and rational-tail gluings into M_{1,2} and M_{0,5}.
inline ProjectionReport projection_formula_check(int pairs, unsigned long seed) {
  std::mt19937_64 rng(seed);
  auto two = [](int g1, std::vector<int> l1, int g2, std::vector<int> l2) {
    StableGraph G;
    G.genera = {g1, g2};
    for (int l : l1) G.legs.push_back({l, 0});
    for (int l : l2) G.legs.push_back({l, 1});
    std::sort(G.legs.begin(), G.legs.end());
    G.add_edge(0, 1);
    return GluingMapSpec::from_graph(G);
  };
  const GluingMapSpec tail = two(0, {1, 2}, 1, {});
  const GluingMapSpec rational = two(0, {1, 2}, 0, {3, 4, 5});
  ProjectionReport r;
  for (int t = 0; t < pairs; ++t) {
    Rational lhs, rhs;
    const int kind = t % 4;
    if (kind < 2) {
      const int g = kind, n = kind == 0 ? 5 : 2;
      const int d = moduli_dimension(g, n);
      const int kx = static_cast<int>(rng() % (d + 1));
      auto x = detail::random_of_degree(g, n, kx, rng);
      auto y = detail::random_of_degree(g, n - 1, d - kx, rng);
      lhs = integrate_product(pushforward_forgetful(x), y);
      rhs = integrate_product(x, pullback_forgetful(y));
    } else {
      const auto& spec = kind == 2 ? tail : rational;
      const int d = moduli_dimension(spec.g, spec.n);
      const int kx = static_cast<int>(rng() % d);
      auto x = detail::random_factored(spec, kx, rng);
      auto y = detail::random_of_degree(spec.g, spec.n, d - 1 - kx, rng);
      lhs = integrate_product(pushforward_gluing(spec, x), y);
      rhs = integrate_top(multiply(x, pullback_gluing(spec, y)));
    }
    ++r.pairs;
    r.mismatches += lhs != rhs;
    r.nonzero += lhs != 0;
  }
  return r;
}

inline nlohmann::json to_json(const Check& c) {
  nlohmann::json j{{"name", c.name}, {"pass", c.pass}};
  if (!c.detail.empty()) j["detail"] = c.detail;
  return j;
}

}  // namespace tautring

#endif  // TAUTRING_VERIFY_HPP
