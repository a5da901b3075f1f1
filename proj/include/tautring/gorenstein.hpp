#ifndef TAUTRING_GORENSTEIN_HPP
#define TAUTRING_GORENSTEIN_HPP

#include <algorithm>
#include <atomic>
#include <limits>
#include <optional>
#include <set>
#include <string>
#include <thread>
#include <vector>

#include "json.hpp"
#include "tautring/calculus.hpp"
#include "tautring/enumerate.hpp"
#include "tautring/error.hpp"
#include "tautring/rational.hpp"
#include "tautring/tautclass.hpp"

namespace tautring {

inline constexpr long kDefaultGeneratorBudget = 20000;

/// All codimension-k decorated strata of M_{g,n} up to isomorphism, sorted by
/// canonical graph then decoration. Throws BudgetExceeded past `budget`.
std::vector<DecoratedStratum> generator_basis(int g, int n, int k,
                                              long budget = kDefaultGeneratorBudget);

struct PairingMatrix {
  int g = 0;
  int n = 0;
  int k = 0;
  std::vector<DecoratedStratum> rows;  // codimension k
  std::vector<DecoratedStratum> cols;  // codimension 3g-3+n-k
  std::vector<std::vector<Rational>> entries;
};

PairingMatrix pairing_matrix(int g, int n, int k, long budget = kDefaultGeneratorBudget,
                             int threads = 1);

long rank_exact(const std::vector<std::vector<Rational>>& M);
inline long rank_exact(const PairingMatrix& P) { return rank_exact(P.entries); }

enum class Verdict { GorensteinProven, NotGorensteinProven, ConjecturedGorenstein, Open };

std::string to_string(Verdict v);

struct GorensteinStatus {
  int g = 0;
  int n = 0;
  Verdict verdict = Verdict::Open;
  std::string source;
  /// Odd cohomology is known to vanish (n below the tabulated bound).
  bool odd_cohomology_vanishes = false;
};

GorensteinStatus known_status(int g, int n);

/// Betti numbers h^{2k} of M_{g,n}, k = 0..3g-3+n, where an independent
/// formula is built in (genus 0, and genus 1 with n <= 3).
std::optional<std::vector<long>> betti_oracle(int g, int n);

bool socle_check(int g, int n, long budget = kDefaultGeneratorBudget);

struct GorensteinReport {
  int g = 0;
  int n = 0;
  std::vector<long> degree_ranks;
  bool socle = false;
  std::vector<int> defects;
  GorensteinStatus status;
};

GorensteinReport gorenstein_report(int g, int n,
                                   const std::optional<std::vector<long>>& dimensions = std::nullopt,
                                   long budget = kDefaultGeneratorBudget, int threads = 1);

nlohmann::json to_json(const GorensteinStatus& s);
nlohmann::json to_json(const GorensteinReport& r);

// ---------------------------------------------------------------------------

namespace detail {

// All multisets of positive integers summing to `total`, nonincreasing.
inline void partitions(int total, int max_part, std::vector<int>& cur,
                       std::vector<std::vector<int>>& out) {
  if (total == 0) {
    out.emplace_back(cur.rbegin(), cur.rend());
    return;
  }
  for (int p = std::min(total, max_part); p >= 1; --p) {
    cur.push_back(p);
    partitions(total - p, p, cur, out);
    cur.pop_back();
  }
}

// Every decoration of G with total degree r inside the vertex bounds.
template <class Sink>
void for_each_decoration(const StableGraph& G, int r, Sink&& sink) {
  const int nv = G.num_vertices();
  std::vector<std::vector<SpecialPoint>> sp(nv);
  std::vector<int> cap(nv);
  for (int v = 0; v < nv; ++v) {
    sp[v] = special_points(G, v);
    cap[v] = moduli_dimension(G.genera[v], G.valence(v));
  }
  std::vector<int> rest(nv + 1, 0);  // capacity of vertices v..nv-1
  for (int v = nv - 1; v >= 0; --v) rest[v] = rest[v + 1] + cap[v];
  Decoration D = Decoration::zero(G);
  std::function<void(int, int)> vertex = [&](int v, int left) {
    if (v == nv) {
      if (left == 0) sink(D);
      return;
    }
    for (int dv = std::max(0, left - rest[v + 1]); dv <= std::min(left, cap[v]); ++dv) {
      for (int kdeg = 0; kdeg <= dv; ++kdeg) {
        std::vector<std::vector<int>> parts;
        std::vector<int> cur;
        partitions(kdeg, kdeg, cur, parts);
        for (const auto& kp : parts) {
          D.kappa[v] = kp;
          // distribute dv - kdeg among the special points of v
          std::function<void(size_t, int)> psi = [&](size_t j, int rem) {
            if (j == sp[v].size()) {
              if (rem == 0) vertex(v + 1, left - dv);
              return;
            }
            int& slot = sp[v][j].is_leg ? D.psi_leg[sp[v][j].id - 1] : D.psi_half_edge[sp[v][j].id];
            for (int a = 0; a <= rem; ++a) {
              slot = a;
              psi(j + 1, rem - a);
            }
            slot = 0;
          };
          psi(0, dv - kdeg);
        }
        D.kappa[v].clear();
      }
    }
  };
  vertex(0, r);
}

}  // namespace detail

inline std::vector<DecoratedStratum> generator_basis(int g, int n, int k, long budget) {
  if (!stable_type(g, n)) throw InvalidInput("generator_basis: unstable (g,n)");
  if (k < 0 || k > moduli_dimension(g, n))
    throw InvalidInput("generator_basis: codimension outside 0..3g-3+n");
  std::set<DecoratedStratum> seen;
  auto overflow = [&] {
    throw BudgetExceeded("generator basis of (" + std::to_string(g) + "," + std::to_string(n) +
                         ") in codimension " + std::to_string(k) + " exceeds budget of " +
                         std::to_string(budget) + " generators");
  };
  for (int e = 0; e <= k; ++e) {
    const std::vector<StableGraph>* graphs = nullptr;
    try {
      graphs = &stable_graphs_with_edges(g, n, e, budget);
    } catch (const BudgetExceeded&) {
      overflow();
    }
    for (const auto& G : *graphs)
      detail::for_each_decoration(G, k - e, [&](const Decoration& D) {
        seen.insert(DecoratedStratum::canonical(G, D));
        if (static_cast<long>(seen.size()) > budget) overflow();
      });
  }
  return {seen.begin(), seen.end()};
}

inline PairingMatrix pairing_matrix(int g, int n, int k, long budget, int threads) {
  const int d = stable_type(g, n) ? moduli_dimension(g, n) : -1;
  if (k < 0 || k > d) throw InvalidInput("pairing_matrix: degree outside 0..3g-3+n");
  PairingMatrix P{g, n, k, generator_basis(g, n, k, budget), generator_basis(g, n, d - k, budget), {}};
  const size_t R = P.rows.size(), C = P.cols.size();
  if (static_cast<long>(R) * static_cast<long>(C) > budget * budget)
    throw BudgetExceeded("pairing matrix too large");
  P.entries.assign(R, std::vector<Rational>(C));
  auto as_class = [&](const DecoratedStratum& s) {
    TautClass t(g, n);
    t.add(s, 1);
    return t;
  };
  std::atomic<size_t> next{0};
  auto work = [&] {
    for (size_t i = next++; i < R; i = next++) {
      const TautClass a = as_class(P.rows[i]);
      for (size_t j = 0; j < C; ++j) P.entries[i][j] = integrate_product(a, as_class(P.cols[j]));
    }
  };
  const int nt = std::max(1, std::min<int>(threads, static_cast<int>(R)));
  if (nt == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < nt; ++t) pool.emplace_back(work);
    for (auto& th : pool) th.join();
  }
  return P;
}

/// Fraction-free (Bareiss) elimination after clearing denominators row-wise.
inline long rank_exact(const std::vector<std::vector<Rational>>& M) {
  if (M.empty()) return 0;
  const size_t cols = M[0].size();
  std::vector<std::vector<Integer>> A;
  for (const auto& row : M) {
    if (row.size() != cols) throw InvalidInput("rank_exact: ragged matrix");
    Integer l = 1;
    for (const auto& x : row) l = lcm(l, Integer(x.get_den()));
    std::vector<Integer> r;
    for (const auto& x : row) r.push_back(Integer(x.get_num() * (l / x.get_den())));
    A.push_back(std::move(r));
  }
  const size_t rows = A.size();
  Integer prev = 1;
  size_t rank = 0;
  for (size_t c = 0; c < cols && rank < rows; ++c) {
    size_t p = rank;
    while (p < rows && A[p][c] == 0) ++p;
    if (p == rows) continue;
    std::swap(A[p], A[rank]);
    for (size_t i = rank + 1; i < rows; ++i) {
      for (size_t j = c + 1; j < cols; ++j) {
        Integer t = A[rank][c] * A[i][j] - A[i][c] * A[rank][j];
        mpz_divexact(t.get_mpz_t(), t.get_mpz_t(), prev.get_mpz_t());
        A[i][j] = t;
      }
      A[i][c] = 0;
    }
    prev = A[rank][c];
    ++rank;
  }
  return static_cast<long>(rank);
}

inline std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::GorensteinProven: return "Gorenstein-proven";
    case Verdict::NotGorensteinProven: return "NotGorenstein-proven";
    case Verdict::ConjecturedGorenstein: return "Conjectured-Gorenstein";
    case Verdict::Open: return "Open";
  }
  return "Open";
}

namespace detail {
inline constexpr int kUnbounded = std::numeric_limits<int>::max();
// n below these bounds: cohomology tautological / even cohomology tautological /
// odd cohomology zero. Indexed by genus; beyond the table the bound is 0.
inline constexpr int kAllTautological[] = {kUnbounded, kUnbounded, 20, 9, 7, 5, 3, 1};
inline constexpr int kEvenTautological[] = {kUnbounded, kUnbounded, 20, 12, 10, 8, 6, 4, 1};
inline constexpr int kOddVanishing[] = {kUnbounded, 11, 10, 9, 7, 5, 3, 1};

template <size_t N>
int table_bound(const int (&t)[N], int g) {
  return g < static_cast<int>(N) ? t[g] : 0;
}
}  // namespace detail

inline GorensteinStatus known_status(int g, int n) {
  if (!stable_type(g, n)) throw InvalidInput("known_status: unstable (g,n)");
  GorensteinStatus s{g, n, Verdict::ConjecturedGorenstein, "conjecture:2g+n<24", false};
  s.odd_cohomology_vanishes = n < detail::table_bound(detail::kOddVanishing, g);
  if (g <= 1) {
    s.verdict = Verdict::GorensteinProven;
    s.source = "genus-0/1:all-cohomology-tautological";
  } else if (2 * g + n >= 24) {
    s.verdict = Verdict::NotGorensteinProven;
    s.source = "theorem:g>=2,2g+n>=24";
  } else if (n < detail::table_bound(detail::kAllTautological, g)) {
    s.verdict = Verdict::GorensteinProven;
    s.source = "table:c(g):cohomology-tautological";
  } else if (n < detail::table_bound(detail::kEvenTautological, g)) {
    s.verdict = Verdict::GorensteinProven;
    s.source = "table:d(g):even-cohomology-tautological";
  }
  return s;
}

inline std::optional<std::vector<long>> betti_oracle(int g, int n) {
  if (!stable_type(g, n)) throw InvalidInput("betti_oracle: unstable (g,n)");
  if (g == 0) {
    // P_{m+1} = (1+q) P_m + q/2 sum_{j=2}^{m-2} C(m,j) P_{j+1} P_{m-j+1}
    std::vector<std::vector<Integer>> P(n + 1);
    P[3] = {1};
    auto mul = [](const std::vector<Integer>& a, const std::vector<Integer>& b) {
      std::vector<Integer> c(a.size() + b.size() - 1, 0);
      for (size_t i = 0; i < a.size(); ++i)
        for (size_t j = 0; j < b.size(); ++j) c[i + j] += a[i] * b[j];
      return c;
    };
    for (int m = 3; m < n; ++m) {
      std::vector<Integer> next(m - 1, 0);
      for (size_t i = 0; i < P[m].size(); ++i) {
        next[i] += P[m][i];
        next[i + 1] += P[m][i];
      }
      std::vector<Integer> split(m - 1, 0);
      for (int j = 2; j <= m - 2; ++j) {
        auto prod = mul(P[j + 1], P[m - j + 1]);
        for (size_t i = 0; i < prod.size(); ++i) split[i + 1] += binomial(m, j) * prod[i];
      }
      for (size_t i = 0; i < next.size(); ++i) next[i] += split[i] / 2;
      P[m + 1] = next;
    }
    std::vector<long> out;
    for (const auto& x : P[n]) out.push_back(x.get_si());
    return out;
  }
  if (g == 1 && n <= 3) {
    // Picard rank 2^n - n and Poincare duality fix every Betti number here
    const long pic = (1L << n) - n;
    if (n == 1) return std::vector<long>{1, 1};
    if (n == 2) return std::vector<long>{1, pic, 1};
    return std::vector<long>{1, pic, pic, 1};
  }
  return std::nullopt;
}

inline bool socle_check(int g, int n, long budget) {
  const int d = moduli_dimension(g, n);
  std::vector<std::vector<Rational>> top(1);
  {
    auto P = pairing_matrix(g, n, 0, budget);
    top = P.entries;
  }
  if (rank_exact(top) != 1) return false;
  // forgetful pushforward of a top class on M_{g,n+1}
  if (integrate_top(pushforward_forgetful(psi_class(g, n + 1, n + 1, d + 1))) == 0) return false;
  if (g >= 1) {
    // self-gluing of a top class on M_{g-1,n+2}
    StableGraph G = StableGraph::smooth(g - 1, n);
    G.add_edge(0, 0);
    auto spec = GluingMapSpec::from_graph(G);
    const int ds = moduli_dimension(g - 1, n + 2);
    auto x = FactoredClass::tensor({psi_class(g - 1, n + 2, 1, ds)});
    if (integrate_top(pushforward_gluing(spec, x)) == 0) return false;
  }
  return true;
}

inline GorensteinReport gorenstein_report(int g, int n, const std::optional<std::vector<long>>& dims,
                                          long budget, int threads) {
  if (!stable_type(g, n)) throw InvalidInput("gorenstein_report: unstable (g,n)");
  const int d = moduli_dimension(g, n);
  if (dims && static_cast<int>(dims->size()) != d + 1)
    throw InvalidInput("dimension table must have 3g-3+n+1 entries");
  GorensteinReport r;
  r.g = g;
  r.n = n;
  r.status = known_status(g, n);
  r.degree_ranks.assign(d + 1, 0);
  // P_{d-k} is the transpose of P_k
  for (int k = 0; 2 * k <= d; ++k) {
    const long rk = rank_exact(pairing_matrix(g, n, k, budget, threads));
    r.degree_ranks[k] = r.degree_ranks[d - k] = rk;
  }
  r.socle = socle_check(g, n, budget);
  if (dims)
    for (int k = 0; k <= d; ++k)
      if (r.degree_ranks[k] < (*dims)[k]) r.defects.push_back(k);
  return r;
}

inline nlohmann::json to_json(const GorensteinStatus& s) {
  return {{"g", s.g},
          {"n", s.n},
          {"verdict", to_string(s.verdict)},
          {"source", s.source},
          {"odd_cohomology_vanishes", s.odd_cohomology_vanishes}};
}

inline nlohmann::json to_json(const GorensteinReport& r) {
  return {{"g", r.g},           {"n", r.n},         {"degree_ranks", r.degree_ranks},
          {"socle", r.socle},   {"defects", r.defects}, {"status", to_json(r.status)}};
}

}  // namespace tautring

#endif  // TAUTRING_GORENSTEIN_HPP
