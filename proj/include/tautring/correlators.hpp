#ifndef TAUTRING_CORRELATORS_HPP
#define TAUTRING_CORRELATORS_HPP

#include <algorithm>
#include <map>
#include <mutex>
#include <numeric>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "tautring/error.hpp"
#include "tautring/rational.hpp"
#include "tautring/stable_graph.hpp"

namespace tautring {

/// Genus and psi exponents of a top-degree psi integral.
struct IntersectionNumberKey {
  int genus = 0;
  std::vector<int> exponents;
};

/// <tau_{a_1} ... tau_{a_n}>_g, the integral of prod psi_i^{a_i} over M_{g,n}.
/// Throws InvalidInput unless sum a_i = 3g-3+n.
Rational psi_intersection(const IntersectionNumberKey& key);

/// Integral of psi^a * prod kappa_b over M_{g,n} (0 unless top degree).
Rational vertex_integral(int g, std::vector<int> psi, std::vector<int> kappa);

/// Number of memoized correlators (for diagnostics).
size_t correlator_cache_size();

// ---------------------------------------------------------------------------

namespace detail {

inline Integer double_factorial(long n) {  // n!! with (-1)!! = 1
  Integer r = 1;
  for (long k = n; k > 1; k -= 2) r *= k;
  return r;
}

class CorrelatorTable {
 public:
  static CorrelatorTable& instance() {
    static CorrelatorTable t;
    return t;
  }

  // Expects sorted exponents; returns 0 off top degree or for unstable types.
  Rational get(int g, std::vector<int> a) {
    std::sort(a.begin(), a.end());
    const int n = static_cast<int>(a.size());
    if (g < 0 || 2 * g - 2 + n <= 0) return 0;
    for (int x : a)
      if (x < 0) return 0;
    if (std::accumulate(a.begin(), a.end(), 0) != 3 * g - 3 + n) return 0;
    auto key = std::make_pair(g, a);
    {
      std::lock_guard<std::mutex> lock(mutex_);
      auto it = memo_.find(key);
      if (it != memo_.end()) return it->second;
    }
    Rational v = compute(g, a);
    std::lock_guard<std::mutex> lock(mutex_);
    memo_.emplace(std::move(key), v);
    return v;
  }

  size_t size() {
    std::lock_guard<std::mutex> lock(mutex_);
    return memo_.size();
  }

 private:
  Rational compute(int g, const std::vector<int>& a) {
    const int n = static_cast<int>(a.size());
    if (g == 0 && n == 3) return 1;
    if (g == 1 && n == 1) return Rational(1, 24);
    if (a.front() == 0) {
      // string equation
      std::vector<int> rest(a.begin() + 1, a.end());
      Rational s = 0;
      for (size_t j = 0; j < rest.size(); ++j) {
        if (rest[j] == 0) continue;
        auto b = rest;
        --b[j];
        s += get(g, b);
      }
      return s;
    }
    // DVV recursion on the largest exponent tau_{k+1}
    const int k = a.back() - 1;
    std::vector<int> S(a.begin(), a.end() - 1);
    Rational total = 0;
    for (size_t j = 0; j < S.size(); ++j) {
      auto b = S;
      const int aj = b[j];
      b[j] = aj + k;
      total += Rational(Integer(double_factorial(2 * k + 2 * aj + 1) / double_factorial(2 * aj - 1))) * get(g, b);
    }
    for (int r = 0; r <= k - 1; ++r) {
      const int s = k - 1 - r;
      const Integer w = double_factorial(2 * r + 1) * double_factorial(2 * s + 1);
      auto b = S;
      b.push_back(r);
      b.push_back(s);
      Rational split = get(g - 1, b);
      const int m = static_cast<int>(S.size());
      for (unsigned long mask = 0; mask < (1ul << m); ++mask) {
        std::vector<int> I{r}, J{s};
        for (int i = 0; i < m; ++i) ((mask >> i) & 1ul ? I : J).push_back(S[i]);
        for (int g1 = 0; g1 <= g; ++g1) {
          Rational left = get(g1, I);
          if (left == 0) continue;
          split += left * get(g - g1, J);
        }
      }
      total += Rational(w, 2) * split;
    }
    return total / Rational(double_factorial(2 * k + 3));
  }

  std::mutex mutex_;
  std::map<std::pair<int, std::vector<int>>, Rational> memo_;
};

class KappaTable {
 public:
  static KappaTable& instance() {
    static KappaTable t;
    return t;
  }

  Rational get(int g, std::vector<int> psi, std::vector<int> kappa) {
    std::sort(psi.begin(), psi.end());
    std::sort(kappa.begin(), kappa.end());
    if (kappa.empty()) return CorrelatorTable::instance().get(g, psi);
    const int n = static_cast<int>(psi.size());
    const int deg = std::accumulate(psi.begin(), psi.end(), 0) +
                    std::accumulate(kappa.begin(), kappa.end(), 0);
    if (2 * g - 2 + n <= 0 || deg != 3 * g - 3 + n) return 0;
    auto key = std::make_tuple(g, psi, kappa);
    {
      std::lock_guard<std::mutex> lock(mutex_);
      auto it = memo_.find(key);
      if (it != memo_.end()) return it->second;
    }
    // kappa_{b1} = pi_*(psi_{n+1}^{b1+1}) and pi^* kappa_b = kappa_b - psi_{n+1}^b
    const int b1 = kappa.back();
    std::vector<int> rest(kappa.begin(), kappa.end() - 1);
    const int m = static_cast<int>(rest.size());
    Rational total = 0;
    for (unsigned long mask = 0; mask < (1ul << m); ++mask) {
      int e = b1 + 1;
      std::vector<int> kept;
      for (int i = 0; i < m; ++i) {
        if ((mask >> i) & 1ul) e += rest[i];
        else kept.push_back(rest[i]);
      }
      auto p = psi;
      p.push_back(e);
      Rational v = get(g, p, kept);
      total += (__builtin_popcountl(mask) % 2 ? -v : v);
    }
    std::lock_guard<std::mutex> lock(mutex_);
    memo_.emplace(std::move(key), total);
    return total;
  }

 private:
  std::mutex mutex_;
  std::map<std::tuple<int, std::vector<int>, std::vector<int>>, Rational> memo_;
};

}  // namespace detail

inline Rational psi_intersection(const IntersectionNumberKey& key) {
  const int n = static_cast<int>(key.exponents.size());
  if (!stable_type(key.genus, n)) throw InvalidInput("psi_intersection: unstable (g,n)");
  int sum = 0;
  for (int a : key.exponents) {
    if (a < 0) throw InvalidInput("psi_intersection: negative exponent");
    sum += a;
  }
  if (sum != moduli_dimension(key.genus, n))
    throw InvalidInput("psi_intersection: exponents sum to " + std::to_string(sum) +
                       ", expected 3g-3+n = " + std::to_string(moduli_dimension(key.genus, n)));
  return detail::CorrelatorTable::instance().get(key.genus, key.exponents);
}

inline Rational vertex_integral(int g, std::vector<int> psi, std::vector<int> kappa) {
  return detail::KappaTable::instance().get(g, std::move(psi), std::move(kappa));
}

inline size_t correlator_cache_size() { return detail::CorrelatorTable::instance().size(); }

}  // namespace tautring

#endif  // TAUTRING_CORRELATORS_HPP
