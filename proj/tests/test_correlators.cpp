#include <gtest/gtest.h>

#include <functional>
#include <thread>

#include "tautring/correlators.hpp"

using namespace tautring;

namespace {

Rational tau(int g, std::vector<int> a) { return psi_intersection({g, std::move(a)}); }

// All (g, sorted exponents) in top degree with exponent sum at most `max_sum`.
std::vector<IntersectionNumberKey> keys_up_to(int max_sum) {
  std::vector<IntersectionNumberKey> out;
  for (int g = 0; g <= 4; ++g)
    for (int n = 1; n <= 12; ++n) {
      if (!stable_type(g, n)) continue;
      const int d = moduli_dimension(g, n);
      if (d > max_sum || d < 0) continue;
      std::vector<int> cur;
      std::function<void(int, int)> rec = [&](int left, int lo) {
        if (static_cast<int>(cur.size()) == n) {
          if (left == 0) out.push_back({g, cur});
          return;
        }
        for (int a = lo; a <= left; ++a) {
          cur.push_back(a);
          rec(left - a, a);
          cur.pop_back();
        }
      };
      rec(d, 0);
    }
  return out;
}

}  // namespace

TEST(Correlator, Anchors) {
  EXPECT_EQ(tau(0, {0, 0, 0}), 1);
  EXPECT_EQ(tau(1, {1}), Rational(1, 24));
  EXPECT_EQ(tau(2, {2, 3}), Rational(29, 5760));
  EXPECT_EQ(tau(2, {4}), Rational(1, 1152));
}

TEST(Correlator, DegreeMismatchAndInstability) {
  EXPECT_THROW(tau(2, {2, 2}), InvalidInput);
  EXPECT_THROW(tau(0, {0, 0}), InvalidInput);
  EXPECT_THROW(tau(0, {2, -1, 0, 0}), InvalidInput);
}

TEST(Correlator, GenusZeroMultinomial) {
  for (const auto& k : keys_up_to(8)) {
    if (k.genus != 0) continue;
    const int n = static_cast<int>(k.exponents.size());
    Integer den = 1;
    for (int a : k.exponents) den *= factorial(a);
    Rational expected(factorial(n - 3));
    expected /= den;
    EXPECT_EQ(psi_intersection(k), expected);
  }
}

TEST(Correlator, OnePointFormula) {
  // <tau_{3g-2}>_g = 1 / (24^g g!)
  for (int g = 1; g <= 5; ++g) {
    Integer den = factorial(g);
    for (int i = 0; i < g; ++i) den *= 24;
    Rational expected(1);
    expected /= den;
    EXPECT_EQ(tau(g, {3 * g - 2}), expected) << g;
  }
}

TEST(Correlator, GenusOneDilatonTower) {
  for (int n = 1; n <= 8; ++n) {
    Rational expected(factorial(n - 1));
    expected /= 24;
    EXPECT_EQ(tau(1, std::vector<int>(n, 1)), expected);
  }
}

TEST(Correlator, StringAndDilaton) {
  int checked = 0;
  for (const auto& k : keys_up_to(8)) {
    const auto& a = k.exponents;
    const int n = static_cast<int>(a.size());
    if (n < 2 || !stable_type(k.genus, n - 1)) continue;
    for (int pos = 0; pos < n; ++pos) {
      std::vector<int> rest(a);
      rest.erase(rest.begin() + pos);
      if (a[pos] == 0) {
        Rational s = 0;
        for (size_t j = 0; j < rest.size(); ++j)
          if (rest[j] > 0) {
            auto b = rest;
            --b[j];
            s += tau(k.genus, b);
          }
        EXPECT_EQ(psi_intersection(k), s);
        ++checked;
      }
      if (a[pos] == 1) {
        EXPECT_EQ(psi_intersection(k), Rational(2 * k.genus - 2 + n - 1) * tau(k.genus, rest));
        ++checked;
      }
    }
  }
  EXPECT_GT(checked, 100);
}

TEST(Correlator, KappaIntegrals) {
  EXPECT_EQ(vertex_integral(1, {0}, {1}), Rational(1, 24));
  EXPECT_EQ(vertex_integral(0, {0, 0, 0, 0}, {1}), 1);
  EXPECT_EQ(vertex_integral(0, {0, 0, 0, 0, 0}, {2}), 1);
  EXPECT_EQ(vertex_integral(0, {0, 0, 0, 0, 0}, {1, 1}), 5);
  EXPECT_EQ(vertex_integral(0, {0, 0, 0, 0, 0}, {1}), 0);
  // kappa_1 on M_{1,1} equals the pushforward of psi_2^2 from M_{1,2}
  EXPECT_EQ(vertex_integral(1, {0}, {1}), tau(1, {0, 2}));
}

TEST(Correlator, ConcurrentCacheIsConsistent) {
  auto keys = keys_up_to(9);
  std::vector<std::vector<Rational>> results(4, std::vector<Rational>(keys.size()));
  std::vector<std::thread> pool;
  for (int t = 0; t < 4; ++t)
    pool.emplace_back([&, t] {
      for (size_t i = 0; i < keys.size(); ++i) {
        size_t j = (t % 2) ? keys.size() - 1 - i : i;
        results[t][j] = psi_intersection(keys[j]);
      }
    });
  for (auto& th : pool) th.join();
  for (int t = 1; t < 4; ++t) EXPECT_EQ(results[t], results[0]);
  EXPECT_GT(correlator_cache_size(), 0u);
}
