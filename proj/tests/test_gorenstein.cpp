#include <gtest/gtest.h>

#include <map>
#include <random>

#include "tautring/gorenstein.hpp"

using namespace tautring;

namespace {

// Plain Gaussian elimination over Q.
long naive_rank(std::vector<std::vector<Rational>> M) {
  long rank = 0;
  const size_t rows = M.size(), cols = rows ? M[0].size() : 0;
  for (size_t c = 0; c < cols && rank < static_cast<long>(rows); ++c) {
    size_t p = rank;
    while (p < rows && M[p][c] == 0) ++p;
    if (p == rows) continue;
    std::swap(M[p], M[rank]);
    for (size_t r = 0; r < rows; ++r) {
      if (r == static_cast<size_t>(rank) || M[r][c] == 0) continue;
      Rational f = M[r][c] / M[rank][c];
      for (size_t j = c; j < cols; ++j) M[r][j] -= f * M[rank][j];
    }
    ++rank;
  }
  return rank;
}

// Frozen table rows: n below the bound at genus g (index), nothing past the end.
const std::map<int, int> kC = {{2, 20}, {3, 9}, {4, 7}, {5, 5}, {6, 3}, {7, 1}};
const std::map<int, int> kD = {{2, 20}, {3, 12}, {4, 10}, {5, 8}, {6, 6}, {7, 4}, {8, 1}};
const std::map<int, int> kE = {{1, 11}, {2, 10}, {3, 9}, {4, 7}, {5, 5}, {6, 3}, {7, 1}};

bool below(const std::map<int, int>& t, int g, int n) {
  auto it = t.find(g);
  return it != t.end() && n < it->second;
}

}  // namespace

TEST(Generators, Counts) {
  EXPECT_EQ(generator_basis(0, 4, 1).size(), 8u);
  EXPECT_EQ(generator_basis(1, 1, 0).size(), 1u);
  EXPECT_EQ(generator_basis(1, 1, 1).size(), 3u);
  EXPECT_EQ(generator_basis(0, 4, 0).size(), 1u);
  EXPECT_THROW(generator_basis(0, 4, 2), InvalidInput);
  EXPECT_THROW(generator_basis(1, 3, 2, 3), BudgetExceeded);
}

TEST(Generators, DeterministicAndCanonical) {
  auto a = generator_basis(1, 2, 1), b = generator_basis(1, 2, 1);
  EXPECT_EQ(a, b);
  for (const auto& s : a) {
    EXPECT_EQ(DecoratedStratum::canonical(s.graph, s.decoration), s);
    EXPECT_EQ(s.codimension(), 1);
  }
}

TEST(Pairing, ZeroFourDegreeZero) {
  auto P = pairing_matrix(0, 4, 0);
  ASSERT_EQ(P.entries.size(), 1u);
  ASSERT_EQ(P.entries[0].size(), 8u);
  for (const auto& x : P.entries[0]) EXPECT_EQ(x, 1);
}

TEST(Pairing, OneOne) {
  auto P = pairing_matrix(1, 1, 0);
  std::multiset<Rational> got(P.entries[0].begin(), P.entries[0].end());
  EXPECT_EQ(got, (std::multiset<Rational>{Rational(1, 24), Rational(1, 24), Rational(1, 2)}));
  EXPECT_THROW(pairing_matrix(1, 1, 2), InvalidInput);
}

TEST(Pairing, TransposeSymmetry) {
  for (auto [g, n] : {std::pair{0, 5}, {0, 6}, {1, 2}, {1, 3}}) {
    const int d = moduli_dimension(g, n);
    for (int k = 0; k <= d; ++k) {
      auto P = pairing_matrix(g, n, k, kDefaultGeneratorBudget, 2);
      auto Q = pairing_matrix(g, n, d - k);
      ASSERT_EQ(P.rows, Q.cols);
      for (size_t i = 0; i < P.rows.size(); ++i)
        for (size_t j = 0; j < P.cols.size(); ++j) EXPECT_EQ(P.entries[i][j], Q.entries[j][i]);
      EXPECT_EQ(rank_exact(P), rank_exact(Q));
    }
  }
}

TEST(Pairing, ThreadCountDoesNotMatter) {
  auto a = pairing_matrix(1, 3, 1, kDefaultGeneratorBudget, 1);
  auto b = pairing_matrix(1, 3, 1, kDefaultGeneratorBudget, 4);
  EXPECT_EQ(a.entries, b.entries);
}

TEST(Rank, Examples) {
  EXPECT_EQ(rank_exact(std::vector<std::vector<Rational>>(3, std::vector<Rational>(3, 0))), 0);
  std::vector<std::vector<Rational>> I(3, std::vector<Rational>(3, 0));
  for (int i = 0; i < 3; ++i) I[i][i] = 1;
  EXPECT_EQ(rank_exact(I), 3);
  EXPECT_EQ(rank_exact(pairing_matrix(0, 5, 1)), 5);
  EXPECT_EQ(rank_exact(std::vector<std::vector<Rational>>{}), 0);
}

TEST(Rank, MatchesGaussianElimination) {
  std::mt19937_64 rng(99);
  for (int t = 0; t < 200; ++t) {
    const int r = 1 + static_cast<int>(rng() % 6), c = 1 + static_cast<int>(rng() % 6);
    const int basis = 1 + static_cast<int>(rng() % 4);
    // low-rank products plus sparse noise
    std::vector<std::vector<Rational>> L(r, std::vector<Rational>(basis)), R(basis, std::vector<Rational>(c));
    for (auto& row : L)
      for (auto& x : row) x = Rational(static_cast<long>(rng() % 7) - 3) / static_cast<long>(rng() % 3 + 1);
    for (auto& row : R)
      for (auto& x : row) x = Rational(static_cast<long>(rng() % 5) - 2);
    std::vector<std::vector<Rational>> M(r, std::vector<Rational>(c, 0));
    for (int i = 0; i < r; ++i)
      for (int j = 0; j < c; ++j)
        for (int k = 0; k < basis; ++k) M[i][j] += L[i][k] * R[k][j];
    EXPECT_EQ(rank_exact(M), naive_rank(M));
  }
  for (auto [g, n, k] : {std::tuple{0, 6, 1}, {1, 3, 1}, {1, 2, 1}}) {
    auto P = pairing_matrix(g, n, k);
    EXPECT_EQ(rank_exact(P), naive_rank(P.entries));
  }
}

TEST(Betti, Oracle) {
  EXPECT_EQ(betti_oracle(0, 3), (std::vector<long>{1}));
  EXPECT_EQ(betti_oracle(0, 4), (std::vector<long>{1, 1}));
  EXPECT_EQ(betti_oracle(0, 5), (std::vector<long>{1, 5, 1}));
  EXPECT_EQ(betti_oracle(0, 6), (std::vector<long>{1, 16, 16, 1}));
  EXPECT_EQ(betti_oracle(0, 7), (std::vector<long>{1, 42, 127, 42, 1}));
  EXPECT_EQ(betti_oracle(1, 1), (std::vector<long>{1, 1}));
  EXPECT_EQ(betti_oracle(1, 2), (std::vector<long>{1, 2, 1}));
  EXPECT_EQ(betti_oracle(1, 3), (std::vector<long>{1, 5, 5, 1}));
  EXPECT_FALSE(betti_oracle(2, 0).has_value());
}

TEST(Report, NoDefectsSmall) {
  for (auto [g, n] : {std::pair{0, 4}, {0, 5}, {1, 1}, {1, 2}}) {
    auto r = gorenstein_report(g, n, betti_oracle(g, n));
    EXPECT_TRUE(r.defects.empty()) << g << "," << n;
    EXPECT_EQ(r.degree_ranks, *betti_oracle(g, n));
    EXPECT_TRUE(r.socle);
    EXPECT_EQ(r.status.verdict, Verdict::GorensteinProven);
  }
}

TEST(Report, DefectAgainstInflatedTable) {
  auto r = gorenstein_report(0, 5, std::vector<long>{1, 6, 1});
  EXPECT_EQ(r.defects, std::vector<int>{1});
  EXPECT_THROW(gorenstein_report(0, 5, std::vector<long>{1, 5}), InvalidInput);
}

TEST(Report, Json) {
  auto j = to_json(gorenstein_report(0, 4, betti_oracle(0, 4)));
  EXPECT_EQ(j["degree_ranks"], nlohmann::json({1, 1}));
  EXPECT_EQ(j["socle"], true);
  EXPECT_EQ(j["status"]["verdict"], "Gorenstein-proven");
}

TEST(Socle, Examples) {
  EXPECT_TRUE(socle_check(0, 3));
  EXPECT_TRUE(socle_check(1, 1));
  EXPECT_TRUE(socle_check(2, 0));
}

TEST(KnownStatus, Examples) {
  EXPECT_EQ(known_status(2, 20).verdict, Verdict::NotGorensteinProven);
  EXPECT_EQ(known_status(3, 11).verdict, Verdict::GorensteinProven);
  EXPECT_EQ(known_status(3, 11).source, "table:d(g):even-cohomology-tautological");
  EXPECT_EQ(known_status(3, 15).verdict, Verdict::ConjecturedGorenstein);
  EXPECT_EQ(known_status(3, 8).source, "table:c(g):cohomology-tautological");
  EXPECT_THROW(known_status(0, 2), InvalidInput);
}

TEST(KnownStatus, ExhaustiveTables) {
  for (int g = 0; g <= 12; ++g)
    for (int n = 0; n <= 40; ++n) {
      if (!stable_type(g, n)) continue;
      auto s = known_status(g, n);
      Verdict expected;
      if (g <= 1) expected = Verdict::GorensteinProven;
      else if (2 * g + n >= 24) expected = Verdict::NotGorensteinProven;
      else if (below(kC, g, n) || below(kD, g, n)) expected = Verdict::GorensteinProven;
      else expected = Verdict::ConjecturedGorenstein;
      EXPECT_EQ(s.verdict, expected) << g << "," << n;
      EXPECT_EQ(s.odd_cohomology_vanishes, g == 0 || below(kE, g, n)) << g << "," << n;
    }
  // every tabulated cell falls inside the conjectural region
  for (const auto* t : {&kC, &kD})
    for (auto [g, bound] : *t)
      for (int n = 0; n < bound; ++n)
        if (stable_type(g, n)) {
          EXPECT_LT(2 * g + n, 24) << g << "," << n;
        }
}
