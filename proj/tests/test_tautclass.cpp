#include <gtest/gtest.h>

#include <random>

#include "tautring/calculus.hpp"
#include "tautring/gorenstein.hpp"
#include "tautring/tautclass.hpp"

using namespace tautring;

namespace {

TautClass random_class(int g, int n, std::mt19937_64& rng, int terms = 4) {
  TautClass out(g, n);
  const int d = moduli_dimension(g, n);
  for (int t = 0; t < terms; ++t) {
    const int k = static_cast<int>(rng() % (d + 1));
    const auto basis = generator_basis(g, n, k);
    const auto& s = basis[rng() % basis.size()];
    out.add(s, Rational(static_cast<long>(rng() % 11) - 5) / static_cast<long>(rng() % 4 + 1));
  }
  return out;
}

}  // namespace

TEST(MakeStratum, FundamentalClass) {
  auto F = fundamental_class(2, 1);
  ASSERT_EQ(F.size(), 1u);
  EXPECT_EQ(F.terms().begin()->second, 1);
  EXPECT_EQ(F.terms().begin()->first.codimension(), 0);
}

TEST(MakeStratum, PsiOnOneOne) {
  auto P = psi_class(1, 1, 1);
  ASSERT_EQ(P.size(), 1u);
  EXPECT_EQ(P.terms().begin()->second, 1);
  EXPECT_EQ(integrate_top(P), Rational(1, 24));
}

TEST(MakeStratum, DeltaIrrHalfNormalization) {
  auto D = delta_irr(1, 1);
  ASSERT_EQ(D.size(), 1u);
  EXPECT_EQ(graph_automorphisms(D.terms().begin()->first.graph), 2);
  // [G] = (1/2) xi_*(1), and xi_* of the point has degree 1
  EXPECT_EQ(integrate_top(D), Rational(1, 2));
  EXPECT_EQ(integrate_top(D), Rational(12) * integrate_top(psi_class(1, 1, 1)));
}

TEST(MakeStratum, RejectsOversizedDecoration) {
  auto G = StableGraph::smooth(0, 4);
  auto D = Decoration::zero(G);
  D.psi_leg[0] = 2;
  EXPECT_THROW(make_stratum(G, D), InvalidInput);
  D.psi_leg[0] = 0;
  D.kappa[0] = {0};
  EXPECT_THROW(make_stratum(G, D), InvalidInput);
}

TEST(MakeStratum, RelabelingInvariant) {
  // genus-0 vertex with legs 1,2 joined to a genus-0 vertex with legs 3,4,
  // written with the vertices in both orders and psi on the node
  StableGraph G;
  G.genera = {0, 0};
  G.legs = {{1, 0}, {2, 0}, {3, 1}, {4, 1}};
  G.add_edge(0, 1);
  auto D = Decoration::zero(G);
  StableGraph H;
  H.genera = {0, 0};
  H.legs = {{1, 1}, {2, 1}, {3, 0}, {4, 0}};
  H.add_edge(0, 1);
  auto E = Decoration::zero(H);
  EXPECT_EQ(make_stratum(G, D), make_stratum(H, E));

  StableGraph P;
  P.genera = {1, 0};
  P.legs = {{1, 1}, {2, 1}};
  P.add_edge(0, 1);
  auto PD = Decoration::zero(P);
  PD.psi_half_edge[0] = 1;
  StableGraph Q;
  Q.genera = {0, 1};
  Q.legs = {{1, 0}, {2, 0}};
  Q.add_edge(1, 0);
  auto QD = Decoration::zero(Q);
  QD.psi_half_edge[0] = 1;
  EXPECT_EQ(make_stratum(P, PD), make_stratum(Q, QD));
}

TEST(Combine, Basics) {
  auto X = psi_class(1, 2, 1);
  auto Y = delta_irr(1, 2);
  EXPECT_TRUE(combine(1, X, -1, X).empty());
  EXPECT_EQ(combine(1, X, 0, Y), X);
  EXPECT_EQ(combine(Rational(1, 2), Y, Rational(1, 2), Y), Y);
  EXPECT_THROW(combine(1, X, 1, psi_class(1, 1, 1)), InvalidInput);
}

TEST(Combine, AssociativeCommutative) {
  std::mt19937_64 rng(7);
  for (int t = 0; t < 100; ++t) {
    auto [g, n] = (t % 2) ? std::pair{1, 2} : std::pair{0, 5};
    auto A = random_class(g, n, rng), B = random_class(g, n, rng), C = random_class(g, n, rng);
    EXPECT_EQ(A + B, B + A);
    EXPECT_EQ((A + B) + C, A + (B + C));
    Rational a(3, 7), b(-2, 5);
    EXPECT_EQ(combine(a, A, b, B), combine(b, B, a, A));
    const auto sum = A + B;
    for (const auto& [s, c] : sum.terms()) EXPECT_NE(c, 0);
  }
}

TEST(DegreeSlice, Examples) {
  auto F = fundamental_class(1, 2);
  EXPECT_EQ(degree_slice(F, 0), F);
  EXPECT_TRUE(degree_slice(F, 1).empty());
  auto S = psi_class(1, 2, 1) + delta_irr(1, 2);
  EXPECT_EQ(degree_slice(S, 1), S);
  EXPECT_THROW(degree_slice(F, 3), InvalidInput);
}

TEST(DegreeSlice, Partitions) {
  std::mt19937_64 rng(11);
  for (int t = 0; t < 50; ++t) {
    auto A = random_class(1, 3, rng, 6);
    TautClass sum(1, 3);
    for (int k = 0; k <= A.dimension(); ++k) sum += degree_slice(A, k);
    EXPECT_EQ(sum, A);
  }
}

TEST(Json, RoundTrip) {
  std::mt19937_64 rng(3);
  for (int t = 0; t < 30; ++t) {
    auto A = random_class(1, 2, rng);
    if (A.empty()) continue;
    EXPECT_EQ(tautclass_from_json(to_json(A)), A);
  }
  EXPECT_EQ(tautclass_from_json(nlohmann::json::array(), std::pair{0, 4}), TautClass(0, 4));
  EXPECT_THROW(tautclass_from_json(nlohmann::json::array()), InvalidInput);
  EXPECT_THROW(tautclass_from_json(nlohmann::json::parse(R"([{"graph":1}])")), InvalidInput);
  auto j = to_json(psi_class(0, 4, 1));
  EXPECT_EQ(j[0]["coeff"], "1/1");
}
