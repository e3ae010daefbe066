#include <gtest/gtest.h>

#include <random>

#include "groupoidkit/graph.hpp"
#include "groupoidkit/invariants.hpp"
#include "oracles.hpp"

using namespace groupoidkit;

namespace {

DirectedGraph builtin(const char* name) { return *builtin_graph(name); }

bool unimodular(const IntegerMatrix& m) {
  Integer d = oracle::cofactor_det(m);
  return d == 1 || d == -1;
}

void expect_smith(const IntegerMatrix& m) {
  auto s = smith_normal_form(m);
  EXPECT_EQ(s.U * m * s.V, s.D);
  EXPECT_TRUE(s.D.is_diagonal());
  EXPECT_TRUE(unimodular(s.U));
  EXPECT_TRUE(unimodular(s.V));
  auto d = s.diagonal();
  for (std::size_t i = 0; i < d.size(); ++i) {
    EXPECT_GE(d[i], 0);
    if (i + 1 < d.size() && d[i] != 0) {
      EXPECT_EQ(d[i + 1] % d[i], 0);
    }
    if (i + 1 < d.size() && d[i] == 0) {
      EXPECT_EQ(d[i + 1], 0);
    }
  }
  EXPECT_EQ(d, oracle::invariant_factors(m));
}

}  // namespace

TEST(Det, PaperValues) {
  EXPECT_EQ(det(IntegerMatrix{{-1}}), -1);
  EXPECT_EQ(det(IntegerMatrix{{-1, -1, 0}, {-1, 0, -1}, {0, -1, 0}}), 1);
  EXPECT_EQ(det(IntegerMatrix::identity(4)), 1);
  EXPECT_EQ(det(IntegerMatrix(0, 0)), 1);
}

TEST(Det, BowenFranksMatrix) {
  EXPECT_EQ(bowen_franks_matrix(builtin("E2minus")),
            (IntegerMatrix{{-1, -1, 0}, {-1, 0, -1}, {0, -1, 0}}));
}

TEST(Det, NonSquareThrows) { EXPECT_THROW(det(IntegerMatrix(2, 3)), std::invalid_argument); }

TEST(Det, MatchesCofactorOracle) {
  std::mt19937_64 rng(3);
  for (int i = 0; i < 300; ++i) {
    std::size_t n = 1 + i % 5;
    auto m = oracle::random_matrix(rng, n, n, -9, 9);
    EXPECT_EQ(det(m), oracle::cofactor_det(m));
  }
}

TEST(Det, LargeEntriesStayExact) {
  IntegerMatrix m{{1, 2}, {3, 4}};
  Integer big("123456789012345678901234567890");
  m(0, 0) *= big;
  m(1, 1) *= big;
  EXPECT_EQ(det(m), oracle::cofactor_det(m));
}

TEST(Smith, Examples) {
  auto id = smith_normal_form(IntegerMatrix::identity(3));
  EXPECT_EQ(id.D, IntegerMatrix::identity(3));
  EXPECT_EQ(id.U, IntegerMatrix::identity(3));
  EXPECT_EQ(id.V, IntegerMatrix::identity(3));
  EXPECT_EQ(smith_normal_form(IntegerMatrix{{0}}).D, (IntegerMatrix{{0}}));
  auto s = smith_normal_form(IntegerMatrix{{2, 4}, {6, 8}});
  EXPECT_EQ(s.D, (IntegerMatrix{{2, 0}, {0, 4}}));
}

TEST(Smith, RandomAgainstMinorOracle) {
  std::mt19937_64 rng(5);
  for (int i = 0; i < 200; ++i) {
    std::size_t r = 1 + i % 4;
    std::size_t c = 1 + (i / 4) % 4;
    expect_smith(oracle::random_matrix(rng, r, c, -6, 6));
  }
}

TEST(Smith, RankDeficient) {
  expect_smith(IntegerMatrix{{1, 2, 3}, {2, 4, 6}, {1, 1, 1}});
  expect_smith(IntegerMatrix(3, 2));
}

TEST(Smith, Deterministic) {
  IntegerMatrix m{{4, 6, 2}, {3, 9, 12}, {0, 5, 7}};
  auto a = smith_normal_form(m);
  auto b = smith_normal_form(m);
  EXPECT_EQ(a.U, b.U);
  EXPECT_EQ(a.V, b.V);
}

TEST(BowenFranks, Examples) {
  auto e2 = bowen_franks(builtin("E2"));
  EXPECT_EQ(e2.determinant, -1);
  EXPECT_EQ(e2.factors, std::vector<Integer>{1});
  EXPECT_EQ(e2.free_rank, 0u);
  EXPECT_EQ(e2.group_string(), "0");
  auto loop = bowen_franks(builtin("single-loop"));
  EXPECT_EQ(loop.determinant, 0);
  EXPECT_EQ(loop.free_rank, 1u);
  EXPECT_EQ(loop.group_string(), "Z");
  EXPECT_EQ(bowen_franks(builtin("E2minus")).determinant, 1);
}

TEST(BowenFranks, MatchesOracleOnRandomGraphs) {
  std::mt19937_64 rng(9);
  for (int i = 0; i < 100; ++i) {
    auto g = oracle::random_graph(rng, 1 + i % 4, 2 + i % 7, "r");
    auto bf = bowen_franks(g);
    auto o = oracle::graph_invariants(g);
    EXPECT_EQ(bf.determinant, o.det);
    std::vector<Integer> nontrivial;
    for (const auto& d : bf.factors)
      if (d != 1) nontrivial.push_back(d);
    for (std::size_t k = 0; k < bf.free_rank; ++k) nontrivial.push_back(0);
    EXPECT_EQ(nontrivial, o.factors);
  }
}

TEST(BowenFranks, EqualityIgnoresUnitFactors) {
  BowenFranks a{-1, {1}, 0};
  BowenFranks b{-1, {1, 1}, 0};
  BowenFranks c{-1, {1, 2}, 0};
  EXPECT_EQ(a, b);
  EXPECT_FALSE(a == c);
}

TEST(Certify, Examples) {
  auto c = certify_distinct(builtin("E2"), builtin("E2minus"));
  EXPECT_TRUE(c.distinguished());
  EXPECT_NE(c.reason.find("-1"), std::string::npos);
  EXPECT_FALSE(certify_distinct(builtin("E2"), builtin("E2")).distinguished());
}

TEST(Certify, HypothesisGate) {
  // det 0 vs det 1, but neither is strongly connected.
  auto c = certify_distinct(builtin("two-loops"), builtin("sink-edge"));
  EXPECT_FALSE(c.distinguished());
  EXPECT_FALSE(c.notes.empty());
}
