#include <gtest/gtest.h>

#include <random>

#include "groupoidkit/error.hpp"
#include "groupoidkit/groupoid.hpp"
#include "groupoidkit/sampling.hpp"
#include "oracles.hpp"

using namespace groupoidkit;

namespace {

GraphPtr builtin(const char* name) { return share(*builtin_graph(name)); }

Bisection bis(const GraphPtr& g, const char* text) { return parse_bisection(g, text); }

std::size_t level_of(const std::vector<ArrowAtom>& atoms) {
  std::size_t d = 0;
  for (const auto& a : atoms) d = std::max({d, a.alpha.length(), a.beta.length()});
  return d;
}

// Both sets as oracle pieces at a common level.
void expect_same(const DirectedGraph& g, const std::set<oracle::Rep>& a,
                 const std::set<oracle::Rep>& b) {
  std::size_t top = 0;
  for (const auto* s : {&a, &b})
    for (const auto& r : *s) top = std::max(top, std::min(r.alpha.size(), r.beta.size()));
  EXPECT_EQ(oracle::refine(g, a, top), oracle::refine(g, b, top));
}

std::set<oracle::Rep> pieces(const Bisection& u, std::size_t m) {
  return oracle::reps(u.graph(), u.atoms(), std::max(m, level_of(u.atoms()) + 1));
}

}  // namespace

TEST(Elements, ParseAndMultiply) {
  auto g = builtin("E2");
  auto e = parse_element(*g, "(a.(b)^inf, 1, (b)^inf)");
  EXPECT_EQ(e.degree, 1);
  EXPECT_TRUE(is_groupoid_element(e));
  EXPECT_THROW(parse_element(*g, "((a)^inf, 0, (b)^inf)"), ParseError);
  // Periodic tails make the degree ambiguous only up to the period.
  EXPECT_NO_THROW(parse_element(*g, "(a.(b)^inf, 0, (b)^inf)"));
  EXPECT_THROW(parse_element(*g, "(a.(a.b)^inf, 0, (a.b)^inf)"), ParseError);
  auto f = parse_element(*g, "((b)^inf, -2, a.a.(b)^inf)");
  ASSERT_TRUE(composable(e, f));
  auto ef = multiply(e, f);
  EXPECT_EQ(ef, parse_element(*g, "(a.(b)^inf, -1, a.a.(b)^inf)"));
  EXPECT_THROW(multiply(f, f), GraphError);
  EXPECT_TRUE(is_unit(multiply(e, inverse(e))));
  EXPECT_EQ(inverse(inverse(e)), e);
}

TEST(Elements, Indexed) {
  auto g = builtin("E2");
  auto e = parse_element(*g, "((a)^inf, 0, (a)^inf)@(1,3)");
  auto f = parse_element(*g, "((a)^inf, 0, (a)^inf)@(3,2)");
  auto ef = multiply(e, f);
  ASSERT_TRUE(ef.index.has_value());
  EXPECT_EQ(ef.index->row, 1);
  EXPECT_EQ(ef.index->col, 2);
  EXPECT_FALSE(composable(f, e));
  EXPECT_EQ(parse_element(*g, to_string(e)), e);
}

TEST(Elements, SampledLaws) {
  for (const auto& g0 : oracle::corpus()) {
    auto g = share(g0);
    Rng rng(41);
    SampleShape shape{3, std::nullopt};
    for (int i = 0; i < 300; ++i) {
      auto [a, b] = random_composable_pair(*g, shape, rng);
      auto ab = multiply(a, b);
      EXPECT_TRUE(is_groupoid_element(ab));
      EXPECT_EQ(ab.degree, a.degree + b.degree);
      EXPECT_EQ(multiply(inverse(b), inverse(a)), inverse(ab));
      EXPECT_EQ(multiply(unit(a.x), a), a);
      EXPECT_EQ(multiply(a, unit(a.y)), a);
      auto c = random_composable_pair(*g, shape, rng).first;
      if (composable(b, c)) {
        EXPECT_EQ(multiply(ab, c), multiply(a, multiply(b, c)));
      }
    }
  }
}

TEST(Atoms, ContainmentMatchesOracle) {
  for (const auto& g0 : oracle::corpus()) {
    auto g = share(g0);
    std::mt19937_64 rng(43);
    Rng srng(44);
    for (int i = 0; i < 300; ++i) {
      auto a = oracle::random_arrow(*g, rng, 2);
      auto e = random_element(*g, SampleShape{3, std::nullopt}, srng);
      EXPECT_EQ(atom_contains(a, e), oracle::element_in_atom(*g, e, a));
    }
  }
}

TEST(Atoms, Enumerate) {
  auto g = builtin("E2");
  auto atoms = enumerate_atoms(*g, 1);
  // alpha, beta in {v, a, b}: 9 pairs.
  EXPECT_EQ(atoms.size(), 9u);
  EXPECT_TRUE(std::is_sorted(atoms.begin(), atoms.end()));
  auto e2m = builtin("E2minus");
  for (const auto& a : enumerate_atoms(*e2m, 2))
    EXPECT_EQ(end_vertex(*e2m, a.alpha), end_vertex(*e2m, a.beta));
}

TEST(Compose, Examples) {
  auto g = builtin("E2");
  EXPECT_EQ(compose(bis(g, "B{ (a | b) }"), bis(g, "B{ (b | a) }")), bis(g, "B{ (a | a) }"));
  EXPECT_TRUE(compose(bis(g, "B{ (a | b) }"), bis(g, "B{ (a | b) }")).empty());
  auto u = bis(g, "B{ (a.b | b); (b | a.a) }");
  EXPECT_EQ(compose(u, inverse(u)), Bisection::identity(range_of(u)));
  EXPECT_EQ(compose(compose(u, inverse(u)), u), u);
}

TEST(Compose, ArrowOracle) {
  auto g = builtin("E2");
  auto u = bis(g, "B{ (a | b) }");
  auto v = bis(g, "B{ (b | a) }");
  EXPECT_EQ(oracle::compose_reps(*g, pieces(u, 4), pieces(v, 4), 4),
            oracle::reps(*g, bis(g, "B{ (a | a) }").atoms(), 4));
}

TEST(Inverse, Examples) {
  auto g = builtin("E2");
  EXPECT_EQ(inverse(bis(g, "B{ (a | b) }")), bis(g, "B{ (b | a) }"));
  auto u = bis(g, "B{ (a.b | b \\ {a}); (v | a) }");
  EXPECT_EQ(inverse(inverse(u)), u);
  EXPECT_EQ(inverse(bis(g, "B{ (a | b) @ (1,3) }")), bis(g, "B{ (b | a) @ (3,1) }"));
}

TEST(RangeSource, Examples) {
  auto g = builtin("E2");
  auto u = bis(g, "B{ (a | b) }");
  EXPECT_EQ(range_of(u), parse_clopen(g, "Z(a)"));
  EXPECT_EQ(source_of(u), parse_clopen(g, "Z(b)"));
  EXPECT_EQ(range_of(bis(g, "B{ (v | a) }")), ClopenSet::whole(g));
  auto w = bis(g, "B{ (a | a); (b.a | b) }");
  EXPECT_EQ(range_of(w), parse_clopen(g, "Z(a) + Z(b.a)"));
  EXPECT_EQ(range_of(inverse(w)), source_of(w));
  EXPECT_EQ(range_of(bis(g, "B{ (a.b | b \\ {a}) }")), parse_clopen(g, "Z(a.b.b)"));
}

TEST(Restrict, Examples) {
  auto g = builtin("E2");
  auto u = bis(g, "B{ (a | b); (b | a) }");
  EXPECT_EQ(restrict(u, ClopenSet::whole(g)), u);
  EXPECT_TRUE(restrict(u, parse_clopen(g, "{}")).empty());
  auto r = restrict(bis(g, "B{ (a | b) }"), parse_clopen(g, "Z(b)"));
  EXPECT_TRUE(r.empty());
  auto r2 = restrict(bis(g, "B{ (a.b | b) }"), parse_clopen(g, "Z(a.b) + Z(b.b)"));
  EXPECT_EQ(r2, bis(g, "B{ (a.b.b | b.b) }"));
  for (const auto& a : r2.atoms()) {
    EXPECT_TRUE(is_prefix(parse_path(*g, "a.b"), a.alpha));
  }
}

TEST(Restrict, ArrowOracle) {
  for (const auto& g0 : oracle::corpus()) {
    auto g = share(g0);
    std::mt19937_64 rng(47);
    for (int i = 0; i < 100; ++i) {
      auto u = Bisection::from_atoms(g, {oracle::random_arrow(*g, rng, 2)});
      auto k = ClopenSet::from_atoms(g, {oracle::random_cylinder(*g, rng, 2)});
      auto r = restrict(u, k);
      const std::size_t m = 6;
      std::set<oracle::Rep> expect;
      auto kp = normalize(k).cylinders();
      for (const auto& p : pieces(u, m)) {
        // At level m the piece lies inside or outside K on each side.
        bool in_r = false, in_s = false;
        for (const auto& c : kp) {
          in_r = in_r || (c.start == p.alpha_start && c.edges.size() <= p.alpha.size() &&
                          std::equal(c.edges.begin(), c.edges.end(), p.alpha.begin()));
          in_s = in_s || (c.start == p.beta_start && c.edges.size() <= p.beta.size() &&
                          std::equal(c.edges.begin(), c.edges.end(), p.beta.begin()));
        }
        if (in_r && in_s) expect.insert(p);
      }
      expect_same(*g, pieces(r, m), expect);
    }
  }
}

TEST(CrossWithR, Examples) {
  auto g = builtin("E2");
  auto id = Bisection::identity(parse_clopen(g, "Z(a)"));
  auto crossed = cross_with_R(id, {{Natural(2), Natural(2)}});
  EXPECT_TRUE(crossed.is_indexed());
  auto s = indexed_range_of(crossed);
  EXPECT_TRUE(s.contains(parse_point(*g, "(a)^inf"), Natural(2)));
  EXPECT_FALSE(s.contains(parse_point(*g, "(a)^inf"), Natural(1)));
  EXPECT_EQ(indexed_range_of(crossed), indexed_source_of(crossed));

  auto u = bis(g, "B{ (a | b) }");
  auto v = bis(g, "B{ (b | a.a) }");
  auto u12 = cross_with_R(u, {{Natural(1), Natural(2)}});
  auto v25 = cross_with_R(v, {{Natural(2), Natural(5)}});
  auto v35 = cross_with_R(v, {{Natural(3), Natural(5)}});
  EXPECT_EQ(compose(u12, v25), cross_with_R(compose(u, v), {{Natural(1), Natural(5)}}));
  EXPECT_TRUE(compose(u12, v35).empty());
  EXPECT_THROW(cross_with_R(u12, {{Natural(0), Natural(0)}}), GraphError);
}

TEST(VerifyBisection, Examples) {
  auto g = builtin("E2");
  EXPECT_TRUE(verify_bisection(bis(g, "B{ (a | a); (b | b) }")).ok);
  auto bad = verify_bisection(bis(g, "B{ (a | a); (a | b) }"));
  EXPECT_FALSE(bad.ok);
  ASSERT_TRUE(bad.overlap.has_value());
  EXPECT_TRUE(verify_bisection(Bisection(g)).ok);
  // Same range on the point level: a is Z(a.a) + Z(a.b).
  EXPECT_FALSE(verify_bisection(bis(g, "B{ (a.a | b); (a | a) }")).ok);
}

TEST(VerifyBisection, AgreesWithPieces) {
  for (const auto& g0 : oracle::corpus()) {
    auto g = share(g0);
    std::mt19937_64 rng(53);
    for (int i = 0; i < 200; ++i) {
      auto u = Bisection::from_atoms(
          g, {oracle::random_arrow(*g, rng, 2), oracle::random_arrow(*g, rng, 2)});
      auto ps = pieces(u, 5);
      std::size_t top = 0;
      for (const auto& p : ps) top = std::max({top, p.alpha.size(), p.beta.size()});
      ps = oracle::refine(*g, ps, top);
      // A bisection iff no two pieces share a range prefix or a source prefix.
      bool ok = true;
      for (auto a = ps.begin(); a != ps.end() && ok; ++a) {
        for (auto b = std::next(a); b != ps.end() && ok; ++b) {
          auto meets = [](VertexId s1, const std::vector<EdgeId>& x, VertexId s2,
                          const std::vector<EdgeId>& y) {
            std::size_t n = std::min(x.size(), y.size());
            return s1 == s2 && std::equal(x.begin(), x.begin() + n, y.begin());
          };
          if (meets(a->alpha_start, a->alpha, b->alpha_start, b->alpha) ||
              meets(a->beta_start, a->beta, b->beta_start, b->beta))
            ok = false;
        }
      }
      EXPECT_EQ(verify_bisection(u).ok, ok) << to_string(u);
    }
  }
}

TEST(Bisections, ParseRoundTrip) {
  auto g = builtin("E2minus");
  auto u = bis(g, "B{ (p.e12 | e12 \\ {e23}) @ (1,2); (q | p) @ (0,0) }");
  EXPECT_TRUE(u.is_indexed());
  EXPECT_EQ(parse_bisection(g, to_string(u)), u);
  EXPECT_THROW(bis(g, "B{ (p | r) }"), Error);
  EXPECT_THROW(bis(g, "B{ (p | q) @ (1,2); (q | q) }"), Error);
  EXPECT_THROW(bis(g, "B{ (p | q"), ParseError);
}

TEST(Bisections, ElementLookup) {
  auto g = builtin("E2");
  auto u = bis(g, "B{ (a | b); (b | a) }");
  auto x = parse_point(*g, "a.(b)^inf");
  auto e = u.element_with_range(x);
  ASSERT_TRUE(e.has_value());
  EXPECT_EQ(e->y, parse_point(*g, "(b)^inf"));
  EXPECT_TRUE(u.contains(*e));
  auto f = u.element_with_source(x);
  ASSERT_TRUE(f.has_value());
  EXPECT_EQ(f->x, parse_point(*g, "b.(b)^inf"));
  EXPECT_FALSE(bis(g, "B{ (a | b) }").element_with_range(parse_point(*g, "(b)^inf")).has_value());
}
