#include <gtest/gtest.h>

#include <random>

#include "groupoidkit/bgr.hpp"
#include "groupoidkit/sampling.hpp"
#include "oracles.hpp"

using namespace groupoidkit;

namespace {

GraphPtr builtin(const char* name) { return share(*builtin_graph(name)); }

Natural cantor(long a, long b) { return Natural((a + b) * (a + b + 1) / 2 + b); }

void expect_all_pass(const std::vector<CheckResult>& checks) {
  ASSERT_FALSE(checks.empty());
  for (const auto& c : checks) EXPECT_TRUE(c.ok) << c.name << ": " << c.detail;
}

void expect_cover(const ClopenSet& k) {
  auto cover = bisection_cover(k);
  ClopenSet ranges(k.graph_ptr());
  for (std::size_t i = 0; i < cover.size(); ++i) {
    EXPECT_TRUE(verify_bisection(cover[i]).ok);
    EXPECT_TRUE(source_of(cover[i]).subset_of(k));
    auto r = range_of(cover[i]);
    EXPECT_TRUE(r.disjoint_from(ranges));
    ranges = ranges | r;
  }
  EXPECT_EQ(ranges, ClopenSet::whole(k.graph_ptr()));
}

// Number of stage atoms whose range (resp. source) family contains (x, i).
std::size_t hits(const StagedUnitary& y, const BoundaryPoint& x, const Natural& i, bool range) {
  std::size_t n = 0;
  for (std::size_t j = 1; j <= y.stage_count(); ++j) {
    for (const auto& a : y.stage(j)) {
      const Path& p = range ? a.alpha : a.beta;
      if (!oracle::point_in_paths(x, {p})) continue;
      for (long k = 0; k <= i.get_si(); ++k) {
        Natural kk(k);
        if (a.domain.contains(kk) && (range ? a.row : a.col).apply(kk) == i) ++n;
      }
    }
  }
  return n;
}

}  // namespace

TEST(Cover, Examples) {
  auto g = builtin("E2");
  expect_cover(parse_clopen(g, "Z(a)"));
  expect_cover(ClopenSet::whole(g));
  auto e2m = builtin("E2minus");
  expect_cover(parse_clopen(e2m, "Z(p)"));
  expect_cover(parse_clopen(e2m, "Z(e23.t)"));
  auto sink = builtin("sink-edge");
  expect_cover(parse_clopen(sink, "Z(w)"));
}

TEST(Cover, NotFull) {
  auto g = builtin("two-loops");
  try {
    bisection_cover(parse_clopen(g, "Z(v)"));
    FAIL();
  } catch (const NotFull& e) {
    EXPECT_EQ(to_string(e.witness()), "(b)^inf");
  }
  EXPECT_THROW(StagedUnitary(parse_clopen(g, "Z(v)")), NotFull);
}

TEST(Isometry, RangeIsBoundaryTimesOne) {
  auto g = builtin("E2");
  for (const char* k : {"Z(a)", "all", "Z(b.a)"}) {
    auto kk = parse_clopen(g, k);
    auto w = isometry_W(kk);
    EXPECT_TRUE(w.is_indexed());
    EXPECT_TRUE(verify_bisection(w).ok);
    EXPECT_EQ(indexed_range_of(w), IndexedClopen::product(ClopenSet::whole(g),
                                                          {IndexPattern::point(Natural(1))}));
    EXPECT_TRUE(indexed_source_of(w).subset_of(
        IndexedClopen::product(kk, {IndexPattern::all()})));
  }
  auto id = isometry_W(ClopenSet::whole(g));
  EXPECT_EQ(id, cross_with_R(Bisection::identity(ClopenSet::whole(g)),
                             {{Natural(1), Natural(1)}}));
}

TEST(Complement, OfIndexedSet) {
  auto g = builtin("E2");
  auto s = IndexedClopen::product(parse_clopen(g, "Z(a)"), {IndexPattern::point(Natural(3))});
  auto c = complement(s);
  EXPECT_TRUE(c.disjoint_from(s));
  EXPECT_EQ(c | s, IndexedClopen::product(ClopenSet::whole(g), {IndexPattern::all()}));
}

TEST(Staged, E2ZaThreeRounds) {
  auto g = builtin("E2");
  StagedUnitary y(parse_clopen(g, "Z(a)"));
  y.ensure_rounds(3);
  EXPECT_EQ(y.stage_count(), 6u);
  expect_all_pass(y.check());
  EXPECT_FALSE(y.dump().empty());
}

TEST(Staged, OneRoundAndWholeCorner) {
  for (const auto& g0 : oracle::corpus()) {
    auto g = share(g0);
    expect_all_pass(unitary_stages(ClopenSet::whole(g), 2).check());
  }
  auto g = builtin("E2minus");
  expect_all_pass(unitary_stages(parse_clopen(g, "Z(p)"), 1).check());
}

TEST(Staged, Budget) {
  auto g = builtin("E2");
  StagedUnitary y(parse_clopen(g, "Z(a)"), 2);
  y.ensure_rounds(2);
  EXPECT_THROW(y.ensure_rounds(3), StageBudgetExhausted);
}

TEST(Staged, PointwiseCoverage) {
  // After n rounds every (x, i) with i in N_1..N_n is the range of exactly
  // one stage arrow, and every (y, i) with y in K is the source of exactly one.
  auto g = builtin("E2minus");
  auto k = parse_clopen(g, "Z(p)");
  StagedUnitary y(k);
  y.ensure_rounds(3);
  Rng rng(59);
  auto cyl = k.cylinders();
  for (int t = 0; t < 60; ++t) {
    auto x = random_point(*g, static_cast<VertexId>(t % 3), 4, rng);
    for (long b = 0; b < 3; ++b) {
      for (long m = 0; m < 3; ++m) {
        auto i = cantor(b, m);
        EXPECT_EQ(hits(y, x, i, true), 1u) << to_string(x) << " " << i.get_str();
        EXPECT_EQ(hits(y, x, i, false), oracle::point_in_paths(x, cyl) ? 1u : 0u)
            << to_string(x) << " " << i.get_str();
      }
    }
  }
}

TEST(Staged, ElementLookups) {
  auto g = builtin("E2");
  StagedUnitary y(parse_clopen(g, "Z(a)"));
  auto x = parse_point(*g, "(b)^inf");
  auto e = y.element_with_range(x, cantor(3, 1));
  EXPECT_EQ(e.x, x);
  ASSERT_TRUE(e.index.has_value());
  EXPECT_EQ(e.index->row, cantor(3, 1));
  EXPECT_EQ(e.y.edge_at(0), *g->find_edge("a"));
  auto f = y.element_with_source(e.y, e.index->col);
  EXPECT_EQ(f, e);
  EXPECT_THROW(y.element_with_source(x, Natural(0)), Error);
}

TEST(Conjugation, UnitsAndLaws) {
  auto g = builtin("E2");
  StagedUnitary y(parse_clopen(g, "Z(a)"));
  CornerIso iso(y);
  auto u = unit(parse_point(*g, "(b)^inf"), Natural(4));
  auto fu = iso.forward(u);
  EXPECT_TRUE(is_unit(fu));
  EXPECT_TRUE(oracle::point_in_paths(fu.x, {parse_path(*g, "a")}));
  EXPECT_EQ(iso.backward(fu), u);
  expect_all_pass(check_conjugation(iso, 300, 7));
}

TEST(Conjugation, SampledAgainstCorner) {
  auto g = builtin("E2minus");
  auto k = parse_clopen(g, "Z(p)");
  StagedUnitary y(k);
  CornerIso iso(y);
  Rng rng(61);
  SampleShape shape{3, 20};
  auto cyl = k.cylinders();
  for (int t = 0; t < 200; ++t) {
    auto [a, b] = random_composable_pair(*g, shape, rng);
    auto fa = iso.forward(a);
    auto fb = iso.forward(b);
    EXPECT_TRUE(oracle::point_in_paths(fa.x, cyl));
    EXPECT_TRUE(oracle::point_in_paths(fa.y, cyl));
    EXPECT_EQ(iso.forward(multiply(a, b)), multiply(fa, fb));
    EXPECT_EQ(iso.backward(fa), a);
  }
  EXPECT_THROW(iso.forward(unit(parse_point(*g, "(p)^inf"))), GraphError);
}

TEST(Kakutani, Identity) {
  auto g = builtin("E2");
  auto whole = ClopenSet::whole(g);
  auto iso = iso_from_graph_map(whole, g, {0}, {0, 1}, 2);
  auto cert = kakutani_check(iso);
  EXPECT_TRUE(cert.ok);
  for (const auto& c : cert.checks) EXPECT_TRUE(c.ok) << c.name;
}

TEST(Kakutani, NotFull) {
  auto g = builtin("two-loops");
  auto x = parse_clopen(g, "Z(v)");
  auto iso = iso_from_graph_map(x, g, {0, 1}, {0, 1}, 1);
  auto cert = kakutani_check(iso);
  EXPECT_FALSE(cert.ok);
  ASSERT_TRUE(cert.witness.has_value());
}

TEST(Kakutani, SwapLoops) {
  auto g = builtin("E2");
  auto iso = iso_from_graph_map(parse_clopen(g, "Z(a)"), g, {0}, {1, 0}, 2);
  EXPECT_EQ(iso.y, parse_clopen(g, "Z(b)"));
  auto cert = kakutani_check(iso);
  EXPECT_TRUE(cert.ok);
  for (const auto& c : cert.checks) EXPECT_TRUE(c.ok) << c.name << ": " << c.detail;
}

TEST(Kakutani, BrokenMapFails) {
  auto g = builtin("E2");
  auto iso = iso_from_graph_map(parse_clopen(g, "Z(a)"), g, {0}, {1, 0}, 2);
  // Send every generator to the identity on Y: non-units now map to units.
  for (auto& [from, to] : iso.generators) to = Bisection::identity(iso.y);
  EXPECT_FALSE(kakutani_check(iso).ok);
}
