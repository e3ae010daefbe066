#include <gtest/gtest.h>

#include <random>

#include "groupoidkit/index_set.hpp"
#include "groupoidkit/numbers.hpp"
#include "oracles.hpp"

using namespace groupoidkit;

namespace {

Natural cantor(long a, long b) { return Natural((a + b) * (a + b + 1) / 2 + b); }

std::vector<bool> members(const IndexSet& s, long bound) {
  std::vector<bool> out;
  for (long n = 0; n < bound; ++n) out.push_back(contains(s, Natural(n)));
  return out;
}

IndexPattern random_pattern(std::mt19937_64& rng, int depth) {
  std::uniform_int_distribution<int> kind(0, depth > 0 ? 3 : 1);
  std::uniform_int_distribution<long> small(0, 6);
  switch (kind(rng)) {
    case 0: {
      std::vector<Natural> ex;
      for (int i = 0; i < 2; ++i)
        if (small(rng) < 3) ex.emplace_back(small(rng));
      return IndexPattern::cofinite(ex);
    }
    case 1:
      return IndexPattern::point(Natural(small(rng)));
    default:
      return IndexPattern::paired(random_pattern(rng, depth - 1), random_pattern(rng, depth - 1));
  }
}

}  // namespace

TEST(Pairing, CantorFormula) {
  for (long a = 0; a < 30; ++a)
    for (long b = 0; b < 30; ++b) EXPECT_EQ(pair(Natural(a), Natural(b)), cantor(a, b));
  EXPECT_EQ(pair(Natural(0), Natural(0)), 0);
  EXPECT_EQ(pair(Natural(1), Natural(0)), 1);
  EXPECT_EQ(pair(Natural(0), Natural(1)), 2);
}

TEST(Pairing, InjectiveOnGrid) {
  std::set<Natural> seen;
  for (long a = 0; a < 100; ++a) {
    for (long b = 0; b < 100; ++b) {
      auto n = pair(Natural(a), Natural(b));
      EXPECT_TRUE(seen.insert(n).second);
      EXPECT_EQ(unpair(n), std::make_pair(Natural(a), Natural(b)));
    }
  }
}

TEST(Pairing, LargeValues) {
  Natural a("98765432109876543210");
  Natural b("12345678901234567890");
  EXPECT_EQ(unpair(pair(a, b)), std::make_pair(a, b));
}

TEST(Blocks, Partition) {
  for (std::size_t i = 1; i <= 6; ++i) {
    for (long k = 0; k < 10; ++k) {
      auto n = block_element(i, Natural(k));
      EXPECT_EQ(n, cantor(static_cast<long>(i) - 1, k));
      EXPECT_EQ(block_of(n), i);
      EXPECT_TRUE(IndexPattern::block(i).contains(n));
      EXPECT_FALSE(IndexPattern::block(i + 1).contains(n));
    }
  }
}

TEST(Patterns, Membership) {
  auto cof = IndexPattern::cofinite({Natural(2), Natural(5)});
  EXPECT_TRUE(cof.contains(Natural(0)));
  EXPECT_FALSE(cof.contains(Natural(5)));
  EXPECT_EQ(cof.sample(), 0);
  auto p = IndexPattern::paired(IndexPattern::point(Natural(1)), IndexPattern::all());
  EXPECT_TRUE(p.contains(cantor(1, 7)));
  EXPECT_FALSE(p.contains(cantor(2, 7)));
  EXPECT_EQ(IndexPattern::paired(IndexPattern::point(Natural(2)), IndexPattern::point(Natural(3)))
                .as_point(),
            cantor(2, 3));
  EXPECT_TRUE(IndexPattern::paired(IndexPattern::all(), IndexPattern::all()).is_all());
}

TEST(Patterns, BooleanOpsMatchMembership) {
  std::mt19937_64 rng(23);
  const long bound = 400;
  for (int i = 0; i < 300; ++i) {
    auto a = random_pattern(rng, 2);
    auto b = random_pattern(rng, 2);
    auto ab = intersect(a, b);
    auto amb = subtract(a, b);
    for (long n = 0; n < bound; ++n) {
      Natural x(n);
      EXPECT_EQ(contains(ab, x), a.contains(x) && b.contains(x)) << to_string(a) << " " << to_string(b);
      EXPECT_EQ(contains(amb, x), a.contains(x) && !b.contains(x)) << to_string(a) << " " << to_string(b);
    }
    for (std::size_t p = 0; p < amb.size(); ++p)
      for (std::size_t q = p + 1; q < amb.size(); ++q)
        EXPECT_TRUE(intersect(amb[p], amb[q]).empty());
  }
}

TEST(Patterns, SimplifyKeepsTheSet) {
  std::mt19937_64 rng(29);
  for (int i = 0; i < 300; ++i) {
    IndexSet s;
    for (int j = 0; j < 4; ++j) s.push_back(random_pattern(rng, 2));
    auto t = simplify(s);
    EXPECT_LE(t.size(), s.size());
    EXPECT_EQ(members(t, 300), members(s, 300));
    EXPECT_TRUE(same_set(s, t));
  }
}

TEST(Patterns, SimplifyMerges) {
  auto one = IndexPattern::point(Natural(1));
  IndexSet s{IndexPattern::cofinite({Natural(1)}), one};
  auto t = simplify(s);
  ASSERT_EQ(t.size(), 1u);
  EXPECT_TRUE(t[0].is_all());
  IndexSet q{IndexPattern::paired(one, IndexPattern::point(Natural(0))),
             IndexPattern::paired(one, IndexPattern::cofinite({Natural(0)}))};
  auto r = simplify(q);
  ASSERT_EQ(r.size(), 1u);
  EXPECT_EQ(r[0], IndexPattern::paired(one, IndexPattern::all()));
}

TEST(Patterns, SameSetIsSemantic) {
  IndexSet a{IndexPattern::all()};
  IndexSet b{IndexPattern::cofinite({Natural(4)}), IndexPattern::point(Natural(4))};
  EXPECT_TRUE(same_set(a, b));
  IndexSet c{IndexPattern::cofinite({Natural(4)})};
  EXPECT_FALSE(same_set(a, c));
}

TEST(Templates, ApplyImagePreimage) {
  auto k = IndexTemplate::variable();
  auto t = IndexTemplate::paired(IndexTemplate::constant(Natural(2)),
                                 IndexTemplate::paired(k, IndexTemplate::constant(Natural(1))));
  EXPECT_TRUE(t.has_variable());
  for (long n = 0; n < 20; ++n) {
    auto v = t.apply(Natural(n));
    EXPECT_EQ(v, cantor(2, static_cast<long>(cantor(n, 1).get_si())));
    EXPECT_EQ(t.solve(v), Natural(n));
  }
  EXPECT_FALSE(t.solve(Natural(0)).has_value());
  auto img = t.image(IndexPattern::cofinite({Natural(3)}));
  for (long n = 0; n < 10; ++n) EXPECT_EQ(img.contains(t.apply(Natural(n))), n != 3);
  auto pre = t.preimage(IndexPattern::block(3));
  for (long n = 0; n < 50; ++n) EXPECT_TRUE(contains(pre, Natural(n)));
  auto none = t.preimage(IndexPattern::block(2));
  for (long n = 0; n < 50; ++n) EXPECT_FALSE(contains(none, Natural(n)));
}

TEST(Templates, PreimageMatchesApply) {
  std::mt19937_64 rng(31);
  auto k = IndexTemplate::variable();
  std::vector<IndexTemplate> ts{k, IndexTemplate::paired(k, IndexTemplate::constant(Natural(0))),
                                IndexTemplate::paired(IndexTemplate::constant(Natural(1)), k)};
  for (int i = 0; i < 100; ++i) {
    auto p = random_pattern(rng, 2);
    for (const auto& t : ts) {
      auto pre = t.preimage(p);
      for (long n = 0; n < 40; ++n)
        EXPECT_EQ(contains(pre, Natural(n)), p.contains(t.apply(Natural(n))));
    }
  }
}

TEST(IndexedClopen, Operations) {
  auto g = share(*builtin_graph("E2"));
  auto whole = ClopenSet::whole(g);
  auto za = parse_clopen(g, "Z(a)");
  auto s = IndexedClopen::product(whole, {IndexPattern::block(1)});
  auto t = IndexedClopen::product(za, {IndexPattern::all()});
  auto u = s & t;
  auto x = parse_point(*g, "(a)^inf");
  auto y = parse_point(*g, "(b)^inf");
  EXPECT_TRUE(u.contains(x, cantor(0, 4)));
  EXPECT_FALSE(u.contains(y, cantor(0, 4)));
  EXPECT_FALSE(u.contains(x, cantor(1, 0)));
  EXPECT_TRUE((s - t).contains(y, cantor(0, 2)));
  EXPECT_TRUE(u.subset_of(s));
  EXPECT_TRUE((s - t).disjoint_from(t));
  EXPECT_EQ((s - t) | u, s);
  EXPECT_TRUE((s - s).empty());
  auto d = (s | t).disjoint();
  for (std::size_t i = 0; i < d.pieces().size(); ++i)
    for (std::size_t j = i + 1; j < d.pieces().size(); ++j) {
      IndexedClopen a(g, {d.pieces()[i]}), b(g, {d.pieces()[j]});
      EXPECT_TRUE(a.disjoint_from(b));
    }
  EXPECT_EQ(d, s | t);
}

TEST(IndexedClopen, Parse) {
  auto g = share(*builtin_graph("E2"));
  auto s = parse_indexed_clopen(g, "Z(a) @ 1 + Z(b.b) @ 4");
  EXPECT_TRUE(s.contains(parse_point(*g, "(a)^inf"), Natural(1)));
  EXPECT_FALSE(s.contains(parse_point(*g, "(a)^inf"), Natural(4)));
  EXPECT_TRUE(s.contains(parse_point(*g, "(b)^inf"), Natural(4)));
  EXPECT_ANY_THROW(parse_indexed_clopen(g, "Z(a)"));
}
