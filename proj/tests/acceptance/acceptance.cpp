// One PASS/FAIL line per acceptance criterion. Exit status 1 on any failure.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <map>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "groupoidkit/bgr.hpp"
#include "groupoidkit/boundary.hpp"
#include "groupoidkit/graph.hpp"
#include "groupoidkit/groupoid.hpp"
#include "groupoidkit/invariants.hpp"
#include "groupoidkit/moves.hpp"
#include "groupoidkit/sampling.hpp"
#include "groupoidkit/stabilization.hpp"
#include "oracles.hpp"

using namespace groupoidkit;

namespace {

struct Outcome {
  bool ok = true;
  std::string detail;

  void fail(const std::string& why) {
    if (ok) detail = why;
    ok = false;
  }
};

std::size_t level(const oracle::Rep& r) { return std::min(r.alpha.size(), r.beta.size()); }

std::size_t arrow_depth(const std::vector<ArrowAtom>& atoms) {
  std::size_t d = 0;
  for (const auto& a : atoms) d = std::max({d, a.alpha.length(), a.beta.length()});
  return d;
}

std::size_t cyl_depth(const std::vector<CylinderAtom>& atoms) {
  std::size_t d = 0;
  for (const auto& a : atoms) d = std::max(d, a.mu.length());
  return d;
}

bool same_pieces(const DirectedGraph& g, const std::set<oracle::Rep>& a,
                 const std::set<oracle::Rep>& b) {
  std::size_t top = 0;
  for (const auto* s : {&a, &b})
    for (const auto& r : *s) top = std::max(top, level(r));
  return oracle::refine(g, a, top) == oracle::refine(g, b, top);
}

std::set<oracle::Rep> pieces(const DirectedGraph& g, const std::vector<ArrowAtom>& atoms,
                             std::size_t m) {
  std::size_t need = arrow_depth(atoms) + 1;
  return oracle::reps(g, atoms, std::max(m, need));
}

template <class T>
std::string join(const std::vector<T>& v) {
  std::ostringstream out;
  out << '[';
  for (std::size_t i = 0; i < v.size(); ++i) out << (i ? "," : "") << v[i];
  out << ']';
  return out.str();
}

// ---------------------------------------------------------------- 1

Outcome determinants() {
  Outcome o;
  auto e2 = *builtin_graph("E2");
  auto e2m = *builtin_graph("E2minus");
  if (det(bowen_franks_matrix(e2)) != -1) o.fail("det for E2 is not -1");
  if (det(bowen_franks_matrix(e2m)) != 1) o.fail("det for E2minus is not 1");
  if (oracle::graph_invariants(e2).det != -1 || oracle::graph_invariants(e2m).det != 1)
    o.fail("cofactor oracle disagrees");
  if (!certify_distinct(e2, e2m).distinguished()) o.fail("E2 and E2minus not distinguished");
  return o;
}

// ---------------------------------------------------------------- 2

Outcome permutations() {
  Outcome o;
  for (std::size_t n = 1; n <= 6; ++n) {
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    do {
      // Cycle c0 -> c1 -> ... in the vertex order given by `order`.
      std::vector<std::string> vs;
      for (std::size_t i : order) vs.push_back("c" + std::to_string(i));
      std::vector<EdgeSpec> es;
      for (std::size_t i = 0; i < n; ++i)
        es.push_back({"e" + std::to_string(i), "c" + std::to_string(i),
                      "c" + std::to_string((i + 1) % n)});
      DirectedGraph g("cycle", vs, es);
      if (det(bowen_franks_matrix(g)) != 0)
        o.fail("nonzero det on a " + std::to_string(n) + "-cycle");
    } while (std::next_permutation(order.begin(), order.end()));
    if (bowen_franks(*builtin_graph("cycle" + std::to_string(n))).determinant != 0)
      o.fail("builtin cycle" + std::to_string(n));
  }
  return o;
}

// ---------------------------------------------------------------- 3

Outcome stabilization() {
  Outcome o;
  std::size_t pairs = 0;
  for (const auto& g0 : oracle::corpus()) {
    auto g = share(g0);
    StabilizationIso iso(g, 4);
    auto r = check_round_trip(iso, 4);
    if (!r.ok()) o.fail(g0.name() + ": " + r.witness.value_or("round trip"));

    Rng rng(101);
    SampleShape shape{3, 4};
    for (int t = 0; t < 1000; ++t) {
      auto [a, b] = random_composable_pair(*g, shape, rng);
      auto fa = iso.forward(a), fb = iso.forward(b);
      ++pairs;
      if (!composable(fa, fb) || iso.forward(multiply(a, b)) != multiply(fa, fb)) {
        o.fail(g0.name() + ": composition fails for " + to_string(a) + ", " + to_string(b));
      }
      if (iso.backward(fa) != a) o.fail(g0.name() + ": backward fails for " + to_string(a));
    }
  }
  if (o.ok) o.detail = std::to_string(pairs) + " pairs";
  return o;
}

// ---------------------------------------------------------------- 4

Outcome staged_unitary() {
  Outcome o;
  std::vector<std::pair<GraphPtr, std::string>> cases{
      {share(*builtin_graph("E2")), "Z(a)"},
      {share(*builtin_graph("E2minus")), "Z(p)"},
  };
  for (const auto& g : oracle::corpus()) cases.push_back({share(g), "all"});

  for (const auto& [g, text] : cases) {
    auto k = parse_clopen(g, text);
    for (std::size_t n = 1; n <= 5; ++n) {
      auto y = unitary_stages(k, n);
      for (const auto& c : y.check())
        if (!c.ok) o.fail(g->name() + " " + text + " n=" + std::to_string(n) + ": " + c.name);
    }
  }
  for (std::size_t c = 0; c < 2; ++c) {
    const auto& [g, text] = cases[c];
    auto k = parse_clopen(g, text);
    auto cyl = k.cylinders();
    StagedUnitary y(k);
    CornerIso iso(y);
    for (const auto& r : check_conjugation(iso, 1000, 211 + c))
      if (!r.ok) o.fail(g->name() + ": " + r.name + " " + r.detail);
    Rng rng(307 + c);
    SampleShape shape{3, 20};
    for (int t = 0; t < 1000; ++t) {
      auto [a, b] = random_composable_pair(*g, shape, rng);
      auto fa = iso.forward(a), fb = iso.forward(b);
      if (!oracle::point_in_paths(fa.x, cyl) || !oracle::point_in_paths(fa.y, cyl))
        o.fail(g->name() + ": image outside the corner for " + to_string(a));
      if (!composable(fa, fb) || iso.forward(multiply(a, b)) != multiply(fa, fb))
        o.fail(g->name() + ": not multiplicative at " + to_string(a));
      if (is_unit(a) != is_unit(fa)) o.fail(g->name() + ": units not preserved");
    }
  }
  return o;
}

// ---------------------------------------------------------------- 5

std::vector<ArrowAtom> random_operand(const DirectedGraph& g, std::mt19937_64& rng,
                                      bool indexed) {
  std::vector<ArrowAtom> atoms;
  std::size_t n = 1 + rng() % 2;
  for (std::size_t i = 0; i < n; ++i) {
    auto a = oracle::random_arrow(g, rng, 2);
    if (indexed) a.index = IndexPair{Natural(rng() % 3), Natural(rng() % 3)};
    atoms.push_back(std::move(a));
  }
  return atoms;
}

std::vector<CylinderAtom> random_cylinders(const DirectedGraph& g, std::mt19937_64& rng) {
  std::vector<CylinderAtom> atoms;
  std::size_t n = 1 + rng() % 3;
  for (std::size_t i = 0; i < n; ++i) atoms.push_back(oracle::random_cylinder(g, rng, 3));
  return atoms;
}

// Z(alpha) for each piece, as cylinder atoms.
std::vector<CylinderAtom> range_cells(const std::set<oracle::Rep>& s, bool range) {
  std::vector<CylinderAtom> out;
  for (const auto& r : s)
    out.push_back({Path{range ? r.alpha_start : r.beta_start, range ? r.alpha : r.beta}, {}});
  return out;
}

Outcome oracle_equivalence() {
  Outcome o;
  std::size_t checks = 0;
  for (const auto& g0 : oracle::corpus()) {
    auto g = share(g0);
    std::mt19937_64 rng(401);
    for (int t = 0; t < 1000; ++t) {
      auto check = [&](bool ok, const std::string& what) {
        ++checks;
        if (!ok) o.fail(g0.name() + " #" + std::to_string(t) + ": " + what);
      };

      // Clopen sets against the point oracle.
      auto ka = random_cylinders(*g, rng), la = random_cylinders(*g, rng);
      auto k = ClopenSet::from_atoms(g, ka), l = ClopenSet::from_atoms(g, la);
      std::size_t d = std::max(cyl_depth(ka), cyl_depth(la)) + 2;
      auto pk = oracle::mask(*g, d, ka), pl = oracle::mask(*g, d, la);
      std::vector<bool> u(pk.size()), n(pk.size()), m(pk.size());
      bool sub = true, dis = true;
      for (std::size_t c = 0; c < pk.size(); ++c) {
        u[c] = pk[c] || pl[c];
        n[c] = pk[c] && pl[c];
        m[c] = pk[c] && !pl[c];
        sub = sub && (!pk[c] || pl[c]);
        dis = dis && !n[c];
      }
      check(oracle::mask(*g, d, normalize(k).atoms()) == pk, "normalize");
      check(oracle::mask(*g, d, (k | l).atoms()) == u, "union");
      check(oracle::mask(*g, d, (k & l).atoms()) == n, "intersection");
      check(oracle::mask(*g, d, (k - l).atoms()) == m, "difference");
      check(k.subset_of(l) == sub, "subset");
      check(k.disjoint_from(l) == dis, "disjoint");
      check((k == l) == (pk == pl), "equality");

      // Bisections against the arrow oracle.
      bool indexed = t % 3 == 0;
      auto ua = random_operand(*g, rng, indexed), va = random_operand(*g, rng, indexed);
      auto bu = Bisection::from_atoms(g, ua), bv = Bisection::from_atoms(g, va);
      std::size_t lv = std::max(arrow_depth(ua), arrow_depth(va)) + 2;
      auto ru = pieces(*g, ua, lv), rv = pieces(*g, va, lv);

      auto lib = [&](const Bisection& b) { return pieces(*g, b.atoms(), lv); };
      check(same_pieces(*g, lib(compose(bu, bv)), oracle::compose_reps(*g, ru, rv, lv)), "compose");
      check(same_pieces(*g, lib(inverse(bu)), oracle::inverse_reps(ru)), "inverse");
      check(same_pieces(*g, lib(bu.normalized()), ru), "normalize bisection");

      std::set<oracle::Rep> ou, on, om;
      std::size_t top = lv;
      for (const auto& r : ru) top = std::max(top, level(r));
      for (const auto& r : rv) top = std::max(top, level(r));
      auto fu = oracle::refine(*g, ru, top), fv = oracle::refine(*g, rv, top);
      std::set_union(fu.begin(), fu.end(), fv.begin(), fv.end(), std::inserter(ou, ou.end()));
      std::set_intersection(fu.begin(), fu.end(), fv.begin(), fv.end(),
                            std::inserter(on, on.end()));
      std::set_difference(fu.begin(), fu.end(), fv.begin(), fv.end(), std::inserter(om, om.end()));
      check(same_pieces(*g, lib(bu | bv), ou), "bisection union");
      check(same_pieces(*g, lib(bu & bv), on), "bisection intersection");
      check(same_pieces(*g, lib(bu - bv), om), "bisection difference");
      check(bu.subset_of(bv) == std::includes(fv.begin(), fv.end(), fu.begin(), fu.end()),
            "bisection subset");

      std::size_t md = 0;
      for (const auto& r : fu) md = std::max({md, r.alpha.size(), r.beta.size()});
      md += 1;
      auto rng_cells = range_cells(fu, true), src_cells = range_cells(fu, false);
      check(oracle::mask(*g, md, range_of(bu).atoms()) == oracle::mask(*g, md, rng_cells), "range");
      check(oracle::mask(*g, md, source_of(bu).atoms()) == oracle::mask(*g, md, src_cells),
            "source");
    }
  }
  if (o.ok) o.detail = std::to_string(checks) + " comparisons";
  return o;
}

// ---------------------------------------------------------------- 6

Outcome fullness() {
  Outcome o;
  std::size_t sets = 0;
  for (const auto& g0 : oracle::corpus()) {
    auto g = share(g0);
    std::vector<CylinderAtom> basic, shallow;
    for (std::size_t len = 0; len <= 2; ++len) {
      for (const auto& c : enumerate_boundary(*g, len)) {
        if (c.path.length() != len) continue;
        std::vector<EdgeId> out(g->out_edges(end_vertex(*g, c.path)).begin(),
                                g->out_edges(end_vertex(*g, c.path)).end());
        for (std::size_t mask = 0; mask < (std::size_t{1} << out.size()); ++mask) {
          CylinderAtom a{c.path, {}};
          for (std::size_t b = 0; b < out.size(); ++b)
            if (mask >> b & 1) a.exclude.push_back(out[b]);
          std::sort(a.exclude.begin(), a.exclude.end());
          basic.push_back(a);
          if (len <= 1) shallow.push_back(a);
        }
      }
    }
    std::vector<std::vector<CylinderAtom>> families;
    for (const auto& a : basic) families.push_back({a});
    for (std::size_t i = 0; i < shallow.size(); ++i)
      for (std::size_t j = i + 1; j < shallow.size(); ++j) families.push_back({shallow[i], shallow[j]});
    for (const auto& f : families) {
      ++sets;
      auto k = ClopenSet::from_atoms(g, f);
      bool lib = is_full(*g, k);
      if (lib != oracle::orbit_full(*g, f, 6)) o.fail(g0.name() + ": " + to_string(k));
      auto c = check_fullness(k);
      if (c.full != lib || (!c.full && !c.witness)) o.fail(g0.name() + ": witness");
    }
  }
  if (o.ok) o.detail = std::to_string(sets) + " sets";
  return o;
}

// ---------------------------------------------------------------- 7

Outcome move_invariance() {
  Outcome o;
  std::size_t applied = 0;
  for (const auto& g : oracle::corpus()) {
    auto before = oracle::graph_invariants(g);
    for (const auto& m : legal_moves(g)) {
      auto h = apply_move(g, m);
      ++applied;
      auto after = oracle::graph_invariants(h);
      if (!(after == before)) {
        o.fail(g.name() + " " + to_string(m) + ": det " + before.det.get_str() + " -> " +
               after.det.get_str() + ", factors " + join(before.factors) + " -> " +
               join(after.factors));
      }
    }
  }
  if (o.ok) o.detail = std::to_string(applied) + " moves";
  return o;
}

// ---------------------------------------------------------------- 8

Outcome smith() {
  Outcome o;
  std::mt19937_64 rng(8);
  for (int t = 0; t < 100; ++t) {
    std::size_t r = 1 + rng() % 5, c = 1 + rng() % 5;
    auto m = oracle::random_matrix(rng, r, c, -9, 9);
    auto s = smith_normal_form(m);
    const std::string tag = "matrix " + std::to_string(t) + " (" + to_string(m) + ")";
    if (s.U * m * s.V != s.D) o.fail(tag + ": U M V != D");
    if (!s.D.is_diagonal()) o.fail(tag + ": D not diagonal");
    auto du = oracle::cofactor_det(s.U), dv = oracle::cofactor_det(s.V);
    if ((du != 1 && du != -1) || (dv != 1 && dv != -1)) o.fail(tag + ": not unimodular");
    auto d = s.diagonal();
    for (std::size_t i = 0; i + 1 < d.size(); ++i) {
      if (d[i] < 0) o.fail(tag + ": negative factor");
      if (d[i] == 0 ? d[i + 1] != 0 : d[i + 1] % d[i] != 0) o.fail(tag + ": divisibility");
    }
    if (d != oracle::invariant_factors(m)) o.fail(tag + ": factors differ from minors");
    if (r == c) {
      Integer prod = 1;
      for (const auto& x : d) prod *= x;
      Integer dm = oracle::cofactor_det(m);
      if (dm != 0 && abs(dm) != prod) o.fail(tag + ": |det| != product");
      if (det(m) != dm) o.fail(tag + ": det");
    }
  }
  return o;
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    double limit;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria{
      {1, "determinant reproduction", 1, determinants},
      {2, "permutation case", 1, permutations},
      {3, "stabilization isomorphism", 30, stabilization},
      {4, "staged unitary and conjugation", 60, staged_unitary},
      {5, "clopen and bisection oracle equivalence", 60, oracle_equivalence},
      {6, "fullness decision", 30, fullness},
      {7, "move invariance", 30, move_invariance},
      {8, "Smith normal form", 10, smith},
  };
  bool all = true;
  for (const auto& c : criteria) {
    auto t0 = std::chrono::steady_clock::now();
    Outcome out;
    try {
      out = c.run();
    } catch (const std::exception& e) {
      out.fail(std::string("exception: ") + e.what());
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    bool in_time = secs < c.limit;
    bool pass = out.ok && in_time;
    all = all && pass;
    char timing[64];
    std::snprintf(timing, sizeof timing, "%.2fs / %.0fs", secs, c.limit);
    std::cout << "criterion " << c.id << ": " << (pass ? "PASS" : "FAIL") << "  " << c.name
              << "  (" << timing << ")";
    if (!in_time) std::cout << "  over time limit";
    if (!out.detail.empty()) std::cout << "  " << out.detail;
    std::cout << std::endl;
  }
  return all ? 0 : 1;
}
