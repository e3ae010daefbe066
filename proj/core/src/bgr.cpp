#include "groupoidkit/bgr.hpp"

#include "groupoidkit/sampling.hpp"

#include <algorithm>
#include <map>
#include <queue>
#include <sstream>

namespace groupoidkit {

namespace {

bool overlapping(const Path& a, const Path& b) { return is_prefix(a, b) || is_prefix(b, a); }

Natural nat(std::size_t n) { return Natural(static_cast<unsigned long>(n)); }

}  // namespace

std::vector<Bisection> bisection_cover(const ClopenSet& k) {
  const GraphPtr& gp = k.graph_ptr();
  const DirectedGraph& g = *gp;
  Fullness full = check_fullness(k);
  if (!full.full) throw NotFull(*full.witness);

  // For each saturated vertex w, the least (length, then lexicographic) path
  // that extends a cylinder of K and ends at w.
  std::vector<std::optional<Path>> beta(g.vertex_count());
  using Item = std::pair<std::size_t, Path>;
  std::priority_queue<Item, std::vector<Item>, std::greater<Item>> queue;
  for (const auto& kappa : k.cylinders()) queue.push({kappa.length(), kappa});
  while (!queue.empty()) {
    Path p = queue.top().second;
    queue.pop();
    VertexId w = end_vertex(g, p);
    if (beta[w]) continue;
    beta[w] = p;
    for (EdgeId e : g.out_edges(w)) queue.push({p.length() + 1, extended(p, e)});
  }

  // Cut every boundary path at its first saturated vertex.
  std::vector<ArrowAtom> atoms;
  std::vector<Path> stack;
  for (VertexId v = g.vertex_count(); v-- > 0;) stack.push_back(vertex_path(v));
  while (!stack.empty()) {
    Path alpha = std::move(stack.back());
    stack.pop_back();
    VertexId w = end_vertex(g, alpha);
    if (beta[w]) {
      atoms.push_back({alpha, *beta[w], {}, std::nullopt});
      continue;
    }
    if (g.is_sink(w)) throw NotFull(BoundaryPoint::finite(g, alpha));
    auto outs = g.out_edges(w);
    for (auto it = outs.rbegin(); it != outs.rend(); ++it) stack.push_back(extended(alpha, *it));
  }

  // Ranges are already disjoint; group atoms so sources are too.
  std::vector<std::vector<ArrowAtom>> groups;
  for (auto& a : atoms) {
    auto fits = [&](const std::vector<ArrowAtom>& grp) {
      return std::none_of(grp.begin(), grp.end(),
                          [&](const ArrowAtom& b) { return overlapping(a.beta, b.beta); });
    };
    auto it = std::find_if(groups.begin(), groups.end(), fits);
    if (it == groups.end()) {
      groups.push_back({std::move(a)});
    } else {
      it->push_back(std::move(a));
    }
  }
  std::vector<Bisection> out;
  for (auto& grp : groups) out.push_back(Bisection::from_atoms(gp, std::move(grp)).normalized());
  return out;
}

Bisection isometry_W(const ClopenSet& k) {
  auto cover = bisection_cover(k);
  Bisection w(k.graph_ptr());
  for (std::size_t i = 0; i < cover.size(); ++i) {
    w = w | cross_with_R(cover[i], {IndexPair{1, nat(i + 1)}});
  }
  return w;
}

IndexedClopen complement(const IndexedClopen& s) {
  return IndexedClopen::product(ClopenSet::whole(s.graph_ptr()), {IndexPattern::all()}) - s;
}

IndexedClopen stage_range(const GraphPtr& g, const std::vector<StageAtom>& atoms) {
  std::vector<IndexedClopen::Piece> pieces;
  for (const auto& a : atoms) {
    pieces.push_back({ClopenSet::cylinder(g, a.alpha), a.row.image(a.domain)});
  }
  return IndexedClopen(g, std::move(pieces));
}

IndexedClopen stage_source(const GraphPtr& g, const std::vector<StageAtom>& atoms) {
  std::vector<IndexedClopen::Piece> pieces;
  for (const auto& a : atoms) {
    pieces.push_back({ClopenSet::cylinder(g, a.beta), a.col.image(a.domain)});
  }
  return IndexedClopen(g, std::move(pieces));
}

std::string to_string(const StageAtom& a, const DirectedGraph& g) {
  return "(" + to_string(g, a.alpha) + "|" + to_string(g, a.beta) + ")@(" + to_string(a.row) +
         "," + to_string(a.col) + ") k in " + to_string(a.domain);
}

// ---------------------------------------------------------------- stages

StagedUnitary::StagedUnitary(ClopenSet k, std::size_t max_rounds)
    : corner_(k.normalized()), cover_(bisection_cover(corner_)), max_rounds_(max_rounds) {}

IndexedClopen StagedUnitary::stage_range(std::size_t j) const {
  return groupoidkit::stage_range(graph_ptr(), stage(j));
}

IndexedClopen StagedUnitary::stage_source(std::size_t j) const {
  return groupoidkit::stage_source(graph_ptr(), stage(j));
}

void StagedUnitary::ensure_rounds(std::size_t n) {
  if (n > max_rounds_) {
    throw StageBudgetExhausted("stage budget exhausted: " + std::to_string(n) +
                               " rounds needed, budget is " + std::to_string(max_rounds_));
  }
  while (rounds() < n) build_round();
}

namespace {

// Atoms differing only in their domain become one atom per simplified domain.
std::vector<StageAtom> merge_domains(std::vector<StageAtom> atoms) {
  std::vector<StageAtom> out;
  std::vector<IndexSet> domains;
  for (auto& a : atoms) {
    auto it = std::find_if(out.begin(), out.end(), [&](const StageAtom& b) {
      return b.alpha == a.alpha && b.beta == a.beta && b.row == a.row && b.col == a.col;
    });
    if (it == out.end()) {
      domains.push_back({a.domain});
      out.push_back(std::move(a));
    } else {
      domains[static_cast<std::size_t>(it - out.begin())].push_back(a.domain);
    }
  }
  std::vector<StageAtom> merged;
  for (std::size_t i = 0; i < out.size(); ++i) {
    for (auto& q : simplify(std::move(domains[i]))) {
      merged.push_back({out[i].alpha, out[i].beta, out[i].row, out[i].col, std::move(q)});
    }
  }
  return merged;
}

bool ranges_meet(const StageAtom& a, const StageAtom& b) {
  return overlapping(a.alpha, b.alpha) &&
         !intersect(a.row.image(a.domain), b.row.image(b.domain)).empty();
}

bool sources_meet(const StageAtom& a, const StageAtom& b) {
  return overlapping(a.beta, b.beta) &&
         !intersect(a.col.image(a.domain), b.col.image(b.domain)).empty();
}

}  // namespace

void StagedUnitary::build_round() {
  const GraphPtr& gp = graph_ptr();
  const DirectedGraph& g = *gp;
  const std::size_t n = rounds();  // builds Y_{2n+1} and Y_{2n+2} over N_{n+1}
  const auto var = IndexTemplate::variable();
  const auto here = IndexTemplate::constant(nat(n));

  IndexedClopen todo =
      IndexedClopen::product(ClopenSet::whole(gp), {IndexPattern::block(n + 1)});
  if (n > 0) todo = todo - stage_range(2 * n);
  todo = todo.disjoint();

  std::vector<StageAtom> odd;
  const auto row = IndexTemplate::paired(here, var);
  for (std::size_t l = 0; l < cover_.size(); ++l) {
    const auto col =
        IndexTemplate::paired(here, IndexTemplate::paired(var, IndexTemplate::constant(nat(l + 1))));
    for (const auto& node : cover_[l].atoms()) {
      for (const auto& piece : todo.pieces()) {
        IndexSet domain = row.preimage(piece.index);
        if (domain.empty()) continue;
        for (const auto& kappa : piece.set.cylinders()) {
          Path alpha, beta;
          if (is_prefix(kappa, node.alpha)) {
            alpha = node.alpha;
            beta = node.beta;
          } else if (is_prefix(node.alpha, kappa)) {
            alpha = kappa;
            beta = concat(g, node.beta, drop_front(g, kappa, node.alpha.length()));
          } else {
            continue;
          }
          for (const auto& q : domain) odd.push_back({alpha, beta, row, col, q});
        }
      }
    }
  }
  stages_.push_back(merge_domains(std::move(odd)));

  IndexedClopen rest =
      IndexedClopen::product(corner_, {IndexPattern::block(n + 1)}) - stage_source(2 * n + 1);
  rest = rest.disjoint();
  std::vector<StageAtom> even;
  const auto up = IndexTemplate::paired(IndexTemplate::constant(nat(n + 1)), var);
  for (const auto& piece : rest.pieces()) {
    IndexSet domain = row.preimage(piece.index);
    for (const auto& kappa : piece.set.cylinders()) {
      for (const auto& q : domain) even.push_back({kappa, kappa, up, row, q});
    }
  }
  stages_.push_back(merge_domains(std::move(even)));
}

namespace {

IndexedClopen blocks_upto(const ClopenSet& c, std::size_t n) {
  IndexSet s;
  for (std::size_t i = 1; i <= n; ++i) s.push_back(IndexPattern::block(i));
  return IndexedClopen::product(c, s);
}

}  // namespace

std::vector<CheckResult> StagedUnitary::check() const {
  std::vector<CheckResult> out;
  const GraphPtr& gp = graph_ptr();
  const ClopenSet whole = ClopenSet::whole(gp);
  std::vector<IndexedClopen> ranges, sources;
  for (std::size_t j = 1; j <= stage_count(); ++j) {
    ranges.push_back(stage_range(j));
    sources.push_back(stage_source(j));
  }

  for (std::size_t j = 1; j <= stage_count(); ++j) {
    const auto& atoms = stage(j);
    CheckResult c{"Y" + std::to_string(j) + " is a bisection", true, ""};
    for (std::size_t a = 0; a < atoms.size() && c.ok; ++a) {
      for (std::size_t b = a + 1; b < atoms.size() && c.ok; ++b) {
        if (ranges_meet(atoms[a], atoms[b])) {
          c = {c.name, false, "ranges of atoms " + std::to_string(a) + " and " +
                                  std::to_string(b) + " overlap"};
        } else if (sources_meet(atoms[a], atoms[b])) {
          c = {c.name, false, "sources of atoms " + std::to_string(a) + " and " +
                                  std::to_string(b) + " overlap"};
        }
      }
    }
    out.push_back(std::move(c));
  }

  CheckResult dr{"stage ranges pairwise disjoint", true, ""};
  CheckResult ds{"stage sources pairwise disjoint", true, ""};
  for (std::size_t a = 1; a <= stage_count(); ++a) {
    for (std::size_t b = a + 1; b <= stage_count(); ++b) {
      for (const auto& x : stage(a)) {
        for (const auto& y : stage(b)) {
          if (dr.ok && ranges_meet(x, y)) {
            dr.ok = false;
            dr.detail = "r(Y" + std::to_string(a) + ") meets r(Y" + std::to_string(b) + ")";
          }
          if (ds.ok && sources_meet(x, y)) {
            ds.ok = false;
            ds.detail = "s(Y" + std::to_string(a) + ") meets s(Y" + std::to_string(b) + ")";
          }
        }
      }
    }
  }
  out.push_back(std::move(dr));
  out.push_back(std::move(ds));

  IndexedClopen ur(gp), us(gp);
  for (std::size_t n = 1; n <= rounds(); ++n) {
    ur = ur | ranges[2 * n - 2];
    us = us | sources[2 * n - 2];
    const std::string tag = " (n=" + std::to_string(n) + ")";
    out.push_back({"r(Y1..Y" + std::to_string(2 * n - 1) + ") = boundary x N_1..N_" +
                       std::to_string(n) + tag,
                   ur == blocks_upto(whole, n), ""});
    out.push_back({"s(Y1..Y" + std::to_string(2 * n - 1) + ") in K x N_1..N_" +
                       std::to_string(n) + tag,
                   us.subset_of(blocks_upto(corner_, n)), ""});
    ur = ur | ranges[2 * n - 1];
    us = us | sources[2 * n - 1];
    out.push_back({"r(Y1..Y" + std::to_string(2 * n) + ") in boundary x N_1..N_" +
                       std::to_string(n + 1) + tag,
                   ur.subset_of(blocks_upto(whole, n + 1)), ""});
    out.push_back({"s(Y1..Y" + std::to_string(2 * n) + ") = K x N_1..N_" + std::to_string(n) + tag,
                   us == blocks_upto(corner_, n), ""});
  }
  return out;
}

GroupoidElement StagedUnitary::element_with_range(const BoundaryPoint& x, const Natural& i) {
  ensure_rounds(block_of(i));
  for (const auto& st : stages_) {
    for (const auto& a : st) {
      if (!x.has_prefix(a.alpha)) continue;
      auto k = a.row.solve(i);
      if (!k || !a.domain.contains(*k)) continue;
      auto y = x.shifted(a.alpha.length()).prepended(a.beta);
      return {x, a.degree(), std::move(y), IndexPair{i, a.col.apply(*k)}};
    }
  }
  throw std::logic_error("staged unitary does not cover (" + to_string(x) + ", " + i.get_str() +
                         ")");
}

GroupoidElement StagedUnitary::element_with_source(const BoundaryPoint& y, const Natural& j) {
  ensure_rounds(block_of(j));
  for (const auto& st : stages_) {
    for (const auto& a : st) {
      if (!y.has_prefix(a.beta)) continue;
      auto k = a.col.solve(j);
      if (!k || !a.domain.contains(*k)) continue;
      auto x = y.shifted(a.beta.length()).prepended(a.alpha);
      return {std::move(x), a.degree(), y, IndexPair{a.row.apply(*k), j}};
    }
  }
  throw Error("(" + to_string(y) + ", " + j.get_str() + ") is not in K x N");
}

std::string StagedUnitary::dump() const {
  std::ostringstream out;
  for (std::size_t j = 1; j <= stage_count(); ++j) {
    for (const auto& a : stage(j)) out << 'Y' << j << ": " << to_string(a, corner_.graph()) << '\n';
  }
  return out.str();
}

StagedUnitary unitary_stages(const ClopenSet& k, std::size_t n) {
  StagedUnitary y(k, std::max<std::size_t>(n, 16));
  y.ensure_rounds(n);
  return y;
}

// ---------------------------------------------------------------- conjugation

GroupoidElement CornerIso::forward(const GroupoidElement& g) {
  if (!g.index) throw GraphError("conjugation needs an element of G x R");
  auto a = y_->element_with_range(g.x, g.index->row);
  auto b = y_->element_with_range(g.y, g.index->col);
  return multiply(multiply(inverse(a), g), b);
}

GroupoidElement CornerIso::backward(const GroupoidElement& h) {
  if (!h.index) throw GraphError("conjugation needs an element of G x R");
  auto a = y_->element_with_source(h.x, h.index->row);
  auto b = y_->element_with_source(h.y, h.index->col);
  return multiply(multiply(a, h), inverse(b));
}

std::vector<CheckResult> check_conjugation(CornerIso& iso, std::size_t samples,
                                           std::uint64_t seed) {
  const ClopenSet& k = iso.unitary().corner();
  const DirectedGraph& g = k.graph();
  Rng rng(seed);
  SampleShape shape{3, 20};
  CheckResult hom{"conjugation is multiplicative", true, ""};
  CheckResult lands{"conjugation lands in the corner", true, ""};
  CheckResult inv{"conjugation is inverted by its backward map", true, ""};
  for (std::size_t s = 0; s < samples; ++s) {
    auto [a, b] = random_composable_pair(g, shape, rng);
    auto fa = iso.forward(a);
    auto fb = iso.forward(b);
    if (hom.ok && !(iso.forward(multiply(a, b)) == multiply(fa, fb))) {
      hom = {hom.name, false, "g = " + to_string(a) + ", h = " + to_string(b)};
    }
    if (lands.ok && !(k.contains(fa.x) && k.contains(fa.y) && is_groupoid_element(fa))) {
      lands = {lands.name, false, to_string(a) + " -> " + to_string(fa)};
    }
    if (inv.ok && !(iso.backward(fa) == a)) inv = {inv.name, false, to_string(a)};
  }
  return {hom, lands, inv};
}

// ---------------------------------------------------------------- Kakutani

namespace {

bool is_unit_set(const Bisection& u) {
  return u.normalized().atoms().empty() || u.subset_of(Bisection::identity(range_of(u)));
}

bool in_corner(const Bisection& u, const ClopenSet& c) {
  return range_of(u).subset_of(c) && source_of(u).subset_of(c);
}

}  // namespace

KakutaniCertificate kakutani_check(const KakutaniIso& iso) {
  KakutaniCertificate cert;
  auto add = [&](std::string name, bool ok, std::string detail = "") {
    cert.checks.push_back({std::move(name), ok, std::move(detail)});
    return ok;
  };

  for (std::size_t i = 0; i < iso.generators.size(); ++i) {
    const auto& [u, v] = iso.generators[i];
    if (!verify_bisection(u).ok || !verify_bisection(v).ok) {
      throw GraphError("malformed iso: generator " + std::to_string(i) + " or its image is not a bisection");
    }
  }

  auto fx = check_fullness(iso.x);
  auto fy = check_fullness(iso.y);
  bool ok = add("X is full", fx.full, fx.witness ? to_string(*fx.witness) : "");
  ok = add("Y is full", fy.full, fy.witness ? to_string(*fy.witness) : "") && ok;
  if (!fx.full) cert.witness = fx.witness;
  else if (!fy.full) cert.witness = fy.witness;
  if (!ok) return cert;

  bool inside = true;
  ClopenSet cover_x(iso.x.graph_ptr()), cover_y(iso.y.graph_ptr());
  for (const auto& [u, v] : iso.generators) {
    inside = inside && in_corner(u, iso.x) && in_corner(v, iso.y);
    cover_x = cover_x | range_of(u);
    cover_y = cover_y | range_of(v);
  }
  ok = add("generators lie in the corners", inside) && ok;
  ok = add("generator ranges cover X", cover_x == iso.x) && ok;
  ok = add("generator ranges cover Y", cover_y == iso.y) && ok;

  // Words of length 1 and 2 in the generators and their inverses.
  std::vector<std::pair<Bisection, Bisection>> letters;
  for (const auto& [u, v] : iso.generators) {
    letters.push_back({u, v});
    letters.push_back({inverse(u), inverse(v)});
  }
  std::vector<std::pair<Bisection, Bisection>> words = letters;
  for (const auto& [a, a2] : letters) {
    for (const auto& [b, b2] : letters) words.push_back({compose(a, b), compose(a2, b2)});
  }

  bool units = true, empties = true, equalities = true, inclusions = true;
  std::string where;
  for (std::size_t w = 0; w < words.size(); ++w) {
    const auto& [s, t] = words[w];
    if (is_unit_set(s) != is_unit_set(t)) units = false;
    if (s.empty() != t.empty()) empties = false;
    for (const auto& [u, v] : iso.generators) {
      if ((s == u) != (t == v)) equalities = false;
      if (s.subset_of(u) != t.subset_of(v)) inclusions = false;
      if (u.subset_of(s) != v.subset_of(t)) inclusions = false;
    }
    if (where.empty() && !(units && empties && equalities && inclusions)) {
      where = "word " + std::to_string(w);
    }
  }
  ok = add("units preserved on words of length <= 2", units, units ? "" : where) && ok;
  ok = add("emptiness preserved on words of length <= 2", empties, empties ? "" : where) && ok;
  ok = add("equalities preserved on words of length <= 2", equalities, equalities ? "" : where) &&
       ok;
  ok = add("inclusions preserved on words of length <= 2", inclusions, inclusions ? "" : where) &&
       ok;
  cert.ok = ok;
  return cert;
}

KakutaniIso iso_from_graph_map(const ClopenSet& x, const GraphPtr& f,
                               const std::vector<VertexId>& vertex_map,
                               const std::vector<EdgeId>& edge_map, std::size_t depth) {
  const DirectedGraph& e = x.graph();
  if (vertex_map.size() != e.vertex_count() || edge_map.size() != e.edge_count() ||
      e.vertex_count() != f->vertex_count() || e.edge_count() != f->edge_count()) {
    throw GraphError("graph map has the wrong size");
  }
  for (EdgeId id = 0; id < e.edge_count(); ++id) {
    const Edge& a = e.edge(id);
    const Edge& b = f->edge(edge_map.at(id));
    if (vertex_map[a.source] != b.source || vertex_map[a.range] != b.range) {
      throw GraphError("edge map is not compatible with the vertex map");
    }
  }
  auto image = [&](const Path& p) {
    Path q{vertex_map[p.start], {}};
    for (EdgeId id : p.edges) q.edges.push_back(edge_map[id]);
    return q;
  };

  std::vector<Path> paths;
  std::vector<Path> frontier;
  for (VertexId v = 0; v < e.vertex_count(); ++v) frontier.push_back(vertex_path(v));
  for (std::size_t d = 0; d <= depth; ++d) {
    std::vector<Path> next;
    for (const auto& p : frontier) {
      if (ClopenSet::cylinder(x.graph_ptr(), p).subset_of(x)) paths.push_back(p);
      for (EdgeId id : e.out_edges(end_vertex(e, p))) next.push_back(extended(p, id));
    }
    frontier = std::move(next);
  }

  KakutaniIso iso{x, ClopenSet(f), {}};
  std::vector<Path> ys;
  for (const auto& mu : x.cylinders()) ys.push_back(image(mu));
  iso.y = ClopenSet::from_paths(f, ys);
  for (const auto& a : paths) {
    for (const auto& b : paths) {
      if (end_vertex(e, a) != end_vertex(e, b)) continue;
      iso.generators.push_back({Bisection::single(x.graph_ptr(), a, b).normalized(),
                                Bisection::single(f, image(a), image(b)).normalized()});
    }
  }
  return iso;
}

}  // namespace groupoidkit
