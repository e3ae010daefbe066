#include "groupoidkit/stabilization.hpp"

#include <algorithm>
#include <stdexcept>

#include "groupoidkit/error.hpp"

namespace groupoidkit {

HeadedGraph::HeadedGraph(GraphPtr base)
    : base_(std::move(base)),
      heads_(base_->vertex_count(), false),
      tails_(base_->vertex_count(), false) {}

std::vector<VertexId> HeadedGraph::heads() const {
  std::vector<VertexId> out;
  for (VertexId v = 0; v < heads_.size(); ++v)
    if (heads_[v]) out.push_back(v);
  return out;
}

std::vector<VertexId> HeadedGraph::tails() const {
  std::vector<VertexId> out;
  for (VertexId v = 0; v < tails_.size(); ++v)
    if (tails_[v]) out.push_back(v);
  return out;
}

void HeadedGraph::add_head(VertexId v) {
  if (tails_.at(v) || heads_.at(v)) throw GraphError("vertex already carries an appendage");
  heads_.at(v) = true;
}

void HeadedGraph::add_tail(VertexId v) {
  if (tails_.at(v) || heads_.at(v)) throw GraphError("vertex already carries an appendage");
  if (!base_->is_sink(v)) throw GraphError("tails can only be added at sinks");
  tails_.at(v) = true;
}

GraphPtr HeadedGraph::truncate(std::size_t depth) const {
  const DirectedGraph& g = *base_;
  std::vector<std::string> vertices = g.vertices();
  std::vector<EdgeSpec> edges = g.edge_specs();
  for (VertexId v = 0; v < g.vertex_count(); ++v) {
    const std::string& name = g.vertex_name(v);
    if (!heads_[v] && !tails_[v]) continue;
    const char sep = heads_[v] ? '~' : '^';
    for (std::size_t i = 1; i <= depth; ++i) {
      std::string here = name + sep + std::to_string(i);
      std::string prev = i == 1 ? name : name + sep + std::to_string(i - 1);
      vertices.push_back(here);
      if (heads_[v]) {
        edges.push_back({"f~" + std::to_string(i) + "~" + name, here, prev});
      } else {
        edges.push_back({"t~" + std::to_string(i) + "~" + name, prev, here});
      }
    }
  }
  return share(DirectedGraph(g.name() + "-window", std::move(vertices), std::move(edges)));
}

HeadedGraph stabilize(const GraphPtr& e) {
  HeadedGraph h(e);
  for (VertexId v = 0; v < e->vertex_count(); ++v) h.add_head(v);
  return h;
}

HeadedGraph desingularize(const GraphPtr& e) {
  HeadedGraph h(e);
  for (VertexId v = 0; v < e->vertex_count(); ++v)
    if (e->is_sink(v)) h.add_tail(v);
  return h;
}

HeadedGraph add_tail(HeadedGraph h, VertexId sink) {
  h.add_tail(sink);
  return h;
}

IndexPair pair_indices(const IndexPair& a, const IndexPair& b) {
  return {pair(a.row, b.row), pair(a.col, b.col)};
}

std::pair<IndexPair, IndexPair> unpair_indices(const IndexPair& c) {
  auto [i, p] = unpair(c.row);
  auto [j, q] = unpair(c.col);
  return {IndexPair{i, j}, IndexPair{p, q}};
}

// ---------------------------------------------------------------- the iso

namespace {

BoundaryPoint rebase(const DirectedGraph& g, const BoundaryPoint& x) {
  if (x.is_finite()) return BoundaryPoint::finite(g, x.prefix());
  return BoundaryPoint::periodic(g, x.prefix(), x.cycle());
}

}  // namespace

StabilizationIso::StabilizationIso(GraphPtr e, std::size_t depth)
    : base_(std::move(e)), window_(stabilize(base_).truncate(depth)), depth_(depth) {
  const DirectedGraph& g = *base_;
  head_edge_.resize(g.vertex_count());
  level_.resize(window_->vertex_count());
  for (VertexId v = 0; v < g.vertex_count(); ++v) {
    level_[v] = {v, 0};
    for (std::size_t i = 1; i <= depth; ++i) {
      auto id = window_->find_edge("f~" + std::to_string(i) + "~" + g.vertex_name(v));
      head_edge_[v].push_back(*id);
      level_[window_->edge(*id).source] = {v, i};
    }
  }
}

std::size_t StabilizationIso::to_index(const Natural& n) const {
  if (n < 0 || n > static_cast<unsigned long>(depth_)) {
    throw std::out_of_range("index " + n.get_str() + " exceeds the window depth " +
                            std::to_string(depth_));
  }
  return n.get_ui();
}

Path StabilizationIso::head_path(VertexId v, std::size_t i) const {
  if (i > depth_) throw std::out_of_range("head level exceeds the window depth");
  if (i == 0) return vertex_path(v);
  Path p{window_->edge(head_edge_.at(v)[i - 1]).source, {}};
  for (std::size_t l = i; l >= 1; --l) p.edges.push_back(head_edge_[v][l - 1]);
  return p;
}

Path StabilizationIso::lift(const Path& alpha, std::size_t i) const {
  return concat(*window_, head_path(alpha.start, i), alpha);
}

std::pair<Path, std::size_t> StabilizationIso::lower(const Path& p) const {
  auto [v, i] = level_.at(p.start);
  if (p.length() < i) throw GraphError("window path ends inside a head");
  return {drop_front(*window_, p, i), i};
}

std::pair<BoundaryPoint, std::size_t> StabilizationIso::phi(const BoundaryPoint& x) const {
  if (&x.graph() != window_.get()) throw GraphError("point does not lie in the stabilized graph");
  std::size_t i = level_.at(x.start()).second;
  return {rebase(*base_, x.shifted(i)), i};
}

BoundaryPoint StabilizationIso::phi_inverse(const BoundaryPoint& x, std::size_t i) const {
  if (&x.graph() != base_.get()) throw GraphError("point does not lie in the base graph");
  return rebase(*window_, x).prepended(head_path(x.start(), i));
}

ArrowAtom StabilizationIso::forward(const ArrowAtom& a) const {
  if (!a.index) throw GraphError("atom of G x R expected");
  ArrowAtom out{lift(a.alpha, to_index(a.index->row)), lift(a.beta, to_index(a.index->col)),
                a.exclude, std::nullopt};
  return out;
}

std::optional<ArrowAtom> StabilizationIso::backward(const ArrowAtom& a) const {
  if (a.index) throw GraphError("unindexed window atom expected");
  Path gamma = a.alpha;
  Path delta = a.beta;
  std::vector<EdgeId> exclude = a.exclude;
  // Head vertices emit exactly one edge, so Z(gamma, delta) = Z(gamma f, delta f).
  while (level_.at(end_vertex(*window_, gamma)).second > 0) {
    EdgeId f = window_->out_edges(end_vertex(*window_, gamma)).front();
    if (std::binary_search(exclude.begin(), exclude.end(), f)) return std::nullopt;
    exclude.clear();
    gamma.edges.push_back(f);
    delta.edges.push_back(f);
  }
  auto [alpha, i] = lower(gamma);
  auto [beta, j] = lower(delta);
  return ArrowAtom{alpha, beta, exclude,
                   IndexPair{Natural(static_cast<unsigned long>(i)),
                             Natural(static_cast<unsigned long>(j))}};
}

Bisection StabilizationIso::forward(const Bisection& u) const {
  if (u.graph_ptr() != base_) throw MixedGraphError();
  std::vector<ArrowAtom> atoms;
  for (const auto& a : u.atoms()) atoms.push_back(forward(a));
  return Bisection::from_atoms(window_, std::move(atoms));
}

Bisection StabilizationIso::backward(const Bisection& u) const {
  if (u.graph_ptr() != window_) throw MixedGraphError();
  std::vector<ArrowAtom> atoms;
  for (const auto& a : u.atoms()) {
    if (auto b = backward(a)) atoms.push_back(std::move(*b));
  }
  if (atoms.empty()) return Bisection(base_);
  return Bisection::from_atoms(base_, std::move(atoms));
}

GroupoidElement StabilizationIso::forward(const GroupoidElement& g) const {
  if (!g.index) throw GraphError("element of G x R expected");
  std::size_t i = to_index(g.index->row);
  std::size_t j = to_index(g.index->col);
  return {phi_inverse(g.x, i), g.degree + static_cast<long>(i) - static_cast<long>(j),
          phi_inverse(g.y, j), std::nullopt};
}

GroupoidElement StabilizationIso::backward(const GroupoidElement& g) const {
  if (g.index) throw GraphError("element of the stabilized graph expected");
  auto [x, i] = phi(g.x);
  auto [y, j] = phi(g.y);
  return {x, g.degree - static_cast<long>(i) + static_cast<long>(j), y,
          IndexPair{Natural(static_cast<unsigned long>(i)), Natural(static_cast<unsigned long>(j))}};
}

ArrowAtom StabilizationIso::absorb(const ArrowAtom& window_atom, const IndexPair& outer) const {
  auto b = backward(window_atom);
  if (!b) throw GraphError("empty window atom");
  b->index = pair_indices(*b->index, outer);
  return forward(*b);
}

RoundTripReport check_round_trip(const StabilizationIso& iso, std::size_t depth) {
  const DirectedGraph& g = *iso.base_ptr();
  RoundTripReport out;
  const std::size_t top = std::min(depth, iso.depth());
  auto fail = [&](std::string what) {
    ++out.failures;
    if (!out.witness) out.witness = std::move(what);
  };
  for (const auto& plain : enumerate_atoms(g, depth)) {
    BoundaryPoint z = BoundaryPoint::default_extension(g, vertex_path(end_vertex(g, plain.alpha)));
    for (std::size_t i = 0; i <= top; ++i) {
      for (std::size_t j = 0; j <= top; ++j) {
        ArrowAtom a = plain;
        a.index = IndexPair{Natural(static_cast<unsigned long>(i)),
                            Natural(static_cast<unsigned long>(j))};
        ++out.atoms;
        ArrowAtom up = iso.forward(a);
        auto back = iso.backward(up);
        if (!back || !(*back == a)) fail("atom " + to_string(a, g));
        GroupoidElement e{z.prepended(a.alpha), a.degree(), z.prepended(a.beta), a.index};
        ++out.elements;
        GroupoidElement fe = iso.forward(e);
        if (!atom_contains(up, fe) || !(iso.backward(fe) == e)) fail("element " + to_string(e));
      }
    }
  }
  return out;
}

}  // namespace groupoidkit
