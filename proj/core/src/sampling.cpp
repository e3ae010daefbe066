#include "groupoidkit/sampling.hpp"

#include <stdexcept>

namespace groupoidkit {

namespace {

std::size_t below(std::size_t n, Rng& rng) {
  return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
}

std::optional<IndexPair> random_index(const SampleShape& shape, Rng& rng) {
  if (!shape.max_index) return std::nullopt;
  auto pick = [&] { return Natural(static_cast<unsigned long>(below(*shape.max_index + 1, rng))); };
  auto i = pick();
  return IndexPair{i, pick()};
}

}  // namespace

Path random_path_from(const DirectedGraph& g, VertexId v, std::size_t n, Rng& rng) {
  Path p = vertex_path(v);
  std::size_t len = below(n + 1, rng);
  for (std::size_t i = 0; i < len; ++i) {
    auto out = g.out_edges(end_vertex(g, p));
    if (out.empty()) break;
    p.edges.push_back(out[below(out.size(), rng)]);
  }
  return p;
}

Path random_path_to(const DirectedGraph& g, VertexId v, std::size_t n, Rng& rng) {
  std::vector<EdgeId> rev;
  VertexId at = v;
  std::size_t len = below(n + 1, rng);
  for (std::size_t i = 0; i < len; ++i) {
    auto in = g.in_edges(at);
    if (in.empty()) break;
    EdgeId e = in[below(in.size(), rng)];
    rev.push_back(e);
    at = g.edge(e).source;
  }
  return Path{at, {rev.rbegin(), rev.rend()}};
}

BoundaryPoint random_point(const DirectedGraph& g, VertexId v, std::size_t n, Rng& rng) {
  return BoundaryPoint::default_extension(g, random_path_from(g, v, n, rng));
}

GroupoidElement random_element(const DirectedGraph& g, const SampleShape& shape, Rng& rng) {
  if (g.vertex_count() == 0) throw std::invalid_argument("empty graph");
  Path alpha = random_path_from(g, below(g.vertex_count(), rng), shape.max_length, rng);
  VertexId end = end_vertex(g, alpha);
  Path beta = random_path_to(g, end, shape.max_length, rng);
  BoundaryPoint z = random_point(g, end, shape.max_length, rng);
  return {z.prepended(alpha), static_cast<long>(alpha.length()) - static_cast<long>(beta.length()),
          z.prepended(beta), random_index(shape, rng)};
}

std::pair<GroupoidElement, GroupoidElement> random_composable_pair(const DirectedGraph& g,
                                                                   const SampleShape& shape,
                                                                   Rng& rng) {
  GroupoidElement a = random_element(g, shape, rng);
  std::size_t m = below(shape.max_length + 1, rng);
  while (m > 0 && !a.y.at_least(m)) --m;
  BoundaryPoint t = a.y.shifted(m);
  Path delta = random_path_to(g, t.start(), shape.max_length, rng);
  GroupoidElement b{a.y, static_cast<long>(m) - static_cast<long>(delta.length()),
                    t.prepended(delta), std::nullopt};
  if (a.index) {
    auto idx = random_index(shape, rng);
    b.index = IndexPair{a.index->col, idx->col};
  }
  return {std::move(a), std::move(b)};
}

}  // namespace groupoidkit
