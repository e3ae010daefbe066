#pragma once

#include <cstddef>
#include <optional>
#include <random>
#include <utility>

#include "groupoidkit/boundary.hpp"
#include "groupoidkit/groupoid.hpp"

namespace groupoidkit {

using Rng = std::mt19937_64;

struct SampleShape {
  std::size_t max_length = 3;               // of alpha, beta and the random part of z
  std::optional<std::size_t> max_index;     // indices in [0, max_index] when set
};

// A path starting at v with up to n edges, stopping early at sinks.
Path random_path_from(const DirectedGraph& g, VertexId v, std::size_t n, Rng& rng);
// A path ending at v with up to n edges, stopping early at sources.
Path random_path_to(const DirectedGraph& g, VertexId v, std::size_t n, Rng& rng);
// A boundary point starting at v: a random walk, then the default extension.
BoundaryPoint random_point(const DirectedGraph& g, VertexId v, std::size_t n, Rng& rng);

// (alpha z, |alpha| - |beta|, beta z). Requires a nonempty graph.
GroupoidElement random_element(const DirectedGraph& g, const SampleShape& shape, Rng& rng);
// (g, h) with s(g) = r(h).
std::pair<GroupoidElement, GroupoidElement> random_composable_pair(const DirectedGraph& g,
                                                                   const SampleShape& shape,
                                                                   Rng& rng);

}  // namespace groupoidkit
