#pragma once

// Brute-force reference implementations. They share no code with the
// library beyond the value types.

#include <cstddef>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "groupoidkit/boundary.hpp"
#include "groupoidkit/graph.hpp"
#include "groupoidkit/groupoid.hpp"
#include "groupoidkit/integer_matrix.hpp"

namespace oracle {

using groupoidkit::DirectedGraph;
using groupoidkit::EdgeId;
using groupoidkit::Integer;
using groupoidkit::IntegerMatrix;
using groupoidkit::VertexId;

// ---------------------------------------------------------------- matrices

Integer cofactor_det(const IntegerMatrix& m);
// d_k = D_k / D_{k-1}, D_k the gcd of all k x k minors; zeros for vanishing D_k.
std::vector<Integer> invariant_factors(const IntegerMatrix& m);
IntegerMatrix one_minus_transpose(const IntegerMatrix& a);
IntegerMatrix random_matrix(std::mt19937_64& rng, std::size_t rows, std::size_t cols, long lo,
                            long hi);

// det(1 - A^t) and the factors of 1 - A^t other than 1 (zeros kept).
struct Invariants {
  Integer det;
  std::vector<Integer> factors;
  bool operator==(const Invariants&) const = default;
};
Invariants graph_invariants(const DirectedGraph& g);
IntegerMatrix count_adjacency(const DirectedGraph& g);

// ---------------------------------------------------------------- graphs

std::set<VertexId> bfs(const DirectedGraph& g, const std::set<VertexId>& from);

// The corpus: E2, E2minus, a sink graph, a source graph, a seeded random
// four-vertex graph.
std::vector<DirectedGraph> corpus();
DirectedGraph random_graph(std::mt19937_64& rng, std::size_t vertices, std::size_t edges,
                           const std::string& name);

// ---------------------------------------------------------------- points

// A depth-d cell: an edge word from a start vertex, complete when it ends at
// a sink before depth d.
struct Cell {
  VertexId start;
  std::vector<EdgeId> edges;
  bool complete;
  auto operator<=>(const Cell&) const = default;
};

std::vector<Cell> cells(const DirectedGraph& g, std::size_t depth);
// Cells from v, listing every word of length exactly n plus shorter words at sinks.
std::vector<Cell> cells_from(const DirectedGraph& g, VertexId v, std::size_t n);

// Whether the cell lies in Z(mu \ F); exact when depth > |mu|.
bool in_atom(const DirectedGraph& g, const Cell& c, const groupoidkit::CylinderAtom& a);
// Membership mask over cells(g, depth) of a list of atoms (taken as a union).
std::vector<bool> mask(const DirectedGraph& g, std::size_t depth,
                       const std::vector<groupoidkit::CylinderAtom>& atoms);

// Orbit check: the orbit of every boundary point meets the union of `atoms`.
// Exact for graphs with fewer than `depth` vertices.
bool orbit_full(const DirectedGraph& g, const std::vector<groupoidkit::CylinderAtom>& atoms,
                std::size_t depth);

// ---------------------------------------------------------------- arrows

// Z(alpha, beta \ F) x {index} split into the disjoint pieces Z(alpha g, beta g)
// with min(|alpha g|, |beta g|) = m (or shorter when g reaches a sink).
struct Rep {
  std::vector<EdgeId> alpha;
  VertexId alpha_start;
  std::vector<EdgeId> beta;
  VertexId beta_start;
  std::optional<std::pair<std::string, std::string>> index;
  auto operator<=>(const Rep&) const = default;
};

std::set<Rep> reps(const DirectedGraph& g, const std::vector<groupoidkit::ArrowAtom>& atoms,
                   std::size_t m);
// Product of two piece sets, re-split to level m.
std::set<Rep> compose_reps(const DirectedGraph& g, const std::set<Rep>& u, const std::set<Rep>& v,
                           std::size_t m);
std::set<Rep> refine(const DirectedGraph& g, const std::set<Rep>& s, std::size_t m);
std::set<Rep> inverse_reps(const std::set<Rep>& s);

// Whether the element lies in the atom, by unrolling both points far enough.
bool element_in_atom(const DirectedGraph& g, const groupoidkit::GroupoidElement& e,
                     const groupoidkit::ArrowAtom& a);

// Point x as an edge word of length n (the whole word if x is finite).
std::vector<EdgeId> unroll(const groupoidkit::BoundaryPoint& x, std::size_t n);
// x in Z(mu) for some cylinder mu from the list, by unrolling.
bool point_in_paths(const groupoidkit::BoundaryPoint& x,
                    const std::vector<groupoidkit::Path>& paths);

// ---------------------------------------------------------------- random inputs

groupoidkit::Path random_path(const DirectedGraph& g, std::mt19937_64& rng, std::size_t max_len);
groupoidkit::CylinderAtom random_cylinder(const DirectedGraph& g, std::mt19937_64& rng,
                                          std::size_t max_len);
groupoidkit::ArrowAtom random_arrow(const DirectedGraph& g, std::mt19937_64& rng,
                                    std::size_t max_len);

}  // namespace oracle
