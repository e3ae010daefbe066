#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "groupoidkit/boundary.hpp"
#include "groupoidkit/groupoid.hpp"

namespace groupoidkit {

// A finite graph with symbolic infinite appendages: a head
// ... -> (v,2) -> (v,1) -> v ending at v, or a tail w -> w^1 -> w^2 -> ...
// leaving a sink w. A vertex carries at most one appendage.
class HeadedGraph {
 public:
  explicit HeadedGraph(GraphPtr base);

  const GraphPtr& base_ptr() const noexcept { return base_; }
  const DirectedGraph& base() const noexcept { return *base_; }
  bool has_head(VertexId v) const { return heads_.at(v); }
  bool has_tail(VertexId v) const { return tails_.at(v); }
  std::vector<VertexId> heads() const;
  std::vector<VertexId> tails() const;

  // Throws GraphError if v already carries an appendage, or, for tails, if v
  // is not a sink.
  void add_head(VertexId v);
  void add_tail(VertexId v);

  // The finite window keeping head vertices (v,i) and tail vertices w^i for
  // i <= depth. Base vertices and edges keep their ids; head vertex (v,i) is
  // named `v~i` with edge `f~i~v` into (v,i-1), tail vertex w^i is `w^i` with
  // edge `t~i~w` from w^(i-1). Throws GraphError on name clashes.
  GraphPtr truncate(std::size_t depth) const;

 private:
  GraphPtr base_;
  std::vector<bool> heads_;
  std::vector<bool> tails_;
};

// Heads at every vertex.
HeadedGraph stabilize(const GraphPtr& e);
// Tails at every sink.
HeadedGraph desingularize(const GraphPtr& e);
HeadedGraph add_tail(HeadedGraph h, VertexId sink);

// R x R -> R, ((i, j), (p, q)) -> (pair(i, p), pair(j, q)).
IndexPair pair_indices(const IndexPair& a, const IndexPair& b);
std::pair<IndexPair, IndexPair> unpair_indices(const IndexPair& c);

// The isomorphism G_E x R -> G_SE, ((x, m, y), (i, j)) ->
// (mu_{i,s(x)} x, m + i - j, mu_{j,s(y)} y), realized on the window of SE
// with head depth `depth`; indices above the depth are rejected with
// std::out_of_range.
class StabilizationIso {
 public:
  StabilizationIso(GraphPtr e, std::size_t depth);

  const GraphPtr& base_ptr() const noexcept { return base_; }
  const GraphPtr& window_ptr() const noexcept { return window_; }
  std::size_t depth() const noexcept { return depth_; }

  // mu_{i,v} = f_{i,v} ... f_{1,v}, as a window path; mu_{0,v} = v.
  Path head_path(VertexId v, std::size_t i) const;
  // mu_{i,s(alpha)} alpha.
  Path lift(const Path& alpha, std::size_t i) const;
  // Inverse of lift, for window paths ending at a base vertex.
  std::pair<Path, std::size_t> lower(const Path& p) const;

  // x = mu_{i,s(x')} x' -> (x', i). Throws GraphError for points of other graphs.
  std::pair<BoundaryPoint, std::size_t> phi(const BoundaryPoint& x) const;
  BoundaryPoint phi_inverse(const BoundaryPoint& x, std::size_t i) const;

  // (Z(alpha, beta \ F), (i, j)) -> Z(mu_i alpha, mu_j beta \ F).
  ArrowAtom forward(const ArrowAtom& a) const;
  // Inverse; std::nullopt when the window atom is empty.
  std::optional<ArrowAtom> backward(const ArrowAtom& a) const;
  Bisection forward(const Bisection& u) const;
  Bisection backward(const Bisection& u) const;
  GroupoidElement forward(const GroupoidElement& g) const;
  GroupoidElement backward(const GroupoidElement& g) const;

  // G_SE x R -> G_SE through G_E x R x R and the index pairing.
  ArrowAtom absorb(const ArrowAtom& window_atom, const IndexPair& outer) const;

 private:
  std::size_t to_index(const Natural& n) const;

  GraphPtr base_;
  GraphPtr window_;
  std::size_t depth_;
  // head_edge_[v][i - 1] = f_{i,v} in the window.
  std::vector<std::vector<EdgeId>> head_edge_;
  // For window vertices: (base vertex, head level); level 0 for base.
  std::vector<std::pair<VertexId, std::size_t>> level_;
};

struct RoundTripReport {
  std::size_t atoms = 0;     // indexed atoms tried
  std::size_t elements = 0;  // sample elements tried
  std::size_t failures = 0;
  std::optional<std::string> witness;  // the first failure

  bool ok() const noexcept { return failures == 0; }
};

// backward(forward(.)) = id on every atom Z(alpha, beta) x {(i, j)} with
// |alpha|, |beta| <= depth and i, j <= min(depth, iso.depth()), and on one
// element of each such atom, which must also land in the image atom.
RoundTripReport check_round_trip(const StabilizationIso& iso, std::size_t depth);

}  // namespace groupoidkit
