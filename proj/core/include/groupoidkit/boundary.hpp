#pragma once

#include <compare>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "groupoidkit/graph.hpp"
#include "groupoidkit/numbers.hpp"

namespace groupoidkit {

// A finite path e_1 e_2 ... e_n with r(e_i) = s(e_{i+1}), anchored at a start
// vertex so the empty path at v is representable.
struct Path {
  VertexId start = 0;
  std::vector<EdgeId> edges;

  std::size_t length() const noexcept { return edges.size(); }
  bool empty() const noexcept { return edges.empty(); }

  auto operator<=>(const Path&) const = default;
};

Path vertex_path(VertexId v);
VertexId end_vertex(const DirectedGraph& g, const Path& p);
bool is_valid_path(const DirectedGraph& g, const Path& p);
void validate_path(const DirectedGraph& g, const Path& p);  // throws GraphError

// p is an initial segment of q (same start vertex).
bool is_prefix(const Path& p, const Path& q);
Path extended(Path p, EdgeId e);
// p followed by q; requires end_vertex(p) == q.start.
Path concat(const DirectedGraph& g, const Path& p, const Path& q);
// Drops the first n edges.
Path drop_front(const DirectedGraph& g, const Path& p, std::size_t n);
Path take_front(const Path& p, std::size_t n);

// `.`-separated edge ids, or a vertex id for an empty path.
std::string to_string(const DirectedGraph& g, const Path& p);
Path parse_path(const DirectedGraph& g, std::string_view text);

enum class PrefixStatus {
  truncated,  // stands for every boundary point extending the path
  complete,   // the path ends at a sink and is itself a boundary point
};

struct BoundaryPrefix {
  Path path;
  PrefixStatus status = PrefixStatus::truncated;

  auto operator<=>(const BoundaryPrefix&) const = default;
};

// Depth-n partition of the boundary path space: complete paths of length <= n
// and truncated paths of length exactly n, in lexicographic order.
std::vector<BoundaryPrefix> enumerate_boundary(const DirectedGraph& g,
                                               std::size_t depth);

// sigma^n. Throws std::out_of_range when n exceeds the prefix length.
BoundaryPrefix shift(const DirectedGraph& g, const BoundaryPrefix& x,
                     std::size_t n);

// An exactly representable boundary path: either a finite path ending at a
// sink, or prefix . cycle . cycle . ... Stored canonically (primitive cycle,
// shortest prefix) so equality of values is equality of points.
class BoundaryPoint {
 public:
  static BoundaryPoint finite(const DirectedGraph& g, Path path);
  static BoundaryPoint periodic(const DirectedGraph& g, Path prefix,
                                std::vector<EdgeId> cycle);
  // The point obtained by extending `p` along first out-edges until a vertex
  // repeats or a sink is reached.
  static BoundaryPoint default_extension(const DirectedGraph& g, const Path& p);

  const DirectedGraph& graph() const { return *graph_; }
  VertexId start() const noexcept { return prefix_.start; }
  const Path& prefix() const noexcept { return prefix_; }
  const std::vector<EdgeId>& cycle() const noexcept { return cycle_; }
  bool is_finite() const noexcept { return cycle_.empty(); }
  // Number of edges of a finite point.
  std::size_t finite_length() const noexcept { return prefix_.length(); }
  bool longer_than(std::size_t n) const noexcept {
    return !is_finite() || prefix_.length() > n;
  }
  bool at_least(std::size_t n) const noexcept {
    return !is_finite() || prefix_.length() >= n;
  }

  EdgeId edge_at(std::size_t i) const;
  // First min(n, length) edges.
  Path initial_segment(std::size_t n) const;
  bool has_prefix(const Path& p) const;
  // sigma^n; requires at_least(n).
  BoundaryPoint shifted(std::size_t n) const;
  // p x; requires end_vertex(p) == start().
  BoundaryPoint prepended(const Path& p) const;

  bool operator==(const BoundaryPoint& o) const {
    return prefix_ == o.prefix_ && cycle_ == o.cycle_;
  }
  std::strong_ordering operator<=>(const BoundaryPoint& o) const {
    if (auto c = prefix_ <=> o.prefix_; c != 0) return c;
    return cycle_ <=> o.cycle_;
  }

 private:
  BoundaryPoint(const DirectedGraph* g, Path prefix, std::vector<EdgeId> cycle)
      : graph_(g), prefix_(std::move(prefix)), cycle_(std::move(cycle)) {}
  void canonicalize();

  const DirectedGraph* graph_ = nullptr;
  Path prefix_;
  std::vector<EdgeId> cycle_;
};

std::string to_string(const BoundaryPoint& x);
// Inverse of to_string: `mu` for a finite point ending at a sink,
// `mu.(c)^inf` or `(c)^inf` for a periodic one.
BoundaryPoint parse_point(const DirectedGraph& g, std::string_view text);

// Z(mu \ F): boundary paths extending mu whose next edge is not in F.
struct CylinderAtom {
  Path mu;
  std::vector<EdgeId> exclude;  // sorted, each with source end_vertex(mu)

  auto operator<=>(const CylinderAtom&) const = default;
};

void validate_atom(const DirectedGraph& g, const CylinderAtom& a);
bool atom_contains(const DirectedGraph& g, const CylinderAtom& a,
                   const BoundaryPoint& x);

// A compact open subset of the boundary path space, stored as a finite list
// of cylinder atoms over a shared graph.
//
// Normal form: a sorted list of plain cylinders Z(mu), none contained in
// another, with no complete family {Z(mu e) : e in r(mu)E^1} left unmerged.
// It is canonical, so two sets are equal iff their normal forms are equal.
class ClopenSet {
 public:
  explicit ClopenSet(GraphPtr g);
  // Keeps the atoms as given (validated, not normalized).
  static ClopenSet from_atoms(GraphPtr g, std::vector<CylinderAtom> atoms);
  static ClopenSet cylinder(GraphPtr g, Path mu);
  static ClopenSet from_paths(GraphPtr g, const std::vector<Path>& paths);
  static ClopenSet whole(GraphPtr g);

  const GraphPtr& graph_ptr() const noexcept { return graph_; }
  const DirectedGraph& graph() const noexcept { return *graph_; }
  const std::vector<CylinderAtom>& atoms() const noexcept { return atoms_; }
  bool is_normalized() const noexcept { return normalized_; }

  ClopenSet normalized() const;
  // The cylinders of the normal form.
  std::vector<Path> cylinders() const;
  bool empty() const;
  bool contains(const BoundaryPoint& x) const;
  std::size_t max_depth() const;

  ClopenSet operator|(const ClopenSet& o) const;
  ClopenSet operator&(const ClopenSet& o) const;
  ClopenSet operator-(const ClopenSet& o) const;
  bool subset_of(const ClopenSet& o) const;
  bool disjoint_from(const ClopenSet& o) const;
  // Set equality (normal forms compared).
  bool operator==(const ClopenSet& o) const;

 private:
  ClopenSet(GraphPtr g, std::vector<CylinderAtom> atoms, bool normalized)
      : graph_(std::move(g)), atoms_(std::move(atoms)), normalized_(normalized) {}
  void check_same_graph(const ClopenSet& o) const;

  GraphPtr graph_;
  std::vector<CylinderAtom> atoms_;
  bool normalized_ = true;
};

ClopenSet normalize(const ClopenSet& k);

// Canonical list of disjoint plain cylinders denoting the union of `paths`.
std::vector<Path> normalize_paths(const DirectedGraph& g, std::vector<Path> paths);
std::vector<Path> intersect_paths(const DirectedGraph& g, const std::vector<Path>& a,
                                  const std::vector<Path>& b);
std::vector<Path> subtract_paths(const DirectedGraph& g, const std::vector<Path>& a,
                                 const std::vector<Path>& b);

// Text: atoms `Z(mu \ {e1,e2}) @ i` joined by `+` or `;`. `all` is the whole
// space and `{}` the empty set.
struct ParsedCylinder {
  CylinderAtom atom;
  std::optional<Natural> index;
};
std::vector<ParsedCylinder> parse_cylinders(const DirectedGraph& g,
                                            std::string_view text);
// Rejects indexed atoms.
ClopenSet parse_clopen(GraphPtr g, std::string_view text);
std::string to_string(const CylinderAtom& a, const DirectedGraph& g);
std::string to_string(const ClopenSet& k);

struct Fullness {
  bool full = false;
  // Vertices every point of [K] eventually visits.
  std::vector<VertexId> saturated_vertices;
  // When not full: a boundary point whose orbit misses K.
  std::optional<BoundaryPoint> witness;
};

// Decides r(G K) = boundary space: K is full iff every boundary path passes
// through a vertex reachable from some r(mu), Z(mu) in the normal form of K,
// i.e. iff the complement of that reachable set spans no cycle and no sink.
Fullness check_fullness(const ClopenSet& k);
bool is_full(const DirectedGraph& g, const ClopenSet& k);

}  // namespace groupoidkit
