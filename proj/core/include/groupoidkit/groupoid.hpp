#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "groupoidkit/boundary.hpp"
#include "groupoidkit/index_set.hpp"

namespace groupoidkit {

// An arrow (i, j) of R = N x N.
struct IndexPair {
  Natural row;
  Natural col;

  bool operator==(const IndexPair&) const = default;
  bool operator<(const IndexPair& o) const {
    return row != o.row ? row < o.row : col < o.col;
  }
};

// (x, k, y) in G_E, optionally crossed with an arrow of R.
struct GroupoidElement {
  BoundaryPoint x;
  long degree = 0;
  BoundaryPoint y;
  std::optional<IndexPair> index;

  bool operator==(const GroupoidElement&) const = default;
};

// sigma^m(x) = sigma^n(y) for some m, n with m - n = degree.
bool is_groupoid_element(const GroupoidElement& g);
GroupoidElement unit(const BoundaryPoint& x, std::optional<Natural> i = std::nullopt);
bool is_unit(const GroupoidElement& g);
bool composable(const GroupoidElement& g, const GroupoidElement& h);
// Throws GraphError when s(g) != r(h).
GroupoidElement multiply(const GroupoidElement& g, const GroupoidElement& h);
GroupoidElement inverse(const GroupoidElement& g);
std::string to_string(const GroupoidElement& g);
// `(x, k, y)` or `(x, k, y)@(i,j)`, points as in parse_point. Throws
// ParseError, also when the triple is not an element of the groupoid.
GroupoidElement parse_element(const DirectedGraph& g, std::string_view text);

// Z(alpha, beta \ F) = {(alpha z, |alpha| - |beta|, beta z) : z not through F},
// crossed with {(i, j)} when indexed.
struct ArrowAtom {
  Path alpha;
  Path beta;
  std::vector<EdgeId> exclude;  // sorted, edges leaving r(alpha)
  std::optional<IndexPair> index;

  long degree() const {
    return static_cast<long>(alpha.length()) - static_cast<long>(beta.length());
  }
  bool operator==(const ArrowAtom&) const = default;
  bool operator<(const ArrowAtom& o) const;
};

void validate_atom(const DirectedGraph& g, const ArrowAtom& a);
// Every plain atom Z(alpha, beta) with r(alpha) = r(beta) and
// |alpha|, |beta| <= depth, in lexicographic order.
std::vector<ArrowAtom> enumerate_atoms(const DirectedGraph& g, std::size_t depth);
bool atom_contains(const ArrowAtom& a, const GroupoidElement& e);

// A compact open subset of G_E (or of G_E x R when indexed), stored as a
// finite list of arrow atoms. Normal form: plain atoms Z(alpha, beta) grouped
// by index, no atom contained in another and no complete family
// {Z(alpha e, beta e)} unmerged; it is canonical, so set equality is equality
// of normal forms. Despite the name the value may fail to be a bisection;
// verify_bisection decides that.
class Bisection {
 public:
  explicit Bisection(GraphPtr g);
  // Keeps the atoms as given. All atoms indexed, or none.
  static Bisection from_atoms(GraphPtr g, std::vector<ArrowAtom> atoms);
  static Bisection single(GraphPtr g, Path alpha, Path beta,
                          std::optional<IndexPair> index = std::nullopt);
  // {(x, 0, x) : x in K}.
  static Bisection identity(const ClopenSet& k);

  const GraphPtr& graph_ptr() const noexcept { return graph_; }
  const DirectedGraph& graph() const noexcept { return *graph_; }
  const std::vector<ArrowAtom>& atoms() const noexcept { return atoms_; }
  bool is_indexed() const noexcept { return indexed_; }
  bool is_normalized() const noexcept { return normalized_; }

  Bisection normalized() const;
  bool empty() const;
  bool contains(const GroupoidElement& e) const;

  // The element of this set with range x (and row index `row` when indexed),
  // if any. Assumes the set is a bisection; otherwise the first match wins.
  std::optional<GroupoidElement> element_with_range(
      const BoundaryPoint& x, const std::optional<Natural>& row = std::nullopt) const;
  std::optional<GroupoidElement> element_with_source(
      const BoundaryPoint& y, const std::optional<Natural>& col = std::nullopt) const;

  Bisection operator|(const Bisection& o) const;
  Bisection operator&(const Bisection& o) const;
  Bisection operator-(const Bisection& o) const;
  bool subset_of(const Bisection& o) const;
  bool operator==(const Bisection& o) const;

 private:
  Bisection(GraphPtr g, std::vector<ArrowAtom> atoms, bool indexed, bool normalized)
      : graph_(std::move(g)), atoms_(std::move(atoms)), indexed_(indexed),
        normalized_(normalized) {}
  void check_compatible(const Bisection& o) const;

  GraphPtr graph_;
  std::vector<ArrowAtom> atoms_;
  bool indexed_ = false;
  bool normalized_ = true;

  friend Bisection make_normalized(GraphPtr g, std::vector<ArrowAtom> atoms, bool indexed);
};

// The set product {uv : u in U, v in V, s(u) = r(v)}, normalized.
Bisection compose(const Bisection& u, const Bisection& v);
Bisection inverse(const Bisection& u);
// Unit-space projections; indices are dropped.
ClopenSet range_of(const Bisection& u);
ClopenSet source_of(const Bisection& u);
// Indexed sets r(U), s(U) in (boundary space) x N. Requires an indexed U.
IndexedClopen indexed_range_of(const Bisection& u);
IndexedClopen indexed_source_of(const Bisection& u);
// K U K: the part of U with range and source in K.
Bisection restrict(const Bisection& u, const ClopenSet& k);
// U x {(i, j)} over the given pairs. Throws GraphError if U is indexed.
Bisection cross_with_R(const Bisection& u, const std::vector<IndexPair>& pairs);

struct BisectionCheck {
  bool ok = true;
  // Two normal-form atoms whose ranges (or sources) overlap.
  std::optional<std::pair<ArrowAtom, ArrowAtom>> overlap;
  std::string reason;
};
BisectionCheck verify_bisection(const Bisection& u);

// `B{ (alpha | beta \ {F}) @ (i,j); ... }`; the exclusion and index are
// optional, paths use the same syntax as cylinders.
Bisection parse_bisection(GraphPtr g, std::string_view text);
std::string to_string(const ArrowAtom& a, const DirectedGraph& g);
std::string to_string(const Bisection& u);

}  // namespace groupoidkit
