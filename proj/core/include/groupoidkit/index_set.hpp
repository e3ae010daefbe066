#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "groupoidkit/boundary.hpp"
#include "groupoidkit/numbers.hpp"

namespace groupoidkit {

// Block i >= 1 of the partition N = N_1 + N_2 + ...: N_i = {pair(i - 1, k)}.
Natural block_element(std::size_t i, const Natural& k);
// The block containing n.
std::size_t block_of(const Natural& n);

// A nonempty subset of N from the grammar
//   P := N \ S         (S finite)
//      | {c}
//      | pair(P, P)    (image of a product under the pairing bijection)
// Immutable; copying shares structure. Boolean operations return lists of
// pairwise disjoint patterns.
class IndexPattern {
 public:
  enum class Kind { cofinite, point, pair };

  static IndexPattern all();
  static IndexPattern cofinite(std::vector<Natural> excluded);
  static IndexPattern point(Natural c);
  // pair({a}, {b}) is stored as {pair(a, b)}.
  static IndexPattern paired(const IndexPattern& left, const IndexPattern& right);
  // All of N_i.
  static IndexPattern block(std::size_t i);

  Kind kind() const noexcept { return node_->kind; }
  const std::vector<Natural>& excluded() const { return node_->excluded; }
  const Natural& value() const { return node_->value; }
  const IndexPattern& left() const { return *node_->left; }
  const IndexPattern& right() const { return *node_->right; }

  bool contains(const Natural& n) const;
  bool is_all() const { return kind() == Kind::cofinite && excluded().empty(); }
  // The single element, when the pattern is a point.
  std::optional<Natural> as_point() const;
  // Some element, the least one for cofinite patterns.
  Natural sample() const;

  // Structural equality. Distinct structures may denote the same set; use
  // same_set for semantic comparison.
  bool operator==(const IndexPattern& o) const;
  bool operator<(const IndexPattern& o) const;

 private:
  struct Node {
    Kind kind;
    std::vector<Natural> excluded;
    Natural value;
    std::shared_ptr<const IndexPattern> left;
    std::shared_ptr<const IndexPattern> right;
  };
  explicit IndexPattern(std::shared_ptr<const Node> n) : node_(std::move(n)) {}

  std::shared_ptr<const Node> node_;
};

using IndexSet = std::vector<IndexPattern>;  // disjoint union

IndexSet intersect(const IndexPattern& a, const IndexPattern& b);
IndexSet subtract(const IndexPattern& a, const IndexPattern& b);
IndexSet intersect(const IndexSet& a, const IndexSet& b);
IndexSet subtract(const IndexSet& a, const IndexSet& b);
bool contains(const IndexSet& s, const Natural& n);
// Same set with fewer patterns: merges pairs such as pair(P, Q) + pair(P, Q')
// and N \ S + {c}. The result need not be disjoint.
IndexSet simplify(IndexSet s);
bool same_set(const IndexSet& a, const IndexSet& b);

std::string to_string(const IndexPattern& p);
std::string to_string(const IndexSet& s);

// An injective map N -> N built from pairing, one variable and constants:
//   T := k | c | <T, T>
// A template without the variable is constant.
class IndexTemplate {
 public:
  static IndexTemplate variable();
  static IndexTemplate constant(Natural c);
  static IndexTemplate paired(const IndexTemplate& left, const IndexTemplate& right);

  bool has_variable() const;
  Natural apply(const Natural& k) const;
  // T(P).
  IndexPattern image(const IndexPattern& p) const;
  // {k : T(k) in P}.
  IndexSet preimage(const IndexPattern& p) const;
  IndexSet preimage(const IndexSet& s) const;
  // The k with T(k) = n, if any. For a constant template any k works; 0 is
  // returned.
  std::optional<Natural> solve(const Natural& n) const;

  bool operator==(const IndexTemplate& o) const;

 private:
  enum class Kind { variable, constant, pair };
  struct Node {
    Kind kind;
    Natural value;
    std::shared_ptr<const IndexTemplate> left;
    std::shared_ptr<const IndexTemplate> right;
  };
  explicit IndexTemplate(std::shared_ptr<const Node> n) : node_(std::move(n)) {}

  std::shared_ptr<const Node> node_;

  friend std::string to_string(const IndexTemplate& t);
};

std::string to_string(const IndexTemplate& t);

// A clopen subset of (boundary space) x N, as a finite union of products
// C x P. Pieces are not required to be disjoint.
class IndexedClopen {
 public:
  struct Piece {
    ClopenSet set;
    IndexPattern index;
  };

  explicit IndexedClopen(GraphPtr g) : graph_(std::move(g)) {}
  IndexedClopen(GraphPtr g, std::vector<Piece> pieces);
  static IndexedClopen product(const ClopenSet& c, const IndexSet& s);

  const GraphPtr& graph_ptr() const noexcept { return graph_; }
  const std::vector<Piece>& pieces() const noexcept { return pieces_; }

  bool empty() const;
  bool contains(const BoundaryPoint& x, const Natural& n) const;

  IndexedClopen operator|(const IndexedClopen& o) const;
  IndexedClopen operator&(const IndexedClopen& o) const;
  IndexedClopen operator-(const IndexedClopen& o) const;
  bool subset_of(const IndexedClopen& o) const;
  bool disjoint_from(const IndexedClopen& o) const;
  bool operator==(const IndexedClopen& o) const;

  // Pairwise disjoint pieces with nonempty sets; pieces with structurally
  // equal patterns are merged.
  IndexedClopen disjoint() const;

 private:
  GraphPtr graph_;
  std::vector<Piece> pieces_;
};

std::string to_string(const IndexedClopen& s);

// Atoms `Z(mu \ F) @ i`; every atom must carry an index.
IndexedClopen parse_indexed_clopen(GraphPtr g, std::string_view text);

}  // namespace groupoidkit
