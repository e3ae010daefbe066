#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "groupoidkit/boundary.hpp"
#include "groupoidkit/error.hpp"
#include "groupoidkit/groupoid.hpp"
#include "groupoidkit/index_set.hpp"

namespace groupoidkit {

// K does not meet every orbit; the witness is a boundary point whose orbit
// misses K.
class NotFull : public Error {
 public:
  explicit NotFull(BoundaryPoint witness)
      : Error("clopen set is not full; orbit of " + to_string(witness) + " misses it"),
        witness_(std::move(witness)) {}
  const BoundaryPoint& witness() const noexcept { return witness_; }

 private:
  BoundaryPoint witness_;
};

class StageBudgetExhausted : public Error {
 public:
  using Error::Error;
};

// Compact open bisections V_1, ..., V_m with s(V_i) in K and ranges
// partitioning the boundary space. Throws NotFull.
std::vector<Bisection> bisection_cover(const ClopenSet& k);

// W = union of V_i x {(1, i)}: r(W) = boundary x {1}, s(W) in K x N.
Bisection isometry_W(const ClopenSet& k);
// (boundary x N) \ s for an indexed set s.
IndexedClopen complement(const IndexedClopen& s);

// A family of arrow atoms indexed by k in `domain`:
//   Z(alpha, beta) x {(row(k), col(k))}.
struct StageAtom {
  Path alpha;
  Path beta;
  IndexTemplate row;
  IndexTemplate col;
  IndexPattern domain;

  long degree() const {
    return static_cast<long>(alpha.length()) - static_cast<long>(beta.length());
  }
};

IndexedClopen stage_range(const GraphPtr& g, const std::vector<StageAtom>& atoms);
IndexedClopen stage_source(const GraphPtr& g, const std::vector<StageAtom>& atoms);
std::string to_string(const StageAtom& a, const DirectedGraph& g);

struct CheckResult {
  std::string name;
  bool ok = true;
  std::string detail;
};

// The bisection Y with r(Y) = boundary x N and s(Y) = K x N, as the stream of
// stages Y_1, Y_2, ... Round n adds Y_{2n-1} and Y_{2n}. N is split into the
// blocks N_i = {pair(i - 1, k)}; theta(pair(n, k), m) = pair(n, pair(k, m))
// and phi(pair(n, k)) = pair(n + 1, k).
//
// Reads of built stages are safe concurrently; callers that may extend the
// stream (ensure_rounds, element lookups) must be serialized.
class StagedUnitary {
 public:
  // Throws NotFull.
  explicit StagedUnitary(ClopenSet k, std::size_t max_rounds = 16);

  const GraphPtr& graph_ptr() const noexcept { return corner_.graph_ptr(); }
  const ClopenSet& corner() const noexcept { return corner_; }
  const std::vector<Bisection>& cover() const noexcept { return cover_; }
  std::size_t max_rounds() const noexcept { return max_rounds_; }

  std::size_t rounds() const noexcept { return stages_.size() / 2; }
  std::size_t stage_count() const noexcept { return stages_.size(); }
  // Y_j, 1-based.
  const std::vector<StageAtom>& stage(std::size_t j) const { return stages_.at(j - 1); }
  IndexedClopen stage_range(std::size_t j) const;
  IndexedClopen stage_source(std::size_t j) const;

  // Builds rounds up to n. Throws StageBudgetExhausted beyond max_rounds.
  void ensure_rounds(std::size_t n);

  // The four covering equations for every round n' <= rounds(), stage-wise
  // bisection checks, and pairwise disjointness across stages.
  std::vector<CheckResult> check() const;

  // The element of Y with range (x, i), resp. source (y, j), extending the
  // stream as needed.
  GroupoidElement element_with_range(const BoundaryPoint& x, const Natural& i);
  GroupoidElement element_with_source(const BoundaryPoint& y, const Natural& j);

  std::string dump() const;

 private:
  void build_round();

  ClopenSet corner_;
  std::vector<Bisection> cover_;
  std::size_t max_rounds_;
  std::vector<std::vector<StageAtom>> stages_;
};

StagedUnitary unitary_stages(const ClopenSet& k, std::size_t n);

// gamma -> Y^-1 gamma Y from G_E x R onto G_E|_K x R, and its inverse
// eta -> Y eta Y^-1.
class CornerIso {
 public:
  explicit CornerIso(StagedUnitary& y) : y_(&y) {}

  GroupoidElement forward(const GroupoidElement& g);
  GroupoidElement backward(const GroupoidElement& h);

  StagedUnitary& unitary() { return *y_; }

 private:
  StagedUnitary* y_;
};

// Samples composable pairs (g, h) in G_E x R with indices <= 20 and checks
// F(gh) = F(g)F(h), F(g) in G|_K x R and F^-1(F(g)) = g for F = conjugation.
std::vector<CheckResult> check_conjugation(CornerIso& iso, std::size_t samples,
                                           std::uint64_t seed);

// A candidate isomorphism G_E|_X -> G_F|_Y given on generators: each pair is a
// compact open bisection of G_E|_X and its image in G_F|_Y.
struct KakutaniIso {
  ClopenSet x;
  ClopenSet y;
  std::vector<std::pair<Bisection, Bisection>> generators;
};

struct KakutaniCertificate {
  bool ok = false;
  std::vector<CheckResult> checks;
  std::optional<BoundaryPoint> witness;  // when X or Y is not full
};

// Checks fullness of X and Y, that generators lie in the corners and cover
// them, and that the generator map preserves inverses, units, emptiness,
// equality and inclusion on all words of length <= 2. Throws GraphError when
// a generator or its image is not a bisection.
KakutaniCertificate kakutani_check(const KakutaniIso& iso);

// The iso induced by a graph isomorphism E -> F (vertex and edge maps) on
// the atoms Z(alpha, beta) in G_E|_X with |alpha|, |beta| <= depth.
KakutaniIso iso_from_graph_map(const ClopenSet& x, const GraphPtr& f,
                               const std::vector<VertexId>& vertex_map,
                               const std::vector<EdgeId>& edge_map, std::size_t depth);

}  // namespace groupoidkit
