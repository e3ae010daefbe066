#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "groupoidkit/graph.hpp"

namespace groupoidkit {

// S: delete a source v that emits at least one edge.
// R: collapse v, where v emits an edge and receives exactly one edge e, not
//    a loop: e and the out-edges f of v are replaced by edges [ef], named
//    `e_f`, from s(e) to r(f).
// C: the same collapse at a regular vertex v without loops receiving any
//    number of edges; every pair (in-edge e, out-edge f) yields `e_f`.
// I: in-split at a regular vertex v. The in-edges are partitioned into
//    P_1..P_m; v becomes v_1..v_m, edges of P_i end at v_i, and each out-edge
//    f of v becomes f_1..f_m with s(f_j) = v_j.
// O: out-split at a vertex v emitting an edge. The out-edges are
//    partitioned into P_1..P_m; edges of P_i start at v_i, and each in-edge
//    f of v becomes f_1..f_m with r(f_j) = v_j.
// New names are `<old>_<k>` (or `e_f`), with `_` appended on clashes.
enum class MoveKind { S, R, C, I, O };

char to_char(MoveKind k);
std::optional<MoveKind> move_kind_from_char(char c);

struct MoveRecord {
  MoveKind kind = MoveKind::S;
  std::string vertex;
  // Edge classes for I and O; empty otherwise.
  std::vector<std::vector<std::string>> partition;
  // The move read backwards: the current graph is what the forward move
  // produces from the next one.
  bool inverse = false;

  bool operator==(const MoveRecord&) const = default;
};

// One line per move: `MOVE <kind> <vertex> [partition=e1,e2|e3] [inverse]`.
struct MoveSequence {
  std::vector<MoveRecord> moves;

  bool has_inverse_moves() const;
  bool operator==(const MoveSequence&) const = default;
};

std::string to_string(const MoveRecord& m);
std::string serialize(const MoveSequence& s);
MoveSequence parse_move_sequence(std::string_view text);
// Command-line form: `O v {a}|{b}`, `R w`.
MoveRecord parse_move_spec(std::string_view text);

// Throws MoveError when the vertex does not qualify or the partition is not
// a partition of the relevant edges into nonempty classes.
DirectedGraph apply_move(const DirectedGraph& g, const MoveRecord& m);

// Every legal forward move at every vertex. Splits range over all set
// partitions with at least `min_split_classes` classes (vertices whose edge
// count exceeds `max_split_edges` are skipped for splits).
std::vector<MoveRecord> legal_moves(const DirectedGraph& g, std::size_t min_split_classes = 2,
                                    std::size_t max_split_edges = 6);

// Set partitions of {0..n-1} in restricted-growth order.
std::vector<std::vector<std::size_t>> set_partitions(std::size_t n);

// A labelling-independent form: the least adjacency matrix over all vertex
// orders, together with the order that achieves it.
struct CanonicalForm {
  std::vector<std::size_t> order;  // order[p] = vertex placed at position p
  std::vector<long> key;           // vertex count followed by matrix entries
};
CanonicalForm canonical_form(const DirectedGraph& g);
bool isomorphic(const DirectedGraph& a, const DirectedGraph& b);

// Applies the forward moves to `start`. Inverse moves need `target`: the
// graph the sequence ends at, from which the inverse moves are replayed
// forwards. Returns the final graph; throws MoveError when the two halves do
// not meet up to isomorphism.
DirectedGraph replay(const DirectedGraph& start, const MoveSequence& seq,
                     const DirectedGraph* target = nullptr);

struct MoveSearchResult {
  enum class Status { found, unknown };
  Status status = Status::unknown;
  MoveSequence sequence;
  std::size_t expansions = 0;
  std::string reason;

  bool found() const noexcept { return status == Status::found; }
};

struct MoveSearchOptions {
  std::size_t budget = 10000;    // graph expansions
  std::size_t extra_vertices = 2;  // cap: max(|E|, |F|) + extra
  std::size_t max_split_edges = 4;
};

// Bidirectional breadth-first search over forward moves from both ends,
// meeting up to isomorphism. Returns unknown when the budget runs out or the
// Bowen-Franks data differ; a found sequence always replays correctly.
MoveSearchResult find_move_sequence(const DirectedGraph& e, const DirectedGraph& f,
                                    const MoveSearchOptions& options = {});

}  // namespace groupoidkit
