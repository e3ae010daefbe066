#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "groupoidkit/graph.hpp"
#include "groupoidkit/integer_matrix.hpp"

namespace groupoidkit {

// Exact determinant by Bareiss fraction-free elimination.
// Throws std::invalid_argument for non-square input.
Integer det(const IntegerMatrix& m);

// U * M * V = D with U, V unimodular and D diagonal, d1 | d2 | ... >= 0.
struct SmithDecomposition {
  IntegerMatrix U;
  IntegerMatrix D;
  IntegerMatrix V;

  // The diagonal of D, min(rows, cols) entries.
  std::vector<Integer> diagonal() const;
};

SmithDecomposition smith_normal_form(const IntegerMatrix& m);

// det(1 - A^t) together with coker(1 - A^t) = Z/d_1 + ... + Z/d_k + Z^free_rank.
struct BowenFranks {
  Integer determinant;
  std::vector<Integer> factors;  // nonzero invariant factors, 1s included
  std::size_t free_rank = 0;

  // "Z/2 + Z", "0" for the trivial group.
  std::string group_string() const;
  // Same determinant and same cokernel: factors equal to 1 are ignored.
  bool operator==(const BowenFranks& o) const;
};

IntegerMatrix bowen_franks_matrix(const DirectedGraph& g);
BowenFranks bowen_franks(const DirectedGraph& g);

struct Certificate {
  enum class Verdict { distinguished, inconclusive };

  Verdict verdict = Verdict::inconclusive;
  BowenFranks first;
  BowenFranks second;
  bool first_strongly_connected = false;
  bool second_strongly_connected = false;
  std::string reason;               // set when distinguished
  std::vector<std::string> notes;   // informational only

  bool distinguished() const noexcept {
    return verdict == Verdict::distinguished;
  }
};

// Sound but one-sided: reports `distinguished` only when both graphs are
// strongly connected and det(1 - A^t) differs. Never claims isomorphism.
Certificate certify_distinct(const DirectedGraph& e, const DirectedGraph& f);

}  // namespace groupoidkit
