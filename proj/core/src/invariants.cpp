#include "groupoidkit/invariants.hpp"

#include <sstream>
#include <stdexcept>

namespace groupoidkit {

Integer det(const IntegerMatrix& m) {
  if (!m.is_square()) throw std::invalid_argument("determinant of a non-square matrix");
  const std::size_t n = m.rows();
  if (n == 0) return Integer(1);
  IntegerMatrix a = m;
  Integer sign = 1;
  Integer prev = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (a(k, k) == 0) {
      std::size_t p = k + 1;
      while (p < n && a(p, k) == 0) ++p;
      if (p == n) return Integer(0);
      a.swap_rows(k, p);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t j = k + 1; j < n; ++j) {
        Integer num = a(i, j) * a(k, k) - a(i, k) * a(k, j);
        mpz_divexact(a(i, j).get_mpz_t(), num.get_mpz_t(), prev.get_mpz_t());
      }
      a(i, k) = 0;
    }
    prev = a(k, k);
  }
  return sign * a(n - 1, n - 1);
}

std::vector<Integer> SmithDecomposition::diagonal() const {
  std::vector<Integer> out;
  for (std::size_t i = 0; i < std::min(D.rows(), D.cols()); ++i) out.push_back(D(i, i));
  return out;
}

SmithDecomposition smith_normal_form(const IntegerMatrix& m) {
  const std::size_t rows = m.rows();
  const std::size_t cols = m.cols();
  SmithDecomposition out{IntegerMatrix::identity(rows), m, IntegerMatrix::identity(cols)};
  IntegerMatrix& d = out.D;
  IntegerMatrix& u = out.U;
  IntegerMatrix& v = out.V;

  for (std::size_t t = 0; t < std::min(rows, cols); ++t) {
    while (true) {
      // Smallest nonzero |entry| in the trailing block; first in row-major
      // order on ties.
      std::size_t pr = rows;
      std::size_t pc = cols;
      for (std::size_t i = t; i < rows; ++i)
        for (std::size_t j = t; j < cols; ++j) {
          if (d(i, j) == 0) continue;
          if (pr == rows || mpz_cmpabs(d(i, j).get_mpz_t(), d(pr, pc).get_mpz_t()) < 0) {
            pr = i;
            pc = j;
          }
        }
      if (pr == rows) return out;  // trailing block is zero

      d.swap_rows(t, pr);
      u.swap_rows(t, pr);
      d.swap_cols(t, pc);
      v.swap_cols(t, pc);

      bool cleared = true;
      for (std::size_t i = t + 1; i < rows; ++i) {
        if (d(i, t) == 0) continue;
        Integer q;
        mpz_tdiv_q(q.get_mpz_t(), d(i, t).get_mpz_t(), d(t, t).get_mpz_t());
        d.add_row_multiple(i, t, -q);
        u.add_row_multiple(i, t, -q);
        if (d(i, t) != 0) cleared = false;
      }
      for (std::size_t j = t + 1; j < cols; ++j) {
        if (d(t, j) == 0) continue;
        Integer q;
        mpz_tdiv_q(q.get_mpz_t(), d(t, j).get_mpz_t(), d(t, t).get_mpz_t());
        d.add_col_multiple(j, t, -q);
        v.add_col_multiple(j, t, -q);
        if (d(t, j) != 0) cleared = false;
      }
      if (!cleared) continue;

      // Enforce d_t | every remaining entry by folding an offending row in.
      std::size_t bad = rows;
      for (std::size_t i = t + 1; i < rows && bad == rows; ++i)
        for (std::size_t j = t + 1; j < cols; ++j)
          if (!mpz_divisible_p(d(i, j).get_mpz_t(), d(t, t).get_mpz_t())) {
            bad = i;
            break;
          }
      if (bad == rows) break;
      d.add_row_multiple(t, bad, 1);
      u.add_row_multiple(t, bad, 1);
    }
    if (d(t, t) < 0) {
      d.negate_row(t);
      u.negate_row(t);
    }
  }
  return out;
}

std::string BowenFranks::group_string() const {
  std::ostringstream out;
  bool first = true;
  for (const auto& f : factors) {
    if (f == 1) continue;
    out << (first ? "" : " + ") << "Z/" << f.get_str();
    first = false;
  }
  for (std::size_t i = 0; i < free_rank; ++i) {
    out << (first ? "" : " + ") << "Z";
    first = false;
  }
  return first ? "0" : out.str();
}

bool BowenFranks::operator==(const BowenFranks& o) const {
  auto nontrivial = [](const std::vector<Integer>& f) {
    std::vector<Integer> out;
    for (const auto& d : f)
      if (d != 1) out.push_back(d);
    return out;
  };
  return determinant == o.determinant && free_rank == o.free_rank &&
         nontrivial(factors) == nontrivial(o.factors);
}

IntegerMatrix bowen_franks_matrix(const DirectedGraph& g) {
  IntegerMatrix a = adjacency_matrix(g);
  return IntegerMatrix::identity(a.rows()) - a.transposed();
}

BowenFranks bowen_franks(const DirectedGraph& g) {
  IntegerMatrix m = bowen_franks_matrix(g);
  BowenFranks out;
  out.determinant = det(m);
  for (const auto& d : smith_normal_form(m).diagonal()) {
    if (d == 0) {
      ++out.free_rank;
    } else {
      out.factors.push_back(d);
    }
  }
  return out;
}

Certificate certify_distinct(const DirectedGraph& e, const DirectedGraph& f) {
  Certificate c;
  c.first = bowen_franks(e);
  c.second = bowen_franks(f);
  c.first_strongly_connected = is_strongly_connected(e);
  c.second_strongly_connected = is_strongly_connected(f);
  const bool dets_differ = c.first.determinant != c.second.determinant;
  const bool hypothesis = c.first_strongly_connected && c.second_strongly_connected;

  if (hypothesis && dets_differ) {
    c.verdict = Certificate::Verdict::distinguished;
    c.reason = "det(1 - A^t): " + c.first.determinant.get_str() +
               " != " + c.second.determinant.get_str();
    return c;
  }
  if (dets_differ) {
    c.notes.push_back("determinants differ (" + c.first.determinant.get_str() +
                      " vs " + c.second.determinant.get_str() +
                      ") but not both graphs are strongly connected");
  }
  if (c.first.group_string() != c.second.group_string()) {
    c.notes.push_back("cokernels differ: " + c.first.group_string() + " vs " +
                      c.second.group_string() + " (informational)");
  }
  return c;
}

}  // namespace groupoidkit
