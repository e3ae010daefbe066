#include "groupoidkit/groupoid.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <stdexcept>
#include <string>

#include "forest.hpp"
#include "groupoidkit/error.hpp"

namespace groupoidkit {

// ---------------------------------------------------------------- elements

bool is_groupoid_element(const GroupoidElement& g) {
  if (&g.x.graph() != &g.y.graph()) return false;
  if (g.x.is_finite() != g.y.is_finite()) return false;
  if (g.x.is_finite()) {
    long p = static_cast<long>(g.x.finite_length());
    long q = static_cast<long>(g.y.finite_length());
    return g.degree == p - q && g.x.shifted(p) == g.y.shifted(q);
  }
  long px = static_cast<long>(g.x.prefix().length());
  long py = static_cast<long>(g.y.prefix().length());
  long m = std::max({px, py + g.degree, g.degree, 0L});
  long n = m - g.degree;
  return g.x.shifted(m) == g.y.shifted(n);
}

GroupoidElement unit(const BoundaryPoint& x, std::optional<Natural> i) {
  std::optional<IndexPair> idx;
  if (i) idx = IndexPair{*i, *i};
  return {x, 0, x, idx};
}

bool is_unit(const GroupoidElement& g) {
  return g.degree == 0 && g.x == g.y && (!g.index || g.index->row == g.index->col);
}

bool composable(const GroupoidElement& g, const GroupoidElement& h) {
  if (g.index.has_value() != h.index.has_value()) return false;
  if (g.index && g.index->col != h.index->row) return false;
  return g.y == h.x;
}

GroupoidElement multiply(const GroupoidElement& g, const GroupoidElement& h) {
  if (!composable(g, h)) throw GraphError("elements are not composable");
  std::optional<IndexPair> idx;
  if (g.index) idx = IndexPair{g.index->row, h.index->col};
  return {g.x, g.degree + h.degree, h.y, idx};
}

GroupoidElement inverse(const GroupoidElement& g) {
  std::optional<IndexPair> idx;
  if (g.index) idx = IndexPair{g.index->col, g.index->row};
  return {g.y, -g.degree, g.x, idx};
}

std::string to_string(const GroupoidElement& g) {
  std::string out = "(" + to_string(g.x) + ", " + std::to_string(g.degree) + ", " +
                    to_string(g.y) + ")";
  if (g.index) out += "@(" + g.index->row.get_str() + "," + g.index->col.get_str() + ")";
  return out;
}

GroupoidElement parse_element(const DirectedGraph& g, std::string_view text) {
  auto trim = [](std::string_view t) {
    while (!t.empty() && std::isspace(static_cast<unsigned char>(t.front()))) t.remove_prefix(1);
    while (!t.empty() && std::isspace(static_cast<unsigned char>(t.back()))) t.remove_suffix(1);
    return t;
  };
  text = trim(text);
  if (text.empty() || text.front() != '(') throw ParseError(0, "element must start with '('");
  std::vector<std::string_view> parts;
  std::size_t depth = 0, begin = 1, close = std::string_view::npos;
  for (std::size_t i = 0; i < text.size() && close == std::string_view::npos; ++i) {
    if (text[i] == '(') {
      ++depth;
    } else if (text[i] == ')') {
      if (--depth == 0) close = i;
    } else if (text[i] == ',' && depth == 1) {
      parts.push_back(text.substr(begin, i - begin));
      begin = i + 1;
    }
  }
  if (close == std::string_view::npos) throw ParseError(0, "unbalanced parentheses in element");
  parts.push_back(text.substr(begin, close - begin));
  if (parts.size() != 3) throw ParseError(0, "element needs three components (x, k, y)");
  GroupoidElement out{parse_point(g, parts[0]), 0, parse_point(g, parts[2]), std::nullopt};
  auto k = trim(parts[1]);
  try {
    std::size_t used = 0;
    out.degree = std::stol(std::string(k), &used);
    if (used != k.size()) throw std::invalid_argument("trailing");
  } catch (const std::exception&) {
    throw ParseError(0, "bad degree '" + std::string(k) + "'");
  }
  auto rest = trim(text.substr(close + 1));
  if (!rest.empty()) {
    if (rest.front() != '@') throw ParseError(0, "expected '@' after element");
    rest = trim(rest.substr(1));
    if (rest.size() < 5 || rest.front() != '(' || rest.back() != ')') {
      throw ParseError(0, "index must look like (i,j)");
    }
    auto inner = rest.substr(1, rest.size() - 2);
    auto comma = inner.find(',');
    if (comma == std::string_view::npos) throw ParseError(0, "index must look like (i,j)");
    auto num = [&](std::string_view t) {
      t = trim(t);
      if (t.empty() || !std::all_of(t.begin(), t.end(), [](char c) {
            return std::isdigit(static_cast<unsigned char>(c));
          })) {
        throw ParseError(0, "expected a natural number, got '" + std::string(t) + "'");
      }
      return Natural(std::string(t));
    };
    out.index = IndexPair{num(inner.substr(0, comma)), num(inner.substr(comma + 1))};
  }
  if (!is_groupoid_element(out)) throw ParseError(0, "not an element of the groupoid");
  return out;
}

// ---------------------------------------------------------------- atoms

bool ArrowAtom::operator<(const ArrowAtom& o) const {
  if (index != o.index) return index < o.index;
  if (alpha != o.alpha) return alpha < o.alpha;
  if (beta != o.beta) return beta < o.beta;
  return exclude < o.exclude;
}

void validate_atom(const DirectedGraph& g, const ArrowAtom& a) {
  validate_path(g, a.alpha);
  validate_path(g, a.beta);
  if (end_vertex(g, a.alpha) != end_vertex(g, a.beta)) {
    throw GraphError("arrow atom needs r(alpha) = r(beta)");
  }
  validate_atom(g, CylinderAtom{a.alpha, a.exclude});
}

std::vector<ArrowAtom> enumerate_atoms(const DirectedGraph& g, std::size_t depth) {
  std::vector<std::vector<Path>> ending(g.vertex_count());
  std::vector<Path> frontier;
  for (VertexId v = 0; v < g.vertex_count(); ++v) frontier.push_back(vertex_path(v));
  for (std::size_t len = 0; len <= depth; ++len) {
    std::vector<Path> next;
    for (auto& p : frontier) {
      VertexId end = end_vertex(g, p);
      if (len < depth) {
        for (EdgeId e : g.out_edges(end)) next.push_back(extended(p, e));
      }
      ending[end].push_back(std::move(p));
    }
    frontier = std::move(next);
  }
  std::vector<ArrowAtom> out;
  for (const auto& paths : ending) {
    for (const auto& a : paths) {
      for (const auto& b : paths) out.push_back({a, b, {}, std::nullopt});
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

bool atom_contains(const ArrowAtom& a, const GroupoidElement& e) {
  if (a.index != e.index) return false;
  if (e.degree != a.degree()) return false;
  if (!e.x.has_prefix(a.alpha) || !e.y.has_prefix(a.beta)) return false;
  auto z = e.x.shifted(a.alpha.length());
  if (!(z == e.y.shifted(a.beta.length()))) return false;
  if (!z.longer_than(0)) return a.exclude.empty();
  return !std::binary_search(a.exclude.begin(), a.exclude.end(), z.edge_at(0));
}

namespace {

struct Node {
  Path alpha;
  Path beta;
  auto operator<=>(const Node&) const = default;
};

struct NodeTraits {
  const DirectedGraph* g;

  std::optional<Node> parent(const Node& n) const {
    if (n.alpha.empty() || n.beta.empty()) return std::nullopt;
    if (n.alpha.edges.back() != n.beta.edges.back()) return std::nullopt;
    Node p = n;
    p.alpha.edges.pop_back();
    p.beta.edges.pop_back();
    return p;
  }
  std::vector<Node> children(const Node& n) const {
    std::vector<Node> out;
    for (EdgeId e : g->out_edges(end_vertex(*g, n.alpha))) {
      out.push_back({extended(n.alpha, e), extended(n.beta, e)});
    }
    return out;
  }
  bool covers(const Node& a, const Node& b) const {
    if (!is_prefix(a.alpha, b.alpha) || !is_prefix(a.beta, b.beta)) return false;
    std::size_t da = b.alpha.length() - a.alpha.length();
    if (b.beta.length() - a.beta.length() != da) return false;
    return std::equal(b.alpha.edges.end() - static_cast<std::ptrdiff_t>(da), b.alpha.edges.end(),
                      b.beta.edges.end() - static_cast<std::ptrdiff_t>(da));
  }
};

using Groups = std::map<std::optional<IndexPair>, std::vector<Node>>;

Groups expand(const DirectedGraph& g, const std::vector<ArrowAtom>& atoms) {
  Groups out;
  for (const auto& a : atoms) {
    auto& bucket = out[a.index];
    if (a.exclude.empty()) {
      bucket.push_back({a.alpha, a.beta});
      continue;
    }
    for (EdgeId e : g.out_edges(end_vertex(g, a.alpha))) {
      if (!std::binary_search(a.exclude.begin(), a.exclude.end(), e)) {
        bucket.push_back({extended(a.alpha, e), extended(a.beta, e)});
      }
    }
  }
  return out;
}

std::vector<ArrowAtom> flatten(Groups groups) {
  std::vector<ArrowAtom> out;
  for (auto& [idx, nodes] : groups) {
    for (auto& n : nodes) out.push_back({std::move(n.alpha), std::move(n.beta), {}, idx});
  }
  return out;
}

}  // namespace

Bisection make_normalized(GraphPtr g, std::vector<ArrowAtom> atoms, bool indexed) {
  NodeTraits t{g.get()};
  Groups groups = expand(*g, atoms);
  for (auto it = groups.begin(); it != groups.end();) {
    it->second = detail::forest_normalize(t, std::move(it->second));
    it = it->second.empty() ? groups.erase(it) : std::next(it);
  }
  return Bisection(std::move(g), flatten(std::move(groups)), indexed, true);
}

// ---------------------------------------------------------------- bisections

Bisection::Bisection(GraphPtr g) : graph_(std::move(g)) {
  if (!graph_) throw std::invalid_argument("null graph");
}

Bisection Bisection::from_atoms(GraphPtr g, std::vector<ArrowAtom> atoms) {
  if (!g) throw std::invalid_argument("null graph");
  bool indexed = !atoms.empty() && atoms.front().index.has_value();
  for (auto& a : atoms) {
    if (a.index.has_value() != indexed) {
      throw GraphError("indexed and unindexed atoms cannot be mixed");
    }
    std::sort(a.exclude.begin(), a.exclude.end());
    a.exclude.erase(std::unique(a.exclude.begin(), a.exclude.end()), a.exclude.end());
    validate_atom(*g, a);
  }
  const bool trivially_normal = atoms.empty();
  return Bisection(std::move(g), std::move(atoms), indexed, trivially_normal);
}

Bisection Bisection::single(GraphPtr g, Path alpha, Path beta, std::optional<IndexPair> index) {
  return from_atoms(std::move(g), {ArrowAtom{std::move(alpha), std::move(beta), {}, index}});
}

Bisection Bisection::identity(const ClopenSet& k) {
  std::vector<ArrowAtom> atoms;
  for (const auto& mu : k.cylinders()) atoms.push_back({mu, mu, {}, std::nullopt});
  return make_normalized(k.graph_ptr(), std::move(atoms), false);
}

Bisection Bisection::normalized() const {
  if (normalized_) return *this;
  return make_normalized(graph_, atoms_, indexed_);
}

bool Bisection::empty() const { return normalized().atoms_.empty(); }

bool Bisection::contains(const GroupoidElement& e) const {
  return std::any_of(atoms_.begin(), atoms_.end(),
                     [&](const ArrowAtom& a) { return atom_contains(a, e); });
}

std::optional<GroupoidElement> Bisection::element_with_range(
    const BoundaryPoint& x, const std::optional<Natural>& row) const {
  for (const auto& a : normalized().atoms_) {
    if (a.index.has_value() != row.has_value()) continue;
    if (row && a.index->row != *row) continue;
    if (!x.has_prefix(a.alpha)) continue;
    auto y = x.shifted(a.alpha.length()).prepended(a.beta);
    return GroupoidElement{x, a.degree(), std::move(y), a.index};
  }
  return std::nullopt;
}

std::optional<GroupoidElement> Bisection::element_with_source(
    const BoundaryPoint& y, const std::optional<Natural>& col) const {
  for (const auto& a : normalized().atoms_) {
    if (a.index.has_value() != col.has_value()) continue;
    if (col && a.index->col != *col) continue;
    if (!y.has_prefix(a.beta)) continue;
    auto x = y.shifted(a.beta.length()).prepended(a.alpha);
    return GroupoidElement{std::move(x), a.degree(), y, a.index};
  }
  return std::nullopt;
}

void Bisection::check_compatible(const Bisection& o) const {
  if (graph_ != o.graph_) throw MixedGraphError();
  if (!atoms_.empty() && !o.atoms_.empty() && indexed_ != o.indexed_) {
    throw GraphError("indexed and unindexed arrow sets cannot be combined");
  }
}

Bisection Bisection::operator|(const Bisection& o) const {
  check_compatible(o);
  auto atoms = atoms_;
  atoms.insert(atoms.end(), o.atoms_.begin(), o.atoms_.end());
  return make_normalized(graph_, std::move(atoms), indexed_ || o.indexed_);
}

Bisection Bisection::operator&(const Bisection& o) const {
  check_compatible(o);
  NodeTraits t{graph_.get()};
  Groups a = expand(*graph_, normalized().atoms_);
  Groups b = expand(*graph_, o.normalized().atoms_);
  Groups out;
  for (auto& [idx, nodes] : a) {
    auto it = b.find(idx);
    if (it == b.end()) continue;
    auto common = detail::forest_intersect(t, nodes, it->second);
    if (!common.empty()) out[idx] = std::move(common);
  }
  return Bisection(graph_, flatten(std::move(out)), indexed_ || o.indexed_, true);
}

Bisection Bisection::operator-(const Bisection& o) const {
  check_compatible(o);
  NodeTraits t{graph_.get()};
  Groups a = expand(*graph_, normalized().atoms_);
  Groups b = expand(*graph_, o.normalized().atoms_);
  Groups out;
  for (auto& [idx, nodes] : a) {
    auto it = b.find(idx);
    auto rest = it == b.end() ? nodes : detail::forest_subtract(t, nodes, it->second);
    if (!rest.empty()) out[idx] = std::move(rest);
  }
  return Bisection(graph_, flatten(std::move(out)), indexed_, true);
}

bool Bisection::subset_of(const Bisection& o) const { return (*this - o).atoms_.empty(); }

bool Bisection::operator==(const Bisection& o) const {
  if (graph_ != o.graph_) throw MixedGraphError();
  return normalized().atoms_ == o.normalized().atoms_;
}

// ---------------------------------------------------------------- operations

Bisection compose(const Bisection& u, const Bisection& v) {
  if (u.graph_ptr() != v.graph_ptr()) throw MixedGraphError();
  if (!u.atoms().empty() && !v.atoms().empty() && u.is_indexed() != v.is_indexed()) {
    throw GraphError("cannot compose indexed with unindexed arrow sets");
  }
  const auto& g = u.graph();
  auto un = u.normalized();
  auto vn = v.normalized();
  std::vector<ArrowAtom> out;
  for (const auto& a : un.atoms()) {
    for (const auto& b : vn.atoms()) {
      std::optional<IndexPair> idx;
      if (a.index) {
        if (a.index->col != b.index->row) continue;
        idx = IndexPair{a.index->row, b.index->col};
      }
      ArrowAtom c;
      if (is_prefix(a.beta, b.alpha)) {
        Path eps = drop_front(g, b.alpha, a.beta.length());
        c = {concat(g, a.alpha, eps), b.beta, {}, idx};
      } else if (is_prefix(b.alpha, a.beta)) {
        Path eps = drop_front(g, a.beta, b.alpha.length());
        c = {a.alpha, concat(g, b.beta, eps), {}, idx};
      } else {
        continue;
      }
      if (c.degree() != a.degree() + b.degree()) {
        throw std::logic_error("degree bookkeeping violated in compose");
      }
      out.push_back(std::move(c));
    }
  }
  return make_normalized(u.graph_ptr(), std::move(out), un.is_indexed() || vn.is_indexed());
}

Bisection inverse(const Bisection& u) {
  std::vector<ArrowAtom> atoms;
  for (const auto& a : u.atoms()) {
    std::optional<IndexPair> idx;
    if (a.index) idx = IndexPair{a.index->col, a.index->row};
    atoms.push_back({a.beta, a.alpha, a.exclude, idx});
  }
  auto out = Bisection::from_atoms(u.graph_ptr(), std::move(atoms));
  return u.is_normalized() ? out.normalized() : out;
}

ClopenSet range_of(const Bisection& u) {
  std::vector<Path> paths;
  const Bisection n = u.normalized();
  for (const auto& a : n.atoms()) paths.push_back(a.alpha);
  return ClopenSet::from_paths(u.graph_ptr(), paths);
}

ClopenSet source_of(const Bisection& u) { return range_of(inverse(u)); }

IndexedClopen indexed_range_of(const Bisection& u) {
  if (!u.atoms().empty() && !u.is_indexed()) throw GraphError("arrow set is not indexed");
  std::map<Natural, std::vector<Path>> rows;
  const Bisection n = u.normalized();
  for (const auto& a : n.atoms()) rows[a.index->row].push_back(a.alpha);
  std::vector<IndexedClopen::Piece> pieces;
  for (const auto& [i, paths] : rows) {
    pieces.push_back({ClopenSet::from_paths(u.graph_ptr(), paths), IndexPattern::point(i)});
  }
  return IndexedClopen(u.graph_ptr(), std::move(pieces));
}

IndexedClopen indexed_source_of(const Bisection& u) { return indexed_range_of(inverse(u)); }

Bisection restrict(const Bisection& u, const ClopenSet& k) {
  if (u.graph_ptr() != k.graph_ptr()) throw MixedGraphError();
  const auto& g = u.graph();
  auto cyl = k.cylinders();
  std::vector<ArrowAtom> out;
  // Refine each atom so its range lies in K, then do the same for sources.
  auto refine_range = [&](const std::vector<ArrowAtom>& in) {
    std::vector<ArrowAtom> res;
    for (const auto& a : in) {
      for (const auto& kappa : cyl) {
        if (is_prefix(kappa, a.alpha)) {
          res.push_back(a);
          break;
        }
        if (is_prefix(a.alpha, kappa)) {
          Path d = drop_front(g, kappa, a.alpha.length());
          res.push_back({kappa, concat(g, a.beta, d), {}, a.index});
        }
      }
    }
    return res;
  };
  auto swap_all = [](std::vector<ArrowAtom> in) {
    for (auto& a : in) {
      std::swap(a.alpha, a.beta);
      if (a.index) std::swap(a.index->row, a.index->col);
    }
    return in;
  };
  auto atoms = refine_range(u.normalized().atoms());
  atoms = swap_all(refine_range(swap_all(std::move(atoms))));
  return make_normalized(u.graph_ptr(), std::move(atoms), u.is_indexed());
}

Bisection cross_with_R(const Bisection& u, const std::vector<IndexPair>& pairs) {
  if (u.is_indexed() && !u.atoms().empty()) {
    throw GraphError("arrow set is already indexed");
  }
  std::vector<ArrowAtom> atoms;
  for (const auto& p : pairs) {
    for (const auto& a : u.atoms()) atoms.push_back({a.alpha, a.beta, a.exclude, p});
  }
  if (atoms.empty()) return Bisection(u.graph_ptr());
  return make_normalized(u.graph_ptr(), std::move(atoms), true);
}

BisectionCheck verify_bisection(const Bisection& u) {
  auto n = u.normalized();
  const auto& atoms = n.atoms();
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    for (std::size_t j = i + 1; j < atoms.size(); ++j) {
      const auto& a = atoms[i];
      const auto& b = atoms[j];
      bool same_row = !a.index || a.index->row == b.index->row;
      bool same_col = !a.index || a.index->col == b.index->col;
      if (same_row && (is_prefix(a.alpha, b.alpha) || is_prefix(b.alpha, a.alpha))) {
        return {false, std::make_pair(a, b), "ranges overlap"};
      }
      if (same_col && (is_prefix(a.beta, b.beta) || is_prefix(b.beta, a.beta))) {
        return {false, std::make_pair(a, b), "sources overlap"};
      }
    }
  }
  return {};
}

// ---------------------------------------------------------------- text

namespace {

struct Scanner {
  std::string_view text;
  std::size_t pos = 0;

  void skip_ws() {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
  }
  bool peek(char c) {
    skip_ws();
    return pos < text.size() && text[pos] == c;
  }
  bool eat(char c) {
    if (!peek(c)) return false;
    ++pos;
    return true;
  }
  void expect(char c) {
    if (!eat(c)) {
      throw ParseError(0, std::string("expected '") + c + "' at offset " + std::to_string(pos));
    }
  }
  std::string_view until(std::string_view stops) {
    skip_ws();
    std::size_t b = pos;
    while (pos < text.size() && stops.find(text[pos]) == std::string_view::npos) ++pos;
    auto tok = text.substr(b, pos - b);
    while (!tok.empty() && std::isspace(static_cast<unsigned char>(tok.back()))) {
      tok.remove_suffix(1);
    }
    return tok;
  }
  Natural natural(std::string_view stops) {
    auto tok = until(stops);
    if (tok.empty() || !std::all_of(tok.begin(), tok.end(), [](char c) {
          return std::isdigit(static_cast<unsigned char>(c));
        })) {
      throw ParseError(0, "expected a natural number, got '" + std::string(tok) + "'");
    }
    return Natural(std::string(tok));
  }
};

}  // namespace

Bisection parse_bisection(GraphPtr g, std::string_view text) {
  Scanner s{text};
  s.expect('B');
  s.expect('{');
  std::vector<ArrowAtom> atoms;
  while (!s.eat('}')) {
    s.expect('(');
    ArrowAtom a;
    a.alpha = parse_path(*g, s.until("|"));
    s.expect('|');
    a.beta = parse_path(*g, s.until("\\)"));
    if (s.eat('\\')) {
      s.expect('{');
      if (!s.eat('}')) {
        while (true) {
          auto tok = s.until(",}");
          auto e = g->find_edge(tok);
          if (!e) throw ParseError(0, "unknown edge '" + std::string(tok) + "'");
          a.exclude.push_back(*e);
          if (s.eat('}')) break;
          s.expect(',');
        }
      }
    }
    s.expect(')');
    if (s.eat('@')) {
      s.expect('(');
      Natural i = s.natural(",");
      s.expect(',');
      Natural j = s.natural(")");
      s.expect(')');
      a.index = IndexPair{i, j};
    }
    atoms.push_back(std::move(a));
    if (!s.eat(';')) {
      s.expect('}');
      break;
    }
  }
  s.skip_ws();
  if (s.pos != text.size()) throw ParseError(0, "trailing text after bisection");
  try {
    return Bisection::from_atoms(std::move(g), std::move(atoms));
  } catch (const GraphError& e) {
    throw ParseError(0, e.what());
  }
}

std::string to_string(const ArrowAtom& a, const DirectedGraph& g) {
  std::string out = "(" + to_string(g, a.alpha) + " | " + to_string(g, a.beta);
  if (!a.exclude.empty()) {
    out += " \\ {";
    for (std::size_t i = 0; i < a.exclude.size(); ++i) {
      if (i) out += ",";
      out += g.edge(a.exclude[i]).id;
    }
    out += "}";
  }
  out += ")";
  if (a.index) out += " @ (" + a.index->row.get_str() + "," + a.index->col.get_str() + ")";
  return out;
}

std::string to_string(const Bisection& u) {
  std::string out = "B{";
  for (std::size_t i = 0; i < u.atoms().size(); ++i) {
    out += i ? "; " : " ";
    out += to_string(u.atoms()[i], u.graph());
  }
  return out + (u.atoms().empty() ? "}" : " }");
}

}  // namespace groupoidkit
