#include "groupoidkit/boundary.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>
#include <stdexcept>

#include "forest.hpp"
#include "groupoidkit/error.hpp"

namespace groupoidkit {

Path vertex_path(VertexId v) { return Path{v, {}}; }

VertexId end_vertex(const DirectedGraph& g, const Path& p) {
  return p.edges.empty() ? p.start : g.edge(p.edges.back()).range;
}

bool is_valid_path(const DirectedGraph& g, const Path& p) {
  if (p.start >= g.vertex_count()) return false;
  VertexId at = p.start;
  for (EdgeId e : p.edges) {
    if (e >= g.edge_count() || g.edge(e).source != at) return false;
    at = g.edge(e).range;
  }
  return true;
}

void validate_path(const DirectedGraph& g, const Path& p) {
  if (!is_valid_path(g, p)) throw GraphError("edges do not form a path");
}

bool is_prefix(const Path& p, const Path& q) {
  return p.start == q.start && p.edges.size() <= q.edges.size() &&
         std::equal(p.edges.begin(), p.edges.end(), q.edges.begin());
}

Path extended(Path p, EdgeId e) {
  p.edges.push_back(e);
  return p;
}

Path concat(const DirectedGraph& g, const Path& p, const Path& q) {
  if (end_vertex(g, p) != q.start) throw GraphError("paths do not compose");
  Path out = p;
  out.edges.insert(out.edges.end(), q.edges.begin(), q.edges.end());
  return out;
}

Path drop_front(const DirectedGraph& g, const Path& p, std::size_t n) {
  if (n > p.length()) throw std::out_of_range("drop_front past end of path");
  if (n == 0) return p;
  Path out;
  out.start = g.edge(p.edges[n - 1]).range;
  out.edges.assign(p.edges.begin() + static_cast<std::ptrdiff_t>(n), p.edges.end());
  return out;
}

Path take_front(const Path& p, std::size_t n) {
  Path out{p.start, {}};
  n = std::min(n, p.length());
  out.edges.assign(p.edges.begin(), p.edges.begin() + static_cast<std::ptrdiff_t>(n));
  return out;
}

std::string to_string(const DirectedGraph& g, const Path& p) {
  if (p.empty()) return g.vertex_name(p.start);
  std::string out;
  for (std::size_t i = 0; i < p.edges.size(); ++i) {
    if (i) out.push_back('.');
    out += g.edge(p.edges[i]).id;
  }
  return out;
}

Path parse_path(const DirectedGraph& g, std::string_view text) {
  auto trim = [](std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
  };
  text = trim(text);
  if (text.empty()) throw ParseError(0, "empty path");
  if (auto v = g.find_vertex(text)) return vertex_path(*v);
  Path p;
  std::size_t pos = 0;
  bool first = true;
  while (true) {
    std::size_t dot = text.find('.', pos);
    auto tok = trim(text.substr(pos, dot == std::string_view::npos ? std::string_view::npos
                                                                     : dot - pos));
    auto e = g.find_edge(tok);
    if (!e) throw ParseError(0, "unknown edge or vertex '" + std::string(tok) + "'");
    if (first) {
      p.start = g.edge(*e).source;
      first = false;
    } else if (g.edge(*e).source != end_vertex(g, p)) {
      throw ParseError(0, "edge '" + std::string(tok) + "' does not continue the path");
    }
    p.edges.push_back(*e);
    if (dot == std::string_view::npos) break;
    pos = dot + 1;
  }
  return p;
}

namespace {

void enumerate_from(const DirectedGraph& g, Path& p, VertexId at, std::size_t depth,
                    std::vector<BoundaryPrefix>& out) {
  if (g.is_sink(at)) {
    out.push_back({p, PrefixStatus::complete});
    return;
  }
  if (p.length() == depth) {
    out.push_back({p, PrefixStatus::truncated});
    return;
  }
  for (EdgeId e : g.out_edges(at)) {
    p.edges.push_back(e);
    enumerate_from(g, p, g.edge(e).range, depth, out);
    p.edges.pop_back();
  }
}

}  // namespace

std::vector<BoundaryPrefix> enumerate_boundary(const DirectedGraph& g,
                                               std::size_t depth) {
  std::vector<BoundaryPrefix> out;
  for (VertexId v = 0; v < g.vertex_count(); ++v) {
    Path p = vertex_path(v);
    enumerate_from(g, p, v, depth, out);
  }
  std::sort(out.begin(), out.end());
  return out;
}

BoundaryPrefix shift(const DirectedGraph& g, const BoundaryPrefix& x, std::size_t n) {
  if (n > x.path.length()) throw std::out_of_range("shift exceeds prefix length");
  return {drop_front(g, x.path, n), x.status};
}

// ---------------------------------------------------------------- points

BoundaryPoint BoundaryPoint::finite(const DirectedGraph& g, Path path) {
  validate_path(g, path);
  if (!g.is_sink(end_vertex(g, path))) {
    throw GraphError("finite boundary path must end at a sink");
  }
  return BoundaryPoint(&g, std::move(path), {});
}

BoundaryPoint BoundaryPoint::periodic(const DirectedGraph& g, Path prefix,
                                      std::vector<EdgeId> cycle) {
  validate_path(g, prefix);
  if (cycle.empty()) throw GraphError("periodic point needs a nonempty cycle");
  Path loop{end_vertex(g, prefix), cycle};
  validate_path(g, loop);
  if (end_vertex(g, loop) != loop.start) throw GraphError("cycle is not closed");
  BoundaryPoint x(&g, std::move(prefix), std::move(cycle));
  x.canonicalize();
  return x;
}

BoundaryPoint BoundaryPoint::default_extension(const DirectedGraph& g, const Path& p) {
  validate_path(g, p);
  Path walk = p;
  std::vector<std::size_t> first_visit(g.vertex_count(), SIZE_MAX);
  VertexId at = end_vertex(g, p);
  std::size_t base = p.length();
  first_visit[at] = base;
  while (!g.is_sink(at)) {
    EdgeId e = g.out_edges(at).front();
    walk.edges.push_back(e);
    at = g.edge(e).range;
    if (first_visit[at] != SIZE_MAX) {
      std::size_t from = first_visit[at];
      std::vector<EdgeId> cycle(walk.edges.begin() + static_cast<std::ptrdiff_t>(from),
                                walk.edges.end());
      walk.edges.resize(from);
      return periodic(g, std::move(walk), std::move(cycle));
    }
    first_visit[at] = walk.length();
  }
  return finite(g, std::move(walk));
}

void BoundaryPoint::canonicalize() {
  if (cycle_.empty()) return;
  const std::size_t n = cycle_.size();
  for (std::size_t d = 1; d <= n; ++d) {
    if (n % d != 0) continue;
    bool periodic = true;
    for (std::size_t i = d; i < n && periodic; ++i) periodic = cycle_[i] == cycle_[i - d];
    if (periodic) {
      cycle_.resize(d);
      break;
    }
  }
  while (!prefix_.edges.empty() && prefix_.edges.back() == cycle_.back()) {
    prefix_.edges.pop_back();
    std::rotate(cycle_.rbegin(), cycle_.rbegin() + 1, cycle_.rend());
  }
  if (prefix_.edges.empty()) prefix_.start = graph_->edge(cycle_.front()).source;
}

EdgeId BoundaryPoint::edge_at(std::size_t i) const {
  if (i < prefix_.length()) return prefix_.edges[i];
  if (cycle_.empty()) throw std::out_of_range("edge index past end of finite point");
  return cycle_[(i - prefix_.length()) % cycle_.size()];
}

Path BoundaryPoint::initial_segment(std::size_t n) const {
  Path out{prefix_.start, {}};
  std::size_t len = is_finite() ? std::min(n, prefix_.length()) : n;
  out.edges.reserve(len);
  for (std::size_t i = 0; i < len; ++i) out.edges.push_back(edge_at(i));
  return out;
}

bool BoundaryPoint::has_prefix(const Path& p) const {
  if (p.start != prefix_.start || !at_least(p.length())) return false;
  for (std::size_t i = 0; i < p.length(); ++i) {
    if (edge_at(i) != p.edges[i]) return false;
  }
  return true;
}

BoundaryPoint BoundaryPoint::shifted(std::size_t n) const {
  if (!at_least(n)) throw std::out_of_range("shift past end of finite point");
  if (n <= prefix_.length()) {
    BoundaryPoint x(graph_, drop_front(*graph_, prefix_, n), cycle_);
    x.canonicalize();
    return x;
  }
  std::size_t k = (n - prefix_.length()) % cycle_.size();
  std::vector<EdgeId> c = cycle_;
  std::rotate(c.begin(), c.begin() + static_cast<std::ptrdiff_t>(k), c.end());
  const VertexId at = graph_->edge(c.front()).source;
  BoundaryPoint x(graph_, Path{at, {}}, std::move(c));
  x.canonicalize();
  return x;
}

BoundaryPoint BoundaryPoint::prepended(const Path& p) const {
  if (end_vertex(*graph_, p) != start()) throw GraphError("path does not end at point start");
  BoundaryPoint x(graph_, concat(*graph_, p, prefix_), cycle_);
  x.canonicalize();
  return x;
}

std::string to_string(const BoundaryPoint& x) {
  const auto& g = x.graph();
  std::string out = x.prefix().empty() && !x.is_finite() ? "" : to_string(g, x.prefix());
  if (x.is_finite()) return out;
  std::string cyc = to_string(g, Path{g.edge(x.cycle().front()).source, x.cycle()});
  return out.empty() ? "(" + cyc + ")^inf" : out + ".(" + cyc + ")^inf";
}

BoundaryPoint parse_point(const DirectedGraph& g, std::string_view text) {
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) text.remove_prefix(1);
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) text.remove_suffix(1);
  auto open = text.find('(');
  try {
    if (open == std::string_view::npos) {
      Path p = parse_path(g, text);
      if (!g.is_sink(end_vertex(g, p))) {
        throw ParseError(0, "finite point '" + std::string(text) + "' does not end at a sink");
      }
      return BoundaryPoint::finite(g, std::move(p));
    }
    constexpr std::string_view tail = ")^inf";
    if (text.size() < open + tail.size() || text.substr(text.size() - tail.size()) != tail) {
      throw ParseError(0, "periodic point must end with ')^inf'");
    }
    Path cycle = parse_path(g, text.substr(open + 1, text.size() - tail.size() - open - 1));
    if (cycle.empty()) throw ParseError(0, "empty cycle");
    Path prefix = vertex_path(cycle.start);
    if (open > 0) {
      auto head = text.substr(0, open);
      if (head.back() != '.') throw ParseError(0, "expected '.' before the cycle");
      prefix = parse_path(g, head.substr(0, head.size() - 1));
    }
    return BoundaryPoint::periodic(g, std::move(prefix), std::move(cycle.edges));
  } catch (const GraphError& e) {
    throw ParseError(0, e.what());
  }
}

// ---------------------------------------------------------------- atoms

void validate_atom(const DirectedGraph& g, const CylinderAtom& a) {
  validate_path(g, a.mu);
  VertexId end = end_vertex(g, a.mu);
  for (EdgeId e : a.exclude) {
    if (e >= g.edge_count() || g.edge(e).source != end) {
      throw GraphError("excluded edge does not leave r(mu)");
    }
  }
}

bool atom_contains(const DirectedGraph& g, const CylinderAtom& a, const BoundaryPoint& x) {
  if (!x.has_prefix(a.mu)) return false;
  if (!x.longer_than(a.mu.length())) return a.exclude.empty();
  EdgeId next = x.edge_at(a.mu.length());
  (void)g;
  return !std::binary_search(a.exclude.begin(), a.exclude.end(), next);
}

namespace {

struct PathTraits {
  const DirectedGraph* g;

  std::optional<Path> parent(const Path& p) const {
    if (p.edges.empty()) return std::nullopt;
    Path q = p;
    q.edges.pop_back();
    return q;
  }
  std::vector<Path> children(const Path& p) const {
    std::vector<Path> out;
    for (EdgeId e : g->out_edges(end_vertex(*g, p))) out.push_back(extended(p, e));
    return out;
  }
  bool covers(const Path& a, const Path& b) const { return is_prefix(a, b); }
};

std::vector<Path> expand_atoms(const DirectedGraph& g, const std::vector<CylinderAtom>& atoms) {
  std::vector<Path> out;
  for (const auto& a : atoms) {
    if (a.exclude.empty()) {
      out.push_back(a.mu);
      continue;
    }
    for (EdgeId e : g.out_edges(end_vertex(g, a.mu))) {
      if (!std::binary_search(a.exclude.begin(), a.exclude.end(), e)) {
        out.push_back(extended(a.mu, e));
      }
    }
  }
  return out;
}

std::vector<CylinderAtom> as_atoms(std::vector<Path> paths) {
  std::vector<CylinderAtom> out;
  out.reserve(paths.size());
  for (auto& p : paths) out.push_back({std::move(p), {}});
  return out;
}

}  // namespace

std::vector<Path> normalize_paths(const DirectedGraph& g, std::vector<Path> paths) {
  return detail::forest_normalize(PathTraits{&g}, std::move(paths));
}

std::vector<Path> intersect_paths(const DirectedGraph& g, const std::vector<Path>& a,
                                  const std::vector<Path>& b) {
  return detail::forest_intersect(PathTraits{&g}, a, b);
}

std::vector<Path> subtract_paths(const DirectedGraph& g, const std::vector<Path>& a,
                                 const std::vector<Path>& b) {
  return detail::forest_subtract(PathTraits{&g}, a, b);
}

// ---------------------------------------------------------------- clopen sets

ClopenSet::ClopenSet(GraphPtr g) : graph_(std::move(g)) {
  if (!graph_) throw std::invalid_argument("null graph");
}

ClopenSet ClopenSet::from_atoms(GraphPtr g, std::vector<CylinderAtom> atoms) {
  if (!g) throw std::invalid_argument("null graph");
  for (auto& a : atoms) {
    std::sort(a.exclude.begin(), a.exclude.end());
    a.exclude.erase(std::unique(a.exclude.begin(), a.exclude.end()), a.exclude.end());
    validate_atom(*g, a);
  }
  const bool trivially_normal = atoms.empty();
  return ClopenSet(std::move(g), std::move(atoms), trivially_normal);
}

ClopenSet ClopenSet::cylinder(GraphPtr g, Path mu) {
  validate_path(*g, mu);
  return from_paths(std::move(g), {std::move(mu)});
}

ClopenSet ClopenSet::from_paths(GraphPtr g, const std::vector<Path>& paths) {
  for (const auto& p : paths) validate_path(*g, p);
  auto normal = normalize_paths(*g, paths);
  return ClopenSet(std::move(g), as_atoms(std::move(normal)), true);
}

ClopenSet ClopenSet::whole(GraphPtr g) {
  std::vector<Path> roots;
  for (VertexId v = 0; v < g->vertex_count(); ++v) roots.push_back(vertex_path(v));
  return from_paths(std::move(g), roots);
}

ClopenSet ClopenSet::normalized() const {
  if (normalized_) return *this;
  return ClopenSet(graph_, as_atoms(normalize_paths(*graph_, expand_atoms(*graph_, atoms_))),
                   true);
}

std::vector<Path> ClopenSet::cylinders() const {
  std::vector<Path> out;
  for (const auto& a : normalized().atoms_) out.push_back(a.mu);
  return out;
}

bool ClopenSet::empty() const { return normalized().atoms_.empty(); }

bool ClopenSet::contains(const BoundaryPoint& x) const {
  if (&x.graph() != graph_.get()) throw MixedGraphError();
  return std::any_of(atoms_.begin(), atoms_.end(),
                     [&](const CylinderAtom& a) { return atom_contains(*graph_, a, x); });
}

std::size_t ClopenSet::max_depth() const {
  std::size_t d = 0;
  for (const auto& a : atoms_) d = std::max(d, a.mu.length() + (a.exclude.empty() ? 0 : 1));
  return d;
}

void ClopenSet::check_same_graph(const ClopenSet& o) const {
  if (graph_ != o.graph_) throw MixedGraphError();
}

ClopenSet ClopenSet::operator|(const ClopenSet& o) const {
  check_same_graph(o);
  auto paths = expand_atoms(*graph_, atoms_);
  auto more = expand_atoms(*graph_, o.atoms_);
  paths.insert(paths.end(), more.begin(), more.end());
  return ClopenSet(graph_, as_atoms(normalize_paths(*graph_, std::move(paths))), true);
}

ClopenSet ClopenSet::operator&(const ClopenSet& o) const {
  check_same_graph(o);
  return ClopenSet(graph_, as_atoms(intersect_paths(*graph_, cylinders(), o.cylinders())),
                   true);
}

ClopenSet ClopenSet::operator-(const ClopenSet& o) const {
  check_same_graph(o);
  return ClopenSet(graph_, as_atoms(subtract_paths(*graph_, cylinders(), o.cylinders())),
                   true);
}

bool ClopenSet::subset_of(const ClopenSet& o) const { return (*this - o).atoms_.empty(); }

bool ClopenSet::disjoint_from(const ClopenSet& o) const {
  return (*this & o).atoms_.empty();
}

bool ClopenSet::operator==(const ClopenSet& o) const {
  check_same_graph(o);
  return normalized().atoms_ == o.normalized().atoms_;
}

ClopenSet normalize(const ClopenSet& k) { return k.normalized(); }

// ---------------------------------------------------------------- text

namespace {

struct Cursor {
  std::string_view text;
  std::size_t pos = 0;

  void skip_ws() {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
  }
  bool eat(char c) {
    skip_ws();
    if (pos < text.size() && text[pos] == c) {
      ++pos;
      return true;
    }
    return false;
  }
  void expect(char c) {
    if (!eat(c)) {
      throw ParseError(0, std::string("expected '") + c + "' at offset " + std::to_string(pos));
    }
  }
  bool at_end() {
    skip_ws();
    return pos >= text.size();
  }
  bool starts_with(std::string_view s) {
    skip_ws();
    return text.substr(pos).starts_with(s);
  }
  // Reads up to (not including) any char in `stops` or whitespace.
  std::string_view token(std::string_view stops) {
    skip_ws();
    std::size_t b = pos;
    while (pos < text.size() && stops.find(text[pos]) == std::string_view::npos &&
           !std::isspace(static_cast<unsigned char>(text[pos])))
      ++pos;
    return text.substr(b, pos - b);
  }
};

Natural parse_natural(std::string_view tok) {
  if (tok.empty() || !std::all_of(tok.begin(), tok.end(), [](char c) {
        return std::isdigit(static_cast<unsigned char>(c));
      })) {
    throw ParseError(0, "expected a natural number, got '" + std::string(tok) + "'");
  }
  return Natural(std::string(tok));
}

}  // namespace

std::vector<ParsedCylinder> parse_cylinders(const DirectedGraph& g, std::string_view text) {
  Cursor c{text};
  std::vector<ParsedCylinder> out;
  if (c.at_end()) return out;
  while (true) {
    if (c.starts_with("{}")) {
      c.pos += 2;
    } else if (c.starts_with("all")) {
      c.pos += 3;
      for (VertexId v = 0; v < g.vertex_count(); ++v) out.push_back({{vertex_path(v), {}}, {}});
    } else {
      c.expect('Z');
      c.expect('(');
      Path mu = parse_path(g, c.token("\\)"));
      std::vector<EdgeId> exclude;
      if (c.eat('\\')) {
        c.expect('{');
        if (!c.eat('}')) {
          while (true) {
            auto tok = c.token(",}");
            auto e = g.find_edge(tok);
            if (!e) throw ParseError(0, "unknown edge '" + std::string(tok) + "'");
            exclude.push_back(*e);
            if (c.eat('}')) break;
            c.expect(',');
          }
        }
      }
      c.expect(')');
      std::optional<Natural> index;
      if (c.eat('@')) index = parse_natural(c.token("+;"));
      std::sort(exclude.begin(), exclude.end());
      exclude.erase(std::unique(exclude.begin(), exclude.end()), exclude.end());
      CylinderAtom atom{std::move(mu), std::move(exclude)};
      try {
        validate_atom(g, atom);
      } catch (const GraphError& err) {
        throw ParseError(0, err.what());
      }
      out.push_back({std::move(atom), std::move(index)});
    }
    if (c.at_end()) break;
    if (!c.eat('+') && !c.eat(';')) {
      throw ParseError(0, "expected '+' or ';' at offset " + std::to_string(c.pos));
    }
  }
  return out;
}

ClopenSet parse_clopen(GraphPtr g, std::string_view text) {
  std::vector<CylinderAtom> atoms;
  for (auto& p : parse_cylinders(*g, text)) {
    if (p.index) throw ParseError(0, "indexed atom where a plain clopen set was expected");
    atoms.push_back(std::move(p.atom));
  }
  return ClopenSet::from_atoms(std::move(g), std::move(atoms));
}

std::string to_string(const CylinderAtom& a, const DirectedGraph& g) {
  std::string out = "Z(" + to_string(g, a.mu);
  if (!a.exclude.empty()) {
    out += " \\ {";
    for (std::size_t i = 0; i < a.exclude.size(); ++i) {
      if (i) out += ",";
      out += g.edge(a.exclude[i]).id;
    }
    out += "}";
  }
  return out + ")";
}

std::string to_string(const ClopenSet& k) {
  if (k.atoms().empty()) return "{}";
  std::string out;
  for (std::size_t i = 0; i < k.atoms().size(); ++i) {
    if (i) out += " + ";
    out += to_string(k.atoms()[i], k.graph());
  }
  return out;
}

// ---------------------------------------------------------------- fullness

Fullness check_fullness(const ClopenSet& k) {
  const DirectedGraph& g = k.graph();
  std::vector<VertexId> ends;
  for (const auto& mu : k.cylinders()) ends.push_back(end_vertex(g, mu));
  Fullness out;
  out.saturated_vertices = reachable_set(g, ends);

  std::vector<bool> inside(g.vertex_count(), false);
  for (VertexId v : out.saturated_vertices) inside[v] = true;

  for (VertexId v = 0; v < g.vertex_count(); ++v) {
    if (!inside[v] && g.is_sink(v)) {
      out.witness = BoundaryPoint::finite(g, vertex_path(v));
      return out;
    }
  }
  // Cycle search restricted to the complement, iterative DFS with colours.
  enum : unsigned char { white, grey, black };
  std::vector<unsigned char> colour(g.vertex_count(), white);
  std::vector<EdgeId> via(g.vertex_count(), 0);
  for (VertexId root = 0; root < g.vertex_count(); ++root) {
    if (inside[root] || colour[root] != white) continue;
    std::vector<std::pair<VertexId, std::size_t>> stack{{root, 0}};
    colour[root] = grey;
    while (!stack.empty()) {
      auto& [v, next] = stack.back();
      auto outs = g.out_edges(v);
      if (next == outs.size()) {
        colour[v] = black;
        stack.pop_back();
        continue;
      }
      EdgeId e = outs[next++];
      VertexId w = g.edge(e).range;
      if (inside[w]) continue;
      if (colour[w] == grey) {
        // Recover the cycle w -> ... -> v -> w from the DFS stack.
        std::vector<EdgeId> cycle;
        std::size_t i = stack.size();
        while (stack[i - 1].first != w) {
          cycle.push_back(via[stack[i - 1].first]);
          --i;
        }
        std::reverse(cycle.begin(), cycle.end());
        cycle.push_back(e);
        out.witness = BoundaryPoint::periodic(g, vertex_path(w), std::move(cycle));
        return out;
      }
      if (colour[w] == white) {
        colour[w] = grey;
        via[w] = e;
        stack.push_back({w, 0});
      }
    }
  }
  out.full = true;
  return out;
}

bool is_full(const DirectedGraph& g, const ClopenSet& k) {
  if (&g != &k.graph()) throw MixedGraphError();
  return check_fullness(k).full;
}

}  // namespace groupoidkit
