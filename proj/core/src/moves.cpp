#include "groupoidkit/moves.hpp"

#include <algorithm>
#include <cctype>
#include <deque>
#include <map>
#include <set>
#include <sstream>

#include "groupoidkit/error.hpp"
#include "groupoidkit/invariants.hpp"

namespace groupoidkit {

char to_char(MoveKind k) {
  switch (k) {
    case MoveKind::S: return 'S';
    case MoveKind::R: return 'R';
    case MoveKind::C: return 'C';
    case MoveKind::I: return 'I';
    case MoveKind::O: return 'O';
  }
  return '?';
}

std::optional<MoveKind> move_kind_from_char(char c) {
  switch (c) {
    case 'S': return MoveKind::S;
    case 'R': return MoveKind::R;
    case 'C': return MoveKind::C;
    case 'I': return MoveKind::I;
    case 'O': return MoveKind::O;
    default: return std::nullopt;
  }
}

bool MoveSequence::has_inverse_moves() const {
  return std::any_of(moves.begin(), moves.end(), [](const MoveRecord& m) { return m.inverse; });
}

// ---------------------------------------------------------------- text

std::string to_string(const MoveRecord& m) {
  std::string out = "MOVE ";
  out += to_char(m.kind);
  out += " " + m.vertex;
  if (!m.partition.empty()) {
    out += " partition=";
    for (std::size_t i = 0; i < m.partition.size(); ++i) {
      if (i) out += "|";
      for (std::size_t j = 0; j < m.partition[i].size(); ++j) {
        if (j) out += ",";
        out += m.partition[i][j];
      }
    }
  }
  if (m.inverse) out += " inverse";
  return out;
}

std::string serialize(const MoveSequence& s) {
  std::string out;
  for (const auto& m : s.moves) out += to_string(m) + "\n";
  return out;
}

namespace {

std::vector<std::string> split_ws(std::string_view s) {
  std::vector<std::string> out;
  std::istringstream in{std::string(s)};
  std::string tok;
  while (in >> tok) out.push_back(tok);
  return out;
}

std::vector<std::vector<std::string>> parse_partition(std::string_view text, std::size_t line) {
  std::vector<std::vector<std::string>> out;
  std::string cur;
  std::vector<std::string> cls;
  auto flush_name = [&] {
    if (!cur.empty()) cls.push_back(cur);
    cur.clear();
  };
  for (char c : text) {
    if (c == '{' || c == '}' || std::isspace(static_cast<unsigned char>(c))) continue;
    if (c == ',') {
      flush_name();
    } else if (c == '|') {
      flush_name();
      if (cls.empty()) throw ParseError(line, "empty class in partition");
      out.push_back(std::move(cls));
      cls.clear();
    } else {
      cur.push_back(c);
    }
  }
  flush_name();
  if (cls.empty()) throw ParseError(line, "empty class in partition");
  out.push_back(std::move(cls));
  return out;
}

MoveKind parse_kind(const std::string& tok, std::size_t line) {
  if (tok.size() != 1 || !move_kind_from_char(tok[0])) {
    throw ParseError(line, "unknown move kind '" + tok + "'");
  }
  return *move_kind_from_char(tok[0]);
}

}  // namespace

MoveSequence parse_move_sequence(std::string_view text) {
  MoveSequence seq;
  std::istringstream in{std::string(text)};
  std::string raw;
  std::size_t line = 0;
  while (std::getline(in, raw)) {
    ++line;
    if (auto hash = raw.find('#'); hash != std::string::npos) raw.resize(hash);
    auto toks = split_ws(raw);
    if (toks.empty()) continue;
    if (toks[0] != "MOVE") throw ParseError(line, "expected MOVE");
    if (toks.size() < 3) throw ParseError(line, "MOVE needs a kind and a vertex");
    MoveRecord m;
    m.kind = parse_kind(toks[1], line);
    m.vertex = toks[2];
    for (std::size_t i = 3; i < toks.size(); ++i) {
      if (toks[i] == "inverse") {
        m.inverse = true;
      } else if (toks[i].starts_with("partition=")) {
        m.partition = parse_partition(std::string_view(toks[i]).substr(10), line);
      } else {
        throw ParseError(line, "unexpected token '" + toks[i] + "'");
      }
    }
    seq.moves.push_back(std::move(m));
  }
  return seq;
}

MoveRecord parse_move_spec(std::string_view text) {
  auto toks = split_ws(text);
  if (toks.size() < 2) throw ParseError(0, "move needs a kind and a vertex");
  MoveRecord m;
  m.kind = parse_kind(toks[0], 0);
  m.vertex = toks[1];
  std::string rest;
  for (std::size_t i = 2; i < toks.size(); ++i) rest += toks[i];
  if (!rest.empty()) m.partition = parse_partition(rest, 0);
  return m;
}

// ---------------------------------------------------------------- moves

namespace {

struct Builder {
  std::vector<std::string> vertices;
  std::vector<EdgeSpec> edges;
  std::set<std::string> used;

  explicit Builder(const DirectedGraph& g) {
    for (const auto& v : g.vertices()) used.insert(v);
    for (const auto& e : g.edges()) used.insert(e.id);
  }
  std::string fresh(std::string base) {
    while (used.contains(base)) base += "_";
    used.insert(base);
    return base;
  }
};

bool has_loop(const DirectedGraph& g, VertexId v) {
  for (EdgeId e : g.out_edges(v))
    if (g.edge(e).range == v) return true;
  return false;
}

VertexId require_vertex(const DirectedGraph& g, const std::string& name) {
  auto v = g.find_vertex(name);
  if (!v) throw MoveError("unknown vertex '" + name + "'");
  return *v;
}

// class index per edge id, for the edges in `edges`.
std::map<EdgeId, std::size_t> classes_of(const DirectedGraph& g, std::span<const EdgeId> edges,
                                         const std::vector<std::vector<std::string>>& partition) {
  if (partition.empty()) throw MoveError("split needs a partition");
  std::map<EdgeId, std::size_t> cls;
  for (std::size_t i = 0; i < partition.size(); ++i) {
    if (partition[i].empty()) throw MoveError("partition class is empty");
    for (const auto& name : partition[i]) {
      auto e = g.find_edge(name);
      if (!e || std::find(edges.begin(), edges.end(), *e) == edges.end()) {
        throw MoveError("edge '" + name + "' is not among the edges being split");
      }
      if (!cls.emplace(*e, i).second) throw MoveError("edge '" + name + "' appears twice");
    }
  }
  if (cls.size() != edges.size()) throw MoveError("partition does not cover every edge");
  return cls;
}

DirectedGraph delete_source(const DirectedGraph& g, VertexId v) {
  if (!g.is_source(v) || g.is_sink(v)) throw MoveError("S needs a source that emits edges");
  Builder b(g);
  for (VertexId w = 0; w < g.vertex_count(); ++w)
    if (w != v) b.vertices.push_back(g.vertex_name(w));
  for (const auto& e : g.edges()) {
    if (e.source != v) b.edges.push_back({e.id, g.vertex_name(e.source), g.vertex_name(e.range)});
  }
  return DirectedGraph(g.name(), std::move(b.vertices), std::move(b.edges));
}

DirectedGraph collapse(const DirectedGraph& g, VertexId v) {
  Builder b(g);
  for (VertexId w = 0; w < g.vertex_count(); ++w)
    if (w != v) b.vertices.push_back(g.vertex_name(w));
  for (const auto& e : g.edges()) {
    if (e.source != v && e.range != v) {
      b.edges.push_back({e.id, g.vertex_name(e.source), g.vertex_name(e.range)});
    }
  }
  for (EdgeId in : g.in_edges(v)) {
    for (EdgeId out : g.out_edges(v)) {
      const Edge& e = g.edge(in);
      const Edge& f = g.edge(out);
      b.edges.push_back(
          {b.fresh(e.id + "_" + f.id), g.vertex_name(e.source), g.vertex_name(f.range)});
    }
  }
  return DirectedGraph(g.name(), std::move(b.vertices), std::move(b.edges));
}

DirectedGraph in_split(const DirectedGraph& g, VertexId v,
                       const std::vector<std::vector<std::string>>& partition) {
  if (g.is_source(v) || g.is_sink(v)) throw MoveError("I needs a regular vertex");
  auto cls = classes_of(g, g.in_edges(v), partition);
  const std::size_t m = partition.size();
  Builder b(g);
  std::vector<std::string> copies;
  for (std::size_t i = 0; i < m; ++i) copies.push_back(b.fresh(g.vertex_name(v) + "_" + std::to_string(i + 1)));
  for (VertexId w = 0; w < g.vertex_count(); ++w) {
    if (w == v) {
      b.vertices.insert(b.vertices.end(), copies.begin(), copies.end());
    } else {
      b.vertices.push_back(g.vertex_name(w));
    }
  }
  auto range_name = [&](EdgeId id) {
    const Edge& e = g.edge(id);
    return e.range == v ? copies[cls.at(id)] : g.vertex_name(e.range);
  };
  for (EdgeId id = 0; id < g.edge_count(); ++id) {
    const Edge& e = g.edge(id);
    if (e.source == v) {
      for (std::size_t j = 0; j < m; ++j) {
        b.edges.push_back({b.fresh(e.id + "_" + std::to_string(j + 1)), copies[j], range_name(id)});
      }
    } else {
      b.edges.push_back({e.id, g.vertex_name(e.source), range_name(id)});
    }
  }
  return DirectedGraph(g.name(), std::move(b.vertices), std::move(b.edges));
}

DirectedGraph out_split(const DirectedGraph& g, VertexId v,
                        const std::vector<std::vector<std::string>>& partition) {
  if (g.is_sink(v)) throw MoveError("O needs a vertex that emits edges");
  auto cls = classes_of(g, g.out_edges(v), partition);
  const std::size_t m = partition.size();
  Builder b(g);
  std::vector<std::string> copies;
  for (std::size_t i = 0; i < m; ++i) copies.push_back(b.fresh(g.vertex_name(v) + "_" + std::to_string(i + 1)));
  for (VertexId w = 0; w < g.vertex_count(); ++w) {
    if (w == v) {
      b.vertices.insert(b.vertices.end(), copies.begin(), copies.end());
    } else {
      b.vertices.push_back(g.vertex_name(w));
    }
  }
  auto source_name = [&](EdgeId id) {
    const Edge& e = g.edge(id);
    return e.source == v ? copies[cls.at(id)] : g.vertex_name(e.source);
  };
  for (EdgeId id = 0; id < g.edge_count(); ++id) {
    const Edge& e = g.edge(id);
    if (e.range == v) {
      for (std::size_t j = 0; j < m; ++j) {
        b.edges.push_back({b.fresh(e.id + "_" + std::to_string(j + 1)), source_name(id), copies[j]});
      }
    } else {
      b.edges.push_back({e.id, source_name(id), g.vertex_name(e.range)});
    }
  }
  return DirectedGraph(g.name(), std::move(b.vertices), std::move(b.edges));
}

}  // namespace

DirectedGraph apply_move(const DirectedGraph& g, const MoveRecord& m) {
  VertexId v = require_vertex(g, m.vertex);
  if ((m.kind == MoveKind::I || m.kind == MoveKind::O) == m.partition.empty()) {
    throw MoveError(m.partition.empty() ? "split needs a partition"
                                        : "only splits take a partition");
  }
  switch (m.kind) {
    case MoveKind::S:
      return delete_source(g, v);
    case MoveKind::R: {
      auto in = g.in_edges(v);
      if (in.size() != 1 || g.edge(in.front()).source == v || g.is_sink(v)) {
        throw MoveError("R needs a vertex that emits edges and receives one edge, not a loop");
      }
      return collapse(g, v);
    }
    case MoveKind::C:
      if (g.is_source(v) || g.is_sink(v) || has_loop(g, v)) {
        throw MoveError("C needs a regular vertex without loops");
      }
      return collapse(g, v);
    case MoveKind::I:
      return in_split(g, v, m.partition);
    case MoveKind::O:
      return out_split(g, v, m.partition);
  }
  throw MoveError("unknown move");
}

std::vector<std::vector<std::size_t>> set_partitions(std::size_t n) {
  std::vector<std::vector<std::size_t>> out;
  if (n == 0) return {{}};
  std::vector<std::size_t> a(n, 0), maxv(n, 0);
  while (true) {
    out.push_back(a);
    // Next restricted growth string.
    std::size_t i = n - 1;
    while (i > 0 && a[i] == maxv[i - 1] + 1) --i;
    if (i == 0) break;
    ++a[i];
    maxv[i] = std::max(maxv[i - 1], a[i]);
    for (std::size_t j = i + 1; j < n; ++j) {
      a[j] = 0;
      maxv[j] = maxv[i];
    }
  }
  return out;
}

namespace {

void add_splits(const DirectedGraph& g, VertexId v, MoveKind kind, std::span<const EdgeId> edges,
                std::size_t min_classes, std::size_t max_edges, std::vector<MoveRecord>& out) {
  if (edges.empty() || edges.size() > max_edges) return;
  for (const auto& rgs : set_partitions(edges.size())) {
    std::size_t m = *std::max_element(rgs.begin(), rgs.end()) + 1;
    if (m < min_classes) continue;
    MoveRecord rec{kind, g.vertex_name(v), std::vector<std::vector<std::string>>(m), false};
    for (std::size_t i = 0; i < edges.size(); ++i) {
      rec.partition[rgs[i]].push_back(g.edge(edges[i]).id);
    }
    out.push_back(std::move(rec));
  }
}

}  // namespace

std::vector<MoveRecord> legal_moves(const DirectedGraph& g, std::size_t min_split_classes,
                                    std::size_t max_split_edges) {
  std::vector<MoveRecord> out;
  for (VertexId v = 0; v < g.vertex_count(); ++v) {
    const std::string& name = g.vertex_name(v);
    const bool sink = g.is_sink(v);
    const bool source = g.is_source(v);
    if (source && !sink) out.push_back({MoveKind::S, name, {}, false});
    auto in = g.in_edges(v);
    if (!sink && in.size() == 1 && g.edge(in.front()).source != v) {
      out.push_back({MoveKind::R, name, {}, false});
    }
    if (!sink && !source && !has_loop(g, v)) out.push_back({MoveKind::C, name, {}, false});
    if (!sink && !source) {
      add_splits(g, v, MoveKind::I, in, min_split_classes, max_split_edges, out);
    }
    if (!sink) {
      add_splits(g, v, MoveKind::O, g.out_edges(v), min_split_classes, max_split_edges, out);
    }
  }
  return out;
}

// ---------------------------------------------------------------- isomorphism

namespace {

std::vector<std::size_t> refine_colours(const DirectedGraph& g,
                                        const std::vector<std::vector<long>>& a) {
  const std::size_t n = g.vertex_count();
  std::vector<std::size_t> colour(n, 0);
  using Sig = std::vector<long>;
  auto relabel = [&](const std::vector<Sig>& sigs) {
    std::vector<Sig> uniq = sigs;
    std::sort(uniq.begin(), uniq.end());
    uniq.erase(std::unique(uniq.begin(), uniq.end()), uniq.end());
    std::vector<std::size_t> out(n);
    for (std::size_t v = 0; v < n; ++v) {
      out[v] = static_cast<std::size_t>(std::lower_bound(uniq.begin(), uniq.end(), sigs[v]) -
                                        uniq.begin());
    }
    return std::make_pair(out, uniq.size());
  };
  std::vector<Sig> sigs(n);
  for (std::size_t v = 0; v < n; ++v) {
    sigs[v] = {static_cast<long>(g.out_edges(v).size()), static_cast<long>(g.in_edges(v).size()),
               a[v][v]};
  }
  auto [c, count] = relabel(sigs);
  colour = c;
  for (std::size_t round = 0; round < n; ++round) {
    for (std::size_t v = 0; v < n; ++v) {
      Sig s{static_cast<long>(colour[v])};
      std::vector<std::pair<long, long>> outs, ins;
      for (std::size_t w = 0; w < n; ++w) {
        if (a[v][w]) outs.push_back({static_cast<long>(colour[w]), a[v][w]});
        if (a[w][v]) ins.push_back({static_cast<long>(colour[w]), a[w][v]});
      }
      std::sort(outs.begin(), outs.end());
      std::sort(ins.begin(), ins.end());
      s.push_back(-1);
      for (auto [x, y] : outs) s.insert(s.end(), {x, y});
      s.push_back(-2);
      for (auto [x, y] : ins) s.insert(s.end(), {x, y});
      sigs[v] = std::move(s);
    }
    auto [next, next_count] = relabel(sigs);
    colour = next;
    if (next_count == count) break;
    count = next_count;
  }
  return colour;
}

struct CanonSearch {
  const std::vector<std::vector<long>>& a;
  std::vector<std::size_t> slot_colour;  // colour required at each position
  std::vector<std::size_t> colour;
  std::size_t n;
  std::vector<std::size_t> order;
  std::vector<bool> used;
  std::vector<long> key;
  std::vector<long> best_key;
  std::vector<std::size_t> best_order;
  bool have_best = false;

  void block(std::size_t p, std::vector<long>& out) const {
    for (std::size_t q = 0; q <= p; ++q) out.push_back(a[order[p]][order[q]]);
    for (std::size_t q = 0; q < p; ++q) out.push_back(a[order[q]][order[p]]);
  }

  // tight: key so far equals the best key's prefix.
  void run(std::size_t p, bool tight) {
    if (p == n) {
      if (!have_best || !tight) {
        best_key = key;
        best_order = order;
        have_best = true;
      }
      return;
    }
    for (std::size_t v = 0; v < n; ++v) {
      if (used[v] || colour[v] != slot_colour[p]) continue;
      used[v] = true;
      order.push_back(v);
      std::size_t mark = key.size();
      block(p, key);
      bool next_tight = tight;
      bool prune = false;
      if (have_best && tight) {
        auto c = std::lexicographical_compare_three_way(key.begin() + static_cast<std::ptrdiff_t>(mark), key.end(),
                                                        best_key.begin() + static_cast<std::ptrdiff_t>(mark),
                                                        best_key.begin() + static_cast<std::ptrdiff_t>(key.size()));
        if (c > 0) prune = true;
        if (c < 0) next_tight = false;
      }
      if (!prune) run(p + 1, next_tight);
      key.resize(mark);
      order.pop_back();
      used[v] = false;
      // A strictly better branch replaced best; later siblings compare to it.
      if (have_best && !tight) tight = true;
    }
  }
};

}  // namespace

CanonicalForm canonical_form(const DirectedGraph& g) {
  const std::size_t n = g.vertex_count();
  std::vector<std::vector<long>> a(n, std::vector<long>(n, 0));
  for (const auto& e : g.edges()) ++a[e.source][e.range];
  auto colour = refine_colours(g, a);
  std::vector<std::size_t> slots = colour;
  std::sort(slots.begin(), slots.end());
  CanonSearch s{a, slots, colour, n, {}, std::vector<bool>(n, false), {}, {}, {}, false};
  s.run(0, true);
  CanonicalForm out;
  out.order = s.best_order;
  out.key.push_back(static_cast<long>(n));
  out.key.insert(out.key.end(), s.best_key.begin(), s.best_key.end());
  return out;
}

bool isomorphic(const DirectedGraph& a, const DirectedGraph& b) {
  if (a.vertex_count() != b.vertex_count() || a.edge_count() != b.edge_count()) return false;
  return canonical_form(a).key == canonical_form(b).key;
}

// ---------------------------------------------------------------- replay and search

DirectedGraph replay(const DirectedGraph& start, const MoveSequence& seq,
                     const DirectedGraph* target) {
  DirectedGraph cur = start;
  std::size_t i = 0;
  for (; i < seq.moves.size() && !seq.moves[i].inverse; ++i) cur = apply_move(cur, seq.moves[i]);
  if (i == seq.moves.size()) return cur;
  for (std::size_t j = i; j < seq.moves.size(); ++j) {
    if (!seq.moves[j].inverse) throw MoveError("forward move after inverse moves");
  }
  if (!target) throw MoveError("inverse moves can only be replayed against a target graph");
  DirectedGraph back = *target;
  for (std::size_t j = seq.moves.size(); j-- > i;) {
    MoveRecord fwd = seq.moves[j];
    fwd.inverse = false;
    back = apply_move(back, fwd);
  }
  if (!isomorphic(cur, back)) throw MoveError("the two halves of the sequence do not meet");
  return *target;
}

namespace {

struct SearchNode {
  DirectedGraph graph;
  std::optional<std::size_t> parent;
  MoveRecord move;
};

struct SearchSide {
  std::vector<SearchNode> nodes;
  std::map<std::vector<long>, std::size_t> seen;
  std::deque<std::size_t> queue;

  explicit SearchSide(const DirectedGraph& root) {
    nodes.push_back({root, std::nullopt, {}});
    seen.emplace(canonical_form(root).key, 0);
    queue.push_back(0);
  }
  std::vector<MoveRecord> path_to(std::size_t idx) const {
    std::vector<MoveRecord> out;
    for (std::optional<std::size_t> at = idx; nodes[*at].parent; at = nodes[*at].parent) {
      out.push_back(nodes[*at].move);
    }
    std::reverse(out.begin(), out.end());
    return out;
  }
};

}  // namespace

MoveSearchResult find_move_sequence(const DirectedGraph& e, const DirectedGraph& f,
                                    const MoveSearchOptions& options) {
  MoveSearchResult result;
  if (isomorphic(e, f)) {
    result.status = MoveSearchResult::Status::found;
    result.reason = "graphs are isomorphic";
    return result;
  }
  if (!(bowen_franks(e) == bowen_franks(f))) {
    result.reason = "Bowen-Franks data differ, so no move sequence exists";
    return result;
  }
  const std::size_t cap = std::max(e.vertex_count(), f.vertex_count()) + options.extra_vertices;
  SearchSide sides[2] = {SearchSide(e), SearchSide(f)};
  std::size_t turn = 0;
  while (result.expansions < options.budget &&
         (!sides[0].queue.empty() || !sides[1].queue.empty())) {
    if (sides[turn].queue.empty()) turn ^= 1;
    SearchSide& here = sides[turn];
    SearchSide& there = sides[turn ^ 1];
    std::size_t idx = here.queue.front();
    here.queue.pop_front();
    ++result.expansions;
    const DirectedGraph g = here.nodes[idx].graph;
    for (const auto& m : legal_moves(g, 2, options.max_split_edges)) {
      DirectedGraph h = apply_move(g, m);
      if (h.vertex_count() > cap || h.vertex_count() == 0) continue;
      auto key = canonical_form(h).key;
      if (here.seen.contains(key)) continue;
      std::size_t id = here.nodes.size();
      here.nodes.push_back({std::move(h), idx, m});
      here.seen.emplace(key, id);
      here.queue.push_back(id);
      auto hit = there.seen.find(key);
      if (hit == there.seen.end()) continue;

      std::size_t e_idx = turn == 0 ? id : hit->second;
      std::size_t f_idx = turn == 0 ? hit->second : id;
      MoveSequence seq;
      seq.moves = sides[0].path_to(e_idx);
      auto back = sides[1].path_to(f_idx);
      for (auto it = back.rbegin(); it != back.rend(); ++it) {
        MoveRecord r = *it;
        r.inverse = true;
        seq.moves.push_back(std::move(r));
      }
      replay(e, seq, &f);  // throws if the sequence were wrong
      result.status = MoveSearchResult::Status::found;
      result.sequence = std::move(seq);
      result.reason = "sequence found";
      return result;
    }
    turn ^= 1;
  }
  result.reason = result.expansions >= options.budget ? "budget exhausted"
                                                      : "search space exhausted";
  return result;
}

}  // namespace groupoidkit
