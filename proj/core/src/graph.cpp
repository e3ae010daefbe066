#include "groupoidkit/graph.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <deque>
#include <sstream>

#include <json.hpp>

#include "groupoidkit/error.hpp"

namespace groupoidkit {

std::string_view to_string(VertexClass kind) {
  switch (kind) {
    case VertexClass::regular:
      return "regular";
    case VertexClass::sink:
      return "sink";
    case VertexClass::source:
      return "source";
    case VertexClass::isolated:
      return "isolated";
  }
  return "?";
}

DirectedGraph::DirectedGraph(std::string name,
                             std::vector<std::string> vertices,
                             std::vector<EdgeSpec> edges)
    : name_(std::move(name)), vertices_(std::move(vertices)) {
  for (VertexId v = 0; v < vertices_.size(); ++v) {
    const auto& id = vertices_[v];
    if (id.empty()) throw GraphError("empty vertex identifier");
    if (!vertex_index_.emplace(id, v).second) {
      throw GraphError("duplicate identifier '" + id + "'");
    }
  }
  out_.resize(vertices_.size());
  in_.resize(vertices_.size());
  edges_.reserve(edges.size());
  for (auto& spec : edges) {
    if (spec.id.empty()) throw GraphError("empty edge identifier");
    if (vertex_index_.contains(spec.id) || edge_index_.contains(spec.id)) {
      throw GraphError("duplicate identifier '" + spec.id + "'");
    }
    auto s = vertex_index_.find(spec.source);
    auto r = vertex_index_.find(spec.range);
    if (s == vertex_index_.end()) {
      throw GraphError("edge '" + spec.id + "' has undeclared source '" +
                       spec.source + "'");
    }
    if (r == vertex_index_.end()) {
      throw GraphError("edge '" + spec.id + "' has undeclared range '" +
                       spec.range + "'");
    }
    EdgeId e = edges_.size();
    edge_index_.emplace(spec.id, e);
    edges_.push_back(Edge{std::move(spec.id), s->second, r->second});
    out_[s->second].push_back(e);
    in_[r->second].push_back(e);
  }
}

std::optional<VertexId> DirectedGraph::find_vertex(std::string_view id) const {
  auto it = vertex_index_.find(std::string(id));
  if (it == vertex_index_.end()) return std::nullopt;
  return it->second;
}

std::optional<EdgeId> DirectedGraph::find_edge(std::string_view id) const {
  auto it = edge_index_.find(std::string(id));
  if (it == edge_index_.end()) return std::nullopt;
  return it->second;
}

std::vector<EdgeSpec> DirectedGraph::edge_specs() const {
  std::vector<EdgeSpec> specs;
  specs.reserve(edges_.size());
  for (const auto& e : edges_) {
    specs.push_back({e.id, vertices_[e.source], vertices_[e.range]});
  }
  return specs;
}

namespace {

std::vector<std::string> split_ws(std::string_view line) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i])))
      ++i;
    std::size_t j = i;
    while (j < line.size() && !std::isspace(static_cast<unsigned char>(line[j])))
      ++j;
    if (j > i) out.emplace_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

bool looks_like_json(std::string_view text) {
  for (char c : text) {
    if (std::isspace(static_cast<unsigned char>(c))) continue;
    return c == '{';
  }
  return false;
}

}  // namespace

DirectedGraph parse_graph(std::string_view text) {
  if (looks_like_json(text)) return parse_graph_json(text);

  std::string name;
  bool have_header = false;
  std::vector<std::string> vertices;
  std::vector<EdgeSpec> edges;
  std::unordered_map<std::string, std::size_t> declared;  // id -> line
  std::vector<std::size_t> edge_lines;

  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    auto tokens = split_ws(line);
    if (tokens.empty()) {
      if (end == text.size()) break;
      continue;
    }
    const auto& kw = tokens[0];
    if (kw == "graph") {
      if (have_header) throw ParseError(line_no, "duplicate graph header");
      if (!vertices.empty() || !edges.empty()) {
        throw ParseError(line_no, "graph header must come first");
      }
      if (tokens.size() != 2) {
        throw ParseError(line_no, "expected 'graph <name>'");
      }
      name = tokens[1];
      have_header = true;
    } else if (kw == "vertex") {
      if (!have_header) throw ParseError(line_no, "missing graph header");
      if (tokens.size() != 2) {
        throw ParseError(line_no, "expected 'vertex <id>'");
      }
      if (!edges.empty()) {
        throw ParseError(line_no, "vertex declared after edges");
      }
      if (!declared.emplace(tokens[1], line_no).second) {
        throw ParseError(line_no, "duplicate identifier '" + tokens[1] + "'");
      }
      vertices.push_back(tokens[1]);
    } else if (kw == "edge") {
      if (!have_header) throw ParseError(line_no, "missing graph header");
      if (tokens.size() != 4) {
        throw ParseError(line_no, "expected 'edge <id> <src> <dst>'");
      }
      if (!declared.emplace(tokens[1], line_no).second) {
        throw ParseError(line_no, "duplicate identifier '" + tokens[1] + "'");
      }
      for (int k : {2, 3}) {
        auto it = declared.find(tokens[k]);
        bool is_vertex = it != declared.end() &&
                         std::find(vertices.begin(), vertices.end(),
                                   tokens[k]) != vertices.end();
        if (!is_vertex) {
          throw ParseError(line_no, "dangling edge endpoint '" + tokens[k] + "'");
        }
      }
      edges.push_back({tokens[1], tokens[2], tokens[3]});
      edge_lines.push_back(line_no);
    } else {
      throw ParseError(line_no, "syntax error: unknown keyword '" + kw + "'");
    }
    if (end == text.size()) break;
  }
  if (!have_header) throw ParseError(line_no, "missing graph header");
  try {
    return DirectedGraph(std::move(name), std::move(vertices), std::move(edges));
  } catch (const GraphError& err) {
    throw ParseError(0, err.what());
  }
}

DirectedGraph parse_graph_json(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& err) {
    // Convert the byte offset into a line number.
    std::size_t upto = std::min<std::size_t>(err.byte, text.size());
    std::size_t line =
        1 + static_cast<std::size_t>(std::count(text.begin(), text.begin() + upto, '\n'));
    throw ParseError(line, std::string("syntax error: ") + err.what());
  }
  if (!doc.is_object()) throw ParseError(1, "expected a JSON object");
  auto need_string = [](const nlohmann::json& j, const char* what) {
    if (!j.is_string()) throw ParseError(0, std::string(what) + " must be a string");
    return j.get<std::string>();
  };
  std::string name = doc.contains("name") ? need_string(doc["name"], "name") : "graph";
  std::vector<std::string> vertices;
  if (!doc.contains("vertices") || !doc["vertices"].is_array()) {
    throw ParseError(0, "missing 'vertices' array");
  }
  for (const auto& v : doc["vertices"]) vertices.push_back(need_string(v, "vertex id"));
  std::vector<EdgeSpec> edges;
  if (doc.contains("edges")) {
    if (!doc["edges"].is_array()) throw ParseError(0, "'edges' must be an array");
    for (const auto& e : doc["edges"]) {
      if (!e.is_object() || !e.contains("id") || !e.contains("src") ||
          !e.contains("dst")) {
        throw ParseError(0, "edge entries need 'id', 'src' and 'dst'");
      }
      edges.push_back({need_string(e["id"], "edge id"),
                       need_string(e["src"], "edge src"),
                       need_string(e["dst"], "edge dst")});
    }
  }
  try {
    return DirectedGraph(std::move(name), std::move(vertices), std::move(edges));
  } catch (const GraphError& err) {
    throw ParseError(0, err.what());
  }
}

std::string serialize(const DirectedGraph& g) {
  std::ostringstream out;
  out << "graph " << (g.name().empty() ? std::string("unnamed") : g.name()) << '\n';
  for (const auto& v : g.vertices()) out << "vertex " << v << '\n';
  for (const auto& e : g.edges()) {
    out << "edge " << e.id << ' ' << g.vertex_name(e.source) << ' '
        << g.vertex_name(e.range) << '\n';
  }
  return out.str();
}

std::string serialize_json(const DirectedGraph& g) {
  nlohmann::json doc;
  doc["name"] = g.name();
  doc["vertices"] = g.vertices();
  doc["edges"] = nlohmann::json::array();
  for (const auto& e : g.edges()) {
    doc["edges"].push_back({{"id", e.id},
                            {"src", g.vertex_name(e.source)},
                            {"dst", g.vertex_name(e.range)}});
  }
  return doc.dump(2);
}

std::optional<DirectedGraph> builtin_graph(std::string_view name) {
  if (name == "E2") {
    return DirectedGraph("E2", {"v"}, {{"a", "v", "v"}, {"b", "v", "v"}});
  }
  if (name == "E2minus") {
    return DirectedGraph("E2minus", {"w1", "w2", "w3"},
                         {{"p", "w1", "w1"},
                          {"q", "w1", "w1"},
                          {"r", "w2", "w2"},
                          {"t", "w3", "w3"},
                          {"e12", "w1", "w2"},
                          {"e23", "w2", "w3"},
                          {"e32", "w3", "w2"},
                          {"e21", "w2", "w1"}});
  }
  if (name == "single-loop") {
    return DirectedGraph("single-loop", {"v"}, {{"e", "v", "v"}});
  }
  if (name == "two-loops") {
    return DirectedGraph("two-loops", {"v", "w"}, {{"a", "v", "v"}, {"b", "w", "w"}});
  }
  if (name == "sink-edge") {
    return DirectedGraph("sink-edge", {"v", "w"}, {{"e", "v", "w"}});
  }
  if (name == "source-loop") {
    return DirectedGraph("source-loop", {"u", "v"}, {{"s", "u", "v"}, {"l", "v", "v"}});
  }
  if (name == "isolated") {
    return DirectedGraph("isolated", {"v"}, {});
  }
  if (name.starts_with("cycle")) {
    auto digits = name.substr(5);
    std::size_t n = 0;
    auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), n);
    if (ec != std::errc() || ptr != digits.data() + digits.size() || n == 0 ||
        n > 1000) {
      return std::nullopt;
    }
    std::vector<std::string> vs;
    std::vector<EdgeSpec> es;
    for (std::size_t i = 0; i < n; ++i) vs.push_back("c" + std::to_string(i));
    for (std::size_t i = 0; i < n; ++i) {
      es.push_back({"x" + std::to_string(i), vs[i], vs[(i + 1) % n]});
    }
    return DirectedGraph(std::string(name), std::move(vs), std::move(es));
  }
  return std::nullopt;
}

std::vector<std::string> builtin_graph_names() {
  return {"E2",        "E2minus",     "single-loop", "two-loops",
          "sink-edge", "source-loop", "isolated",    "cycle<n>"};
}

IntegerMatrix adjacency_matrix(const DirectedGraph& g) {
  IntegerMatrix a(g.vertex_count(), g.vertex_count());
  for (const auto& e : g.edges()) a(e.source, e.range) += 1;
  return a;
}

std::vector<VertexClass> classify_vertices(const DirectedGraph& g) {
  std::vector<VertexClass> out(g.vertex_count());
  for (VertexId v = 0; v < g.vertex_count(); ++v) {
    bool emits = !g.out_edges(v).empty();
    bool receives = !g.in_edges(v).empty();
    if (emits && receives) {
      out[v] = VertexClass::regular;
    } else if (emits) {
      out[v] = VertexClass::source;
    } else if (receives) {
      out[v] = VertexClass::sink;
    } else {
      out[v] = VertexClass::isolated;
    }
  }
  return out;
}

std::vector<VertexId> reachable_set(const DirectedGraph& g,
                                    std::span<const VertexId> from) {
  std::vector<bool> seen(g.vertex_count(), false);
  std::deque<VertexId> queue;
  for (VertexId v : from) {
    if (v >= g.vertex_count()) throw GraphError("vertex out of range");
    if (!seen[v]) {
      seen[v] = true;
      queue.push_back(v);
    }
  }
  while (!queue.empty()) {
    VertexId v = queue.front();
    queue.pop_front();
    for (EdgeId e : g.out_edges(v)) {
      VertexId w = g.edge(e).range;
      if (!seen[w]) {
        seen[w] = true;
        queue.push_back(w);
      }
    }
  }
  std::vector<VertexId> out;
  for (VertexId v = 0; v < g.vertex_count(); ++v) {
    if (seen[v]) out.push_back(v);
  }
  return out;
}

bool is_strongly_connected(const DirectedGraph& g) {
  // Every ordered pair, including (v, v), must be joined by a path of
  // length >= 1, so every vertex lies on a cycle.
  if (g.vertex_count() == 0) return false;
  for (VertexId v = 0; v < g.vertex_count(); ++v) {
    std::vector<VertexId> succ;
    for (EdgeId e : g.out_edges(v)) succ.push_back(g.edge(e).range);
    if (reachable_set(g, succ).size() != g.vertex_count()) return false;
  }
  return true;
}

std::string to_dot(const DirectedGraph& g) {
  auto quote = [](const std::string& s) {
    std::string out = "\"";
    for (char c : s) {
      if (c == '"' || c == '\\') out.push_back('\\');
      out.push_back(c);
    }
    return out + "\"";
  };
  std::ostringstream out;
  out << "digraph " << quote(g.name().empty() ? std::string("G") : g.name()) << " {\n";
  for (const auto& v : g.vertices()) out << "  " << quote(v) << ";\n";
  for (const auto& e : g.edges()) {
    out << "  " << quote(g.vertex_name(e.source)) << " -> "
        << quote(g.vertex_name(e.range)) << " [label=" << quote(e.id) << "];\n";
  }
  out << "}\n";
  return out.str();
}

}  // namespace groupoidkit
