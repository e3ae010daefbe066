#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "groupoidkit/integer_matrix.hpp"

namespace groupoidkit {

using VertexId = std::size_t;
using EdgeId = std::size_t;

struct Edge {
  std::string id;
  VertexId source;
  VertexId range;

  bool operator==(const Edge&) const = default;
};

// Edge given by names, the way it appears in graph files.
struct EdgeSpec {
  std::string id;
  std::string source;
  std::string range;
};

enum class VertexClass { regular, sink, source, isolated };

std::string_view to_string(VertexClass kind);

// A finite directed multigraph with named vertices and edges.
//
// Vertex and edge identifiers share one namespace, so a token in path syntax
// is unambiguous. Declaration order is preserved: it fixes the row/column
// order of the adjacency matrix and the order of out-edges at each vertex.
// Parallel edges and loops are allowed.
class DirectedGraph {
 public:
  DirectedGraph() = default;

  // Throws GraphError on duplicate identifiers or dangling endpoints.
  DirectedGraph(std::string name,
                std::vector<std::string> vertices,
                std::vector<EdgeSpec> edges);

  const std::string& name() const noexcept { return name_; }
  std::size_t vertex_count() const noexcept { return vertices_.size(); }
  std::size_t edge_count() const noexcept { return edges_.size(); }

  const std::string& vertex_name(VertexId v) const { return vertices_.at(v); }
  const Edge& edge(EdgeId e) const { return edges_.at(e); }
  const std::vector<std::string>& vertices() const noexcept {
    return vertices_;
  }
  const std::vector<Edge>& edges() const noexcept { return edges_; }

  std::optional<VertexId> find_vertex(std::string_view id) const;
  std::optional<EdgeId> find_edge(std::string_view id) const;

  // vE^1 and E^1v, in declaration order.
  std::span<const EdgeId> out_edges(VertexId v) const { return out_.at(v); }
  std::span<const EdgeId> in_edges(VertexId v) const { return in_.at(v); }

  bool is_sink(VertexId v) const { return out_.at(v).empty(); }
  bool is_source(VertexId v) const { return in_.at(v).empty(); }

  std::vector<EdgeSpec> edge_specs() const;

  // Same vertex list and edge list in the same order; the name is ignored.
  bool operator==(const DirectedGraph& other) const {
    return vertices_ == other.vertices_ && edges_ == other.edges_;
  }

 private:
  std::string name_;
  std::vector<std::string> vertices_;
  std::vector<Edge> edges_;
  std::unordered_map<std::string, VertexId> vertex_index_;
  std::unordered_map<std::string, EdgeId> edge_index_;
  std::vector<std::vector<EdgeId>> out_;
  std::vector<std::vector<EdgeId>> in_;
};

using GraphPtr = std::shared_ptr<const DirectedGraph>;

inline GraphPtr share(DirectedGraph g) {
  return std::make_shared<const DirectedGraph>(std::move(g));
}

// Graph files: a `graph <name>` header, `vertex <id>` lines and
// `edge <id> <src> <dst>` lines, with `#` comments. Text whose first
// non-blank character is `{` is read as JSON instead.
DirectedGraph parse_graph(std::string_view text);
DirectedGraph parse_graph_json(std::string_view text);
std::string serialize(const DirectedGraph& g);
std::string serialize_json(const DirectedGraph& g);

// Named graphs: E2, E2minus, single-loop, two-loops, sink-edge,
// source-loop, and cycle<n> for n >= 1.
std::optional<DirectedGraph> builtin_graph(std::string_view name);
std::vector<std::string> builtin_graph_names();

// A[v][w] = number of edges from v to w, rows in vertex declaration order.
IntegerMatrix adjacency_matrix(const DirectedGraph& g);

std::vector<VertexClass> classify_vertices(const DirectedGraph& g);

// Vertices reachable from `from` by directed paths, `from` included.
// Result is sorted by vertex id.
std::vector<VertexId> reachable_set(const DirectedGraph& g,
                                    std::span<const VertexId> from);

bool is_strongly_connected(const DirectedGraph& g);

// Emits a DOT digraph; one node per vertex and one arc per edge.
std::string to_dot(const DirectedGraph& g);

}  // namespace groupoidkit
