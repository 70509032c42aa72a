#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

namespace subconn {

using VertexId = int;

/**
 * Small set of vertex ids with O(1) membership and sorted iteration.
 * Used for switch batches, separators, and cut sides.
 */
class VertexSet {
 public:
  VertexSet() = default;
  explicit VertexSet(std::vector<VertexId> members);

  bool contains(VertexId v) const { return lookup_.count(v) > 0; }
  void insert(VertexId v);
  const std::vector<VertexId>& sorted() const { return sorted_; }
  std::size_t size() const { return sorted_.size(); }
  bool empty() const { return sorted_.empty(); }

 private:
  std::vector<VertexId> sorted_;
  std::unordered_set<VertexId> lookup_;
};

/**
 * Undirected simple graph on vertices 0..n-1 with a persistent on/off state
 * per vertex. Adjacency lists are kept sorted so every traversal is
 * deterministic. Parallel edges are silently deduplicated at construction;
 * self-loops are rejected.
 */
class Graph {
 public:
  Graph() = default;
  explicit Graph(int n);

  int vertex_count() const { return n_; }
  std::size_t edge_count() const { return m_; }

  void add_edge(VertexId u, VertexId v);
  // Call once after the last add_edge: sorts and deduplicates adjacency.
  void finalize();

  std::span<const VertexId> neighbors(VertexId v) const {
    return {adj_[v].data(), adj_[v].size()};
  }
  bool has_edge(VertexId u, VertexId v) const;

  bool is_on(VertexId v) const { return on_[v]; }
  void set_on(VertexId v, bool state);
  std::vector<VertexId> on_vertices() const;
  std::vector<VertexId> off_vertices() const;

  // All edges as (u, v) with u < v, lexicographically sorted.
  std::vector<std::pair<VertexId, VertexId>> edges() const;

  // Subgraph induced by `keep`, relabeled to 0..|keep|-1 in ascending id
  // order. back_map (optional) receives new-id -> old-id. On/off states carry over.
  Graph induced(const std::vector<VertexId>& keep,
                std::vector<VertexId>* back_map = nullptr) const;

  // Connected components over all vertices (ignoring on/off), each sorted,
  // ordered by smallest member.
  std::vector<std::vector<VertexId>> connected_components() const;

 private:
  int n_ = 0;
  std::size_t m_ = 0;
  bool finalized_ = true;
  std::vector<std::vector<VertexId>> adj_;
  std::vector<bool> on_;
};

// Parses the edge-list format:
//   line 1: "n m"
//   line 2: "on: v1 v2 ..."   (may list zero ids)
//   next m lines: "u v"
// '#' starts a comment; blank lines are skipped. Throws std::runtime_error
// with a line number on malformed input, out-of-range ids, or self-loops.
Graph load_graph(std::string_view text);
Graph load_graph_file(const std::string& path);

std::string format_graph(const Graph& g);

// Reference connectivity check: BFS over g restricted to `active`.
// Both endpoints must be active. Deliberately simple; used as the oracle
// baseline everywhere in the tests.
bool brute_connected(const Graph& g, const VertexSet& active, VertexId u, VertexId v);

// Components of the subgraph induced by `active`, each sorted, ordered by
// smallest member.
std::vector<std::vector<VertexId>> brute_components(const Graph& g,
                                                    const std::vector<VertexId>& active);

}  // namespace subconn
