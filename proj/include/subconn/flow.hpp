#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "subconn/graph.hpp"

namespace subconn {

/**
 * Undirected network with integer capacities on vertices (not edges).
 * `source` and `sink` are uncapacitated; every other node carries a
 * capacity >= 1. Edges are simple and undirected; an s-t edge is rejected
 * because a vertex cut could never separate it.
 */
struct FlowNetwork {
  int nodes = 0;
  int source = -1;
  int sink = -1;
  std::vector<long long> node_capacity;  // ignored for source/sink
  std::vector<std::pair<int, int>> edges;
};

/**
 * Integral s-t flow. edge_flow[i] is signed: positive means flow runs from
 * edges[i].first to edges[i].second. Conservation holds at every node except
 * source and sink, and |throughput| respects node capacities.
 */
struct IntegralFlow {
  long long value = 0;
  std::vector<long long> edge_flow;
};

/** Vertex cut (L, S, R): removing S disconnects L from R; s-side is L. */
struct VertexCut {
  VertexSet left;
  VertexSet separator;
  VertexSet right;
  long long separator_capacity = 0;
};

struct MaxFlowResult {
  IntegralFlow flow;
  VertexCut cut;
  // True when the search ran to completion, i.e. `cut` is a minimum vertex
  // cut with capacity == flow.value. False only when value_cap stopped the
  // augmentation early.
  bool cut_is_min = false;
};

inline constexpr long long kNoFlowCap = -1;

// Exact max flow on the vertex-split network (Dinic). With value_cap >= 0 the
// augmentation stops as soon as the flow reaches value_cap; callers that only
// need to distinguish "flow >= cap" from "max flow < cap" use this to skip
// useless work. Throws std::invalid_argument on capacities < 1 outside s/t,
// on an s-t edge, or on malformed node ids.
MaxFlowResult max_flow_vertex_capacitated(const FlowNetwork& net,
                                          long long value_cap = kNoFlowCap);

// Splits an acyclic integral flow into value-many unit paths from source to
// sink, each a node sequence [s, ..., t]. Cycle components in the flow are
// cancelled on the fly, so the union of edges used by the returned paths is
// exactly the set of edges with nonzero flow whenever the input came from
// max_flow_vertex_capacitated (which canonicalizes to a cycle-free flow).
// Throws std::invalid_argument if the flow violates conservation.
std::vector<std::vector<int>> decompose_flow_paths(const FlowNetwork& net,
                                                   const IntegralFlow& flow);

}  // namespace subconn
