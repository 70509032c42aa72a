#pragma once

#include <cstdint>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "subconn/euler_intervals.hpp"
#include "subconn/graph.hpp"
#include "subconn/hierarchy.hpp"
#include "subconn/preprocess.hpp"

namespace subconn {

/** Read-only bundle of preprocessing products shared by update and query. */
struct OracleData {
  const Graph* graph = nullptr;
  const Hierarchy* hierarchy = nullptr;
  const std::vector<EulerTourIndex>* tree_index = nullptr;  // one per tree id
  // vertex -> ids of trees whose vertex set contains it (ascending)
  const std::vector<std::vector<int>>* trees_containing = nullptr;
  const GlobalOrder* order = nullptr;
  const AdjacencyLists* lists = nullptr;
  const RangeCountTable* table = nullptr;
  int d_star = 0;
};

/**
 * Result of one batch of switches. Interpreted against the original on/off
 * split: every apply_update starts from the preprocessed state, never from a
 * previous batch. The interval list partitions the recomputed vertex set (off
 * switches plus the open terminals of affected trees); interval_group holds
 * the connected component of each interval in the affected graph.
 */
struct UpdateState {
  std::vector<VertexId> d_on;   // switched off, sorted
  std::vector<VertexId> d_off;  // switched on, sorted
  std::unordered_set<VertexId> d_on_set, d_off_set;

  std::vector<int> affected_components;  // sorted ids
  std::unordered_set<int> affected_component_set;
  std::vector<int> affected_trees;  // sorted ids
  std::unordered_set<int> affected_tree_set;
  // affected tree id -> members of d_on inside it (sorted); trees without
  // failures inside are absent
  std::unordered_map<int, std::vector<VertexId>> failed_in_tree;

  std::vector<PiRange> intervals;  // disjoint, ascending position ranges
  std::vector<int> interval_tree;  // owning tree id, -1 for an off singleton
  std::vector<int> interval_group;
  int group_count = 0;

  std::vector<int> phase_sizes;  // active group count entering each phase
  int phases = 0;
};

UpdateState apply_update(const OracleData& data, const std::vector<VertexId>& switches);

/** Index of the interval whose range contains position pos, or -1. */
int find_interval(const UpdateState& state, int pos);

/**
 * Explicit edge set of the graph the update phase works on implicitly: the
 * augmented graph induced on the interval vertices, with the augmented edges
 * of affected components removed. Quadratic in the worst case, hence the cap;
 * meant for verification, not for the update path itself.
 */
struct AffectedGraph {
  std::vector<VertexId> vertices;                    // sorted
  std::vector<std::pair<VertexId, VertexId>> edges;  // deduplicated, min-max
};

AffectedGraph materialize_affected_graph(const OracleData& data, const UpdateState& state,
                                         std::size_t edge_cap = 50000000);

}  // namespace subconn
