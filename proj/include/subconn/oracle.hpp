#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "subconn/query.hpp"
#include "subconn/update.hpp"

namespace subconn {

struct OracleOptions {
  bool sparsify = false;  // thin the on-on edges to d_star+1 spanning forests first
  std::uint64_t table_point_cap = 150000000ull;  // memory guard for the counting table
  std::uint64_t bitmap_budget_bits = 1ull << 33;  // off-neighbour indicator budget
};

struct OracleStats {
  int levels = 0;
  int component_count = 0;
  int tree_count = 0;
  int max_tree_degree = 0;
  long long edges_used = 0;  // after optional sparsification
  long long table_points = 0;
  long long sum_a = 0;
  long long sum_ab = 0;
  double hierarchy_ms = 0;
  double tours_ms = 0;
  double lists_ms = 0;
  double table_ms = 0;
  double total_ms = 0;
};

/**
 * Connectivity oracle for one-shot batches of vertex switches. Construction
 * preprocesses the graph; update() interprets a batch of at most d_star
 * switches against the original on/off split and replaces any previous batch;
 * query() answers connectivity in the graph induced by the resulting on-set.
 * The all-on special case behaves as a vertex-failure oracle.
 */
class Oracle {
 public:
  Oracle(Graph g, int d_star, OracleOptions options = {});

  void update(const std::vector<VertexId>& switches);
  bool query(VertexId u, VertexId v) const;
  QueryResult query_details(VertexId u, VertexId v) const;

  bool has_update() const { return state_.has_value(); }
  const UpdateState& state() const;

  /** View over the preprocessing products for the free update/query calls. */
  OracleData data() const;

  const Graph& graph() const { return g_; }
  const Hierarchy& hierarchy() const { return h_; }
  const std::vector<EulerTourIndex>& tree_index() const { return tree_index_; }
  const GlobalOrder& order() const { return order_; }
  const AdjacencyLists& lists() const { return lists_; }
  const RangeCountTable& table() const { return table_; }
  int d_star() const { return d_star_; }
  const OracleStats& stats() const { return stats_; }

 private:
  Graph g_;
  int d_star_ = 0;
  OracleOptions options_;
  Hierarchy h_;
  std::vector<EulerTourIndex> tree_index_;
  std::vector<std::vector<int>> trees_containing_;
  GlobalOrder order_;
  AdjacencyLists lists_;
  RangeCountTable table_;
  OracleStats stats_;
  std::optional<UpdateState> state_;
};

}  // namespace subconn
