#pragma once

#include <utility>
#include <vector>

#include "subconn/flow.hpp"
#include "subconn/graph.hpp"
#include "subconn/rational.hpp"

namespace subconn {

/**
 * Matching produced by one round of the cut-matching game. Each pair (a, b)
 * with a in A, b in B is realized by one embedding path in the host graph;
 * paths are vertex-disjoint per endpoint (every terminal copy has unit
 * capacity) and no graph vertex lies on more than ceil(1/phi) of them.
 */
struct RoundMatching {
  std::vector<std::pair<VertexId, VertexId>> pairs;
  std::vector<std::vector<VertexId>> paths;  // paths[i] realizes pairs[i], a..b
  // union of path edges, canonical (min,max), sorted
  std::vector<std::pair<VertexId, VertexId>> embedding_edges;
};

struct MatchingPlayerResult {
  bool is_cut = false;
  VertexCut cut;            // when is_cut: |L cap U| <= |R cap U|, 3|L cap U| >= min(|A|,|B|),
                            // |S| <= phi |L cap U|
  RoundMatching matching;   // when !is_cut: 3|pairs| >= min(|A|,|B|)
};

// One matching-player step: route a large A-B matching through g or certify a
// sparse vertex cut. Decided by an exact vertex-capacitated max flow on the
// auxiliary network (unit-capacity terminal copies, ceil(1/phi) on graph
// vertices), stopped at ceil(min(|A|,|B|)/3) units. phi in (0, 1].
MatchingPlayerResult matching_player(const Graph& g, const std::vector<VertexId>& terminals,
                                     const std::vector<VertexId>& side_a,
                                     const std::vector<VertexId>& side_b, const Rational& phi);

/**
 * Cut player's bisection of the current witness clusters.
 * Either reports a giant cluster (>= (1-eps) of the terminals) or splits the
 * cluster list into two sides that both carry >= .. eps-fraction weight:
 * all clusters <= half the terminals -> greedy balanced split (both sides
 * >= |U|/4); otherwise the unique oversized cluster stands alone.
 */
struct ClusterSplit {
  bool giant = false;
  int giant_index = -1;
  std::vector<int> side_a;  // indices into the input cluster list
  std::vector<int> side_b;
};

ClusterSplit partition_clusters(const std::vector<long long>& cluster_sizes, long long u_size,
                                const Rational& eps);

/** Union-find over the terminal set plus the matching edges accumulated so far. */
class WitnessGraph {
 public:
  explicit WitnessGraph(std::vector<VertexId> terminals);
  void add_matching(const std::vector<std::pair<VertexId, VertexId>>& pairs);
  // clusters as sorted member lists, ordered by smallest member
  std::vector<std::vector<VertexId>> clusters() const;
  const std::vector<std::pair<VertexId, VertexId>>& matching_edges() const { return edges_; }

 private:
  int find(int x) const;
  std::vector<VertexId> terminals_;
  std::vector<int> index_of_;  // dense by vertex id; -1 outside terminals
  mutable std::vector<int> parent_;
  std::vector<std::pair<VertexId, VertexId>> edges_;
};

struct CutOrTreeResult {
  bool is_cut = false;
  VertexCut cut;  // when is_cut: 3 |L cap U| >= eps |U|, |S| <= phi |L cap U|

  // when !is_cut: a tree on tree_vertices spanning terminals minus dropped
  std::vector<VertexId> tree_vertices;
  std::vector<std::pair<VertexId, VertexId>> tree_edges;  // canonical, sorted
  VertexSet dropped;                                      // <= eps |U| terminals

  int rounds = 0;
  long long congestion_limit = 0;  // rounds * ceil(1/phi)
  int max_congestion = 0;          // most embedding paths through one vertex
  int max_tree_degree = 0;
  std::vector<std::vector<VertexId>> embedding_paths;  // all rounds
};

// Cut-matching game driver: plays matching_player rounds against the greedy
// cluster bisection until either a sparse cut appears or one witness cluster
// holds >= (1-eps) of the terminals, in which case a spanning tree of the
// embedding subgraph component around that cluster is returned. eps, phi in
// (0, 1/4]. Throws if the game exceeds 50 log2(|U|+2) rounds.
CutOrTreeResult cut_or_steiner_tree(const Graph& g, const std::vector<VertexId>& terminals,
                                    const Rational& eps, const Rational& phi);

}  // namespace subconn
