#include "subconn/cut_matching.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <stdexcept>
#include <unordered_map>

namespace subconn {

namespace {

std::vector<VertexId> sorted_unique(std::vector<VertexId> v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

}  // namespace

MatchingPlayerResult matching_player(const Graph& g, const std::vector<VertexId>& terminals,
                                     const std::vector<VertexId>& side_a,
                                     const std::vector<VertexId>& side_b, const Rational& phi) {
  if (phi.num <= 0 || phi > Rational(1, 1))
    throw std::invalid_argument("matching_player: phi outside (0, 1]");
  const int n = g.vertex_count();
  std::vector<VertexId> A = sorted_unique(side_a);
  std::vector<VertexId> B = sorted_unique(side_b);
  std::vector<VertexId> U = sorted_unique(terminals);
  for (VertexId v : U)
    if (v < 0 || v >= n) throw std::invalid_argument("matching_player: terminal out of range");
  {
    std::vector<VertexId> merged;
    std::merge(A.begin(), A.end(), B.begin(), B.end(), std::back_inserter(merged));
    if (sorted_unique(merged) != U || merged.size() != U.size())
      throw std::invalid_argument("matching_player: (A,B) must partition the terminal set");
  }

  MatchingPlayerResult result;
  if (A.empty() || B.empty()) return result;  // empty matching, trivially valid

  const long long cap_per_vertex = phi.ceil_inverse();
  const long long min_side = static_cast<long long>(std::min(A.size(), B.size()));
  const long long target = (min_side + 2) / 3;  // ceil(min/3)

  // auxiliary network: graph vertices, one unit-capacity copy per terminal
  // side, uncapacitated source/sink
  FlowNetwork net;
  const int a_base = n;
  const int b_base = n + static_cast<int>(A.size());
  net.source = b_base + static_cast<int>(B.size());
  net.sink = net.source + 1;
  net.nodes = net.sink + 1;
  net.node_capacity.assign(net.nodes, 1);
  for (int v = 0; v < n; ++v) net.node_capacity[v] = cap_per_vertex;
  for (auto [u, v] : g.edges()) net.edges.emplace_back(u, v);
  for (std::size_t i = 0; i < A.size(); ++i) {
    net.edges.emplace_back(net.source, a_base + static_cast<int>(i));
    net.edges.emplace_back(a_base + static_cast<int>(i), A[i]);
  }
  for (std::size_t j = 0; j < B.size(); ++j) {
    net.edges.emplace_back(B[j], b_base + static_cast<int>(j));
    net.edges.emplace_back(b_base + static_cast<int>(j), net.sink);
  }

  MaxFlowResult mf = max_flow_vertex_capacitated(net, target);

  if (mf.flow.value < target) {
    // max flow is exact here, so the residual cut certifies sparsity
    std::vector<char> in_u(n, 0);
    for (VertexId v : U) in_u[v] = 1;
    auto graph_side = [&](const VertexSet& side) {
      std::vector<VertexId> out;
      for (VertexId v : side.sorted())
        if (v < n) out.push_back(v);
      return out;
    };
    std::vector<VertexId> left = graph_side(mf.cut.left);
    std::vector<VertexId> sep = graph_side(mf.cut.separator);
    std::vector<VertexId> right = graph_side(mf.cut.right);
    auto count_u = [&](const std::vector<VertexId>& side) {
      long long c = 0;
      for (VertexId v : side) c += in_u[v];
      return c;
    };
    if (count_u(left) > count_u(right)) std::swap(left, right);
    long long lu = count_u(left);
    long long ru = count_u(right);
    if (3 * lu < min_side || ru < lu ||
        !leq_scaled(static_cast<long long>(sep.size()), phi, lu))
      throw std::logic_error("matching_player: cut certificate failed validation");
    result.is_cut = true;
    result.cut.left = VertexSet(std::move(left));
    result.cut.separator = VertexSet(std::move(sep));
    result.cut.right = VertexSet(std::move(right));
    result.cut.separator_capacity = static_cast<long long>(result.cut.separator.size());
    return result;
  }

  // matching branch: one unit path per matched pair
  auto paths = decompose_flow_paths(net, mf.flow);
  std::set<std::pair<VertexId, VertexId>> edge_set;
  std::vector<char> a_used(A.size(), 0), b_used(B.size(), 0);
  for (const auto& p : paths) {
    if (p.size() < 4) throw std::logic_error("matching_player: degenerate flow path");
    int a_idx = p[1] - a_base;
    int b_idx = p[p.size() - 2] - b_base;
    if (a_idx < 0 || a_idx >= static_cast<int>(A.size()) || b_idx < 0 ||
        b_idx >= static_cast<int>(B.size()))
      throw std::logic_error("matching_player: flow path misses terminal copies");
    if (a_used[a_idx]++ || b_used[b_idx]++)
      throw std::logic_error("matching_player: terminal matched twice");
    std::vector<VertexId> inner(p.begin() + 2, p.end() - 2);
    for (std::size_t i = 0; i + 1 < inner.size(); ++i) {
      edge_set.insert({std::min(inner[i], inner[i + 1]), std::max(inner[i], inner[i + 1])});
    }
    result.matching.pairs.emplace_back(A[a_idx], B[b_idx]);
    result.matching.paths.push_back(std::move(inner));
  }
  if (3 * static_cast<long long>(result.matching.pairs.size()) < min_side)
    throw std::logic_error("matching_player: matching too small");
  std::vector<long long> congestion(n, 0);
  for (const auto& p : result.matching.paths)
    for (VertexId v : p)
      if (++congestion[v] > cap_per_vertex)
        throw std::logic_error("matching_player: congestion exceeds ceil(1/phi)");
  result.matching.embedding_edges.assign(edge_set.begin(), edge_set.end());
  return result;
}

ClusterSplit partition_clusters(const std::vector<long long>& cluster_sizes, long long u_size,
                                const Rational& eps) {
  if (cluster_sizes.empty()) throw std::invalid_argument("partition_clusters: no clusters");
  long long total = std::accumulate(cluster_sizes.begin(), cluster_sizes.end(), 0LL);
  if (total != u_size)
    throw std::invalid_argument("partition_clusters: sizes do not sum to |U|");
  ClusterSplit split;
  for (std::size_t i = 0; i < cluster_sizes.size(); ++i) {
    // giant: size >= (1-eps)|U|
    if (geq_scaled(cluster_sizes[i], Rational(eps.den - eps.num, eps.den), u_size)) {
      split.giant = true;
      split.giant_index = static_cast<int>(i);
      return split;
    }
  }
  int oversized = -1;
  for (std::size_t i = 0; i < cluster_sizes.size(); ++i) {
    if (2 * cluster_sizes[i] > u_size) {
      oversized = static_cast<int>(i);
      break;
    }
  }
  if (oversized >= 0) {
    split.side_b.push_back(oversized);
    for (std::size_t i = 0; i < cluster_sizes.size(); ++i)
      if (static_cast<int>(i) != oversized) split.side_a.push_back(static_cast<int>(i));
    return split;
  }
  // all clusters <= |U|/2: greedy balancing keeps both sides >= |U|/4
  std::vector<int> order(cluster_sizes.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int x, int y) { return cluster_sizes[x] > cluster_sizes[y]; });
  long long wa = 0, wb = 0;
  for (int idx : order) {
    if (wa <= wb) {
      split.side_a.push_back(idx);
      wa += cluster_sizes[idx];
    } else {
      split.side_b.push_back(idx);
      wb += cluster_sizes[idx];
    }
  }
  std::sort(split.side_a.begin(), split.side_a.end());
  std::sort(split.side_b.begin(), split.side_b.end());
  if (4 * std::min(wa, wb) < u_size)
    throw std::logic_error("partition_clusters: balanced split fell below |U|/4");
  return split;
}

WitnessGraph::WitnessGraph(std::vector<VertexId> terminals)
    : terminals_(sorted_unique(std::move(terminals))) {
  int max_id = terminals_.empty() ? 0 : terminals_.back();
  index_of_.assign(max_id + 1, -1);
  parent_.resize(terminals_.size());
  std::iota(parent_.begin(), parent_.end(), 0);
  for (std::size_t i = 0; i < terminals_.size(); ++i) index_of_[terminals_[i]] = static_cast<int>(i);
}

int WitnessGraph::find(int x) const {
  while (parent_[x] != x) {
    parent_[x] = parent_[parent_[x]];
    x = parent_[x];
  }
  return x;
}

void WitnessGraph::add_matching(const std::vector<std::pair<VertexId, VertexId>>& pairs) {
  for (auto [a, b] : pairs) {
    if (a < 0 || b < 0 || a >= static_cast<int>(index_of_.size()) ||
        b >= static_cast<int>(index_of_.size()) || index_of_[a] < 0 || index_of_[b] < 0)
      throw std::invalid_argument("WitnessGraph: matched vertex is not a terminal");
    edges_.emplace_back(a, b);
    int ra = find(index_of_[a]);
    int rb = find(index_of_[b]);
    if (ra != rb) parent_[std::max(ra, rb)] = std::min(ra, rb);
  }
}

std::vector<std::vector<VertexId>> WitnessGraph::clusters() const {
  std::unordered_map<int, int> root_to_cluster;
  std::vector<std::vector<VertexId>> out;
  for (std::size_t i = 0; i < terminals_.size(); ++i) {
    int r = find(static_cast<int>(i));
    auto [it, fresh] = root_to_cluster.try_emplace(r, static_cast<int>(out.size()));
    if (fresh) out.emplace_back();
    out[it->second].push_back(terminals_[i]);
  }
  return out;
}

CutOrTreeResult cut_or_steiner_tree(const Graph& g, const std::vector<VertexId>& terminals,
                                    const Rational& eps, const Rational& phi) {
  if (eps.num <= 0 || eps > Rational(1, 4))
    throw std::invalid_argument("cut_or_steiner_tree: eps outside (0, 1/4]");
  if (phi.num <= 0 || phi > Rational(1, 4))
    throw std::invalid_argument("cut_or_steiner_tree: phi outside (0, 1/4]");
  std::vector<VertexId> U = sorted_unique(terminals);
  if (U.empty()) throw std::invalid_argument("cut_or_steiner_tree: empty terminal set");
  for (VertexId v : U)
    if (v < 0 || v >= g.vertex_count())
      throw std::invalid_argument("cut_or_steiner_tree: terminal out of range");
  const long long u_size = static_cast<long long>(U.size());
  const long long cap_per_vertex = phi.ceil_inverse();
  const int round_limit =
      static_cast<int>(std::ceil(50.0 * std::log2(static_cast<double>(u_size) + 2.0)));

  WitnessGraph witness(U);
  CutOrTreeResult result;
  std::set<std::pair<VertexId, VertexId>> edge_set;
  int giant_index = -1;
  std::vector<std::vector<VertexId>> clusters;

  while (true) {
    clusters = witness.clusters();
    std::vector<long long> sizes(clusters.size());
    for (std::size_t i = 0; i < clusters.size(); ++i)
      sizes[i] = static_cast<long long>(clusters[i].size());
    ClusterSplit split = partition_clusters(sizes, u_size, eps);
    if (split.giant) {
      giant_index = split.giant_index;
      break;
    }
    if (result.rounds >= round_limit)
      throw std::runtime_error("cut_or_steiner_tree: game exceeded its round limit");
    std::vector<VertexId> side_a, side_b;
    for (int i : split.side_a)
      side_a.insert(side_a.end(), clusters[i].begin(), clusters[i].end());
    for (int i : split.side_b)
      side_b.insert(side_b.end(), clusters[i].begin(), clusters[i].end());
    long long min_side = static_cast<long long>(std::min(side_a.size(), side_b.size()));
    MatchingPlayerResult round = matching_player(g, U, side_a, side_b, phi);
    ++result.rounds;
    if (round.is_cut) {
      long long lu = 0;
      for (VertexId v : round.cut.left.sorted())
        lu += std::binary_search(U.begin(), U.end(), v) ? 1 : 0;
      // min(|A|,|B|) > eps|U| by the split guarantees, so 3|L cap U| >= eps|U|
      if (3 * lu < min_side || !geq_scaled(3 * lu, eps, u_size))
        throw std::logic_error("cut_or_steiner_tree: cut lost its balance guarantee");
      result.is_cut = true;
      result.cut = std::move(round.cut);
      return result;
    }
    witness.add_matching(round.matching.pairs);
    for (auto e : round.matching.embedding_edges) edge_set.insert(e);
    for (auto& p : round.matching.paths) result.embedding_paths.push_back(std::move(p));
  }

  // giant cluster: extract a spanning tree of its embedding component
  result.congestion_limit = static_cast<long long>(result.rounds) * cap_per_vertex;
  const std::vector<VertexId>& giant = clusters[giant_index];
  std::unordered_map<VertexId, std::vector<VertexId>> adj;
  for (auto [u, v] : edge_set) {
    adj[u].push_back(v);
    adj[v].push_back(u);
  }
  for (auto& [v, list] : adj) std::sort(list.begin(), list.end());
  VertexId root = *std::min_element(giant.begin(), giant.end());
  std::unordered_map<VertexId, VertexId> parent;
  parent[root] = root;
  std::vector<VertexId> queue{root}, visited{root};
  for (std::size_t head = 0; head < queue.size(); ++head) {
    VertexId x = queue[head];
    auto it = adj.find(x);
    if (it == adj.end()) continue;
    for (VertexId y : it->second) {
      if (parent.emplace(y, x).second) {
        queue.push_back(y);
        visited.push_back(y);
      }
    }
  }
  for (VertexId v : giant)
    if (!parent.count(v))
      throw std::logic_error("cut_or_steiner_tree: giant cluster not connected by embeddings");
  result.tree_vertices = sorted_unique(visited);
  for (VertexId v : result.tree_vertices) {
    if (v == root) continue;
    VertexId p = parent.at(v);
    result.tree_edges.emplace_back(std::min(v, p), std::max(v, p));
  }
  std::sort(result.tree_edges.begin(), result.tree_edges.end());

  std::vector<VertexId> dropped;
  std::set_difference(U.begin(), U.end(), result.tree_vertices.begin(),
                      result.tree_vertices.end(), std::back_inserter(dropped));
  if (!leq_scaled(static_cast<long long>(dropped.size()), eps, u_size))
    throw std::logic_error("cut_or_steiner_tree: dropped more than eps |U| terminals");
  result.dropped = VertexSet(std::move(dropped));

  std::unordered_map<VertexId, int> congestion, degree;
  for (const auto& p : result.embedding_paths)
    for (VertexId v : p) result.max_congestion = std::max(result.max_congestion, ++congestion[v]);
  for (auto [u, v] : result.tree_edges) {
    result.max_tree_degree = std::max(result.max_tree_degree, ++degree[u]);
    result.max_tree_degree = std::max(result.max_tree_degree, ++degree[v]);
  }
  // a path through v spends at most two embedding edges at v, hence the factor
  if (result.max_congestion > result.congestion_limit ||
      result.max_tree_degree > 2 * result.congestion_limit)
    throw std::logic_error("cut_or_steiner_tree: congestion accounting violated");
  return result;
}

}  // namespace subconn
