#include "subconn/update.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace subconn {

namespace {

int ceil_log2(int v) {
  int r = 0;
  while ((1 << r) < v) ++r;
  return r;
}

long long count_in(const std::vector<int>& sorted, int lo, int hi) {
  auto a = std::lower_bound(sorted.begin(), sorted.end(), lo);
  auto b = std::upper_bound(sorted.begin(), sorted.end(), hi);
  return b - a;
}

/**
 * Per-phase counting arrays. `all` holds augmented-graph edge counts between
 * group pairs; per affected component we keep |A ∩ group| and |A∖B ∩ group|,
 * which reconstruct the augmented-edge contribution of that component between
 * any two disjoint groups as |A∩V1|·|A∩V2| − |A∖B∩V1|·|A∖B∩V2|. Subtracting
 * those from `all` yields exact affected-graph edge counts without ever
 * materializing the graph.
 */
struct PhaseCounts {
  int k = 0;
  std::vector<long long> all;         // k*k, zero diagonal
  std::vector<long long> row_prefix;  // k*(k+1)
  std::vector<std::vector<long long>> comp_a;
  std::vector<std::vector<long long>> comp_d;  // A minus B
  std::vector<std::vector<long long>> pre_a;
  std::vector<std::vector<long long>> pre_d;

  void build_prefixes() {
    row_prefix.assign(static_cast<std::size_t>(k) * (k + 1), 0);
    for (int x = 0; x < k; ++x) {
      long long* row = row_prefix.data() + static_cast<std::size_t>(x) * (k + 1);
      const long long* src = all.data() + static_cast<std::size_t>(x) * k;
      for (int y = 0; y < k; ++y) row[y + 1] = row[y] + src[y];
    }
    auto prefix = [this](const std::vector<std::vector<long long>>& in,
                         std::vector<std::vector<long long>>& out) {
      out.assign(in.size(), {});
      for (std::size_t c = 0; c < in.size(); ++c) {
        out[c].assign(k + 1, 0);
        for (int y = 0; y < k; ++y) out[c][y + 1] = out[c][y] + in[c][y];
      }
    };
    prefix(comp_a, pre_a);
    prefix(comp_d, pre_d);
  }

  /** Affected-graph edges between group x and the groups in [l, r]. */
  long long batched(int x, int l, int r) const {
    if (l > r || l < 0 || r >= k || (x >= l && x <= r))
      throw std::invalid_argument("batched adjacency query: bad range");
    const long long* row = row_prefix.data() + static_cast<std::size_t>(x) * (k + 1);
    long long total = row[r + 1] - row[l];
    for (std::size_t c = 0; c < comp_a.size(); ++c) {
      total -= comp_a[c][x] * (pre_a[c][r + 1] - pre_a[c][l]);
      total += comp_d[c][x] * (pre_d[c][r + 1] - pre_d[c][l]);
    }
    if (total < 0) throw std::logic_error("batched adjacency count went negative");
    return total;
  }
};

PhaseCounts init_counts(const OracleData& data, const UpdateState& state) {
  PhaseCounts pc;
  const int k = static_cast<int>(state.intervals.size());
  pc.k = k;
  pc.all.assign(static_cast<std::size_t>(k) * k, 0);
  for (int x = 0; x < k; ++x)
    for (int y = x + 1; y < k; ++y) {
      const long long c = range_count(*data.table, state.intervals[x], state.intervals[y]);
      pc.all[static_cast<std::size_t>(x) * k + y] = c;
      pc.all[static_cast<std::size_t>(y) * k + x] = c;
    }
  const std::size_t comps = state.affected_components.size();
  pc.comp_a.resize(comps);
  pc.comp_d.resize(comps);
  for (std::size_t c = 0; c < comps; ++c) {
    const int comp = state.affected_components[c];
    const auto& ap = data.lists->a_pos[comp];
    const auto& bp = data.lists->b_pos[comp];
    pc.comp_a[c].assign(k, 0);
    pc.comp_d[c].assign(k, 0);
    for (int x = 0; x < k; ++x) {
      const auto& iv = state.intervals[x];
      const long long in_a = count_in(ap, iv.lo, iv.hi);
      const long long in_b = count_in(bp, iv.lo, iv.hi);
      pc.comp_a[c][x] = in_a;
      pc.comp_d[c][x] = in_a - in_b;
    }
  }
  pc.build_prefixes();
  return pc;
}

PhaseCounts aggregate(const PhaseCounts& prev, const std::vector<std::vector<int>>& parts) {
  PhaseCounts pc;
  const int k = static_cast<int>(parts.size());
  pc.k = k;
  pc.all.assign(static_cast<std::size_t>(k) * k, 0);
  for (int x = 0; x < k; ++x)
    for (int y = x + 1; y < k; ++y) {
      long long sum = 0;
      for (int a : parts[x])
        for (int b : parts[y]) sum += prev.all[static_cast<std::size_t>(a) * prev.k + b];
      pc.all[static_cast<std::size_t>(x) * k + y] = sum;
      pc.all[static_cast<std::size_t>(y) * k + x] = sum;
    }
  pc.comp_a.resize(prev.comp_a.size());
  pc.comp_d.resize(prev.comp_d.size());
  for (std::size_t c = 0; c < prev.comp_a.size(); ++c) {
    pc.comp_a[c].assign(k, 0);
    pc.comp_d[c].assign(k, 0);
    for (int x = 0; x < k; ++x)
      for (int a : parts[x]) {
        pc.comp_a[c][x] += prev.comp_a[c][a];
        pc.comp_d[c][x] += prev.comp_d[c][a];
      }
  }
  pc.build_prefixes();
  return pc;
}

/**
 * Some group adjacent to x in the affected graph, or -1. Searches right of x
 * first (binary search on the right endpoint converges to the leftmost
 * adjacent group), then left (binary search on the left endpoint).
 */
int find_adjacent(const PhaseCounts& pc, int x) {
  const int k = pc.k;
  if (x + 1 < k && pc.batched(x, x + 1, k - 1) > 0) {
    int lo = x + 1, hi = k - 1;
    while (lo < hi) {
      const int mid = lo + (hi - lo) / 2;
      if (pc.batched(x, x + 1, mid) > 0)
        hi = mid;
      else
        lo = mid + 1;
    }
    return lo;
  }
  if (x > 0 && pc.batched(x, 0, x - 1) > 0) {
    int lo = 0, hi = x - 1;
    while (lo < hi) {
      const int mid = lo + (hi - lo + 1) / 2;
      if (pc.batched(x, mid, x - 1) > 0)
        lo = mid;
      else
        hi = mid - 1;
    }
    return lo;
  }
  return -1;
}

void boruvka(const OracleData& data, UpdateState& state) {
  const int total = static_cast<int>(state.intervals.size());
  state.interval_group.assign(total, -1);
  state.group_count = 0;
  state.phases = 0;
  state.phase_sizes.clear();
  if (total == 0) return;

  // Active groups as sorted interval-id lists; interval ids ascend with
  // position, so ordering groups by minimum member id keeps them ordered by
  // minimum position, which the batched ranges rely on for determinism.
  std::vector<std::vector<int>> active;
  active.reserve(total);
  for (int i = 0; i < total; ++i) active.push_back({i});
  PhaseCounts counts = init_counts(data, state);

  std::vector<std::vector<int>> finals;
  const int phase_limit = ceil_log2(total) + 2;
  while (!active.empty()) {
    const int k = static_cast<int>(active.size());
    state.phase_sizes.push_back(k);
    ++state.phases;
    if (state.phases > phase_limit)
      throw std::logic_error("interval merge exceeded its phase budget");
    if (state.phases > 1 && 2 * k > state.phase_sizes[state.phases - 2])
      throw std::logic_error("active group count failed to halve");

    std::vector<int> partner(k);
    for (int x = 0; x < k; ++x) partner[x] = find_adjacent(counts, x);

    std::vector<int> parent(k);
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&parent](int a) {
      while (parent[a] != a) {
        parent[a] = parent[parent[a]];
        a = parent[a];
      }
      return a;
    };
    for (int x = 0; x < k; ++x) {
      if (partner[x] < 0) continue;
      const int ra = find(x);
      const int rb = find(partner[x]);
      if (ra != rb) parent[std::max(ra, rb)] = std::min(ra, rb);
    }

    std::vector<std::vector<int>> members(k);
    for (int x = 0; x < k; ++x) members[find(x)].push_back(x);

    std::vector<std::vector<int>> next_active;
    std::vector<std::vector<int>> parts;
    for (int root = 0; root < k; ++root) {
      if (members[root].empty()) continue;
      if (members[root].size() == 1 && partner[root] < 0) {
        finals.push_back(std::move(active[root]));
        continue;
      }
      std::vector<int> merged;
      for (int gid : members[root])
        merged.insert(merged.end(), active[gid].begin(), active[gid].end());
      std::sort(merged.begin(), merged.end());
      next_active.push_back(std::move(merged));
      parts.push_back(std::move(members[root]));
    }
    if (!next_active.empty()) counts = aggregate(counts, parts);
    active = std::move(next_active);
  }

  std::sort(finals.begin(), finals.end(),
            [](const std::vector<int>& a, const std::vector<int>& b) {
              return a.front() < b.front();
            });
  state.group_count = static_cast<int>(finals.size());
  for (int gid = 0; gid < state.group_count; ++gid)
    for (int iv : finals[gid]) state.interval_group[iv] = gid;
}

}  // namespace

UpdateState apply_update(const OracleData& data, const std::vector<VertexId>& switches) {
  const Graph& g = *data.graph;
  const Hierarchy& h = *data.hierarchy;
  const GlobalOrder& order = *data.order;
  const int n = g.vertex_count();
  if (static_cast<int>(switches.size()) > data.d_star)
    throw std::invalid_argument("apply_update: batch exceeds the preprocessed switch budget");

  UpdateState state;
  std::unordered_set<VertexId> seen;
  for (VertexId v : switches) {
    if (v < 0 || v >= n) throw std::invalid_argument("apply_update: vertex out of range");
    if (!seen.insert(v).second)
      throw std::invalid_argument("apply_update: duplicate vertex in batch");
    if (g.is_on(v))
      state.d_on.push_back(v);
    else
      state.d_off.push_back(v);
  }
  std::sort(state.d_on.begin(), state.d_on.end());
  std::sort(state.d_off.begin(), state.d_off.end());
  state.d_on_set.insert(state.d_on.begin(), state.d_on.end());
  state.d_off_set.insert(state.d_off.begin(), state.d_off.end());

  for (VertexId f : state.d_on)
    for (int comp : h.chain[f])
      if (state.affected_component_set.insert(comp).second)
        state.affected_components.push_back(comp);
  std::sort(state.affected_components.begin(), state.affected_components.end());

  for (int comp : state.affected_components) {
    const int tid = h.components[comp].tree;
    if (tid >= 0 && state.affected_tree_set.insert(tid).second)
      state.affected_trees.push_back(tid);
  }
  std::sort(state.affected_trees.begin(), state.affected_trees.end());

  for (VertexId f : state.d_on)
    for (int tid : (*data.trees_containing)[f])
      if (state.affected_tree_set.count(tid)) state.failed_in_tree[tid].push_back(f);

  std::vector<std::pair<PiRange, int>> collected;
  const std::vector<VertexId> no_failures;
  for (int tid : state.affected_trees) {
    const EulerTourIndex& idx = (*data.tree_index)[tid];
    auto it = state.failed_in_tree.find(tid);
    const auto& failed = it == state.failed_in_tree.end() ? no_failures : it->second;
    const IntervalSet survived = restrict_to_terminals(idx, intervals_after_failures(idx, failed));
    const int base = order.tree_block[tid];
    for (const auto& iv : survived.intervals)
      collected.push_back({{base + iv.lo, base + iv.hi}, tid});
  }
  for (VertexId v : state.d_off) {
    const int pos = order.position[v];
    collected.push_back({{pos, pos}, -1});
  }
  std::sort(collected.begin(), collected.end(),
            [](const auto& a, const auto& b) { return a.first.lo < b.first.lo; });
  state.intervals.reserve(collected.size());
  state.interval_tree.reserve(collected.size());
  for (const auto& [range, tid] : collected) {
    state.intervals.push_back(range);
    state.interval_tree.push_back(tid);
  }

  boruvka(data, state);
  return state;
}

int find_interval(const UpdateState& state, int pos) {
  const auto& ivs = state.intervals;
  auto it = std::upper_bound(ivs.begin(), ivs.end(), pos,
                             [](int p, const PiRange& r) { return p < r.lo; });
  if (it == ivs.begin()) return -1;
  --it;
  if (pos > it->hi) return -1;
  return static_cast<int>(it - ivs.begin());
}

AffectedGraph materialize_affected_graph(const OracleData& data, const UpdateState& state,
                                         std::size_t edge_cap) {
  const Graph& g = *data.graph;
  const GlobalOrder& order = *data.order;
  const int n = g.vertex_count();
  AffectedGraph out;
  std::vector<char> pos_in(n, 0);
  for (const auto& iv : state.intervals)
    for (int p = iv.lo; p <= iv.hi; ++p) {
      pos_in[p] = 1;
      out.vertices.push_back(order.pi[p]);
    }
  std::sort(out.vertices.begin(), out.vertices.end());
  std::vector<char> vert_in(n, 0);
  for (VertexId v : out.vertices) vert_in[v] = 1;

  auto push_edge = [&out, edge_cap](VertexId a, VertexId b) {
    if (out.edges.size() >= edge_cap)
      throw std::runtime_error("materialize_affected_graph: edge cap exceeded");
    out.edges.push_back({std::min(a, b), std::max(a, b)});
  };

  for (VertexId u : out.vertices)
    for (VertexId w : g.neighbors(u))
      if (w > u && vert_in[w]) push_edge(u, w);

  const int comp_count = static_cast<int>(data.hierarchy->components.size());
  for (int comp = 0; comp < comp_count; ++comp) {
    if (state.affected_component_set.count(comp)) continue;
    const auto& ap = data.lists->a_pos[comp];
    const auto& bp = data.lists->b_pos[comp];
    std::vector<int> b_in;
    for (int p : bp)
      if (pos_in[p]) b_in.push_back(p);
    if (b_in.empty()) continue;  // every augmented edge touches the core set
    std::vector<int> a_only_in;
    for (int p : ap)
      if (pos_in[p] && !std::binary_search(bp.begin(), bp.end(), p)) a_only_in.push_back(p);
    for (std::size_t i = 0; i < b_in.size(); ++i)
      for (std::size_t j = i + 1; j < b_in.size(); ++j)
        push_edge(order.pi[b_in[i]], order.pi[b_in[j]]);
    for (int p : a_only_in)
      for (int q : b_in) push_edge(order.pi[p], order.pi[q]);
  }
  std::sort(out.edges.begin(), out.edges.end());
  out.edges.erase(std::unique(out.edges.begin(), out.edges.end()), out.edges.end());
  return out;
}

}  // namespace subconn
