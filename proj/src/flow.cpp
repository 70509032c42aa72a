#include "subconn/flow.hpp"

#include <algorithm>
#include <queue>
#include <stdexcept>
#include <unordered_set>

namespace subconn {

namespace {

constexpr long long kInf = 1LL << 60;

struct Arc {
  int to;
  long long cap;
  int rev;  // index of the reverse arc in adj[to]
};

struct Dinic {
  int n;
  std::vector<std::vector<Arc>> adj;
  std::vector<int> level, it;

  explicit Dinic(int n) : n(n), adj(n), level(n), it(n) {}

  // returns index of the forward arc in adj[from]
  int add_arc(int from, int to, long long cap) {
    adj[from].push_back({to, cap, static_cast<int>(adj[to].size())});
    adj[to].push_back({from, 0, static_cast<int>(adj[from].size() - 1)});
    return static_cast<int>(adj[from].size() - 1);
  }

  bool bfs(int s, int t) {
    std::fill(level.begin(), level.end(), -1);
    std::queue<int> q;
    level[s] = 0;
    q.push(s);
    while (!q.empty()) {
      int v = q.front();
      q.pop();
      for (const Arc& a : adj[v]) {
        if (a.cap > 0 && level[a.to] < 0) {
          level[a.to] = level[v] + 1;
          q.push(a.to);
        }
      }
    }
    return level[t] >= 0;
  }

  long long dfs(int v, int t, long long limit) {
    if (v == t) return limit;
    for (int& i = it[v]; i < static_cast<int>(adj[v].size()); ++i) {
      Arc& a = adj[v][i];
      if (a.cap <= 0 || level[a.to] != level[v] + 1) continue;
      long long got = dfs(a.to, t, std::min(limit, a.cap));
      if (got > 0) {
        a.cap -= got;
        adj[a.to][a.rev].cap += got;
        return got;
      }
    }
    return 0;
  }

  long long run(int s, int t, long long value_cap) {
    long long total = 0;
    while (bfs(s, t)) {
      std::fill(it.begin(), it.end(), 0);
      while (true) {
        long long limit = value_cap < 0 ? kInf : value_cap - total;
        if (limit <= 0) return total;
        long long got = dfs(s, t, limit);
        if (got == 0) break;
        total += got;
      }
      if (value_cap >= 0 && total >= value_cap) return total;
    }
    return total;
  }
};

void validate_network(const FlowNetwork& net) {
  if (net.nodes <= 1) throw std::invalid_argument("flow: need at least two nodes");
  if (net.source < 0 || net.source >= net.nodes || net.sink < 0 || net.sink >= net.nodes ||
      net.source == net.sink)
    throw std::invalid_argument("flow: bad source/sink");
  if (static_cast<int>(net.node_capacity.size()) != net.nodes)
    throw std::invalid_argument("flow: capacity vector size mismatch");
  for (int v = 0; v < net.nodes; ++v) {
    if (v != net.source && v != net.sink && net.node_capacity[v] < 1)
      throw std::invalid_argument("flow: node capacity < 1");
  }
  std::unordered_set<long long> seen;
  for (auto [u, v] : net.edges) {
    if (u < 0 || v < 0 || u >= net.nodes || v >= net.nodes)
      throw std::invalid_argument("flow: edge endpoint out of range");
    if (u == v) throw std::invalid_argument("flow: self-loop");
    if ((u == net.source && v == net.sink) || (u == net.sink && v == net.source))
      throw std::invalid_argument("flow: source adjacent to sink");
    long long key = static_cast<long long>(std::min(u, v)) * net.nodes + std::max(u, v);
    if (!seen.insert(key).second) throw std::invalid_argument("flow: duplicate edge");
  }
}

// Per-edge directed unit arcs of a flow, for path stripping.
struct UnitArcs {
  struct Out {
    int to;
    long long units;
    int edge;
  };
  std::vector<std::vector<Out>> out;
  std::vector<int> cur;

  UnitArcs(const FlowNetwork& net, const std::vector<long long>& edge_flow)
      : out(net.nodes), cur(net.nodes, 0) {
    for (std::size_t e = 0; e < net.edges.size(); ++e) {
      long long f = edge_flow[e];
      if (f == 0) continue;
      int from = f > 0 ? net.edges[e].first : net.edges[e].second;
      int to = f > 0 ? net.edges[e].second : net.edges[e].first;
      out[from].push_back({to, f > 0 ? f : -f, static_cast<int>(e)});
    }
  }

  long long remaining_mass() const {
    long long mass = 0;
    for (const auto& list : out)
      for (const auto& a : list) mass += a.units;
    return mass;
  }
};

struct StripResult {
  std::vector<std::vector<int>> path_nodes;
  std::vector<std::vector<int>> path_edges;
  bool cancelled = false;
};

// Peels `value` unit s-t paths off the flow, cancelling any cycle it walks
// into. Total work is bounded by the flow mass.
StripResult strip_paths(const FlowNetwork& net, const std::vector<long long>& edge_flow,
                        long long value) {
  UnitArcs arcs(net, edge_flow);
  StripResult res;
  std::vector<int> pos(net.nodes, -1);
  for (long long k = 0; k < value; ++k) {
    std::vector<int> nodes{net.source};
    std::vector<int> edges;
    pos[net.source] = 0;
    while (nodes.back() != net.sink) {
      int x = nodes.back();
      auto& lst = arcs.out[x];
      int& c = arcs.cur[x];
      while (c < static_cast<int>(lst.size()) && lst[c].units == 0) ++c;
      if (c >= static_cast<int>(lst.size())) {
        for (int v : nodes) pos[v] = -1;
        throw std::invalid_argument("flow decomposition: stuck walk, flow not conservative");
      }
      lst[c].units--;
      int y = lst[c].to;
      int e = lst[c].edge;
      if (pos[y] >= 0) {
        // walked into a cycle: drop the consumed loop and resume from y
        res.cancelled = true;
        for (std::size_t i = pos[y] + 1; i < nodes.size(); ++i) pos[nodes[i]] = -1;
        nodes.resize(pos[y] + 1);
        edges.resize(pos[y]);
      } else {
        pos[y] = static_cast<int>(nodes.size());
        nodes.push_back(y);
        edges.push_back(e);
      }
    }
    for (int v : nodes) pos[v] = -1;
    res.path_nodes.push_back(std::move(nodes));
    res.path_edges.push_back(std::move(edges));
  }
  if (arcs.remaining_mass() > 0) res.cancelled = true;  // leftover closed loops
  return res;
}

std::vector<long long> flow_from_paths(const FlowNetwork& net, const StripResult& strip) {
  std::vector<long long> f(net.edges.size(), 0);
  for (std::size_t p = 0; p < strip.path_nodes.size(); ++p) {
    const auto& nodes = strip.path_nodes[p];
    const auto& edges = strip.path_edges[p];
    for (std::size_t i = 0; i < edges.size(); ++i) {
      int e = edges[i];
      f[e] += nodes[i] == net.edges[e].first ? 1 : -1;
    }
  }
  return f;
}

}  // namespace

MaxFlowResult max_flow_vertex_capacitated(const FlowNetwork& net, long long value_cap) {
  validate_network(net);
  // split: in(v) = 2v, out(v) = 2v+1; source/sink keep no internal arc, the
  // effective terminals are out(source) and in(sink)
  Dinic dinic(2 * net.nodes);
  std::vector<int> internal_arc(net.nodes, -1);
  for (int v = 0; v < net.nodes; ++v) {
    if (v == net.source || v == net.sink) continue;
    internal_arc[v] = dinic.add_arc(2 * v, 2 * v + 1, net.node_capacity[v]);
  }
  std::vector<std::pair<int, int>> edge_arcs;  // per edge: (arc in adj[out(u)], arc in adj[out(v)])
  edge_arcs.reserve(net.edges.size());
  for (auto [u, v] : net.edges) {
    int a = dinic.add_arc(2 * u + 1, 2 * v, kInf);
    int b = dinic.add_arc(2 * v + 1, 2 * u, kInf);
    edge_arcs.emplace_back(a, b);
  }
  int s_eff = 2 * net.source + 1;
  int t_eff = 2 * net.sink;
  long long value = dinic.run(s_eff, t_eff, value_cap);

  MaxFlowResult result;
  result.flow.value = value;
  result.flow.edge_flow.resize(net.edges.size());
  for (std::size_t e = 0; e < net.edges.size(); ++e) {
    auto [u, v] = net.edges[e];
    long long fwd = kInf - dinic.adj[2 * u + 1][edge_arcs[e].first].cap;
    long long bwd = kInf - dinic.adj[2 * v + 1][edge_arcs[e].second].cap;
    result.flow.edge_flow[e] = fwd - bwd;
  }

  // canonicalize to a cycle-free flow (sum of unit s-t paths, no closed loops)
  while (value > 0) {
    StripResult strip = strip_paths(net, result.flow.edge_flow, value);
    result.flow.edge_flow = flow_from_paths(net, strip);
    if (!strip.cancelled) break;
  }

  result.cut_is_min = value_cap < 0 || value < value_cap;
  if (result.cut_is_min) {
    // residual reachability from the effective source; all crossing arcs are
    // saturated internal arcs because edge arcs are unbounded
    std::vector<char> reach(2 * net.nodes, 0);
    std::vector<int> stack{s_eff};
    reach[s_eff] = 1;
    while (!stack.empty()) {
      int x = stack.back();
      stack.pop_back();
      for (const Arc& a : dinic.adj[x]) {
        if (a.cap > 0 && !reach[a.to]) {
          reach[a.to] = 1;
          stack.push_back(a.to);
        }
      }
    }
    std::vector<VertexId> sep;
    for (int v = 0; v < net.nodes; ++v) {
      if (v == net.source || v == net.sink) continue;
      if (reach[2 * v] && !reach[2 * v + 1]) sep.push_back(v);
    }
    result.cut.separator = VertexSet(sep);
    for (int v : sep) result.cut.separator_capacity += net.node_capacity[v];

    // L = nodes reachable from the source once S is removed, R = the rest
    std::vector<std::vector<int>> und(net.nodes);
    for (auto [u, v] : net.edges) {
      und[u].push_back(v);
      und[v].push_back(u);
    }
    std::vector<char> seen(net.nodes, 0);
    seen[net.source] = 1;
    stack.assign(1, net.source);
    while (!stack.empty()) {
      int x = stack.back();
      stack.pop_back();
      for (int y : und[x]) {
        if (!seen[y] && !result.cut.separator.contains(y)) {
          seen[y] = 1;
          stack.push_back(y);
        }
      }
    }
    std::vector<VertexId> left, right;
    for (int v = 0; v < net.nodes; ++v) {
      if (v == net.source || v == net.sink || result.cut.separator.contains(v)) continue;
      (seen[v] ? left : right).push_back(v);
    }
    result.cut.left = VertexSet(std::move(left));
    result.cut.right = VertexSet(std::move(right));
  }
  return result;
}

std::vector<std::vector<int>> decompose_flow_paths(const FlowNetwork& net,
                                                   const IntegralFlow& flow) {
  validate_network(net);
  if (flow.edge_flow.size() != net.edges.size())
    throw std::invalid_argument("flow decomposition: edge_flow size mismatch");
  std::vector<long long> net_balance(net.nodes, 0);
  std::vector<long long> through(net.nodes, 0);
  for (std::size_t e = 0; e < net.edges.size(); ++e) {
    long long f = flow.edge_flow[e];
    auto [u, v] = net.edges[e];
    net_balance[u] -= f;
    net_balance[v] += f;
    through[f > 0 ? v : u] += f > 0 ? f : -f;
  }
  for (int v = 0; v < net.nodes; ++v) {
    if (v == net.source || v == net.sink) continue;
    if (net_balance[v] != 0)
      throw std::invalid_argument("flow decomposition: conservation violated");
    if (through[v] > net.node_capacity[v])
      throw std::invalid_argument("flow decomposition: node capacity exceeded");
  }
  if (net_balance[net.sink] != flow.value)
    throw std::invalid_argument("flow decomposition: value does not match edge flows");
  return strip_paths(net, flow.edge_flow, flow.value).path_nodes;
}

}  // namespace subconn
