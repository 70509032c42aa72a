#include "subconn/generators.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>
#include <unordered_set>
#include <vector>

namespace subconn {

namespace {

// rng() % k instead of uniform_int_distribution: the distribution's mapping
// is implementation-defined, and generated files must be reproducible.
std::uint64_t below(std::mt19937_64& rng, std::uint64_t k) { return rng() % k; }

std::vector<std::pair<VertexId, VertexId>> gnm_edges(int n, long long m, std::mt19937_64& rng) {
  const long long max_edges = static_cast<long long>(n) * (n - 1) / 2;
  if (m < 0 || m > max_edges) throw std::invalid_argument("generate_graph: infeasible edge count");
  std::vector<std::pair<VertexId, VertexId>> edges;
  edges.reserve(m);
  if (m > max_edges / 2) {
    // dense: enumerate and partially shuffle
    std::vector<std::pair<VertexId, VertexId>> all;
    all.reserve(max_edges);
    for (VertexId u = 0; u < n; ++u)
      for (VertexId v = u + 1; v < n; ++v) all.push_back({u, v});
    for (long long i = 0; i < m; ++i) {
      const long long j = i + static_cast<long long>(below(rng, all.size() - i));
      std::swap(all[i], all[j]);
    }
    edges.assign(all.begin(), all.begin() + m);
  } else {
    std::unordered_set<std::uint64_t> used;
    while (static_cast<long long>(edges.size()) < m) {
      const VertexId u = static_cast<VertexId>(below(rng, n));
      const VertexId v = static_cast<VertexId>(below(rng, n));
      if (u == v) continue;
      const VertexId a = std::min(u, v), b = std::max(u, v);
      if (used.insert(static_cast<std::uint64_t>(a) * n + b).second) edges.push_back({a, b});
    }
  }
  return edges;
}

std::vector<std::pair<VertexId, VertexId>> grid_edges(int n) {
  std::vector<std::pair<VertexId, VertexId>> edges;
  if (n <= 1) return edges;
  const int rows = std::max(1, static_cast<int>(std::sqrt(static_cast<double>(n))));
  const int cols = (n + rows - 1) / rows;
  for (VertexId v = 0; v < n; ++v) {
    const int c = v % cols;
    if (c + 1 < cols && v + 1 < n) edges.push_back({v, v + 1});
    if (v + cols < n) edges.push_back({v, v + cols});
  }
  return edges;
}

std::vector<std::pair<VertexId, VertexId>> cliques_bridge_edges(int n) {
  std::vector<std::pair<VertexId, VertexId>> edges;
  if (n <= 1) return edges;
  const int s = std::max(2, static_cast<int>(std::sqrt(static_cast<double>(n))));
  for (int base = 0; base < n; base += s) {
    const int end = std::min(base + s, n);
    for (VertexId u = base; u < end; ++u)
      for (VertexId v = u + 1; v < end; ++v) edges.push_back({u, v});
    if (end < n) edges.push_back({static_cast<VertexId>(end - 1), static_cast<VertexId>(end)});
  }
  return edges;
}

}  // namespace

Graph generate_graph(const GenSpec& spec) {
  if (spec.n < 0) throw std::invalid_argument("generate_graph: negative vertex count");
  if (spec.n_off < 0 || spec.n_off > spec.n)
    throw std::invalid_argument("generate_graph: off count out of range");
  std::mt19937_64 rng(spec.seed);

  std::vector<std::pair<VertexId, VertexId>> edges;
  if (spec.kind == "gnm") {
    edges = gnm_edges(spec.n, spec.m, rng);
  } else if (spec.kind == "path") {
    for (VertexId v = 0; v + 1 < spec.n; ++v) edges.push_back({v, v + 1});
  } else if (spec.kind == "star") {
    for (VertexId v = 1; v < spec.n; ++v) edges.push_back({0, v});
  } else if (spec.kind == "grid") {
    edges = grid_edges(spec.n);
  } else if (spec.kind == "cliques-bridge") {
    edges = cliques_bridge_edges(spec.n);
  } else {
    throw std::invalid_argument("generate_graph: unknown kind '" + spec.kind + "'");
  }

  Graph g(spec.n);
  for (const auto& [u, v] : edges) g.add_edge(u, v);
  if (spec.n_off > 0) {
    std::vector<VertexId> ids(spec.n);
    std::iota(ids.begin(), ids.end(), 0);
    for (int i = 0; i < spec.n_off; ++i) {
      const int j = i + static_cast<int>(below(rng, ids.size() - i));
      std::swap(ids[i], ids[j]);
      g.set_on(ids[i], false);
    }
  }
  g.finalize();
  return g;
}

}  // namespace subconn
