#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "testutil.hpp"

using namespace subconn;

namespace {

int level_size(const Hierarchy& h, int level) {
  int c = 0;
  for (int t : h.terminal_level)
    if (t >= level) ++c;
  return c;
}

void check_structure(const Graph& g, const Hierarchy& h) {
  const auto issues = validate_hierarchy(g, h);
  for (const auto& msg : issues) CAPTURE(msg);
  CHECK(issues.empty());

  const int n_on = static_cast<int>(g.on_vertices().size());
  if (n_on == 0) {
    CHECK(h.levels == 0);
    return;
  }
  CHECK(h.levels >= 1);
  CHECK(h.levels <= static_cast<int>(std::ceil(std::log2(std::max(1, n_on)))) + 1);
  // each level keeps at most half the previous terminals
  for (int i = 1; i < h.levels; ++i) CHECK(2 * level_size(h, i + 1) <= level_size(h, i));
  // the top level carries the components of the on-subgraph
  const auto top_comps = brute_components(g, g.on_vertices());
  REQUIRE(h.level_components.size() == static_cast<std::size_t>(h.levels) + 1);
  CHECK(h.level_components[h.levels].size() == top_comps.size());
  // chains walk upward through nested components
  for (VertexId v = 0; v < g.vertex_count(); ++v) {
    if (!g.is_on(v)) {
      CHECK(h.terminal_level[v] == -1);
      CHECK(h.owner_tree[v] == -1);
      continue;
    }
    const int tl = h.terminal_level[v];
    REQUIRE(tl >= 1);
    REQUIRE(tl <= h.levels);
    REQUIRE(h.owner_tree[v] >= 0);
    const auto& owner = h.trees[h.owner_tree[v]];
    CHECK(std::binary_search(owner.terminals.begin(), owner.terminals.end(), v));
    CHECK(owner.level == tl);
    REQUIRE(h.chain[v].size() == static_cast<std::size_t>(h.levels - tl + 1));
    for (std::size_t k = 0; k < h.chain[v].size(); ++k) {
      const auto& c = h.components[h.chain[v][k]];
      CHECK(c.level == tl + static_cast<int>(k));
      CHECK(std::binary_search(c.vertices.begin(), c.vertices.end(), v));
      CHECK(&c == &h.component_of(v, c.level));
      if (k + 1 < h.chain[v].size()) CHECK(c.parent == h.chain[v][k + 1]);
      else CHECK(c.parent == -1);
    }
  }
}

}  // namespace

TEST_CASE("hierarchy of a path") {
  Graph g(9);
  for (int v = 0; v + 1 < 9; ++v) g.add_edge(v, v + 1);
  g.finalize();
  const Hierarchy h = build_hierarchy(g);
  check_structure(g, h);
  CHECK(h.level_components[h.levels].size() == 1);
}

TEST_CASE("hierarchy of a clique keeps one component per level") {
  Graph g(12);
  for (int u = 0; u < 12; ++u)
    for (int v = u + 1; v < 12; ++v) g.add_edge(u, v);
  g.finalize();
  const Hierarchy h = build_hierarchy(g);
  check_structure(g, h);
  for (int i = 1; i <= h.levels; ++i) CHECK(!h.level_components[i].empty());
}

TEST_CASE("hierarchy with off vertices ignores them") {
  Graph g(10);
  for (int v = 0; v + 1 < 10; ++v) g.add_edge(v, v + 1);
  g.set_on(3, false);
  g.set_on(7, false);
  g.finalize();
  const Hierarchy h = build_hierarchy(g);
  check_structure(g, h);
  CHECK(h.terminal_level[3] == -1);
  CHECK(h.level_components[h.levels].size() == 3);  // 0-2, 4-6, 8-9
  CHECK_THROWS_AS(h.component_of(3, 1), std::invalid_argument);
}

TEST_CASE("empty and singleton graphs") {
  {
    const Hierarchy h = build_hierarchy(Graph(0));
    CHECK(h.levels == 0);
    CHECK(validate_hierarchy(Graph(0), h).empty());
  }
  {
    Graph g(1);
    g.finalize();
    const Hierarchy h = build_hierarchy(g);
    check_structure(g, h);
    CHECK(h.levels == 1);
    CHECK(h.terminal_level[0] == 1);
  }
  {
    Graph g(2);
    g.set_on(0, false);
    g.set_on(1, false);
    g.finalize();
    const Hierarchy h = build_hierarchy(g);
    CHECK(h.levels == 0);
    CHECK(validate_hierarchy(g, h).empty());
  }
}

TEST_CASE("validator flags corrupted structures") {
  Graph g(8);
  for (int v = 0; v + 1 < 8; ++v) g.add_edge(v, v + 1);
  g.add_edge(0, 7);
  g.finalize();
  const Hierarchy clean = build_hierarchy(g);
  REQUIRE(validate_hierarchy(g, clean).empty());

  SUBCASE("terminal filed at the wrong level") {
    Hierarchy h = clean;
    const VertexId v = h.components[h.level_components[h.levels][0]].terminals.front();
    h.terminal_level[v] = 0;
    CHECK(!validate_hierarchy(g, h).empty());
  }
  SUBCASE("component loses a vertex") {
    Hierarchy h = clean;
    auto& top = h.components[h.level_components[h.levels][0]];
    top.vertices.pop_back();
    CHECK(!validate_hierarchy(g, h).empty());
  }
  SUBCASE("tree edge replaced by a non-edge") {
    Hierarchy h = clean;
    for (auto& tree : h.trees) {
      if (tree.edges.empty()) continue;
      tree.edges.back() = {0, 5};  // path+chord graph has no 0-5 edge
      break;
    }
    CHECK(!validate_hierarchy(g, h).empty());
  }
  SUBCASE("component forgets its tree") {
    Hierarchy h = clean;
    h.components[h.level_components[h.levels][0]].tree = -1;
    CHECK(!validate_hierarchy(g, h).empty());
  }
}

TEST_CASE("random graphs build valid hierarchies") {
  std::mt19937_64 rng(41);
  for (int round = 0; round < 80; ++round) {
    const int n = 1 + static_cast<int>(rng() % 40);
    const int m = static_cast<int>(rng() % (2 * n + 1));
    const int n_off = static_cast<int>(rng() % static_cast<std::uint64_t>(n + 1)) / 2;
    const Graph g = testutil::random_graph(n, m, n_off, rng);
    check_structure(g, build_hierarchy(g));
  }
}

TEST_CASE("separator-or-forest output respects its budget") {
  std::mt19937_64 rng(43);
  for (int round = 0; round < 40; ++round) {
    const int n = 2 + static_cast<int>(rng() % 30);
    const Graph g = testutil::random_graph(n, n + static_cast<int>(rng() % n), 0, rng);
    std::vector<VertexId> terms;
    for (VertexId v = 0; v < n; ++v)
      if (rng() % 2) terms.push_back(v);
    if (terms.empty()) continue;
    const auto res = sf_decomp(g, terms, Rational(1, 2));
    CHECK(leq_scaled(res.removed.size(), Rational(1, 2), terms.size()));
    // every surviving terminal is covered by exactly one returned tree
    std::vector<char> covered(n, 0);
    const VertexSet removed(res.removed);
    for (const auto& tree : res.trees) {
      CHECK(!tree.terminals.empty());
      CHECK(tree.edges.size() + 1 == tree.vertices.size());
      for (VertexId t : tree.terminals) {
        CHECK(!covered[t]);
        covered[t] = 1;
        CHECK(std::binary_search(terms.begin(), terms.end(), t));
      }
      for (auto [a, b] : tree.edges) {
        CHECK(g.has_edge(a, b));
        CHECK(!removed.contains(a));
        CHECK(!removed.contains(b));
      }
    }
    for (VertexId t : terms)
      if (!removed.contains(t)) CHECK(covered[t]);
    // trees stay inside single components of the shaved graph
    std::vector<VertexId> rest;
    for (VertexId v = 0; v < n; ++v)
      if (!removed.contains(v)) rest.push_back(v);
    const auto comps = brute_components(g, rest);
    std::vector<int> label(n, -1);
    for (std::size_t c = 0; c < comps.size(); ++c)
      for (VertexId v : comps[c]) label[v] = static_cast<int>(c);
    for (const auto& tree : res.trees)
      for (VertexId v : tree.vertices) CHECK(label[v] == label[tree.vertices.front()]);
  }
}
