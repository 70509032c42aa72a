#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "testutil.hpp"

using namespace subconn;

namespace {

struct Built {
  Graph g;
  Hierarchy h;
  std::vector<EulerTourIndex> idx;
  GlobalOrder order;
  AdjacencyLists lists;
  RangeCountTable table;
};

Built build_all(Graph g, int d_star, std::uint64_t bitmap_budget = 1ull << 33) {
  Built b{std::move(g), {}, {}, {}, {}, {}};
  b.h = build_hierarchy(b.g);
  for (const auto& tree : b.h.trees) b.idx.push_back(preprocess_tree(tree));
  b.order = build_global_order(b.g, b.h, b.idx);
  b.lists = compute_adjacency_lists(b.g, b.h, b.order, d_star, bitmap_budget);
  if (b.g.vertex_count() > 0) b.table = build_table(b.g, b.lists, b.order);
  return b;
}

// the full point multiset, rebuilt from scratch
std::vector<std::pair<int, int>> all_points(const Built& b, int d_star) {
  std::vector<std::pair<int, int>> pts;
  for (auto [u, v] : b.g.edges()) {
    const int p = b.order.position[u], q = b.order.position[v];
    pts.emplace_back(std::min(p, q), std::max(p, q));
  }
  for (std::size_t c = 0; c < b.h.components.size(); ++c)
    for (auto pr : testutil::anchored_pairs(b.g, b.h, b.order, static_cast<int>(c), d_star))
      pts.push_back(pr);
  std::sort(pts.begin(), pts.end());
  return pts;
}

long long brute_range_count(const std::vector<std::pair<int, int>>& pts, PiRange a, PiRange b) {
  long long c = 0;
  for (auto [x, y] : pts) {
    const bool xa = a.lo <= x && x <= a.hi, xb = b.lo <= x && x <= b.hi;
    const bool ya = a.lo <= y && y <= a.hi, yb = b.lo <= y && y <= b.hi;
    if ((xa && yb) || (xb && ya)) ++c;
  }
  return c;
}

}  // namespace

TEST_CASE("order and table of an all-off path") {
  Graph g(3);
  g.add_edge(0, 1);
  g.add_edge(1, 2);
  for (VertexId v = 0; v < 3; ++v) g.set_on(v, false);
  g.finalize();
  const Built b = build_all(g, 2);
  CHECK(b.order.pi == std::vector<VertexId>{0, 1, 2});
  CHECK(b.order.off_start == 0);
  CHECK(b.lists.a_pos.empty());
  CHECK(b.table.point_count() == 2);
  CHECK(range_count(b.table, {0, 0}, {1, 1}) == 1);
  CHECK(range_count(b.table, {0, 0}, {2, 2}) == 0);
  CHECK(range_count(b.table, {0, 0}, {1, 2}) == 1);
  CHECK(range_count(b.table, {1, 2}, {0, 0}) == 1);
  CHECK_THROWS_AS(range_count(b.table, {0, 1}, {1, 2}), std::invalid_argument);
}

TEST_CASE("global order is a permutation grouped by tree blocks") {
  std::mt19937_64 rng(61);
  for (int round = 0; round < 50; ++round) {
    const int n = 1 + static_cast<int>(rng() % 35);
    const Graph g = testutil::random_graph(n, static_cast<int>(rng() % (2 * n)),
                                           static_cast<int>(rng() % (n + 1)) / 2, rng);
    const Built b = build_all(g, 3);

    std::vector<int> seen(n, 0);
    for (VertexId v : b.order.pi) ++seen[v];
    for (int c : seen) CHECK(c == 1);
    for (VertexId v = 0; v < n; ++v) CHECK(b.order.pi[b.order.position[v]] == v);

    // off block: ascending ids at the tail
    const auto off = g.off_vertices();
    CHECK(b.order.off_start == n - static_cast<int>(off.size()));
    for (std::size_t i = 0; i < off.size(); ++i)
      CHECK(b.order.pi[b.order.off_start + i] == off[i]);

    // each tree block lists that tree's terminals in tour order
    REQUIRE(b.order.tree_block.size() == b.h.trees.size());
    for (std::size_t t = 0; t < b.h.trees.size(); ++t) {
      const auto& tour = b.idx[t];
      const int base = b.order.tree_block[t];
      for (std::size_t k = 0; k < tour.terminal_positions.size(); ++k)
        CHECK(b.order.pi[base + k] == tour.order[tour.terminal_positions[k]]);
    }
  }
}

TEST_CASE("boundary lists match a from-scratch recomputation") {
  std::mt19937_64 rng(67);
  for (int round = 0; round < 40; ++round) {
    const int n = 2 + static_cast<int>(rng() % 30);
    const int d_star = static_cast<int>(rng() % 4);
    const Graph g = testutil::random_graph(n, static_cast<int>(rng() % (3 * n)),
                                           static_cast<int>(rng() % (n + 1)) / 2, rng);
    const Built b = build_all(g, d_star);
    REQUIRE(b.lists.a_pos.size() == b.h.components.size());
    long long sum_a = 0, sum_ab = 0;
    for (std::size_t c = 0; c < b.h.components.size(); ++c) {
      const auto bnd = testutil::boundary_of(g, b.h.components[c].vertices);
      std::vector<int> a_want, a_on_want;
      for (VertexId v : bnd) a_want.push_back(b.order.position[v]);
      std::sort(a_want.begin(), a_want.end());
      for (int p : a_want)
        if (g.is_on(b.order.pi[p])) a_on_want.push_back(p);
      CHECK(b.lists.a_pos[c] == a_want);
      CHECK(b.lists.a_on_pos[c] == a_on_want);

      // covering subset: all off neighbors plus the first d*+1 on neighbors
      std::vector<int> b_want;
      int on_taken = 0;
      for (int p : a_want) {
        if (!g.is_on(b.order.pi[p]))
          b_want.push_back(p);
        else if (on_taken < d_star + 1) {
          b_want.push_back(p);
          ++on_taken;
        }
      }
      std::sort(b_want.begin(), b_want.end());
      CHECK(b.lists.b_pos[c] == b_want);
      sum_a += static_cast<long long>(a_want.size());
      sum_ab += static_cast<long long>(a_want.size()) * static_cast<long long>(b_want.size());

      // off-indicator agrees with membership in A
      for (VertexId w : g.off_vertices()) {
        const bool want = std::binary_search(bnd.begin(), bnd.end(), w);
        CHECK(b.lists.off_adjacent(b.lists.off_rank_of(w), static_cast<int>(c)) == want);
      }
    }
    CHECK(b.lists.sum_a == sum_a);
    CHECK(b.lists.sum_ab == sum_ab);
    for (VertexId v : g.on_vertices()) CHECK(b.lists.off_rank_of(v) == -1);

    // hash fallback answers identically when the bitmap budget is zero
    const AdjacencyLists sparse = compute_adjacency_lists(g, b.h, b.order, d_star, 0);
    if (!g.off_vertices().empty() && !b.h.components.empty()) CHECK(!sparse.bitmap_mode_);
    for (VertexId w : g.off_vertices())
      for (std::size_t c = 0; c < b.h.components.size(); ++c)
        CHECK(sparse.off_adjacent(sparse.off_rank_of(w), static_cast<int>(c)) ==
              b.lists.off_adjacent(b.lists.off_rank_of(w), static_cast<int>(c)));
  }
}

TEST_CASE("range counting agrees with a double loop over the points") {
  std::mt19937_64 rng(71);
  for (int round = 0; round < 12; ++round) {
    const int n = 6 + static_cast<int>(rng() % 30);
    const int d_star = static_cast<int>(rng() % 4);
    const Graph g = testutil::random_graph(n, static_cast<int>(rng() % (3 * n)),
                                           static_cast<int>(rng() % (n + 1)) / 3, rng);
    const Built b = build_all(g, d_star);
    const auto pts = all_points(b, d_star);
    CHECK(b.table.point_count() == static_cast<long long>(pts.size()));
    for (int trial = 0; trial < 1000; ++trial) {
      int x1 = static_cast<int>(rng() % static_cast<std::uint64_t>(n));
      int x2 = static_cast<int>(rng() % static_cast<std::uint64_t>(n));
      if (x1 > x2) std::swap(x1, x2);
      const int width = x2 - x1;
      int y1 = x2 + 1 + (x2 + 1 < n ? static_cast<int>(rng() % static_cast<std::uint64_t>(
                                          n - x2)) : 0);
      if (y1 >= n) continue;  // no room for a second range
      int y2 = y1 + (width > 0 ? static_cast<int>(rng() % static_cast<std::uint64_t>(width + 1))
                               : 0);
      y2 = std::min(y2, n - 1);
      const PiRange a{x1, x2}, c{y1, y2};
      const long long want = brute_range_count(pts, a, c);
      CHECK(range_count(b.table, a, c) == want);
      CHECK(range_count(b.table, c, a) == want);
    }
  }
}

TEST_CASE("point cap aborts oversized tables") {
  std::mt19937_64 rng(73);
  const Graph g = testutil::random_graph(20, 40, 5, rng);
  const Built b = build_all(g, 2);
  CHECK_THROWS_AS(build_table(b.g, b.lists, b.order, 1), std::runtime_error);
}

TEST_CASE("sparsifier keeps a faithful certificate") {
  std::mt19937_64 rng(79);
  for (int round = 0; round < 30; ++round) {
    const int n = 2 + static_cast<int>(rng() % 30);
    const int d_star = static_cast<int>(rng() % 4);
    const Graph g = testutil::random_graph(n, static_cast<int>(rng() % (4 * n)),
                                           static_cast<int>(rng() % (n + 1)) / 2, rng);
    const Graph s = sparsify_ni(g, d_star);
    CHECK(s.vertex_count() == n);
    long long on_on = 0;
    for (auto [u, v] : s.edges()) {
      CHECK(g.has_edge(u, v));
      if (g.is_on(u) && g.is_on(v)) ++on_on;
    }
    CHECK(on_on <= static_cast<long long>(n) * (d_star + 1));
    for (VertexId v = 0; v < n; ++v) CHECK(s.is_on(v) == g.is_on(v));
    // every edge touching an off vertex survives
    for (auto [u, v] : g.edges())
      if (!g.is_on(u) || !g.is_on(v)) CHECK(s.has_edge(u, v));

    // connectivity agrees for every batch within budget
    for (int trial = 0; trial < 20; ++trial) {
      const int batch = d_star == 0 ? 0
                                    : static_cast<int>(rng() %
                                                       static_cast<std::uint64_t>(d_star + 1));
      const auto flips = testutil::sample_distinct(n, batch, rng);
      const VertexSet flip_set(flips);
      std::vector<VertexId> active;
      for (VertexId v = 0; v < n; ++v)
        if (g.is_on(v) != flip_set.contains(v)) active.push_back(v);
      if (active.size() < 2) continue;
      const VertexSet act(active);
      for (int q = 0; q < 15; ++q) {
        const VertexId u = active[rng() % active.size()];
        const VertexId v = active[rng() % active.size()];
        CHECK(brute_connected(g, act, u, v) == brute_connected(s, act, u, v));
      }
    }
  }
}
