#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "subconn/euler_intervals.hpp"
#include "testutil.hpp"

using namespace subconn;

namespace {

SteinerTree make_tree(std::vector<VertexId> verts,
                      std::vector<std::pair<VertexId, VertexId>> edges,
                      std::vector<VertexId> terminals) {
  SteinerTree t;
  t.id = 0;
  t.level = 1;
  std::sort(verts.begin(), verts.end());
  for (auto& [a, b] : edges)
    if (a > b) std::swap(a, b);
  std::sort(edges.begin(), edges.end());
  std::sort(terminals.begin(), terminals.end());
  t.vertices = std::move(verts);
  t.edges = std::move(edges);
  t.terminals = std::move(terminals);
  std::unordered_map<VertexId, int> deg;
  for (auto [a, b] : t.edges) {
    ++deg[a];
    ++deg[b];
  }
  for (auto [v, d] : deg) {
    (void)v;
    t.max_degree = std::max(t.max_degree, d);
  }
  return t;
}

SteinerTree random_tree(int size, std::mt19937_64& rng) {
  const auto ids = testutil::sample_distinct(120, size, rng);
  std::vector<std::pair<VertexId, VertexId>> edges;
  for (int i = 1; i < size; ++i)
    edges.push_back({ids[rng() % static_cast<std::uint64_t>(i)], ids[i]});
  std::vector<VertexId> terms;
  for (VertexId v : ids)
    if (rng() % 2) terms.push_back(v);
  if (terms.empty()) terms.push_back(ids[0]);
  return make_tree(ids, std::move(edges), std::move(terms));
}

std::vector<int> brute_labels(const SteinerTree& tree, const std::vector<VertexId>& failed) {
  VertexId top = 0;
  for (VertexId v : tree.vertices) top = std::max(top, v);
  Graph g(top + 1);
  for (auto [a, b] : tree.edges) g.add_edge(a, b);
  g.finalize();
  std::vector<VertexId> active;
  const VertexSet gone(failed);
  for (VertexId v : tree.vertices)
    if (!gone.contains(v)) active.push_back(v);
  const auto comps = brute_components(g, active);
  std::vector<int> label(top + 1, -1);
  for (std::size_t c = 0; c < comps.size(); ++c)
    for (VertexId v : comps[c]) label[v] = static_cast<int>(c);
  return label;
}

}  // namespace

TEST_CASE("preorder index of a small tree") {
  // 2 -> {5, 7}; 5 -> {9, 11}
  const SteinerTree t = make_tree({2, 5, 7, 9, 11}, {{2, 5}, {2, 7}, {5, 9}, {5, 11}}, {9, 7});
  const EulerTourIndex idx = preprocess_tree(t);
  CHECK(idx.order == std::vector<VertexId>{2, 5, 9, 11, 7});
  CHECK(idx.parent[0] == -1);
  CHECK(idx.parent[idx.pos.at(9)] == idx.pos.at(5));
  CHECK(idx.subtree_end[idx.pos.at(5)] == idx.pos.at(11));
  CHECK(idx.subtree_end[0] == 4);
  CHECK(idx.children[0] == std::vector<int>{1, 4});
  CHECK(idx.terminal_positions == std::vector<int>{2, 4});  // 9 then 7
}

TEST_CASE("failing the middle of a path splits the tour") {
  const SteinerTree t =
      make_tree({1, 2, 3, 4, 5}, {{1, 2}, {2, 3}, {3, 4}, {4, 5}}, {1, 4, 5});
  const EulerTourIndex idx = preprocess_tree(t);
  const IntervalSet cut = intervals_after_failures(idx, {3});
  REQUIRE(cut.intervals.size() == 2);
  CHECK(cut.intervals[0].lo == 0);
  CHECK(cut.intervals[0].hi == 1);  // vertices 1, 2
  CHECK(cut.intervals[1].lo == 3);
  CHECK(cut.intervals[1].hi == 4);  // vertices 4, 5
  CHECK(cut.intervals[0].label != cut.intervals[1].label);

  const IntervalSet ranks = restrict_to_terminals(idx, cut);
  REQUIRE(ranks.intervals.size() == 2);
  CHECK(ranks.intervals[0].lo == 0);
  CHECK(ranks.intervals[0].hi == 0);  // terminal 1
  CHECK(ranks.intervals[1].lo == 1);
  CHECK(ranks.intervals[1].hi == 2);  // terminals 4, 5

  CHECK(locate_interval(cut, idx, 1) == 0);
  CHECK(locate_interval(cut, idx, 5) == 1);
  CHECK_THROWS_AS(locate_interval(cut, idx, 3), std::invalid_argument);
  CHECK_THROWS_AS(intervals_after_failures(idx, {99}), std::invalid_argument);
}

TEST_CASE("star center failure isolates every leaf") {
  const SteinerTree t = make_tree({0, 1, 2, 3, 4}, {{0, 1}, {0, 2}, {0, 3}, {0, 4}},
                                  {1, 2, 3, 4});
  const EulerTourIndex idx = preprocess_tree(t);
  const IntervalSet cut = intervals_after_failures(idx, {0});
  REQUIRE(cut.intervals.size() == 4);
  for (std::size_t i = 0; i < cut.intervals.size(); ++i) {
    CHECK(cut.intervals[i].lo == cut.intervals[i].hi);
    for (std::size_t j = i + 1; j < cut.intervals.size(); ++j)
      CHECK(cut.intervals[i].label != cut.intervals[j].label);
  }
}

TEST_CASE("no failures keeps one interval") {
  const SteinerTree t = make_tree({4, 6}, {{4, 6}}, {4, 6});
  const EulerTourIndex idx = preprocess_tree(t);
  const IntervalSet cut = intervals_after_failures(idx, {});
  REQUIRE(cut.intervals.size() == 1);
  CHECK(cut.intervals[0].lo == 0);
  CHECK(cut.intervals[0].hi == 1);
}

TEST_CASE("random trees: intervals mirror the broken tree exactly") {
  std::mt19937_64 rng(53);
  for (int round = 0; round < 400; ++round) {
    const int size = 1 + static_cast<int>(rng() % 30);
    const SteinerTree tree = random_tree(size, rng);
    const EulerTourIndex idx = preprocess_tree(tree);
    REQUIRE(idx.order.size() == tree.vertices.size());

    std::vector<VertexId> failed;
    for (VertexId v : tree.vertices)
      if (rng() % 4 == 0) failed.push_back(v);
    const IntervalSet cut = intervals_after_failures(idx, failed);
    const auto label = brute_labels(tree, failed);

    // bound on the number of pieces
    CHECK(static_cast<long long>(cut.intervals.size()) <=
          static_cast<long long>(tree.max_degree + 1) * static_cast<long long>(failed.size()) +
              1);

    // coverage: surviving positions exactly once, failed positions never
    std::vector<int> hit(idx.order.size(), 0);
    int prev_hi = -1;
    for (const auto& iv : cut.intervals) {
      CHECK(iv.lo > prev_hi);
      prev_hi = iv.hi;
      for (int p = iv.lo; p <= iv.hi; ++p) ++hit[p];
    }
    const VertexSet gone(failed);
    for (std::size_t p = 0; p < idx.order.size(); ++p)
      CHECK(hit[p] == (gone.contains(idx.order[p]) ? 0 : 1));

    // labels agree with the components of tree-minus-failures
    for (std::size_t i = 0; i < cut.intervals.size(); ++i) {
      const int li = label[idx.order[cut.intervals[i].lo]];
      for (int p = cut.intervals[i].lo; p <= cut.intervals[i].hi; ++p)
        CHECK(label[idx.order[p]] == li);
      for (std::size_t j = i + 1; j < cut.intervals.size(); ++j) {
        const int lj = label[idx.order[cut.intervals[j].lo]];
        CHECK((cut.intervals[i].label == cut.intervals[j].label) == (li == lj));
      }
    }

    // surviving vertices locate into intervals that contain them
    for (VertexId v : tree.vertices) {
      if (gone.contains(v)) {
        CHECK_THROWS_AS(locate_interval(cut, idx, v), std::invalid_argument);
        continue;
      }
      const int k = locate_interval(cut, idx, v);
      REQUIRE(k >= 0);
      const int p = idx.pos.at(v);
      CHECK(cut.intervals[k].lo <= p);
      CHECK(p <= cut.intervals[k].hi);
    }

    // rank restriction holds exactly the surviving terminals
    const IntervalSet ranks = restrict_to_terminals(idx, cut);
    std::vector<VertexId> from_ranks;
    for (const auto& iv : ranks.intervals)
      for (int r = iv.lo; r <= iv.hi; ++r)
        from_ranks.push_back(idx.order[idx.terminal_positions[r]]);
    std::sort(from_ranks.begin(), from_ranks.end());
    std::vector<VertexId> want;
    for (VertexId t : tree.terminals)
      if (!gone.contains(t)) want.push_back(t);
    CHECK(from_ranks == want);
    for (const auto& iv : ranks.intervals) CHECK(iv.lo <= iv.hi);
  }
}
