#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "testutil.hpp"

using namespace subconn;

namespace {

int ceil_log2(long long v) {
  int b = 0;
  while ((1ll << b) < v) ++b;
  return b;
}

// the batched counting identity, rebuilt from the public pieces: edges of the
// working graph between two intervals = table count minus the anchored pairs
// of the affected components
long long identity_count(const Oracle& oracle, const UpdateState& st, int k, int l) {
  const auto& iv_k = st.intervals[k];
  const auto& iv_l = st.intervals[l];
  long long total = range_count(oracle.table(), {iv_k.lo, iv_k.hi}, {iv_l.lo, iv_l.hi});
  auto slice = [](const std::vector<int>& sorted, const PiRange& r) {
    return static_cast<long long>(std::upper_bound(sorted.begin(), sorted.end(), r.hi) -
                                  std::lower_bound(sorted.begin(), sorted.end(), r.lo));
  };
  for (int c : st.affected_components) {
    const auto& a = oracle.lists().a_pos[c];
    const auto& b = oracle.lists().b_pos[c];
    const long long ak = slice(a, {iv_k.lo, iv_k.hi}), al = slice(a, {iv_l.lo, iv_l.hi});
    const long long bk = slice(b, {iv_k.lo, iv_k.hi}), bl = slice(b, {iv_l.lo, iv_l.hi});
    total -= ak * al - (ak - bk) * (al - bl);
  }
  return total;
}

long long brute_between(const std::vector<std::pair<int, int>>& pts, const PiRange& a,
                        const PiRange& b) {
  long long c = 0;
  for (auto [x, y] : pts) {
    const bool xa = a.lo <= x && x <= a.hi, xb = b.lo <= x && x <= b.hi;
    const bool ya = a.lo <= y && y <= a.hi, yb = b.lo <= y && y <= b.hi;
    if ((xa && yb) || (xb && ya)) ++c;
  }
  return c;
}

void check_update_invariants(const Oracle& oracle, const UpdateState& st) {
  // intervals: sorted, disjoint, partitioning positions of the live set
  int prev = -1;
  for (const auto& iv : st.intervals) {
    CHECK(iv.lo > prev);
    CHECK(iv.lo <= iv.hi);
    prev = iv.hi;
  }
  // interval count budget
  long long bound = static_cast<long long>(st.d_off.size());
  for (int tid : st.affected_trees) {
    auto it = st.failed_in_tree.find(tid);
    const long long f =
        it == st.failed_in_tree.end() ? 0 : static_cast<long long>(it->second.size());
    bound += (oracle.hierarchy().trees[tid].max_degree + 1) * f + 1;
  }
  CHECK(static_cast<long long>(st.intervals.size()) <= bound);
  // merge schedule: phase cap and halving
  if (!st.intervals.empty()) {
    CHECK(st.phases <= ceil_log2(static_cast<long long>(st.intervals.size())) + 2);
    for (std::size_t j = 1; j < st.phase_sizes.size(); ++j)
      CHECK(2 * st.phase_sizes[j] <= st.phase_sizes[j - 1]);
  }
  // groups: ids are dense and ordered by first position
  if (st.group_count > 0) {
    std::vector<int> first_pos(st.group_count, -1);
    for (std::size_t i = 0; i < st.intervals.size(); ++i) {
      const int grp = st.interval_group[i];
      REQUIRE(grp >= 0);
      REQUIRE(grp < st.group_count);
      if (first_pos[grp] < 0) first_pos[grp] = st.intervals[i].lo;
    }
    for (int grp = 0; grp + 1 < st.group_count; ++grp) {
      REQUIRE(first_pos[grp] >= 0);
      CHECK(first_pos[grp] < first_pos[grp + 1]);
    }
  }
}

void check_against_brute(const Oracle& oracle, const UpdateState& st, std::mt19937_64& rng,
                         int queries) {
  const Graph& g = oracle.graph();
  const auto act = testutil::active_after(g, st);
  // groups match the components of the explicitly materialized working graph
  auto dsu = testutil::star_components(oracle.data(), st);
  for (std::size_t i = 0; i < st.intervals.size(); ++i)
    for (std::size_t j = i + 1; j < st.intervals.size(); ++j) {
      const bool same_group = st.interval_group[i] == st.interval_group[j];
      const bool same_comp =
          dsu.find(st.intervals[i].lo) == dsu.find(st.intervals[j].lo);
      CHECK(same_group == same_comp);
    }
  // transfer: working-graph components equal real components on the live set
  if (!act.empty()) {
    const VertexSet act_set(act);
    for (const auto& iv : st.intervals)
      for (int p = iv.lo; p <= iv.hi; ++p) {
        CHECK(brute_connected(g, act_set, oracle.order().pi[iv.lo], oracle.order().pi[p]) ==
              (dsu.find(iv.lo) == dsu.find(p)));
      }
    for (int q = 0; q < queries; ++q) {
      const VertexId u = act[rng() % act.size()];
      const VertexId v = act[rng() % act.size()];
      CHECK(oracle.query(u, v) == brute_connected(g, act_set, u, v));
    }
  }
}

}  // namespace

TEST_CASE("empty batch leaves queries to the sealed path") {
  Graph g(5);
  g.add_edge(0, 1);
  g.add_edge(1, 2);
  g.add_edge(3, 4);
  g.finalize();
  Oracle oracle(g, 3);
  CHECK(!oracle.has_update());
  CHECK_THROWS_AS(oracle.query(0, 1), std::logic_error);
  oracle.update({});
  CHECK(oracle.state().intervals.empty());
  CHECK(oracle.state().group_count == 0);
  CHECK(oracle.query(0, 2));
  CHECK(oracle.query(2, 0));
  CHECK(!oracle.query(0, 3));
  CHECK(oracle.query(3, 4));
  CHECK(oracle.query(4, 4));
}

TEST_CASE("failing the middle of a path disconnects its ends") {
  Graph g(3);
  g.add_edge(0, 1);
  g.add_edge(1, 2);
  g.finalize();
  Oracle oracle(g, 2);
  oracle.update({1});
  CHECK(!oracle.query(0, 2));
  CHECK(oracle.query(0, 0));
  CHECK_THROWS_AS(oracle.query(1, 0), std::invalid_argument);  // 1 is now off
  oracle.update({});
  CHECK(oracle.query(0, 2));  // batches replace each other
}

TEST_CASE("switching off vertices on brings them into play") {
  Graph g(4);
  g.add_edge(0, 1);
  g.add_edge(1, 2);
  g.add_edge(2, 3);
  for (VertexId v = 0; v < 4; ++v) g.set_on(v, false);
  g.finalize();
  Oracle oracle(g, 3);
  oracle.update({0, 1});
  CHECK(oracle.query(0, 1));
  oracle.update({0, 2});
  CHECK(!oracle.query(0, 2));
  oracle.update({1, 2, 3});
  CHECK(oracle.query(1, 3));
  CHECK_THROWS_AS(oracle.query(0, 1), std::invalid_argument);  // 0 still off
}

TEST_CASE("mixed batch on a ladder") {
  // 0-1-2-3-4 path with 5 as an off spare wired to 0 and 4
  Graph g(6);
  g.add_edge(0, 1);
  g.add_edge(1, 2);
  g.add_edge(2, 3);
  g.add_edge(3, 4);
  g.add_edge(5, 0);
  g.add_edge(5, 4);
  g.set_on(5, false);
  g.finalize();
  Oracle oracle(g, 4);
  oracle.update({2});
  CHECK(!oracle.query(0, 4));
  oracle.update({2, 5});  // break the path but open the bypass
  CHECK(oracle.query(0, 4));
  CHECK(oracle.query(1, 3));
  CHECK(oracle.query(5, 3));
}

TEST_CASE("update rejects bad batches") {
  Graph g(4);
  g.add_edge(0, 1);
  g.finalize();
  Oracle oracle(g, 2);
  CHECK_THROWS_AS(oracle.update({0, 1, 2}), std::invalid_argument);   // over budget
  CHECK_THROWS_AS(oracle.update({0, 0}), std::invalid_argument);      // duplicate
  CHECK_THROWS_AS(oracle.update({-1}), std::invalid_argument);        // out of range
  CHECK_THROWS_AS(oracle.update({4}), std::invalid_argument);
  CHECK_THROWS_AS(Oracle(g, -1), std::invalid_argument);
  oracle.update({3});
  CHECK_THROWS_AS(oracle.query(7, 0), std::invalid_argument);
  CHECK_THROWS_AS(oracle.query(3, 0), std::invalid_argument);         // switched off
}

TEST_CASE("representatives take the documented shortcuts") {
  Graph g(6);
  g.add_edge(0, 1);
  g.add_edge(1, 2);
  g.add_edge(2, 3);
  g.add_edge(3, 4);
  g.add_edge(4, 5);
  g.set_on(5, false);
  g.finalize();
  Oracle oracle(g, 3);
  oracle.update({2, 5});
  const UpdateState& st = oracle.state();
  // a vertex switched on this batch is its own token
  const auto rep5 = find_representative(oracle.data(), st, 5);
  CHECK(rep5.found);
  CHECK(rep5.vertex == 5);
  // vertices whose owner tree got hit answer with themselves as well
  for (VertexId v : {0, 1, 3, 4}) {
    const auto rep = find_representative(oracle.data(), st, v);
    if (st.affected_tree_set.count(oracle.hierarchy().owner_tree[v])) {
      CHECK(rep.found);
      CHECK(rep.vertex == v);
    }
  }
  const auto res = query_with_details(oracle.data(), st, 0, 1);
  CHECK(res.connected);
}

TEST_CASE("isolated components answer by membership") {
  // two triangles sharing no edges; batch only touches the second one
  Graph g(6);
  g.add_edge(0, 1);
  g.add_edge(1, 2);
  g.add_edge(0, 2);
  g.add_edge(3, 4);
  g.add_edge(4, 5);
  g.add_edge(3, 5);
  g.finalize();
  Oracle oracle(g, 2);
  oracle.update({4});
  CHECK(oracle.query(0, 1));
  CHECK(oracle.query(0, 2));
  CHECK(!oracle.query(0, 3));
  CHECK(oracle.query(3, 5));
  const auto details = oracle.query_details(0, 1);
  CHECK(details.connected);
  CHECK(details.resolution == Resolution::kSameIsolatedComponent);
  CHECK(oracle.query_details(0, 3).resolution == Resolution::kCrossIsolated);
}

TEST_CASE("counting identity equals explicit enumeration") {
  std::mt19937_64 rng(83);
  int checked = 0;
  for (int round = 0; round < 140; ++round) {
    const int n = 4 + static_cast<int>(rng() % 30);
    const int d_star = 1 + static_cast<int>(rng() % 4);
    const Graph g = testutil::random_graph(n, static_cast<int>(rng() % (3 * n)),
                                           static_cast<int>(rng() % (n + 1)) / 3, rng);
    Oracle oracle(g, d_star);
    oracle.update(testutil::sample_distinct(
        n, static_cast<int>(rng() % static_cast<std::uint64_t>(d_star + 1)), rng));
    const UpdateState& st = oracle.state();
    if (st.intervals.size() < 2) continue;
    const auto pts = testutil::star_points(oracle.data(), st);
    for (std::size_t k = 0; k < st.intervals.size(); ++k)
      for (std::size_t l = k + 1; l < st.intervals.size(); ++l) {
        const long long fast =
            identity_count(oracle, st, static_cast<int>(k), static_cast<int>(l));
        const long long slow = brute_between(pts, {st.intervals[k].lo, st.intervals[k].hi},
                                             {st.intervals[l].lo, st.intervals[l].hi});
        CHECK(fast == slow);
        CHECK(fast >= 0);
        ++checked;
      }
  }
  CHECK(checked > 300);
}

TEST_CASE("random graphs: updates, groups and queries against brute force") {
  std::mt19937_64 rng(89);
  for (int round = 0; round < 120; ++round) {
    const int n = 1 + static_cast<int>(rng() % 34);
    const int d_star = static_cast<int>(rng() % 6);
    const Graph g = testutil::random_graph(n, static_cast<int>(rng() % (3 * n)),
                                           static_cast<int>(rng() % (n + 1)) / 2, rng);
    Oracle oracle(g, d_star);
    for (int trial = 0; trial < 6; ++trial) {
      const int size = d_star == 0
                           ? 0
                           : static_cast<int>(rng() % static_cast<std::uint64_t>(d_star + 1));
      oracle.update(testutil::sample_distinct(n, size, rng));
      check_update_invariants(oracle, oracle.state());
      check_against_brute(oracle, oracle.state(), rng, 25);
    }
  }
}

TEST_CASE("decremental slice: failures only, no off vertices") {
  std::mt19937_64 rng(97);
  for (int round = 0; round < 60; ++round) {
    const int n = 2 + static_cast<int>(rng() % 30);
    const int d_star = 1 + static_cast<int>(rng() % 5);
    const Graph g = testutil::random_graph(n, static_cast<int>(rng() % (3 * n)), 0, rng);
    testutil::FuzzStats stats;
    testutil::fuzz_graph(g, d_star, 8, 25, rng, stats);
    CHECK(stats.mismatches == 0);
  }
}

TEST_CASE("repeated builds are deterministic") {
  std::mt19937_64 rng(101);
  const Graph g = testutil::random_graph(24, 40, 6, rng);
  Oracle a(g, 3), b(g, 3);
  CHECK(a.order().pi == b.order().pi);
  a.update({1, 5, 20});
  b.update({1, 5, 20});
  CHECK(a.state().interval_group == b.state().interval_group);
  CHECK(a.state().phase_sizes == b.state().phase_sizes);
  for (VertexId u = 0; u < 24; ++u)
    for (VertexId v = 0; v < 24; ++v) {
      bool qa = true, qb = true, ea = false, eb = false;
      try {
        qa = a.query(u, v);
      } catch (const std::invalid_argument&) {
        ea = true;
      }
      try {
        qb = b.query(u, v);
      } catch (const std::invalid_argument&) {
        eb = true;
      }
      CHECK(ea == eb);
      if (!ea) CHECK(qa == qb);
    }
}
