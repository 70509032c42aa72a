#include "subconn/preprocess.hpp"

#include <algorithm>
#include <bit>
#include <numeric>
#include <stdexcept>

namespace subconn {

GlobalOrder build_global_order(const Graph& g, const Hierarchy& h,
                               const std::vector<EulerTourIndex>& tree_index) {
  const int n = g.vertex_count();
  if (tree_index.size() != h.trees.size())
    throw std::invalid_argument("build_global_order: one tour index per tree required");
  GlobalOrder ord;
  ord.pi.reserve(n);
  ord.position.assign(n, -1);
  ord.tree_block.assign(h.trees.size(), -1);

  std::vector<int> tree_ids(h.trees.size());
  std::iota(tree_ids.begin(), tree_ids.end(), 0);
  std::sort(tree_ids.begin(), tree_ids.end(), [&](int a, int b) {
    const auto& ta = h.trees[a];
    const auto& tb = h.trees[b];
    if (ta.level != tb.level) return ta.level < tb.level;
    return ta.terminals.front() < tb.terminals.front();
  });
  for (int tid : tree_ids) {
    const auto& idx = tree_index[tid];
    ord.tree_block[tid] = static_cast<int>(ord.pi.size());
    for (int position : idx.terminal_positions) ord.pi.push_back(idx.order[position]);
  }
  ord.off_start = static_cast<int>(ord.pi.size());
  for (VertexId v = 0; v < n; ++v)
    if (!g.is_on(v)) ord.pi.push_back(v);
  if (static_cast<int>(ord.pi.size()) != n)
    throw std::logic_error("build_global_order: order does not cover every vertex");
  for (int i = 0; i < n; ++i) {
    if (ord.position[ord.pi[i]] != -1)
      throw std::logic_error("build_global_order: vertex placed twice");
    ord.position[ord.pi[i]] = i;
  }
  return ord;
}

AdjacencyLists compute_adjacency_lists(const Graph& g, const Hierarchy& h,
                                       const GlobalOrder& order, int d_star,
                                       std::uint64_t bitmap_budget_bits) {
  if (d_star < 0) throw std::invalid_argument("compute_adjacency_lists: negative d_star");
  const int n = g.vertex_count();
  const int comp_count = static_cast<int>(h.components.size());
  AdjacencyLists lists;
  lists.a_pos.resize(comp_count);
  lists.a_on_pos.resize(comp_count);
  lists.b_pos.resize(comp_count);
  lists.components_ = static_cast<std::uint64_t>(comp_count);

  lists.off_rank_.assign(n, -1);
  int n_off = 0;
  for (VertexId v = 0; v < n; ++v)
    if (!g.is_on(v)) lists.off_rank_[v] = n_off++;

  std::uint64_t need = static_cast<std::uint64_t>(n_off) * comp_count;
  lists.bitmap_mode_ = need <= bitmap_budget_bits;
  if (lists.bitmap_mode_) lists.bits_.assign((need + 63) / 64, 0);

  std::vector<int> stamp(n, -1);
  for (int cid = 0; cid < comp_count; ++cid) {
    const auto& comp = h.components[cid];
    for (VertexId v : comp.vertices) stamp[v] = cid;
    std::vector<int>& a = lists.a_pos[cid];
    for (VertexId v : comp.vertices) {
      for (VertexId w : g.neighbors(v)) {
        if (stamp[w] == cid) continue;   // inside the component (or already seen)
        stamp[w] = cid;
        a.push_back(order.position[w]);
      }
    }
    std::sort(a.begin(), a.end());
    std::vector<int>& a_on = lists.a_on_pos[cid];
    std::vector<int> a_off;
    for (int position : a) {
      VertexId w = order.pi[position];
      if (g.is_on(w)) {
        a_on.push_back(position);
      } else {
        a_off.push_back(position);
        if (lists.bitmap_mode_) {
          std::uint64_t bit =
              static_cast<std::uint64_t>(lists.off_rank_[w]) * comp_count + cid;
          lists.bits_[bit >> 6] |= 1ull << (bit & 63);
        } else {
          lists.sparse_.insert(static_cast<std::uint64_t>(lists.off_rank_[w]) * comp_count +
                               cid);
        }
      }
    }
    std::size_t keep = std::min<std::size_t>(a_on.size(), static_cast<std::size_t>(d_star) + 1);
    std::vector<int>& b = lists.b_pos[cid];
    b.assign(a_on.begin(), a_on.begin() + keep);
    b.insert(b.end(), a_off.begin(), a_off.end());
    std::sort(b.begin(), b.end());
    lists.sum_a += static_cast<long long>(a.size());
    lists.sum_ab += static_cast<long long>(a.size()) * static_cast<long long>(b.size());
  }
  return lists;
}

RangeCountTable::Builder::Builder(int universe) : universe_(universe) {
  if (universe <= 0) throw std::invalid_argument("RangeCountTable: empty universe");
  bucket_.assign(universe + 1, 0);
}

void RangeCountTable::Builder::add_pair(int pos_a, int pos_b) {
  if (pos_a == pos_b) throw std::invalid_argument("RangeCountTable: degenerate pair");
  int x = std::min(pos_a, pos_b);
  int y = std::max(pos_a, pos_b);
  if (x < 0 || y >= universe_) throw std::invalid_argument("RangeCountTable: pair out of range");
  if (counting_) {
    ++bucket_[x + 1];
    ++total_;
  } else {
    ys_[bucket_[x]++] = y;
  }
}

void RangeCountTable::Builder::reserve_counted() {
  // bucket_[x+1] currently holds the count for x; turn into start offsets
  for (int x = 0; x < universe_; ++x) bucket_[x + 1] += bucket_[x];
  ys_.assign(static_cast<std::size_t>(total_), 0);
  counting_ = false;
}

RangeCountTable RangeCountTable::Builder::finish() {
  RangeCountTable t;
  t.universe_ = universe_;
  t.total_ = total_;
  // bucket_[x] has been advanced to the end of bucket x by the fill pass; the
  // start of bucket x is bucket_[x-1]
  t.x_prefix_.assign(universe_ + 1, 0);
  for (int x = 0; x < universe_; ++x) t.x_prefix_[x + 1] = bucket_[x];
  if (t.x_prefix_[universe_] != total_)
    throw std::logic_error("RangeCountTable: fill pass incomplete");

  t.bits_ = 1;
  while ((1 << t.bits_) < universe_) ++t.bits_;
  t.levels_.resize(t.bits_);
  const long long n = total_;
  std::vector<int> cur = std::move(ys_);
  std::vector<int> next(cur.size());
  for (int level = 0; level < t.bits_; ++level) {
    int bit = t.bits_ - 1 - level;
    Level& lv = t.levels_[level];
    lv.words.assign(static_cast<std::size_t>((n + 63) / 64), 0);
    for (long long i = 0; i < n; ++i)
      if ((cur[i] >> bit) & 1) lv.words[i >> 6] |= 1ull << (i & 63);
    lv.rank.assign(lv.words.size() + 1, 0);
    std::uint32_t acc = 0;
    for (std::size_t w = 0; w < lv.words.size(); ++w) {
      lv.rank[w] = acc;
      acc += static_cast<std::uint32_t>(std::popcount(lv.words[w]));
    }
    lv.rank[lv.words.size()] = acc;
    lv.zeros = n - acc;
    // stable partition: zero-bit values keep order on the left, ones on the right
    long long z = 0, o = lv.zeros;
    for (long long i = 0; i < n; ++i) {
      if ((cur[i] >> bit) & 1)
        next[o++] = cur[i];
      else
        next[z++] = cur[i];
    }
    std::swap(cur, next);
  }
  return t;
}

long long RangeCountTable::rank1(const Level& level, long long i) const {
  long long word = i >> 6;
  long long r = level.rank[word];
  int rem = static_cast<int>(i & 63);
  if (rem) r += std::popcount(level.words[word] & ((1ull << rem) - 1));
  return r;
}

long long RangeCountTable::count_less(long long l, long long r, int y) const {
  // number of sequence values < y within [l, r)
  if (y <= 0) return 0;
  if (y >= universe_) return r - l;
  long long res = 0;
  for (int level = 0; level < bits_ && l < r; ++level) {
    int bit = bits_ - 1 - level;
    const Level& lv = levels_[level];
    long long ones_l = rank1(lv, l);
    long long ones_r = rank1(lv, r);
    long long zeros_l = l - ones_l;
    long long zeros_r = r - ones_r;
    if ((y >> bit) & 1) {
      res += zeros_r - zeros_l;  // every zero-branch value is smaller here
      l = lv.zeros + ones_l;
      r = lv.zeros + ones_r;
    } else {
      l = zeros_l;
      r = zeros_r;
    }
  }
  return res;
}

long long RangeCountTable::count_rect(int x_lo, int x_hi, int y_lo, int y_hi) const {
  if (x_lo > x_hi || y_lo > y_hi) return 0;
  x_lo = std::max(x_lo, 0);
  x_hi = std::min(x_hi, universe_ - 1);
  long long l = x_prefix_[x_lo];
  long long r = x_prefix_[x_hi + 1];
  if (l >= r) return 0;
  return count_less(l, r, std::min(y_hi, universe_ - 1) + 1) - count_less(l, r, y_lo);
}

long long range_count(const RangeCountTable& table, PiRange a, PiRange b) {
  if (a.lo > a.hi || b.lo > b.hi) throw std::invalid_argument("range_count: empty range");
  if (a.lo > b.lo) std::swap(a, b);
  if (a.hi >= b.lo) throw std::invalid_argument("range_count: ranges overlap");
  return table.count_rect(a.lo, a.hi, b.lo, b.hi);
}

namespace {

// one enumeration of all augmented-edge points, reused for count and fill
template <typename Emit>
void enumerate_points(const Graph& g, const AdjacencyLists& lists, const GlobalOrder& order,
                      Emit&& emit) {
  for (VertexId u = 0; u < g.vertex_count(); ++u)
    for (VertexId v : g.neighbors(u))
      if (u < v) emit(order.position[u], order.position[v]);
  for (std::size_t cid = 0; cid < lists.a_pos.size(); ++cid) {
    const auto& a = lists.a_pos[cid];
    const auto& b = lists.b_pos[cid];
    // pairs within B
    for (std::size_t i = 0; i < b.size(); ++i)
      for (std::size_t j = i + 1; j < b.size(); ++j) emit(b[i], b[j]);
    // pairs B x (A minus B); walk A and skip members of B (both sorted)
    std::size_t bi = 0;
    for (int pa : a) {
      if (bi < b.size() && b[bi] == pa) {
        ++bi;
        continue;
      }
      for (int pb : b) emit(pa, pb);
    }
  }
}

}  // namespace

RangeCountTable build_table(const Graph& g, const AdjacencyLists& lists, const GlobalOrder& order,
                            std::uint64_t point_cap) {
  // exact point count first: refuse before allocating anything heavy
  std::uint64_t points = g.edge_count();
  for (std::size_t cid = 0; cid < lists.a_pos.size(); ++cid) {
    std::uint64_t na = lists.a_pos[cid].size();
    std::uint64_t nb = lists.b_pos[cid].size();
    points += nb * (nb - 1) / 2 + nb * (na - nb);
  }
  if (points > point_cap)
    throw std::runtime_error("build_table: " + std::to_string(points) +
                             " augmented edges exceed the memory budget of " +
                             std::to_string(point_cap));
  RangeCountTable::Builder builder(g.vertex_count());
  enumerate_points(g, lists, order, [&](int x, int y) { builder.add_pair(x, y); });
  builder.reserve_counted();
  enumerate_points(g, lists, order, [&](int x, int y) { builder.add_pair(x, y); });
  return builder.finish();
}

Graph sparsify_ni(const Graph& g, int d_star) {
  if (d_star < 0) throw std::invalid_argument("sparsify_ni: negative d_star");
  const int n = g.vertex_count();
  Graph out(n);
  for (VertexId v = 0; v < n; ++v) out.set_on(v, g.is_on(v));

  std::vector<std::pair<VertexId, VertexId>> on_on;
  for (auto [u, v] : g.edges()) {
    if (g.is_on(u) && g.is_on(v))
      on_on.emplace_back(u, v);
    else
      out.add_edge(u, v);  // edges at off vertices are always kept
  }

  // d*+1 rounds of spanning forests over the remaining on-on edges
  std::vector<int> parent(n);
  auto find = [&parent](int x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  };
  for (int round = 0; round <= d_star && !on_on.empty(); ++round) {
    std::iota(parent.begin(), parent.end(), 0);
    std::vector<std::pair<VertexId, VertexId>> rest;
    for (auto [u, v] : on_on) {
      int ru = find(u), rv = find(v);
      if (ru == rv) {
        rest.emplace_back(u, v);
      } else {
        parent[ru] = rv;
        out.add_edge(u, v);
      }
    }
    on_on = std::move(rest);
  }
  out.finalize();
  return out;
}

}  // namespace subconn
