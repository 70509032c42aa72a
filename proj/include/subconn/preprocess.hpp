#pragma once

#include <cstdint>
#include <unordered_set>
#include <vector>

#include "subconn/euler_intervals.hpp"
#include "subconn/graph.hpp"
#include "subconn/hierarchy.hpp"

namespace subconn {

/**
 * Fixed vertex order backing all range counting: for each tree (sorted by
 * level, then smallest terminal), its terminals in tour order; then the off
 * vertices in ascending id. Every vertex of the graph gets exactly one slot.
 */
struct GlobalOrder {
  std::vector<VertexId> pi;       // position -> vertex
  std::vector<int> position;      // vertex -> position
  std::vector<int> tree_block;    // tree id -> first position of its block
  int off_start = 0;              // first position of the off block
};

GlobalOrder build_global_order(const Graph& g, const Hierarchy& h,
                               const std::vector<EulerTourIndex>& tree_index);

/**
 * Per-component boundary lists, as sorted order positions. a_pos holds the
 * whole outside neighborhood A; a_on_pos its on part; b_pos the covering
 * subset B = (off part of A) + the first min(d*+1, |A_on|) on-neighbors in
 * order position. The off-indicator answers "is this off vertex adjacent to
 * component gamma" in O(1).
 */
class AdjacencyLists {
 public:
  std::vector<std::vector<int>> a_pos;
  std::vector<std::vector<int>> a_on_pos;
  std::vector<std::vector<int>> b_pos;
  long long sum_a = 0;   // sum over components of |A|
  long long sum_ab = 0;  // sum over components of |A| * |B|

  bool off_adjacent(int off_rank, int component) const {
    if (bitmap_mode_) {
      std::uint64_t bit = static_cast<std::uint64_t>(off_rank) * components_ + component;
      return (bits_[bit >> 6] >> (bit & 63)) & 1;
    }
    return sparse_.count(static_cast<std::uint64_t>(off_rank) * components_ + component) > 0;
  }

  int off_rank_of(VertexId v) const { return off_rank_[v]; }

  // populated by compute_adjacency_lists
  bool bitmap_mode_ = true;
  std::uint64_t components_ = 0;
  std::vector<std::uint64_t> bits_;
  std::unordered_set<std::uint64_t> sparse_;
  std::vector<int> off_rank_;  // vertex -> rank among off vertices, -1 if on
};

// d_star bounds the covering-subset size (d*+1 on-neighbors kept per
// component). bitmap_budget_bits switches the off-indicator to its hash-set
// fallback when n_off * |components| would exceed the budget.
AdjacencyLists compute_adjacency_lists(const Graph& g, const Hierarchy& h,
                                       const GlobalOrder& order, int d_star,
                                       std::uint64_t bitmap_budget_bits = 1ull << 33);

/**
 * Static 2-d range counting over the edge multiset of the augmented graph
 * (real edges plus, per component, the clique-difference pairs induced by its
 * boundary lists). Points are (min position, max position) per edge; a wavelet
 * tree over the y-sequence answers rectangle counts in O(log n).
 */
class RangeCountTable {
 public:
  RangeCountTable() = default;

  // Multiset rectangle count with inclusive bounds; x-range must precede.
  long long count_rect(int x_lo, int x_hi, int y_lo, int y_hi) const;

  long long point_count() const { return total_; }
  int universe() const { return universe_; }

  struct Builder {
    explicit Builder(int universe);
    void add_pair(int pos_a, int pos_b);  // canonicalized internally
    void count_only(bool flag) { counting_ = flag; }  // first pass: just count
    long long pending() const { return total_; }
    void reserve_counted();   // after the counting pass: allocate buckets
    RangeCountTable finish();

    int universe_;
    bool counting_ = true;
    long long total_ = 0;
    std::vector<long long> bucket_;  // per x: count, then running offsets
    std::vector<int> ys_;
  };

 private:
  friend struct Builder;
  int universe_ = 0;
  long long total_ = 0;
  int bits_ = 0;
  std::vector<long long> x_prefix_;  // position -> first index in the y-sequence
  // one bit level: packed bits plus a per-word popcount prefix
  struct Level {
    std::vector<std::uint64_t> words;
    std::vector<std::uint32_t> rank;
    long long zeros = 0;
  };
  std::vector<Level> levels_;

  long long rank1(const Level& level, long long i) const;
  long long count_less(long long l, long long r, int y) const;
};

struct PiRange {
  int lo = 0;
  int hi = 0;  // inclusive
};

// Edge count between two disjoint position ranges. Throws on overlap.
long long range_count(const RangeCountTable& table, PiRange a, PiRange b);

// Materializes the augmented edge multiset into a RangeCountTable. Refuses
// with a runtime_error when the number of points would exceed point_cap.
RangeCountTable build_table(const Graph& g, const AdjacencyLists& lists, const GlobalOrder& order,
                            std::uint64_t point_cap = 150000000ull);

// Connectivity-certificate sparsifier: keeps d_star+1 rounds of spanning
// forests over the on-on edges plus every edge touching an off vertex.
// Vertex set and on/off states are unchanged; the result answers the same
// connectivity queries for any batch of at most d_star switches.
Graph sparsify_ni(const Graph& g, int d_star);

}  // namespace subconn
