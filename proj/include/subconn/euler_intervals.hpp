#pragma once

#include <unordered_map>
#include <vector>

#include "subconn/hierarchy.hpp"

namespace subconn {

/**
 * Preorder index of one Steiner tree: root = smallest vertex id, children
 * visited in ascending id order, so every subtree is one contiguous position
 * range. Terminal positions are kept sorted for range restriction.
 */
struct EulerTourIndex {
  std::vector<VertexId> order;           // position -> vertex
  std::unordered_map<VertexId, int> pos; // vertex -> position
  std::vector<int> parent;               // per position, -1 at the root
  std::vector<int> subtree_end;          // per position, inclusive
  std::vector<std::vector<int>> children;  // per position, ascending
  std::vector<int> terminal_positions;   // sorted; the tree's terminals
};

EulerTourIndex preprocess_tree(const SteinerTree& tree);

/** Contiguous run [lo, hi] of tour positions; equal labels = same component. */
struct TourInterval {
  int lo = 0;
  int hi = 0;
  int label = 0;
};

struct IntervalSet {
  std::vector<TourInterval> intervals;  // sorted by lo, pairwise disjoint
  int label_count = 0;
};

// Surviving tour positions after removing the failed vertices, chopped into
// maximal runs and labelled by component of tree-minus-failures. Runs are
// found by cutting at each failed position and at each surviving child range
// of a failed vertex; a run's component is identified by the child of its
// deepest failed ancestor (or the root) that contains it. Cost
// O(|F| * max_degree * log), independent of tree size. At most
// (max_degree + 1) |F| + 1 intervals come back.
IntervalSet intervals_after_failures(const EulerTourIndex& idx,
                                     const std::vector<VertexId>& failed);

// Index of the interval containing v. Throws std::invalid_argument when v is
// not a tree vertex or is itself failed (its position falls in a hole).
int locate_interval(const IntervalSet& set, const EulerTourIndex& idx, VertexId v);

// Rewrites position ranges as ranges of terminal *ranks* (indices into
// terminal_positions), dropping intervals that contain no terminal. Labels
// carry over unchanged.
IntervalSet restrict_to_terminals(const EulerTourIndex& idx, const IntervalSet& set);

}  // namespace subconn
