#include "subconn/euler_intervals.hpp"

#include <algorithm>
#include <stdexcept>

namespace subconn {

EulerTourIndex preprocess_tree(const SteinerTree& tree) {
  if (tree.vertices.empty()) throw std::invalid_argument("preprocess_tree: empty tree");
  EulerTourIndex idx;
  const int n = static_cast<int>(tree.vertices.size());
  if (static_cast<int>(tree.edges.size()) != n - 1)
    throw std::invalid_argument("preprocess_tree: edge count is not |V|-1");
  std::unordered_map<VertexId, std::vector<VertexId>> adj;
  adj.reserve(tree.vertices.size() * 2);
  for (auto [u, v] : tree.edges) {
    adj[u].push_back(v);
    adj[v].push_back(u);
  }
  for (auto& [v, list] : adj) std::sort(list.begin(), list.end());

  VertexId root = tree.vertices.front();  // vertices are sorted
  idx.order.reserve(n);
  idx.parent.reserve(n);
  // preorder DFS, children in ascending id order
  std::vector<std::pair<VertexId, VertexId>> stack{{root, -1}};
  while (!stack.empty()) {
    auto [v, par] = stack.back();
    stack.pop_back();
    int position = static_cast<int>(idx.order.size());
    if (!idx.pos.emplace(v, position).second)
      throw std::invalid_argument("preprocess_tree: cycle in tree edges");
    idx.order.push_back(v);
    idx.parent.push_back(par < 0 ? -1 : idx.pos.at(par));
    auto it = adj.find(v);
    if (it == adj.end()) continue;
    for (auto child = it->second.rbegin(); child != it->second.rend(); ++child)
      if (*child != par) stack.emplace_back(*child, v);
  }
  if (static_cast<int>(idx.order.size()) != n)
    throw std::invalid_argument("preprocess_tree: tree is disconnected");

  idx.subtree_end.assign(n, 0);
  idx.children.assign(n, {});
  for (int i = n - 1; i >= 0; --i) {
    idx.subtree_end[i] = std::max(idx.subtree_end[i], i);
    if (idx.parent[i] >= 0) {
      idx.subtree_end[idx.parent[i]] =
          std::max(idx.subtree_end[idx.parent[i]], idx.subtree_end[i]);
    }
  }
  for (int i = 1; i < n; ++i) idx.children[idx.parent[i]].push_back(i);
  // children lists are naturally ascending: preorder assigns increasing
  // positions, and each child list was filled in position order
  for (auto& c : idx.children) std::sort(c.begin(), c.end());

  idx.terminal_positions.reserve(tree.terminals.size());
  for (VertexId t : tree.terminals) {
    auto it = idx.pos.find(t);
    if (it == idx.pos.end())
      throw std::invalid_argument("preprocess_tree: terminal outside the tree");
    idx.terminal_positions.push_back(it->second);
  }
  std::sort(idx.terminal_positions.begin(), idx.terminal_positions.end());
  return idx;
}

IntervalSet intervals_after_failures(const EulerTourIndex& idx,
                                     const std::vector<VertexId>& failed) {
  const int n = static_cast<int>(idx.order.size());
  IntervalSet out;
  std::vector<int> fpos;
  fpos.reserve(failed.size());
  for (VertexId v : failed) {
    auto it = idx.pos.find(v);
    if (it == idx.pos.end())
      throw std::invalid_argument("intervals_after_failures: failed vertex not in tree");
    fpos.push_back(it->second);
  }
  std::sort(fpos.begin(), fpos.end());
  fpos.erase(std::unique(fpos.begin(), fpos.end()), fpos.end());
  if (fpos.empty()) {
    out.intervals.push_back({0, n - 1, 0});
    out.label_count = 1;
    return out;
  }

  // boundaries: around every failed position and around every surviving child
  // range of a failed vertex
  std::vector<int> cuts{0, n};
  auto failed_at = [&](int position) {
    return std::binary_search(fpos.begin(), fpos.end(), position);
  };
  for (int f : fpos) {
    cuts.push_back(f);
    cuts.push_back(f + 1);
    cuts.push_back(idx.subtree_end[f] + 1);
    for (int c : idx.children[f]) {
      if (failed_at(c)) continue;
      cuts.push_back(c);
      cuts.push_back(idx.subtree_end[c] + 1);
    }
  }
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  // sweep the segments left to right, tracking the innermost open failed range
  std::unordered_map<int, int> label_of_anchor;
  std::vector<int> open;  // stack of failed positions whose range is open
  std::size_t next_fail = 0;
  for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
    int lo = cuts[k];
    int hi = cuts[k + 1] - 1;
    if (lo > hi || lo >= n) continue;
    while (next_fail < fpos.size() && fpos[next_fail] <= lo) open.push_back(fpos[next_fail++]);
    while (!open.empty() && idx.subtree_end[open.back()] < lo) open.pop_back();
    if (lo == hi && failed_at(lo)) continue;  // the failed position itself
    int anchor;
    if (open.empty()) {
      anchor = 0;  // component hanging off the (surviving) root
    } else {
      const auto& kids = idx.children[open.back()];
      auto it = std::upper_bound(kids.begin(), kids.end(), lo);
      if (it == kids.begin())
        throw std::logic_error("intervals_after_failures: segment with no child anchor");
      anchor = *std::prev(it);
      if (idx.subtree_end[anchor] < hi)
        throw std::logic_error("intervals_after_failures: segment escapes its anchor");
    }
    auto [lab, fresh] =
        label_of_anchor.try_emplace(anchor, static_cast<int>(label_of_anchor.size()));
    out.intervals.push_back({lo, hi, lab->second});
  }
  out.label_count = static_cast<int>(label_of_anchor.size());
  return out;
}

int locate_interval(const IntervalSet& set, const EulerTourIndex& idx, VertexId v) {
  auto it = idx.pos.find(v);
  if (it == idx.pos.end()) throw std::invalid_argument("locate_interval: vertex not in tree");
  int position = it->second;
  auto probe = std::upper_bound(
      set.intervals.begin(), set.intervals.end(), position,
      [](int value, const TourInterval& iv) { return value < iv.lo; });
  if (probe == set.intervals.begin())
    throw std::invalid_argument("locate_interval: vertex is failed");
  --probe;
  if (position > probe->hi) throw std::invalid_argument("locate_interval: vertex is failed");
  return static_cast<int>(probe - set.intervals.begin());
}

IntervalSet restrict_to_terminals(const EulerTourIndex& idx, const IntervalSet& set) {
  IntervalSet out;
  out.label_count = set.label_count;
  const auto& tp = idx.terminal_positions;
  for (const auto& iv : set.intervals) {
    auto lo = std::lower_bound(tp.begin(), tp.end(), iv.lo);
    auto hi = std::upper_bound(tp.begin(), tp.end(), iv.hi);
    if (lo == hi) continue;
    out.intervals.push_back({static_cast<int>(lo - tp.begin()),
                             static_cast<int>(hi - tp.begin()) - 1, iv.label});
  }
  return out;
}

}  // namespace subconn
