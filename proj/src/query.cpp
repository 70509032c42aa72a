#include "subconn/query.hpp"

#include <algorithm>
#include <stdexcept>

namespace subconn {

namespace {

void ensure_active(const Graph& g, const UpdateState& state, VertexId v) {
  if (v < 0 || v >= g.vertex_count())
    throw std::invalid_argument("query: vertex out of range");
  const bool active = g.is_on(v) ? state.d_on_set.count(v) == 0 : state.d_off_set.count(v) > 0;
  if (!active) throw std::invalid_argument("query: vertex is not active after the update");
}

/** Whether x (already validated as active) lies in the given component. */
bool inside_component(const Graph& g, const Hierarchy& h, const UpdateState& state, VertexId x,
                      int comp) {
  if (!g.is_on(x) || state.d_on_set.count(x)) return false;
  const auto& c = h.components[comp];
  if (h.terminal_level[x] > c.level) return false;
  return h.component_of(x, c.level).id == comp;
}

}  // namespace

Representative find_representative(const OracleData& data, const UpdateState& state, VertexId u) {
  const Graph& g = *data.graph;
  const Hierarchy& h = *data.hierarchy;
  ensure_active(g, state, u);
  if (!g.is_on(u)) return {true, u, -1};  // switched on, recomputed directly
  if (state.affected_tree_set.count(h.owner_tree[u])) return {true, u, -1};

  // Highest unaffected component on u's chain. The affected ones form a
  // prefix from the top (they are nested supersets), and u's own terminal
  // component is unaffected here, so the walk always lands.
  const auto& chain = h.chain[u];
  int comp = -1;
  for (auto it = chain.rbegin(); it != chain.rend(); ++it)
    if (!state.affected_component_set.count(*it)) {
      comp = *it;
      break;
    }
  if (comp < 0) throw std::logic_error("find_representative: chain fully affected");

  // Boundary scan. Newly opened vertices first via the indicator bitmap, then
  // the first |d_on|+1 stored on-neighbours: at most |d_on| of them can be
  // switched off, so a survivor appears unless the whole boundary died.
  for (VertexId w : state.d_off)
    if (data.lists->off_adjacent(data.lists->off_rank_of(w), comp)) return {true, w, -1};
  const auto& a_on = data.lists->a_on_pos[comp];
  const std::size_t scan = std::min(state.d_on.size() + 1, a_on.size());
  for (std::size_t i = 0; i < scan; ++i) {
    const VertexId w = data.order->pi[a_on[i]];
    if (!state.d_on_set.count(w)) return {true, w, -1};
  }
  return {false, -1, comp};
}

int lift_to_group(const OracleData& data, const UpdateState& state, VertexId rep) {
  const int pos = data.order->position[rep];
  const int iv = find_interval(state, pos);
  if (iv < 0) throw std::logic_error("lift_to_group: vertex outside the interval partition");
  return state.interval_group[iv];
}

QueryResult query_with_details(const OracleData& data, const UpdateState& state, VertexId u,
                               VertexId v) {
  const Graph& g = *data.graph;
  const Hierarchy& h = *data.hierarchy;
  ensure_active(g, state, u);
  ensure_active(g, state, v);

  const Representative ru = find_representative(data, state, u);
  if (!ru.found) {
    // u's component in the updated graph is exactly its sealed component, so
    // connectivity is plain membership. The other endpoint may well sit in
    // the recomputed set (a terminal of an affected tree living inside the
    // sealed component); membership still answers correctly.
    const bool inside = inside_component(g, h, state, v, ru.component);
    return {inside,
            inside ? Resolution::kSameIsolatedComponent : Resolution::kCrossIsolated};
  }
  const Representative rv = find_representative(data, state, v);
  if (!rv.found) {
    const bool inside = inside_component(g, h, state, u, rv.component);
    return {inside,
            inside ? Resolution::kSameIsolatedComponent : Resolution::kCrossIsolated};
  }
  const int gu = lift_to_group(data, state, ru.vertex);
  const int gv = lift_to_group(data, state, rv.vertex);
  return {gu == gv, Resolution::kBothLifted};
}

bool query_connected(const OracleData& data, const UpdateState& state, VertexId u, VertexId v) {
  return query_with_details(data, state, u, v).connected;
}

}  // namespace subconn
