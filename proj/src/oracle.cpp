#include "subconn/oracle.hpp"

#include <chrono>
#include <stdexcept>

namespace subconn {

namespace {

double ms_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
      .count();
}

}  // namespace

Oracle::Oracle(Graph g, int d_star, OracleOptions options)
    : g_(std::move(g)), d_star_(d_star), options_(options) {
  if (d_star_ < 0) throw std::invalid_argument("Oracle: negative switch budget");
  const auto t_total = std::chrono::steady_clock::now();
  if (options_.sparsify) g_ = sparsify_ni(g_, d_star_);
  stats_.edges_used = static_cast<long long>(g_.edge_count());

  auto t = std::chrono::steady_clock::now();
  h_ = build_hierarchy(g_);
  stats_.hierarchy_ms = ms_since(t);

  t = std::chrono::steady_clock::now();
  tree_index_.reserve(h_.trees.size());
  for (const auto& tree : h_.trees) tree_index_.push_back(preprocess_tree(tree));
  trees_containing_.assign(g_.vertex_count(), {});
  for (const auto& tree : h_.trees)
    for (VertexId v : tree.vertices) trees_containing_[v].push_back(tree.id);
  stats_.tours_ms = ms_since(t);

  t = std::chrono::steady_clock::now();
  order_ = build_global_order(g_, h_, tree_index_);
  lists_ = compute_adjacency_lists(g_, h_, order_, d_star_, options_.bitmap_budget_bits);
  stats_.lists_ms = ms_since(t);

  t = std::chrono::steady_clock::now();
  if (g_.vertex_count() > 0) table_ = build_table(g_, lists_, order_, options_.table_point_cap);
  stats_.table_ms = ms_since(t);

  stats_.levels = h_.levels;
  stats_.component_count = static_cast<int>(h_.components.size());
  stats_.tree_count = static_cast<int>(h_.trees.size());
  stats_.max_tree_degree = h_.max_tree_degree;
  stats_.table_points = table_.point_count();
  stats_.sum_a = lists_.sum_a;
  stats_.sum_ab = lists_.sum_ab;
  stats_.total_ms = ms_since(t_total);
}

OracleData Oracle::data() const {
  return {&g_,    &h_,     &tree_index_, &trees_containing_,
          &order_, &lists_, &table_,      d_star_};
}

void Oracle::update(const std::vector<VertexId>& switches) {
  state_ = apply_update(data(), switches);
}

const UpdateState& Oracle::state() const {
  if (!state_) throw std::logic_error("Oracle: no update applied");
  return *state_;
}

bool Oracle::query(VertexId u, VertexId v) const {
  return query_details(u, v).connected;
}

QueryResult Oracle::query_details(VertexId u, VertexId v) const {
  if (!state_) throw std::logic_error("Oracle: query before any update");
  return query_with_details(data(), *state_, u, v);
}

}  // namespace subconn
