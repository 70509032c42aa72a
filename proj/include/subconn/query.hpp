#pragma once

#include "subconn/update.hpp"

namespace subconn {

/**
 * Outcome of hunting a stand-in for a query vertex among the recomputed
 * vertices. Either a stand-in exists (found == true) and connectivity routes
 * through its interval's group, or the vertex sits in a component whose whole
 * boundary died in this batch; then `component` names that sealed component
 * and connectivity reduces to membership in it.
 */
struct Representative {
  bool found = false;
  VertexId vertex = -1;
  int component = -1;
};

Representative find_representative(const OracleData& data, const UpdateState& state, VertexId u);

/** Group id in the update state for a vertex of the recomputed set. */
int lift_to_group(const OracleData& data, const UpdateState& state, VertexId rep);

enum class Resolution {
  kBothLifted,              // both endpoints routed through interval groups
  kSameIsolatedComponent,   // one endpoint sealed, the other inside its component
  kCrossIsolated,           // one endpoint sealed, the other outside
};

struct QueryResult {
  bool connected = false;
  Resolution resolution = Resolution::kBothLifted;
};

QueryResult query_with_details(const OracleData& data, const UpdateState& state, VertexId u,
                               VertexId v);

/** Connectivity of u and v in the graph induced by the post-update on-set. */
bool query_connected(const OracleData& data, const UpdateState& state, VertexId u, VertexId v);

}  // namespace subconn
