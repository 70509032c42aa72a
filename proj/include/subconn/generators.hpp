#pragma once

#include <cstdint>
#include <string>

#include "subconn/graph.hpp"

namespace subconn {

/**
 * Deterministic graph families for the CLI and the test harness. The same
 * spec always yields the same graph, including the off-vertex sample.
 */
struct GenSpec {
  std::string kind = "gnm";  // gnm | path | star | grid | cliques-bridge
  int n = 100;
  long long m = 200;  // edge target for gnm; the other kinds fix their own
  int n_off = 0;
  std::uint64_t seed = 1;
};

Graph generate_graph(const GenSpec& spec);

}  // namespace subconn
