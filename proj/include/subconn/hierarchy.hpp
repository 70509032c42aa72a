#pragma once

#include <string>
#include <utility>
#include <vector>

#include "subconn/graph.hpp"
#include "subconn/rational.hpp"

namespace subconn {

/** Low-degree tree spanning a terminal set inside one component of its host. */
struct SteinerTree {
  int id = -1;
  int level = -1;
  std::vector<VertexId> vertices;                    // sorted
  std::vector<std::pair<VertexId, VertexId>> edges;  // canonical (min,max), sorted
  std::vector<VertexId> terminals;                   // sorted; U(tau) once levelled
  int max_degree = 0;
};

struct SfDecompResult {
  // X: separator vertices plus dropped terminals, |X| <= eps |U|, sorted
  std::vector<VertexId> removed;
  // one tree per component of g minus `removed` that still holds terminals;
  // each spans exactly the surviving terminals inside its component
  std::vector<SteinerTree> trees;
  int max_depth = 0;
  int game_rounds = 0;
};

// Separator-or-forest decomposition: shaves at most eps |U| vertices off the
// graph so that every surviving terminal is covered by a low-degree tree that
// stays inside its own component. eps in (0, 1/2]. The sparsity parameter phi
// is fixed once per invocation at (eps/2) / ceil(log2 max(|U|, 4)) and shared
// by the whole recursion.
SfDecompResult sf_decomp(const Graph& g, const std::vector<VertexId>& terminals,
                         const Rational& eps);

struct HierarchyComponent {
  int id = -1;
  int level = -1;
  int parent = -1;                  // component id one level up, -1 at the top
  std::vector<VertexId> vertices;   // sorted
  std::vector<VertexId> terminals;  // sorted, may be empty
  int tree = -1;                    // id of the level tree holding `terminals`
};

/**
 * Level structure over the on-subgraph. Level p (the top) holds the connected
 * components of the on-subgraph; moving down, each level removes the next
 * round of separator vertices, so components shrink and every on-vertex
 * becomes a terminal at exactly one level. Level-i trees cover the level-i
 * terminals with low degree. Vertex-indexed arrays are -1 for off vertices.
 */
struct Hierarchy {
  int levels = 0;  // p; 0 when the on-set is empty
  std::vector<HierarchyComponent> components;
  std::vector<SteinerTree> trees;
  std::vector<std::vector<int>> level_components;  // [1..levels] -> component ids
  std::vector<std::vector<int>> level_trees;       // [1..levels] -> tree ids

  std::vector<int> terminal_level;     // per vertex
  std::vector<int> owner_tree;         // tree with v among its terminals
  std::vector<std::vector<int>> chain; // component ids, levels terminal_level[v]..p
  int max_tree_degree = 0;

  const HierarchyComponent& component_of(VertexId v, int level) const;
};

// Builds the full hierarchy for g's on-subgraph by iterating sf_decomp with
// eps = 1/2 on the shrinking terminal sets. Runs on a disconnected on-subgraph
// as-is. Number of levels is at most ceil(log2 n) + 1.
Hierarchy build_hierarchy(const Graph& g);

// Structural audit; returns one message per violated property (empty = valid).
std::vector<std::string> validate_hierarchy(const Graph& g, const Hierarchy& h);

// Text dump: levels, then components with parents/terminals, then trees.
std::string format_hierarchy(const Hierarchy& h);

}  // namespace subconn
