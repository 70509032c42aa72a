#include "subconn/hierarchy.hpp"

#include <algorithm>
#include <queue>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

#include "subconn/cut_matching.hpp"

namespace subconn {

namespace {

int ceil_log2(long long v) {
  int k = 0;
  while ((1LL << k) < v) ++k;
  return k;
}

// BFS path between two vertices in g, or empty if disconnected.
std::vector<VertexId> bfs_path(const Graph& g, VertexId from, VertexId to) {
  std::vector<int> prev(g.vertex_count(), -2);
  prev[from] = -1;
  std::queue<VertexId> q;
  q.push(from);
  while (!q.empty() && prev[to] == -2) {
    VertexId x = q.front();
    q.pop();
    for (VertexId y : g.neighbors(x)) {
      if (prev[y] == -2) {
        prev[y] = x;
        q.push(y);
      }
    }
  }
  if (prev[to] == -2) return {};
  std::vector<VertexId> path;
  for (VertexId v = to; v != -1; v = prev[v]) path.push_back(v);
  std::reverse(path.begin(), path.end());
  return path;
}

SteinerTree tree_from_path(const std::vector<VertexId>& path) {
  SteinerTree t;
  t.vertices = path;
  std::sort(t.vertices.begin(), t.vertices.end());
  for (std::size_t i = 0; i + 1 < path.size(); ++i)
    t.edges.emplace_back(std::min(path[i], path[i + 1]), std::max(path[i], path[i + 1]));
  std::sort(t.edges.begin(), t.edges.end());
  t.max_degree = path.size() > 1 ? (path.size() > 2 ? 2 : 1) : 0;
  return t;
}

int tree_degree(const SteinerTree& t) {
  std::unordered_map<VertexId, int> deg;
  int best = 0;
  for (auto [u, v] : t.edges) {
    best = std::max(best, ++deg[u]);
    best = std::max(best, ++deg[v]);
  }
  return best;
}

struct SfContext {
  Rational eps_prime;
  Rational phi;
  SfDecompResult out;
};

// Recursion over induced subgraphs. `back` maps sub's ids to the caller
// graph's ids; `terms` are sub-local. Appends removed vertices and trees in
// caller ids.
void sf_recurse(const Graph& sub, const std::vector<VertexId>& back, std::vector<VertexId> terms,
                int depth, SfContext& ctx) {
  ctx.out.max_depth = std::max(ctx.out.max_depth, depth);
  if (terms.empty()) return;
  std::sort(terms.begin(), terms.end());
  if (terms.size() <= 2) {
    // direct base case: a path between the two terminals, or singletons
    if (terms.size() == 2) {
      auto path = bfs_path(sub, terms[0], terms[1]);
      if (!path.empty()) {
        SteinerTree t = tree_from_path(path);
        for (VertexId& v : t.vertices) v = back[v];
        std::sort(t.vertices.begin(), t.vertices.end());
        for (auto& [u, v] : t.edges) {
          u = back[u];
          v = back[v];
          if (u > v) std::swap(u, v);
        }
        std::sort(t.edges.begin(), t.edges.end());
        t.terminals = {back[terms[0]], back[terms[1]]};
        std::sort(t.terminals.begin(), t.terminals.end());
        ctx.out.trees.push_back(std::move(t));
        return;
      }
    }
    for (VertexId u : terms) {
      SteinerTree t;
      t.vertices = {back[u]};
      t.terminals = {back[u]};
      ctx.out.trees.push_back(std::move(t));
    }
    return;
  }

  CutOrTreeResult r = cut_or_steiner_tree(sub, terms, ctx.eps_prime, ctx.phi);
  if (r.is_cut) {
    for (VertexId v : r.cut.separator.sorted()) ctx.out.removed.push_back(back[v]);
    auto recurse_side = [&](const VertexSet& side) {
      std::vector<VertexId> side_terms;
      for (VertexId u : terms)
        if (side.contains(u)) side_terms.push_back(u);
      std::vector<VertexId> sub_back;
      Graph deeper = sub.induced(side.sorted(), &sub_back);
      // translate terminals into the deeper graph's ids
      std::vector<VertexId> local;
      for (VertexId u : side_terms) {
        auto it = std::lower_bound(sub_back.begin(), sub_back.end(), u);
        local.push_back(static_cast<VertexId>(it - sub_back.begin()));
      }
      std::vector<VertexId> chained(sub_back.size());
      for (std::size_t i = 0; i < sub_back.size(); ++i) chained[i] = back[sub_back[i]];
      sf_recurse(deeper, chained, std::move(local), depth + 1, ctx);
    };
    recurse_side(r.cut.left);
    recurse_side(r.cut.right);
    return;
  }

  for (VertexId v : r.dropped.sorted()) ctx.out.removed.push_back(back[v]);
  SteinerTree t;
  t.vertices.reserve(r.tree_vertices.size());
  for (VertexId v : r.tree_vertices) t.vertices.push_back(back[v]);
  std::sort(t.vertices.begin(), t.vertices.end());
  for (auto [u, v] : r.tree_edges) {
    VertexId a = back[u], b = back[v];
    t.edges.emplace_back(std::min(a, b), std::max(a, b));
  }
  std::sort(t.edges.begin(), t.edges.end());
  for (VertexId u : terms)
    if (!r.dropped.contains(u)) t.terminals.push_back(back[u]);
  std::sort(t.terminals.begin(), t.terminals.end());
  t.max_degree = tree_degree(t);
  ctx.out.game_rounds += r.rounds;
  ctx.out.trees.push_back(std::move(t));
}

}  // namespace

SfDecompResult sf_decomp(const Graph& g, const std::vector<VertexId>& terminals,
                         const Rational& eps) {
  if (eps.num <= 0 || eps > Rational(1, 2))
    throw std::invalid_argument("sf_decomp: eps outside (0, 1/2]");
  std::vector<VertexId> terms = terminals;
  std::sort(terms.begin(), terms.end());
  terms.erase(std::unique(terms.begin(), terms.end()), terms.end());
  for (VertexId v : terms)
    if (v < 0 || v >= g.vertex_count())
      throw std::invalid_argument("sf_decomp: terminal out of range");

  SfContext ctx;
  ctx.eps_prime = eps / Rational(2, 1);
  long long u0 = std::max<long long>(static_cast<long long>(terms.size()), 4);
  ctx.phi = ctx.eps_prime / Rational(ceil_log2(u0), 1);

  std::vector<VertexId> identity(g.vertex_count());
  for (int i = 0; i < g.vertex_count(); ++i) identity[i] = i;
  sf_recurse(g, identity, terms, 1, ctx);

  std::sort(ctx.out.removed.begin(), ctx.out.removed.end());
  ctx.out.removed.erase(std::unique(ctx.out.removed.begin(), ctx.out.removed.end()),
                        ctx.out.removed.end());
  if (!leq_scaled(static_cast<long long>(ctx.out.removed.size()), eps,
                  static_cast<long long>(terms.size())))
    throw std::logic_error("sf_decomp: removed more than eps |U| vertices");
  return ctx.out;
}

const HierarchyComponent& Hierarchy::component_of(VertexId v, int level) const {
  if (v < 0 || v >= static_cast<int>(terminal_level.size()) || terminal_level[v] < 1)
    throw std::invalid_argument("component_of: not an on-vertex");
  if (level < terminal_level[v] || level > levels)
    throw std::invalid_argument("component_of: vertex absent at this level");
  return components[chain[v][level - terminal_level[v]]];
}

Hierarchy build_hierarchy(const Graph& g) {
  Hierarchy h;
  const int n = g.vertex_count();
  h.terminal_level.assign(n, -1);
  h.owner_tree.assign(n, -1);
  h.chain.assign(n, {});
  std::vector<VertexId> on = g.on_vertices();
  if (on.empty()) return h;

  std::vector<VertexId> back;
  Graph g_on = g.induced(on, &back);
  const int n_on = g_on.vertex_count();

  // iterate the decomposition on shrinking terminal sets (local ids)
  std::vector<std::vector<VertexId>> level_terms;          // X_i, 1-based
  std::vector<std::vector<SteinerTree>> level_tree_lists;  // trees of level i
  std::vector<VertexId> cur(n_on);
  for (int i = 0; i < n_on; ++i) cur[i] = i;
  level_terms.push_back({});       // index 0 unused
  level_tree_lists.push_back({});  // index 0 unused
  while (!cur.empty()) {
    SfDecompResult res = sf_decomp(g_on, cur, Rational(1, 2));
    if (2 * res.removed.size() > cur.size())
      throw std::logic_error("build_hierarchy: level did not halve");
    level_terms.push_back(cur);
    level_tree_lists.push_back(std::move(res.trees));
    cur = std::move(res.removed);
  }
  const int p = static_cast<int>(level_terms.size()) - 1;
  h.levels = p;

  // v is a terminal at the largest level whose terminal set contains it:
  // levels above that keep v only as an interior (already-covered) vertex
  std::vector<int> tlevel(n_on, 0);
  for (int i = 1; i <= p; ++i)
    for (VertexId v : level_terms[i]) tlevel[v] = std::max(tlevel[v], i);
  for (int v = 0; v < n_on; ++v)
    if (tlevel[v] == 0) throw std::logic_error("build_hierarchy: vertex in no level");

  // per-level components of g_on minus the vertices already dropped below
  std::vector<std::vector<int>> comp_at(p + 1, std::vector<int>(n_on, -1));
  h.level_components.resize(p + 1);
  for (int i = p; i >= 1; --i) {
    std::vector<VertexId> present;
    for (int v = 0; v < n_on; ++v)
      if (tlevel[v] <= i) present.push_back(v);
    auto comps = brute_components(g_on, present);
    for (auto& comp : comps) {
      HierarchyComponent c;
      c.id = static_cast<int>(h.components.size());
      c.level = i;
      for (VertexId v : comp) {
        comp_at[i][v] = c.id;
        if (tlevel[v] == i) c.terminals.push_back(back[v]);
        c.vertices.push_back(back[v]);
      }
      std::sort(c.vertices.begin(), c.vertices.end());
      std::sort(c.terminals.begin(), c.terminals.end());
      c.parent = i == p ? -1 : comp_at[i + 1][comp[0]];
      h.level_components[i].push_back(c.id);
      h.components.push_back(std::move(c));
    }
  }

  // level the trees: terminal sets are recomputed as U_i ∩ V(tau) because a
  // tree vertex can reappear as a separator at a later round; trees left with
  // no terminals are dropped
  h.level_trees.resize(p + 1);
  std::vector<int> owner_local(n_on, -1);
  for (int i = 1; i <= p; ++i) {
    for (SteinerTree& t : level_tree_lists[i]) {
      SteinerTree lifted;
      lifted.level = i;
      lifted.vertices.reserve(t.vertices.size());
      for (VertexId v : t.vertices) lifted.vertices.push_back(back[v]);
      std::sort(lifted.vertices.begin(), lifted.vertices.end());
      for (auto [u, v] : t.edges) {
        VertexId a = back[u], b = back[v];
        lifted.edges.emplace_back(std::min(a, b), std::max(a, b));
      }
      std::sort(lifted.edges.begin(), lifted.edges.end());
      std::vector<VertexId> terms_local;
      for (VertexId v : t.vertices)
        if (tlevel[v] == i) terms_local.push_back(v);
      if (terms_local.empty()) continue;
      lifted.id = static_cast<int>(h.trees.size());
      for (VertexId v : terms_local) {
        owner_local[v] = lifted.id;
        lifted.terminals.push_back(back[v]);
      }
      std::sort(lifted.terminals.begin(), lifted.terminals.end());
      lifted.max_degree = tree_degree(lifted);
      h.max_tree_degree = std::max(h.max_tree_degree, lifted.max_degree);
      h.level_trees[i].push_back(lifted.id);
      h.trees.push_back(std::move(lifted));
    }
  }

  for (int v = 0; v < n_on; ++v) {
    VertexId orig = back[v];
    h.terminal_level[orig] = tlevel[v];
    h.owner_tree[orig] = owner_local[v];
    if (owner_local[v] < 0)
      throw std::logic_error("build_hierarchy: terminal without an owning tree");
    auto& chain = h.chain[orig];
    chain.reserve(p - tlevel[v] + 1);
    for (int i = tlevel[v]; i <= p; ++i) chain.push_back(comp_at[i][v]);
  }

  // attach each component to the tree owning its terminals
  for (auto& c : h.components) {
    if (c.terminals.empty()) continue;
    int tid = h.owner_tree[c.terminals.front()];
    for (VertexId u : c.terminals) {
      if (h.owner_tree[u] != tid)
        throw std::logic_error("build_hierarchy: terminals of one component in two trees");
    }
    c.tree = tid;
  }
  return h;
}

namespace {

bool sorted_contains(const std::vector<VertexId>& v, VertexId x) {
  return std::binary_search(v.begin(), v.end(), x);
}

}  // namespace

std::vector<std::string> validate_hierarchy(const Graph& g, const Hierarchy& h) {
  std::vector<std::string> bad;
  auto complain = [&](std::string msg) { bad.push_back(std::move(msg)); };
  const int n = g.vertex_count();
  std::vector<VertexId> on = g.on_vertices();
  const int p = h.levels;
  if (on.empty()) {
    if (p != 0 || !h.components.empty() || !h.trees.empty())
      complain("empty on-set must yield an empty hierarchy");
    return bad;
  }
  if (p < 1) {
    complain("non-empty on-set but no levels");
    return bad;
  }

  for (VertexId v : on)
    if (h.terminal_level[v] < 1 || h.terminal_level[v] > p)
      complain("on-vertex " + std::to_string(v) + " has no terminal level");
  for (VertexId v = 0; v < n; ++v)
    if (!g.is_on(v) && h.terminal_level[v] != -1)
      complain("off-vertex " + std::to_string(v) + " has a terminal level");

  // per-level component structure
  for (int i = 1; i <= p; ++i) {
    std::vector<int> owner(n, -1);
    for (int cid : h.level_components[i]) {
      const auto& c = h.components[cid];
      if (c.level != i) complain("component " + std::to_string(cid) + " filed at wrong level");
      for (VertexId v : c.vertices) {
        if (!g.is_on(v)) complain("component holds off-vertex " + std::to_string(v));
        if (owner[v] != -1)
          complain("level " + std::to_string(i) + " components overlap at " + std::to_string(v));
        owner[v] = cid;
      }
      for (VertexId v : c.terminals) {
        if (!sorted_contains(c.vertices, v))
          complain("terminal outside its component: " + std::to_string(v));
        if (h.terminal_level[v] != i)
          complain("terminal " + std::to_string(v) + " filed at level " + std::to_string(i) +
                   " but levelled " + std::to_string(h.terminal_level[v]));
      }
    }
    // coverage: exactly the vertices with terminal level <= i
    for (VertexId v : on) {
      bool should = h.terminal_level[v] <= i;
      if (should != (owner[v] != -1))
        complain("level " + std::to_string(i) + " coverage wrong at vertex " + std::to_string(v));
    }
    // no crossing edges between distinct components of one level
    for (VertexId v : on) {
      if (owner[v] < 0) continue;
      for (VertexId w : g.neighbors(v))
        if (w > v && owner[w] >= 0 && owner[w] != owner[v])
          complain("edge " + std::to_string(v) + "-" + std::to_string(w) +
                   " crosses level " + std::to_string(i) + " components");
    }
  }

  // parents nest, terminals = component minus its children
  std::vector<std::vector<int>> children(h.components.size());
  for (const auto& c : h.components) {
    if (c.level == p) {
      if (c.parent != -1) complain("top component with a parent");
      continue;
    }
    if (c.parent < 0 || c.parent >= static_cast<int>(h.components.size())) {
      complain("component " + std::to_string(c.id) + " lacks a parent");
      continue;
    }
    const auto& par = h.components[c.parent];
    if (par.level != c.level + 1) complain("parent is not one level up");
    for (VertexId v : c.vertices)
      if (!sorted_contains(par.vertices, v))
        complain("child component leaks vertex " + std::to_string(v) + " outside its parent");
    children[c.parent].push_back(c.id);
  }
  for (const auto& c : h.components) {
    std::vector<VertexId> covered;
    for (int ch : children[c.id]) {
      const auto& cc = h.components[ch];
      covered.insert(covered.end(), cc.vertices.begin(), cc.vertices.end());
    }
    std::sort(covered.begin(), covered.end());
    std::vector<VertexId> rest;
    std::set_difference(c.vertices.begin(), c.vertices.end(), covered.begin(), covered.end(),
                        std::back_inserter(rest));
    if (rest != c.terminals)
      complain("component " + std::to_string(c.id) +
               ": terminals differ from vertices minus children");
  }

  // trees: disjoint per level, valid, terminal sets consistent
  for (int i = 1; i <= p; ++i) {
    std::vector<char> used(n, 0);
    for (int tid : h.level_trees[i]) {
      const auto& t = h.trees[tid];
      if (t.level != i) complain("tree filed at wrong level");
      for (VertexId v : t.vertices) {
        if (!g.is_on(v)) complain("tree holds off-vertex " + std::to_string(v));
        if (used[v]) complain("level " + std::to_string(i) + " trees overlap at " +
                              std::to_string(v));
        used[v] = 1;
      }
      if (t.edges.size() + 1 != t.vertices.size() && !(t.vertices.size() == 1 && t.edges.empty()))
        complain("tree " + std::to_string(tid) + " edge count is not |V|-1");
      std::unordered_map<VertexId, std::vector<VertexId>> adj;
      for (auto [u, v] : t.edges) {
        if (!g.has_edge(u, v))
          complain("tree edge " + std::to_string(u) + "-" + std::to_string(v) +
                   " is not a graph edge");
        if (!sorted_contains(t.vertices, u) || !sorted_contains(t.vertices, v))
          complain("tree edge endpoint outside the tree");
        adj[u].push_back(v);
        adj[v].push_back(u);
      }
      if (!t.vertices.empty()) {
        std::vector<VertexId> stack{t.vertices.front()};
        std::unordered_set<VertexId> seen{t.vertices.front()};
        while (!stack.empty()) {
          VertexId x = stack.back();
          stack.pop_back();
          for (VertexId y : adj[x])
            if (seen.insert(y).second) stack.push_back(y);
        }
        if (seen.size() != t.vertices.size())
          complain("tree " + std::to_string(tid) + " is disconnected");
      }
      // U(tau) must be exactly the level-i terminals inside V(tau)
      std::vector<VertexId> expect;
      for (VertexId v : t.vertices)
        if (h.terminal_level[v] == i) expect.push_back(v);
      if (expect != t.terminals)
        complain("tree " + std::to_string(tid) + " terminal set mismatch");
      if (t.terminals.empty()) complain("tree " + std::to_string(tid) + " kept with no terminals");
    }
  }

  // component-to-tree attachment
  for (const auto& c : h.components) {
    if (c.terminals.empty()) {
      if (c.tree != -1) complain("terminal-free component with a tree");
      continue;
    }
    if (c.tree < 0 || c.tree >= static_cast<int>(h.trees.size())) {
      complain("component " + std::to_string(c.id) + " lacks its tree");
      continue;
    }
    const auto& t = h.trees[c.tree];
    if (t.level != c.level) complain("component tree at wrong level");
    for (VertexId v : c.terminals)
      if (!sorted_contains(t.terminals, v))
        complain("component terminal " + std::to_string(v) + " missing from its tree");
  }

  // the terminal sets of all trees partition the on-set, as do U_i and U(gamma)
  {
    std::vector<char> seen(n, 0);
    for (const auto& t : h.trees)
      for (VertexId v : t.terminals) {
        if (seen[v]) complain("vertex " + std::to_string(v) + " is a terminal of two trees");
        seen[v] = 1;
      }
    for (VertexId v : on)
      if (!seen[v]) complain("vertex " + std::to_string(v) + " is a terminal of no tree");
  }
  {
    std::vector<char> seen(n, 0);
    for (const auto& c : h.components)
      for (VertexId v : c.terminals) {
        if (seen[v]) complain("vertex " + std::to_string(v) + " is a terminal of two components");
        seen[v] = 1;
      }
    for (VertexId v : on)
      if (!seen[v]) complain("vertex " + std::to_string(v) + " is a terminal of no component");
  }

  // owner_tree and chain agree with the filed structures
  for (VertexId v : on) {
    int tid = h.owner_tree[v];
    if (tid < 0 || tid >= static_cast<int>(h.trees.size()) ||
        !sorted_contains(h.trees[tid].terminals, v)) {
      complain("owner_tree wrong for vertex " + std::to_string(v));
    }
    const auto& chain = h.chain[v];
    int tl = h.terminal_level[v];
    if (static_cast<int>(chain.size()) != p - tl + 1) {
      complain("chain length wrong for vertex " + std::to_string(v));
      continue;
    }
    for (int k = 0; k < static_cast<int>(chain.size()); ++k) {
      const auto& c = h.components[chain[k]];
      if (c.level != tl + k || !sorted_contains(c.vertices, v))
        complain("chain entry wrong for vertex " + std::to_string(v));
      if (k + 1 < static_cast<int>(chain.size()) && c.parent != chain[k + 1])
        complain("chain does not follow parents at vertex " + std::to_string(v));
    }
  }

  // top level must be exactly the components of the on-subgraph
  {
    auto expect = brute_components(g, on);
    std::vector<std::vector<VertexId>> got;
    for (int cid : h.level_components[p]) got.push_back(h.components[cid].vertices);
    std::sort(got.begin(), got.end());
    std::sort(expect.begin(), expect.end());
    if (got != expect) complain("top level differs from the on-subgraph components");
  }
  return bad;
}

std::string format_hierarchy(const Hierarchy& h) {
  std::ostringstream out;
  out << "levels " << h.levels << "\n";
  for (int i = h.levels; i >= 1; --i) {
    for (int cid : h.level_components[i]) {
      const auto& c = h.components[cid];
      out << "component " << c.id << " level " << c.level << " parent " << c.parent << " tree "
          << c.tree << "\n";
      out << "  vertices:";
      for (VertexId v : c.vertices) out << ' ' << v;
      out << "\n  terminals:";
      for (VertexId v : c.terminals) out << ' ' << v;
      out << "\n";
    }
    for (int tid : h.level_trees[i]) {
      const auto& t = h.trees[tid];
      out << "tree " << t.id << " level " << t.level << " degree " << t.max_degree << "\n";
      out << "  vertices:";
      for (VertexId v : t.vertices) out << ' ' << v;
      out << "\n  terminals:";
      for (VertexId v : t.terminals) out << ' ' << v;
      out << "\n  edges:";
      for (auto [u, v] : t.edges) out << ' ' << u << '-' << v;
      out << "\n";
    }
  }
  return out.str();
}

}  // namespace subconn
