#include "subconn/graph.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <queue>
#include <sstream>
#include <stdexcept>

namespace subconn {

VertexSet::VertexSet(std::vector<VertexId> members) {
  std::sort(members.begin(), members.end());
  members.erase(std::unique(members.begin(), members.end()), members.end());
  sorted_ = std::move(members);
  lookup_.insert(sorted_.begin(), sorted_.end());
}

void VertexSet::insert(VertexId v) {
  if (lookup_.insert(v).second) {
    sorted_.insert(std::lower_bound(sorted_.begin(), sorted_.end(), v), v);
  }
}

Graph::Graph(int n) : n_(n), adj_(n), on_(n, true) {
  if (n < 0) throw std::invalid_argument("Graph: negative vertex count");
}

void Graph::add_edge(VertexId u, VertexId v) {
  if (u < 0 || v < 0 || u >= n_ || v >= n_)
    throw std::out_of_range("Graph::add_edge: vertex id out of range");
  if (u == v) throw std::invalid_argument("Graph::add_edge: self-loop");
  adj_[u].push_back(v);
  adj_[v].push_back(u);
  finalized_ = false;
}

void Graph::finalize() {
  m_ = 0;
  for (auto& list : adj_) {
    std::sort(list.begin(), list.end());
    list.erase(std::unique(list.begin(), list.end()), list.end());
    m_ += list.size();
  }
  m_ /= 2;
  finalized_ = true;
}

bool Graph::has_edge(VertexId u, VertexId v) const {
  const auto& list = adj_[u];
  return std::binary_search(list.begin(), list.end(), v);
}

void Graph::set_on(VertexId v, bool state) {
  if (v < 0 || v >= n_) throw std::out_of_range("Graph::set_on: vertex id out of range");
  on_[v] = state;
}

std::vector<VertexId> Graph::on_vertices() const {
  std::vector<VertexId> out;
  for (VertexId v = 0; v < n_; ++v)
    if (on_[v]) out.push_back(v);
  return out;
}

std::vector<VertexId> Graph::off_vertices() const {
  std::vector<VertexId> out;
  for (VertexId v = 0; v < n_; ++v)
    if (!on_[v]) out.push_back(v);
  return out;
}

std::vector<std::pair<VertexId, VertexId>> Graph::edges() const {
  std::vector<std::pair<VertexId, VertexId>> out;
  out.reserve(m_);
  for (VertexId u = 0; u < n_; ++u)
    for (VertexId v : adj_[u])
      if (u < v) out.emplace_back(u, v);
  return out;
}

Graph Graph::induced(const std::vector<VertexId>& keep, std::vector<VertexId>* back_map) const {
  std::vector<VertexId> sorted = keep;
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  std::vector<int> new_id(n_, -1);
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    if (sorted[i] < 0 || sorted[i] >= n_)
      throw std::out_of_range("Graph::induced: vertex id out of range");
    new_id[sorted[i]] = static_cast<int>(i);
  }
  Graph sub(static_cast<int>(sorted.size()));
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    VertexId old = sorted[i];
    sub.on_[i] = on_[old];
    for (VertexId w : adj_[old]) {
      if (w > old && new_id[w] >= 0) sub.add_edge(static_cast<int>(i), new_id[w]);
    }
  }
  sub.finalize();
  if (back_map) *back_map = std::move(sorted);
  return sub;
}

std::vector<std::vector<VertexId>> Graph::connected_components() const {
  std::vector<std::vector<VertexId>> comps;
  std::vector<char> seen(n_, 0);
  std::vector<VertexId> queue;
  for (VertexId s = 0; s < n_; ++s) {
    if (seen[s]) continue;
    queue.assign(1, s);
    seen[s] = 1;
    std::vector<VertexId> comp;
    while (!queue.empty()) {
      VertexId v = queue.back();
      queue.pop_back();
      comp.push_back(v);
      for (VertexId w : adj_[v]) {
        if (!seen[w]) {
          seen[w] = 1;
          queue.push_back(w);
        }
      }
    }
    std::sort(comp.begin(), comp.end());
    comps.push_back(std::move(comp));
  }
  return comps;
}

namespace {

// One whitespace-separated token stream over the non-comment part of a line.
std::vector<std::string> tokens_of(std::string_view line) {
  auto hash = line.find('#');
  if (hash != std::string_view::npos) line = line.substr(0, hash);
  std::vector<std::string> out;
  std::istringstream in{std::string(line)};
  std::string tok;
  while (in >> tok) out.push_back(tok);
  return out;
}

long long parse_int(const std::string& tok, int line_no) {
  long long value = 0;
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
  if (ec != std::errc() || ptr != tok.data() + tok.size())
    throw std::runtime_error("parse error on line " + std::to_string(line_no) +
                             ": expected integer, got '" + tok + "'");
  return value;
}

}  // namespace

Graph load_graph(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  int line_no = 0;
  int n = -1;
  long long m = -1;
  bool on_seen = false;
  long long edges_read = 0;
  Graph g;
  while (std::getline(in, line)) {
    ++line_no;
    auto toks = tokens_of(line);
    if (toks.empty()) continue;
    if (n < 0) {
      if (toks.size() != 2)
        throw std::runtime_error("parse error on line " + std::to_string(line_no) +
                                 ": expected 'n m' header");
      long long nv = parse_int(toks[0], line_no);
      m = parse_int(toks[1], line_no);
      if (nv < 0 || m < 0)
        throw std::runtime_error("parse error on line " + std::to_string(line_no) +
                                 ": negative n or m");
      n = static_cast<int>(nv);
      g = Graph(n);
      continue;
    }
    if (!on_seen) {
      if (toks[0] != "on:")
        throw std::runtime_error("parse error on line " + std::to_string(line_no) +
                                 ": expected 'on: <ids>' line");
      for (VertexId v = 0; v < n; ++v) g.set_on(v, false);
      for (std::size_t i = 1; i < toks.size(); ++i) {
        long long v = parse_int(toks[i], line_no);
        if (v < 0 || v >= n)
          throw std::runtime_error("parse error on line " + std::to_string(line_no) +
                                   ": on-vertex id " + std::to_string(v) + " out of range");
        g.set_on(static_cast<VertexId>(v), true);
      }
      on_seen = true;
      continue;
    }
    if (toks.size() != 2)
      throw std::runtime_error("parse error on line " + std::to_string(line_no) +
                               ": expected 'u v' edge line");
    long long u = parse_int(toks[0], line_no);
    long long v = parse_int(toks[1], line_no);
    if (u < 0 || u >= n || v < 0 || v >= n)
      throw std::runtime_error("parse error on line " + std::to_string(line_no) +
                               ": edge endpoint out of range");
    if (u == v)
      throw std::runtime_error("parse error on line " + std::to_string(line_no) + ": self-loop");
    ++edges_read;
    if (edges_read > m)
      throw std::runtime_error("parse error on line " + std::to_string(line_no) +
                               ": more than m=" + std::to_string(m) + " edge lines");
    g.add_edge(static_cast<VertexId>(u), static_cast<VertexId>(v));
  }
  if (n < 0) throw std::runtime_error("parse error: empty input, missing 'n m' header");
  if (!on_seen) throw std::runtime_error("parse error: missing 'on:' line");
  if (edges_read != m)
    throw std::runtime_error("parse error: header promised " + std::to_string(m) +
                             " edges, found " + std::to_string(edges_read));
  g.finalize();
  return g;
}

Graph load_graph_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open graph file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return load_graph(buf.str());
}

std::string format_graph(const Graph& g) {
  std::ostringstream out;
  auto edges = g.edges();
  out << g.vertex_count() << ' ' << edges.size() << '\n';
  out << "on:";
  for (VertexId v : g.on_vertices()) out << ' ' << v;
  out << '\n';
  for (auto [u, v] : edges) out << u << ' ' << v << '\n';
  return out.str();
}

bool brute_connected(const Graph& g, const VertexSet& active, VertexId u, VertexId v) {
  if (!active.contains(u) || !active.contains(v))
    throw std::invalid_argument("brute_connected: endpoint not active");
  if (u == v) return true;
  std::unordered_set<VertexId> seen{u};
  std::vector<VertexId> queue{u};
  while (!queue.empty()) {
    VertexId x = queue.back();
    queue.pop_back();
    for (VertexId w : g.neighbors(x)) {
      if (!active.contains(w) || seen.count(w)) continue;
      if (w == v) return true;
      seen.insert(w);
      queue.push_back(w);
    }
  }
  return false;
}

std::vector<std::vector<VertexId>> brute_components(const Graph& g,
                                                    const std::vector<VertexId>& active) {
  std::vector<char> in_active(g.vertex_count(), 0);
  for (VertexId v : active) in_active[v] = 1;
  std::vector<char> seen(g.vertex_count(), 0);
  std::vector<std::vector<VertexId>> comps;
  std::vector<VertexId> sorted = active;
  std::sort(sorted.begin(), sorted.end());
  std::vector<VertexId> queue;
  for (VertexId s : sorted) {
    if (seen[s]) continue;
    seen[s] = 1;
    queue.assign(1, s);
    std::vector<VertexId> comp;
    while (!queue.empty()) {
      VertexId v = queue.back();
      queue.pop_back();
      comp.push_back(v);
      for (VertexId w : g.neighbors(v)) {
        if (in_active[w] && !seen[w]) {
          seen[w] = 1;
          queue.push_back(w);
        }
      }
    }
    std::sort(comp.begin(), comp.end());
    comps.push_back(std::move(comp));
  }
  return comps;
}

}  // namespace subconn
