#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "subconn/generators.hpp"
#include "subconn/oracle.hpp"

using namespace subconn;

namespace {

struct Trial {
  std::vector<VertexId> switches;
  std::vector<std::pair<VertexId, VertexId>> queries;
  std::vector<bool> expected;  // empty when the workload carries no answers
};

std::vector<Trial> load_workload(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open workload file: " + path);
  nlohmann::json doc;
  in >> doc;
  std::vector<Trial> trials;
  for (const auto& t : doc.at("trials")) {
    Trial trial;
    const auto& batch = t.contains("D") ? t.at("D") : t.at("switches");
    for (const auto& v : batch) trial.switches.push_back(v.get<int>());
    if (t.contains("queries"))
      for (const auto& q : t.at("queries"))
        trial.queries.push_back({q.at(0).get<int>(), q.at(1).get<int>()});
    if (t.contains("expected"))
      for (const auto& e : t.at("expected")) trial.expected.push_back(e.get<bool>());
    if (!trial.expected.empty() && trial.expected.size() != trial.queries.size())
      throw std::runtime_error("workload: expected/queries length mismatch");
    trials.push_back(std::move(trial));
  }
  return trials;
}

std::vector<VertexId> active_after(const Graph& g, const UpdateState& st) {
  std::vector<VertexId> act;
  for (VertexId v = 0; v < g.vertex_count(); ++v) {
    const bool on = g.is_on(v) ? st.d_on_set.count(v) == 0 : st.d_off_set.count(v) > 0;
    if (on) act.push_back(v);
  }
  return act;
}

std::vector<VertexId> sample_batch(int n, int size, std::mt19937_64& rng) {
  std::vector<VertexId> batch;
  std::unordered_set<VertexId> used;
  size = std::min(size, n);
  while (static_cast<int>(batch.size()) < size) {
    const VertexId v = static_cast<VertexId>(rng() % static_cast<std::uint64_t>(n));
    if (used.insert(v).second) batch.push_back(v);
  }
  return batch;
}

long long interval_budget(const Oracle& oracle, const UpdateState& st) {
  long long bound = static_cast<long long>(st.d_off.size());
  for (int tid : st.affected_trees) {
    const auto& tree = oracle.hierarchy().trees[tid];
    auto it = st.failed_in_tree.find(tid);
    const long long failed = it == st.failed_in_tree.end()
                                 ? 0
                                 : static_cast<long long>(it->second.size());
    bound += (tree.max_degree + 1) * failed + 1;
  }
  return bound;
}

struct ShadowCheck {
  long long checks = 0;
  long long mismatches = 0;
};

/** Cross-check the merge result against an explicit affected graph. */
ShadowCheck run_shadow(const Oracle& oracle, const Graph& g, const UpdateState& st,
                       std::mt19937_64& rng) {
  ShadowCheck out;
  const AffectedGraph shadow = materialize_affected_graph(oracle.data(), st);
  std::unordered_map<VertexId, int> comp;
  std::unordered_map<VertexId, std::vector<VertexId>> adj;
  for (const auto& [a, b] : shadow.edges) {
    adj[a].push_back(b);
    adj[b].push_back(a);
  }
  int next = 0;
  for (VertexId v : shadow.vertices) {
    if (comp.count(v)) continue;
    std::vector<VertexId> stack{v};
    comp[v] = next;
    while (!stack.empty()) {
      const VertexId x = stack.back();
      stack.pop_back();
      for (VertexId y : adj[x])
        if (!comp.count(y)) {
          comp[y] = next;
          stack.push_back(y);
        }
    }
    ++next;
  }

  // every interval's vertices must share one shadow component, and the group
  // partition must match shadow components exactly
  std::unordered_map<int, int> group_comp;
  std::unordered_map<int, int> comp_group;
  for (std::size_t i = 0; i < st.intervals.size(); ++i) {
    const auto& iv = st.intervals[i];
    const int c0 = comp.at(oracle.order().pi[iv.lo]);
    ++out.checks;
    for (int p = iv.lo; p <= iv.hi; ++p)
      if (comp.at(oracle.order().pi[p]) != c0) ++out.mismatches;
    const int grp = st.interval_group[i];
    auto [it1, fresh1] = group_comp.try_emplace(grp, c0);
    if (!fresh1 && it1->second != c0) ++out.mismatches;
    auto [it2, fresh2] = comp_group.try_emplace(c0, grp);
    if (!fresh2 && it2->second != grp) ++out.mismatches;
  }

  // connectivity transfer: sampled vertex pairs agree between the affected
  // graph and the updated original graph
  if (shadow.vertices.size() >= 2) {
    const VertexSet act(active_after(g, st));
    for (int i = 0; i < 100; ++i) {
      const VertexId a =
          shadow.vertices[rng() % static_cast<std::uint64_t>(shadow.vertices.size())];
      const VertexId b =
          shadow.vertices[rng() % static_cast<std::uint64_t>(shadow.vertices.size())];
      if (a == b) continue;
      ++out.checks;
      if ((comp.at(a) == comp.at(b)) != brute_connected(g, act, a, b)) ++out.mismatches;
    }
  }
  return out;
}

struct VerifyTally {
  long long trials = 0;
  long long queries = 0;
  long long mismatches = 0;
  long long hierarchy_violations = 0;
  long long budget_violations = 0;
  long long shadow_checks = 0;
  long long shadow_mismatches = 0;
  long long errors = 0;
};

void verify_on_graph(const Graph& g, int d_star, int trials, int queries_per_trial,
                     bool sparsify, bool shadow, bool* fault_left, std::mt19937_64& rng,
                     VerifyTally& tally) {
  OracleOptions opts;
  opts.sparsify = sparsify;
  Oracle oracle(g, d_star, opts);
  tally.hierarchy_violations +=
      static_cast<long long>(validate_hierarchy(oracle.graph(), oracle.hierarchy()).size());

  for (int t = 0; t < trials; ++t) {
    const int batch_size =
        d_star == 0 ? 0 : static_cast<int>(rng() % static_cast<std::uint64_t>(d_star + 1));
    const std::vector<VertexId> batch = sample_batch(g.vertex_count(), batch_size, rng);
    try {
      oracle.update(batch);
    } catch (const std::exception& e) {
      std::cerr << "update failed: " << e.what() << "\n";
      ++tally.errors;
      continue;
    }
    ++tally.trials;
    const UpdateState& st = oracle.state();
    if (static_cast<long long>(st.intervals.size()) > interval_budget(oracle, st))
      ++tally.budget_violations;

    const std::vector<VertexId> act = active_after(oracle.graph(), st);
    if (act.size() < 2) continue;
    const VertexSet act_set(act);
    for (int q = 0; q < queries_per_trial; ++q) {
      const VertexId u = act[rng() % static_cast<std::uint64_t>(act.size())];
      const VertexId v = act[rng() % static_cast<std::uint64_t>(act.size())];
      bool got;
      try {
        got = oracle.query(u, v);
      } catch (const std::exception& e) {
        std::cerr << "query failed: " << e.what() << "\n";
        ++tally.errors;
        continue;
      }
      if (fault_left && *fault_left) {
        got = !got;
        *fault_left = false;
      }
      const bool want = brute_connected(oracle.graph(), act_set, u, v);
      ++tally.queries;
      if (got != want) {
        if (tally.mismatches < 10)
          std::cerr << "mismatch: u=" << u << " v=" << v << " oracle=" << got
                    << " brute=" << want << "\n";
        ++tally.mismatches;
      }
    }
    if (shadow) {
      const ShadowCheck sc = run_shadow(oracle, oracle.graph(), st, rng);
      tally.shadow_checks += sc.checks;
      tally.shadow_mismatches += sc.mismatches;
    }
  }
}

std::pair<VertexId, VertexId> parse_pair(const std::string& text) {
  const auto comma = text.find(',');
  if (comma == std::string::npos)
    throw std::runtime_error("expected 'u,v' but got '" + text + "'");
  return {std::stoi(text.substr(0, comma)), std::stoi(text.substr(comma + 1))};
}

double loglog_slope(const std::vector<std::pair<double, double>>& points) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int cnt = 0;
  for (const auto& [x, y] : points) {
    if (x <= 0 || y <= 0) continue;
    const double lx = std::log(x), ly = std::log(y);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
    ++cnt;
  }
  if (cnt < 2) return 0.0;
  const double denom = cnt * sxx - sx * sx;
  return denom == 0 ? 0.0 : (cnt * sxy - sx * sy) / denom;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"sensitivity oracle for subgraph connectivity under batched vertex switches"};
  app.require_subcommand(1);
  int rc = 0;

  // ---- gen ----
  auto* gen = app.add_subcommand("gen", "emit a deterministic graph file");
  GenSpec gen_spec;
  std::string gen_out;
  gen->add_option("--kind", gen_spec.kind, "gnm | path | star | grid | cliques-bridge");
  gen->add_option("--n", gen_spec.n, "vertex count")->required();
  gen->add_option("--m", gen_spec.m, "edge count (gnm only)");
  gen->add_option("--n-off", gen_spec.n_off, "vertices sampled as initially off");
  gen->add_option("--seed", gen_spec.seed, "rng seed");
  gen->add_option("--out", gen_out, "output path (default stdout)");
  gen->callback([&]() {
    const std::string text = format_graph(generate_graph(gen_spec));
    if (gen_out.empty()) {
      std::cout << text;
    } else {
      std::ofstream out(gen_out);
      if (!out) throw std::runtime_error("cannot open output file: " + gen_out);
      out << text;
    }
  });

  // ---- preprocess ----
  auto* prep = app.add_subcommand("preprocess", "build the oracle and report its shape");
  std::string prep_graph;
  int prep_dstar = 4;
  bool prep_sparsify = false;
  bool prep_validate = false;
  std::uint64_t prep_cap = 150000000ull;
  prep->add_option("--graph", prep_graph, "graph file")->required();
  prep->add_option("--d-star", prep_dstar, "switch budget");
  prep->add_flag("--sparsify", prep_sparsify, "thin on-on edges before preprocessing");
  prep->add_flag("--validate", prep_validate, "run the hierarchy validator");
  prep->add_option("--memory-cap", prep_cap, "point cap for the counting table");
  prep->callback([&]() {
    OracleOptions opts;
    opts.sparsify = prep_sparsify;
    opts.table_point_cap = prep_cap;
    const Graph g = load_graph_file(prep_graph);
    Oracle oracle(g, prep_dstar, opts);
    const OracleStats& s = oracle.stats();
    std::cout << "n " << oracle.graph().vertex_count() << "\n"
              << "m " << s.edges_used << "\n"
              << "n_off " << oracle.graph().off_vertices().size() << "\n"
              << "d_star " << prep_dstar << "\n"
              << "levels " << s.levels << "\n"
              << "components " << s.component_count << "\n"
              << "trees " << s.tree_count << "\n"
              << "max_tree_degree " << s.max_tree_degree << "\n"
              << "table_points " << s.table_points << "\n"
              << "sum_a " << s.sum_a << "\n"
              << "sum_ab " << s.sum_ab << "\n"
              << "hierarchy_ms " << s.hierarchy_ms << "\n"
              << "tours_ms " << s.tours_ms << "\n"
              << "lists_ms " << s.lists_ms << "\n"
              << "table_ms " << s.table_ms << "\n"
              << "total_ms " << s.total_ms << "\n";
    if (prep_validate) {
      const auto issues = validate_hierarchy(oracle.graph(), oracle.hierarchy());
      std::cout << "hierarchy_violations " << issues.size() << "\n";
      for (const auto& line : issues) std::cout << "  " << line << "\n";
      if (!issues.empty()) rc = 1;
    }
  });

  // ---- update ----
  auto* upd = app.add_subcommand("update", "apply one switch batch and show the result");
  std::string upd_graph;
  int upd_dstar = 4;
  std::vector<int> upd_switches;
  bool upd_sparsify = false;
  upd->add_option("--graph", upd_graph, "graph file")->required();
  upd->add_option("--d-star", upd_dstar, "switch budget");
  upd->add_option("--switch", upd_switches, "vertex to switch (repeatable)");
  upd->add_flag("--sparsify", upd_sparsify, "thin on-on edges before preprocessing");
  upd->callback([&]() {
    OracleOptions opts;
    opts.sparsify = upd_sparsify;
    Oracle oracle(load_graph_file(upd_graph), upd_dstar, opts);
    oracle.update(std::vector<VertexId>(upd_switches.begin(), upd_switches.end()));
    const UpdateState& st = oracle.state();
    std::cout << "switched_off " << st.d_on.size() << "\n"
              << "switched_on " << st.d_off.size() << "\n"
              << "affected_components " << st.affected_components.size() << "\n"
              << "affected_trees " << st.affected_trees.size() << "\n"
              << "intervals " << st.intervals.size() << "\n"
              << "phases " << st.phases << "\n"
              << "groups " << st.group_count << "\n";
    for (std::size_t i = 0; i < st.intervals.size(); ++i)
      std::cout << "interval " << st.intervals[i].lo << ".." << st.intervals[i].hi << " tree "
                << st.interval_tree[i] << " group " << st.interval_group[i] << "\n";
  });

  // ---- query ----
  auto* qry = app.add_subcommand("query", "answer connectivity queries after a batch");
  std::string qry_graph, qry_workload;
  int qry_dstar = 4;
  std::vector<int> qry_switches;
  std::vector<std::string> qry_pairs;
  qry->add_option("--graph", qry_graph, "graph file")->required();
  qry->add_option("--d-star", qry_dstar, "switch budget");
  qry->add_option("--switch", qry_switches, "vertex to switch (repeatable)");
  qry->add_option("--pair", qry_pairs, "query pair 'u,v' (repeatable)");
  qry->add_option("--workload", qry_workload, "JSON workload (trials of switches + queries)");
  qry->callback([&]() {
    Oracle oracle(load_graph_file(qry_graph), qry_dstar);
    if (!qry_workload.empty()) {
      long long mismatches = 0;
      for (const Trial& trial : load_workload(qry_workload)) {
        oracle.update(trial.switches);
        for (std::size_t i = 0; i < trial.queries.size(); ++i) {
          const auto [u, v] = trial.queries[i];
          const bool got = oracle.query(u, v);
          std::cout << u << " " << v << " " << (got ? 1 : 0) << "\n";
          if (!trial.expected.empty() && got != trial.expected[i]) ++mismatches;
        }
      }
      if (mismatches > 0) {
        std::cerr << mismatches << " answers differ from the workload's expectations\n";
        rc = 1;
      }
      return;
    }
    oracle.update(std::vector<VertexId>(qry_switches.begin(), qry_switches.end()));
    for (const std::string& text : qry_pairs) {
      const auto [u, v] = parse_pair(text);
      std::cout << u << " " << v << " " << (oracle.query(u, v) ? 1 : 0) << "\n";
    }
  });

  // ---- verify ----
  auto* ver = app.add_subcommand("verify", "fuzz the oracle against breadth-first search");
  std::string ver_graph;
  int ver_dstar = 4, ver_trials = 25, ver_queries = 200;
  std::uint64_t ver_seed = 1;
  bool ver_sparsify = false, ver_shadow = false, ver_fault = false;
  ver->add_option("--graph", ver_graph, "graph file (default: built-in corpus)");
  ver->add_option("--d-star", ver_dstar, "switch budget");
  ver->add_option("--trials", ver_trials, "batches per graph");
  ver->add_option("--queries", ver_queries, "queries per batch");
  ver->add_option("--seed", ver_seed, "rng seed");
  ver->add_flag("--sparsify", ver_sparsify, "verify the sparsified build");
  ver->add_flag("--shadow", ver_shadow, "also materialize the affected graph and cross-check");
  ver->add_flag("--fault-inject", ver_fault, "flip one answer to prove the harness notices");
  ver->callback([&]() {
    std::mt19937_64 rng(ver_seed);
    VerifyTally tally;
    bool fault_left = ver_fault;
    if (!ver_graph.empty()) {
      verify_on_graph(load_graph_file(ver_graph), ver_dstar, ver_trials, ver_queries,
                      ver_sparsify, ver_shadow, &fault_left, rng, tally);
    } else {
      std::vector<GenSpec> corpus;
      for (const int n_off_num : {0, 1, 2}) {  // off share: none, quarter, half
        GenSpec s;
        s.n_off = 0;
        auto push = [&](std::string kind, int n, long long m) {
          s.kind = std::move(kind);
          s.n = n;
          s.m = m;
          s.n_off = n_off_num == 0 ? 0 : n / (n_off_num == 1 ? 4 : 2);
          s.seed = 7 * n + s.n_off + 13;
          corpus.push_back(s);
        };
        push("gnm", 30, 45);
        push("gnm", 200, 400);
        push("path", 50, 0);
        push("grid", 100, 0);
        push("cliques-bridge", 60, 0);
        push("star", 33, 0);
      }
      for (const GenSpec& s : corpus)
        verify_on_graph(generate_graph(s), ver_dstar, ver_trials, ver_queries, ver_sparsify,
                        ver_shadow, &fault_left, rng, tally);
    }
    std::cout << "trials " << tally.trials << "\n"
              << "queries " << tally.queries << "\n"
              << "mismatches " << tally.mismatches << "\n"
              << "hierarchy_violations " << tally.hierarchy_violations << "\n"
              << "interval_budget_violations " << tally.budget_violations << "\n"
              << "shadow_checks " << tally.shadow_checks << "\n"
              << "shadow_mismatches " << tally.shadow_mismatches << "\n"
              << "errors " << tally.errors << "\n";
    if (tally.mismatches || tally.hierarchy_violations || tally.budget_violations ||
        tally.shadow_mismatches || tally.errors)
      rc = 1;
  });

  // ---- bench ----
  auto* bench = app.add_subcommand("bench", "update/query timings vs batch size, CSV on stdout");
  std::string bench_graph;
  int bench_dstar = 32, bench_reps = 5, bench_queries = 1000;
  std::uint64_t bench_seed = 1;
  std::vector<int> bench_ds{2, 4, 8, 16, 32};
  bench->add_option("--graph", bench_graph, "graph file")->required();
  bench->add_option("--d-star", bench_dstar, "switch budget");
  bench->add_option("--d", bench_ds, "batch sizes to measure (repeatable)");
  bench->add_option("--reps", bench_reps, "batches per size");
  bench->add_option("--queries", bench_queries, "queries timed per batch");
  bench->add_option("--seed", bench_seed, "rng seed");
  bench->callback([&]() {
    std::mt19937_64 rng(bench_seed);
    const Graph g = load_graph_file(bench_graph);
    Oracle oracle(g, bench_dstar);
    const double prep_ms = oracle.stats().total_ms;
    std::cout << "d,mean_update_us,mean_query_us,intervals,phases,preprocessing_ms\n";
    std::vector<std::pair<double, double>> upd_points, qry_points;
    for (const int d : bench_ds) {
      if (d > bench_dstar) throw std::runtime_error("bench: d exceeds d-star");
      double upd_us = 0, qry_us = 0, ivs = 0, phases = 0;
      long long timed_queries = 0;
      for (int rep = 0; rep < bench_reps; ++rep) {
        const std::vector<VertexId> batch = sample_batch(g.vertex_count(), d, rng);
        const auto t0 = std::chrono::steady_clock::now();
        oracle.update(batch);
        upd_us += std::chrono::duration<double, std::micro>(std::chrono::steady_clock::now() -
                                                            t0)
                      .count();
        const UpdateState& st = oracle.state();
        ivs += static_cast<double>(st.intervals.size());
        phases += st.phases;
        const std::vector<VertexId> act = active_after(g, st);
        if (act.size() < 2) continue;
        std::vector<std::pair<VertexId, VertexId>> pairs(bench_queries);
        for (auto& p : pairs)
          p = {act[rng() % static_cast<std::uint64_t>(act.size())],
               act[rng() % static_cast<std::uint64_t>(act.size())]};
        const auto t1 = std::chrono::steady_clock::now();
        long long hits = 0;
        for (const auto& [u, v] : pairs) hits += oracle.query(u, v) ? 1 : 0;
        qry_us += std::chrono::duration<double, std::micro>(std::chrono::steady_clock::now() -
                                                            t1)
                      .count();
        timed_queries += bench_queries;
        if (hits < 0) std::cerr << "";  // keep the timed loop observable
      }
      const double mean_upd = upd_us / bench_reps;
      const double mean_qry = timed_queries ? qry_us / static_cast<double>(timed_queries) : 0;
      std::cout << d << "," << mean_upd << "," << mean_qry << "," << ivs / bench_reps << ","
                << phases / bench_reps << "," << prep_ms << "\n";
      upd_points.push_back({static_cast<double>(d), mean_upd});
      qry_points.push_back({static_cast<double>(d), mean_qry});
    }
    std::cout << "# update_time_loglog_slope " << loglog_slope(upd_points) << "\n";
    std::cout << "# query_time_loglog_slope " << loglog_slope(qry_points) << "\n";
  });

  // ---- inspect ----
  auto* ins = app.add_subcommand("inspect", "dump the level structure of a graph");
  std::string ins_graph;
  ins->add_option("--graph", ins_graph, "graph file")->required();
  ins->callback([&]() {
    const Graph g = load_graph_file(ins_graph);
    const Hierarchy h = build_hierarchy(g);
    std::cout << format_hierarchy(h);
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return rc;
}
