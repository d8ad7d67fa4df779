#include <CLI11.hpp>

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <iostream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "permod/permod.hpp"
#include "selftest.hpp"

namespace {

using namespace permod;

struct RunConfig {
  std::string input;
  unsigned k = 1;
  std::uint64_t seed = 1;
  unsigned trials = 5;
  std::string method = "direct";
  std::string workers = "auto";
  std::uint64_t budget = 1'000'000;
  std::size_t l = 1;
  std::vector<std::size_t> marked_edges;
  std::vector<std::size_t> marked_vertices;
  std::vector<std::size_t> terminals;
  bool reconstruct = false;
};

unsigned worker_count(const std::string& w) {
  if (w == "auto") return 0;
  try {
    std::size_t pos = 0;
    const unsigned long v = std::stoul(w, &pos);
    if (pos == w.size() && v >= 1 && v <= 1024) return static_cast<unsigned>(v);
  } catch (const std::exception&) {
  }
  throw Error("--workers expects a positive count or 'auto'");
}

std::string answer(const std::optional<std::uint64_t>& w) {
  return w ? std::to_string(*w) : "none";
}

// Edges of a solution in graph h, reported as endpoint pairs of the input
// graph. Vertices >= base_n are either auxiliary (dropped) or split
// vertices standing for the original edge between their two neighbours.
std::string edge_list(const WeightedGraph& h, const std::vector<std::size_t>& edges,
                      std::size_t base_n, const std::set<std::size_t>& aux) {
  std::set<std::pair<std::size_t, std::size_t>> out;
  for (std::size_t e : edges) {
    std::size_t a = h.edge(e).u;
    std::size_t b = h.edge(e).v;
    if (aux.count(a) || aux.count(b)) continue;
    if (a >= base_n) std::swap(a, b);
    if (b >= base_n) {
      const auto nb = h.neighbors(b);
      a = nb.at(0);
      b = nb.at(1);
    }
    out.emplace(std::min(a, b), std::max(a, b));
  }
  std::ostringstream s;
  s << "edges:";
  for (const auto& [a, b] : out) s << ' ' << a << '-' << b;
  return s.str();
}

std::optional<std::uint64_t> shortest_cycles(const MarkedInstance& inst, std::size_t l,
                                             const RunConfig& cfg, unsigned workers) {
  return l == 1 ? shortest_cycle_through_edges(inst, cfg.seed, cfg.trials, workers)
                : shortest_two_disjoint_cycles(inst, cfg.seed, cfg.trials, workers);
}

const std::string kNotIsolated = "edges: not isolated under these seeds (try another --seed)";

std::string reconstruct_marked(const MarkedInstance& inst, std::size_t l, std::uint64_t weight,
                               const RunConfig& cfg, unsigned workers) {
  for (unsigned t = 0; t < cfg.trials; ++t) {
    const auto r = reconstruct_cycles(inst, l, weight, mix_seed(cfg.seed, t), workers);
    if (r.unique) return edge_list(inst.graph, r.edges, inst.graph.n(), {});
  }
  return kNotIsolated;
}

std::string reconstruct_vertices(const WeightedGraph& g, const std::vector<std::size_t>& marked,
                                 std::size_t l, std::uint64_t weight, std::size_t base_n,
                                 const std::set<std::size_t>& aux, const RunConfig& cfg,
                                 unsigned workers) {
  for (const auto& inst : marked_vertex_instances(g, marked)) {
    if (shortest_cycles(inst, l, cfg, workers) != weight) continue;
    for (unsigned t = 0; t < cfg.trials; ++t) {
      const auto r = reconstruct_cycles(inst, l, weight, mix_seed(cfg.seed, t), workers);
      if (r.unique) return edge_list(inst.graph, r.edges, base_n, aux);
    }
  }
  return kNotIsolated;
}

void check_k(unsigned k) {
  if (k < 1 || k > 63) throw Error("--k must be in [1, 63]");
}

int run_perm(const RunConfig& cfg) {
  check_k(cfg.k);
  const ZxMatrix a = read_matrix_file(cfg.input);
  const PermOptions opt{worker_count(cfg.workers), cfg.budget};
  const ZxPoly p = cfg.method == "interpolate" ? perm_interpolate(a, cfg.k, opt)
                                               : perm_zx_mod2k(a, cfg.k, opt);
  std::cout << to_string(p) << "\n";
  return 0;
}

int run_sdp2(const RunConfig& cfg) {
  if (cfg.terminals.size() != 4) throw Error("--terminals expects s1,t1,s2,t2");
  const GraphFile f = read_graph_file(cfg.input);
  const unsigned workers = worker_count(cfg.workers);
  const auto& t = cfg.terminals;
  const auto w = solve_sdp2(f.graph, t[0], t[1], t[2], t[3], cfg.seed, cfg.trials, workers);
  std::cout << answer(w) << "\n";
  if (w && cfg.reconstruct) {
    const Sdp2Graph h = sdp2_graph(f.graph, t[0], t[1], t[2], t[3]);
    std::cout << reconstruct_vertices(h.graph, {h.u1, h.u2}, 2, *w, f.graph.n(), {h.u1, h.u2},
                                      cfg, workers)
              << "\n";
  }
  return 0;
}

int run_sdc(const RunConfig& cfg) {
  if (cfg.l != 1 && cfg.l != 2) throw Error("--l must be 1 or 2");
  const GraphFile f = read_graph_file(cfg.input);
  const unsigned workers = worker_count(cfg.workers);
  std::vector<std::size_t> edges = cfg.marked_edges;
  std::vector<std::size_t> vertices = cfg.marked_vertices;
  if (edges.empty() && vertices.empty()) {
    edges = f.marked_edges;
    vertices = f.marked_vertices;
  }
  if (!edges.empty() && !vertices.empty()) throw Error("mark either edges or vertices, not both");
  if (edges.empty() && vertices.empty()) throw Error("no marked edges or vertices");

  if (!edges.empty()) {
    const MarkedInstance inst{f.graph, edges};
    const auto w = shortest_cycles(inst, cfg.l, cfg, workers);
    std::cout << answer(w) << "\n";
    if (w && cfg.reconstruct) std::cout << reconstruct_marked(inst, cfg.l, *w, cfg, workers) << "\n";
    return 0;
  }
  const auto w = sdce_from_marked_vertices(f.graph, vertices, cfg.l, cfg.seed, cfg.trials, workers);
  std::cout << answer(w) << "\n";
  if (w && cfg.reconstruct) {
    std::cout << reconstruct_vertices(f.graph, vertices, cfg.l, *w, f.graph.n(), {}, cfg, workers)
              << "\n";
  }
  return 0;
}

int run_hafnian(const RunConfig& cfg) {
  check_k(cfg.k);
  std::cout << hf_mod2k(read_sym_matrix_file(cfg.input), cfg.k, worker_count(cfg.workers)) << "\n";
  return 0;
}

int run_matchings(const RunConfig& cfg) {
  check_k(cfg.k);
  const GraphFile f = read_graph_file(cfg.input);
  std::cout << count_matchings_mod2k(f.graph, cfg.k, worker_count(cfg.workers)) << "\n";
  return 0;
}

int run_selftest(const RunConfig& cfg) {
  bool ok = true;
  std::printf("%-32s %6s %9s  %s\n", "suite", "cases", "failures", "result");
  for (const auto& r : selftest::run_all(cfg.seed)) {
    ok = ok && r.failures == 0;
    std::printf("%-32s %6zu %9zu  %s\n", r.name.c_str(), r.cases, r.failures,
                r.failures == 0 ? "pass" : "FAIL");
  }
  return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Permanents, hafnians and disjoint cycles modulo powers of two"};
  app.require_subcommand(1);
  RunConfig cfg;

  auto add_input = [&](CLI::App* sub) {
    sub->add_option("input", cfg.input, "Input file")->required()->check(CLI::ExistingFile);
  };
  auto add_workers = [&](CLI::App* sub) {
    sub->add_option("--workers", cfg.workers, "Worker threads or 'auto'")->capture_default_str();
  };
  auto add_k = [&](CLI::App* sub) {
    sub->add_option("--k", cfg.k, "Modulus exponent: results mod 2^k")->capture_default_str();
  };
  auto add_random = [&](CLI::App* sub) {
    sub->add_option("--seed", cfg.seed, "Master seed")->capture_default_str();
    sub->add_option("--trials", cfg.trials, "Isolation trials")
        ->capture_default_str()
        ->check(CLI::Range(1U, 1000U));
    sub->add_flag("--reconstruct", cfg.reconstruct, "Also print an optimal edge set");
  };

  auto* perm = app.add_subcommand("perm", "Permanent of an integer polynomial matrix mod 2^k");
  add_input(perm);
  add_k(perm);
  add_workers(perm);
  perm->add_option("--method", cfg.method, "direct | interpolate")
      ->capture_default_str()
      ->check(CLI::IsMember({"direct", "interpolate"}));
  perm->add_option("--budget", cfg.budget, "Inner permanent budget for interpolation")
      ->capture_default_str();

  auto* sdp2 = app.add_subcommand("sdp2", "Shortest two disjoint paths s1-t1, s2-t2");
  add_input(sdp2);
  add_workers(sdp2);
  add_random(sdp2);
  sdp2->add_option("--terminals", cfg.terminals, "s1,t1,s2,t2")->required()->delimiter(',');

  auto* sdc = app.add_subcommand("sdc", "Shortest l disjoint cycles through marked edges or vertices");
  add_input(sdc);
  add_workers(sdc);
  add_random(sdc);
  sdc->add_option("--l", cfg.l, "Number of cycles (1 or 2)")->capture_default_str();
  sdc->add_option("--marked-edge", cfg.marked_edges, "Marked edge index (repeatable)")->delimiter(',');
  sdc->add_option("--marked-vertex", cfg.marked_vertices, "Marked vertex (repeatable)")->delimiter(',');

  auto* haf = app.add_subcommand("hafnian", "Hafnian of a symmetric integer matrix mod 2^k");
  add_input(haf);
  add_k(haf);
  add_workers(haf);

  auto* match = app.add_subcommand("matchings", "Perfect matchings of a graph mod 2^k");
  add_input(match);
  add_k(match);
  add_workers(match);

  auto* self = app.add_subcommand("selftest", "Compare solvers with brute-force references");
  self->add_option("--seed", cfg.seed, "Master seed")->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  try {
    if (perm->parsed()) return run_perm(cfg);
    if (sdp2->parsed()) return run_sdp2(cfg);
    if (sdc->parsed()) return run_sdc(cfg);
    if (haf->parsed()) return run_hafnian(cfg);
    if (match->parsed()) return run_matchings(cfg);
    if (self->parsed()) return run_selftest(cfg);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
