// rdist: command-line front end for the r-distant irregularity toolkit.
//
// Exit codes: 0 success, 1 the method reported failure (or conflicts found),
// 2 malformed input or invalid arguments.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "rdist/bench.hpp"
#include "rdist/colouring.hpp"
#include "rdist/construct.hpp"
#include "rdist/edge_list.hpp"
#include "rdist/exact.hpp"
#include "rdist/generate.hpp"
#include "rdist/greedy.hpp"
#include "rdist/report.hpp"

namespace {

using namespace rdist;

constexpr int kOk = 0;
constexpr int kMethodFailure = 1;
constexpr int kInputError = 2;

struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

Graph load_graph(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open graph file '" + path + "'");
  return parse_edge_list(in);
}

// Writes to `path`, or stdout when path is empty or "-".
template <class Fn>
void emit(const std::string& path, Fn&& fn) {
  if (path.empty() || path == "-") {
    fn(std::cout);
    return;
  }
  std::ofstream out(path);
  if (!out) throw InputError("cannot write '" + path + "'");
  fn(out);
}

Family parse_family(const std::string& s) {
  for (Family f : {Family::Path, Family::Cycle, Family::Star, Family::Complete, Family::Gnp, Family::RandomRegular}) {
    if (family_name(f) == s) return f;
  }
  throw InputError("unknown family '" + s + "'");
}

// Corpus line: family n=N [p=P] [d=D] [seed=S] [min_degree=K] [forbid_isolated_edges]
GenSpec parse_corpus_line(const std::string& line, std::uint64_t default_seed) {
  std::istringstream ss(line);
  std::string family;
  ss >> family;
  GenSpec spec;
  spec.family = parse_family(family);
  spec.seed = default_seed;
  for (std::string tok; ss >> tok;) {
    const auto eq = tok.find('=');
    const std::string key = tok.substr(0, eq);
    const std::string val = eq == std::string::npos ? "" : tok.substr(eq + 1);
    if (key == "n") spec.n = std::stoul(val);
    else if (key == "p") spec.p = std::stod(val);
    else if (key == "d") spec.d = std::stoul(val);
    else if (key == "seed") spec.seed = std::stoull(val);
    else if (key == "min_degree") spec.min_degree = std::stoul(val);
    else if (key == "forbid_isolated_edges") spec.forbid_isolated_edges = true;
    else throw InputError("unknown corpus field '" + key + "'");
  }
  return spec;
}

std::vector<GenSpec> load_corpus(const std::string& path, std::uint64_t seed) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open corpus file '" + path + "'");
  std::vector<GenSpec> out;
  for (std::string line; std::getline(in, line);) {
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    out.push_back(parse_corpus_line(line, seed));
  }
  return out;
}

OrderPolicy parse_order(const std::string& s) {
  if (s == "asc") return OrderPolicy::ascending();
  if (s == "desc") return OrderPolicy::descending();
  if (s.rfind("random:", 0) == 0) return OrderPolicy::random(std::stoull(s.substr(7)));
  throw InputError("order must be asc, desc or random:SEED");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"r-distant irregularity strength: exact search, greedy baseline, randomized construction"};
  app.require_subcommand(1);
  std::uint64_t root_seed = 0;
  app.add_option("--seed", root_seed, "root seed; subcommands derive their seeds from it unless given their own");

  // gen
  auto* gen = app.add_subcommand("gen", "generate a graph as an edge list");
  std::string gen_family, gen_out;
  GenSpec gen_spec;
  std::optional<std::uint64_t> gen_seed;
  gen->add_option("--family", gen_family, "path|cycle|star|complete|gnp|random_regular")->required();
  gen->add_option("--n", gen_spec.n, "vertex count")->required();
  gen->add_option("--p", gen_spec.p, "edge probability (gnp)");
  gen->add_option("--d", gen_spec.d, "degree (random_regular)");
  gen->add_option("--min-degree", gen_spec.min_degree, "reject graphs below this minimum degree");
  gen->add_flag("--forbid-isolated-edges", gen_spec.forbid_isolated_edges, "reject graphs with an isolated edge");
  gen->add_option("--graph-seed", gen_seed, "generator seed (default: root seed)");
  gen->add_option("--out", gen_out, "output file (default stdout)");

  // exact
  auto* exact = app.add_subcommand("exact", "exact s_r by backtracking");
  std::string ex_graph;
  int ex_r = 1;
  Colour ex_kmax = 12;
  std::uint64_t ex_budget = kDefaultNodeBudget;
  exact->add_option("--graph", ex_graph, "edge-list file")->required();
  exact->add_option("--r", ex_r, "distance")->required();
  exact->add_option("--kmax", ex_kmax, "largest palette to try");
  exact->add_option("--budget", ex_budget, "search node budget");

  // greedy
  auto* greedy = app.add_subcommand("greedy", "sequential greedy colouring");
  std::string gr_graph, gr_order = "asc", gr_out;
  int gr_r = 1;
  std::optional<Colour> gr_k;
  bool gr_auto = false;
  greedy->add_option("--graph", gr_graph, "edge-list file")->required();
  greedy->add_option("--r", gr_r, "distance")->required();
  auto* k_opt = greedy->add_option("--k", gr_k, "palette size");
  greedy->add_flag("--auto", gr_auto, "smallest k <= 6Δ^{r-1} over all three orders")->excludes(k_opt);
  greedy->add_option("--order", gr_order, "asc|desc|random:SEED");
  greedy->add_option("--out", gr_out, "colouring output (default stdout)");

  // construct
  auto* cons = app.add_subcommand("construct", "randomized A/B/C construction");
  std::string co_graph, co_profile = "paper", co_diag, co_out;
  int co_r = 2, co_rounds = 50;
  std::optional<std::uint64_t> co_seed;
  bool co_fallback = false;
  cons->add_option("--graph", co_graph, "edge-list file")->required();
  cons->add_option("--r", co_r, "distance (>= 2)")->required();
  cons->add_option("--seed", co_seed, "root seed of the run (default: global --seed)");
  cons->add_option("--profile", co_profile, "paper | relaxed:BETA");
  cons->add_option("--max-rounds", co_rounds, "resampling round budget per stage");
  cons->add_option("--emit-diagnostics", co_diag, "write the diagnostics record to this JSON file");
  cons->add_flag("--fallback-greedy", co_fallback, "on failure, colour with the greedy baseline instead");
  cons->add_option("--out", co_out, "colouring output (default stdout)");

  // verify
  auto* ver = app.add_subcommand("verify", "check a colouring");
  std::string ve_graph, ve_col;
  int ve_r = 1;
  std::optional<Colour> ve_k;
  ver->add_option("--graph", ve_graph, "edge-list file")->required();
  ver->add_option("--colouring", ve_col, "colouring file (u v colour)")->required();
  ver->add_option("--r", ve_r, "distance")->required();
  ver->add_option("--k", ve_k, "palette ceiling (default: largest colour used)");

  // bench
  auto* bench = app.add_subcommand("bench", "run methods over a generated corpus");
  std::string be_corpus, be_methods = "exact,greedy", be_csv, be_jsonl;
  int be_r = 2;
  BenchOptions be_opt;
  bench->add_option("--corpus", be_corpus, "corpus file, one generator spec per line")->required();
  bench->add_option("--r", be_r, "distance")->required();
  bench->add_option("--methods", be_methods, "comma-separated subset of exact,greedy,construct");
  bench->add_option("--profile", be_opt.profile, "construct profile");
  bench->add_option("--kmax", be_opt.exact_kmax, "exact: largest palette");
  bench->add_option("--budget", be_opt.exact_budget, "exact: node budget");
  bench->add_option("--max-rounds", be_opt.max_rounds, "construct: round budget");
  bench->add_option("--workers", be_opt.workers, "parallel workers");
  bench->add_option("--csv", be_csv, "CSV output (default stdout)");
  bench->add_option("--jsonl", be_jsonl, "JSON-lines mirror");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kInputError;
  }

  try {
    if (*gen) {
      gen_spec.family = parse_family(gen_family);
      gen_spec.seed = gen_seed.value_or(root_seed);
      const Graph g = generate(gen_spec);
      emit(gen_out, [&](std::ostream& out) { write_edge_list(out, g); });
      return kOk;
    }

    if (*exact) {
      const Graph g = load_graph(ex_graph);
      const auto res = exact_strength(g, ex_r, ex_kmax, ex_budget);
      std::cout << to_json(res).dump() << '\n';
      return res.status == ExactStatus::Solved ? kOk : kMethodFailure;
    }

    if (*greedy) {
      const Graph g = load_graph(gr_graph);
      std::optional<EdgeColouring> colouring;
      json summary;
      if (gr_auto || !gr_k) {
        auto est = greedy_strength_estimate(g, gr_r, root_seed);
        summary = {{"k", est.k ? json(*est.k) : json(nullptr)}, {"bound", est.bound}, {"order", est.policy.name()}};
        colouring = std::move(est.colouring);
      } else {
        auto res = greedy_colour(g, gr_r, *gr_k, parse_order(gr_order));
        summary = {{"k", *gr_k}, {"order", gr_order}, {"conflicts_final", res.conflicts_final}};
        if (res.stuck_at) summary["stuck_at"] = *res.stuck_at;
        colouring = std::move(res.colouring);
      }
      summary["success"] = colouring.has_value();
      std::cerr << summary.dump() << '\n';
      if (!colouring) return kMethodFailure;
      emit(gr_out, [&](std::ostream& out) { write_colouring(out, g, *colouring); });
      return kOk;
    }

    if (*cons) {
      const Graph g = load_graph(co_graph);
      ConstructConfig cfg;
      cfg.profile = ThresholdProfile::parse(co_profile, static_cast<std::int64_t>(std::max<std::size_t>(2, g.max_degree())));
      cfg.seed = co_seed.value_or(root_seed);
      cfg.max_rounds = co_rounds;
      auto res = construct(g, co_r, cfg);
      json diag = to_json(res.diagnostics);
      std::optional<EdgeColouring> colouring = std::move(res.colouring);
      if (!colouring && co_fallback) {
        auto est = greedy_strength_estimate(g, co_r, cfg.seed);
        diag["fallback"] = {{"method", "greedy"}, {"k", est.k ? json(*est.k) : json(nullptr)}};
        colouring = std::move(est.colouring);
        if (colouring) diag["fallback"]["verified"] = is_r_irregular(g, *colouring, co_r, *est.k);
      }
      if (!co_diag.empty()) emit(co_diag, [&](std::ostream& out) { out << diag.dump(2) << '\n'; });
      else std::cerr << diag.dump() << '\n';
      if (!colouring) return kMethodFailure;
      emit(co_out, [&](std::ostream& out) { write_colouring(out, g, *colouring); });
      return kOk;
    }

    if (*ver) {
      const Graph g = load_graph(ve_graph);
      std::ifstream in(ve_col);
      if (!in) throw InputError("cannot open colouring file '" + ve_col + "'");
      const EdgeColouring c = parse_colouring(in, g);
      const Colour k = ve_k.value_or(c.max_colour());
      const auto report = find_conflicts(g, c, ve_r);
      const bool in_range = c.max_colour() <= k;
      json out = {{"valid", report.is_valid() && in_range}, {"k", k}, {"max_colour", c.max_colour()},
                  {"conflicts", report.total}, {"overflow", report.overflow}};
      json pairs = json::array();
      for (const auto& p : report.pairs) pairs.push_back({p.u, p.v, p.weight});
      out["pairs"] = pairs;
      std::cout << out.dump() << '\n';
      return report.is_valid() && in_range ? kOk : kMethodFailure;
    }

    if (*bench) {
      be_opt.seed = root_seed;
      const auto corpus = load_corpus(be_corpus, root_seed);
      std::vector<Method> methods;
      std::stringstream ss(be_methods);
      for (std::string m; std::getline(ss, m, ',');) methods.push_back(parse_method(m));
      const auto records = run_bench(corpus, be_r, methods, be_opt);
      emit(be_csv, [&](std::ostream& out) { write_bench_csv(out, records); });
      if (!be_jsonl.empty()) emit(be_jsonl, [&](std::ostream& out) { write_bench_jsonl(out, records); });
      return kOk;
    }
  } catch (const ParseError& e) {
    std::cerr << "input error: " << e.what() << '\n';
    return kInputError;
  } catch (const InputError& e) {
    std::cerr << "input error: " << e.what() << '\n';
    return kInputError;
  } catch (const ArgumentError& e) {
    std::cerr << "invalid argument: " << e.what() << '\n';
    return kInputError;
  } catch (const ProblemUndefined& e) {
    std::cerr << "undefined: " << e.what() << '\n';
    return kInputError;
  } catch (const CapacityError& e) {
    std::cerr << "capacity: " << e.what() << '\n';
    return kInputError;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid argument: " << e.what() << '\n';
    return kInputError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kMethodFailure;
  }
  return kOk;
}
