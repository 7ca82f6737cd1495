#pragma once

#include <atomic>
#include <chrono>
#include <cstdint>
#include <mutex>
#include <optional>
#include <ostream>
#include <string>
#include <thread>
#include <vector>

#include "rdist/colouring.hpp"
#include "rdist/construct.hpp"
#include "rdist/exact.hpp"
#include "rdist/generate.hpp"
#include "rdist/greedy.hpp"

namespace rdist {

enum class Method { Exact, Greedy, Construct };

inline std::string method_name(Method m) {
  switch (m) {
    case Method::Exact: return "exact";
    case Method::Greedy: return "greedy";
    case Method::Construct: return "construct";
  }
  return "?";
}

inline Method parse_method(const std::string& s) {
  if (s == "exact") return Method::Exact;
  if (s == "greedy") return Method::Greedy;
  if (s == "construct") return Method::Construct;
  throw ArgumentError("unknown method '" + s + "'");
}

struct BenchRecord {
  std::string graph;
  std::size_t n = 0, m = 0, max_degree = 0, min_degree = 0;
  int r = 0;
  Method method = Method::Exact;
  std::optional<Colour> k_result;
  bool verified = false;  // set only from an actual verifier call
  double elapsed_ms = 0.0;
  std::uint64_t seed = 0;
  std::string status;     // "ok" or a failure description
};

struct BenchOptions {
  Colour exact_kmax = 12;
  std::uint64_t exact_budget = kDefaultNodeBudget;
  std::string profile = "relaxed:1.5";
  int max_rounds = 50;
  std::uint64_t seed = 0;
  unsigned workers = 1;
};

namespace detail {

inline BenchRecord bench_one(const GenSpec& spec, int r, Method method, const BenchOptions& opt) {
  BenchRecord rec;
  rec.graph = spec.name();
  rec.r = r;
  rec.method = method;
  rec.seed = opt.seed;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    const Graph g = generate(spec);
    rec.n = g.n();
    rec.m = g.m();
    rec.max_degree = g.max_degree();
    rec.min_degree = g.n() ? g.min_degree() : 0;
    std::optional<EdgeColouring> colouring;
    switch (method) {
      case Method::Exact: {
        auto res = exact_strength(g, r, opt.exact_kmax, opt.exact_budget);
        if (res.status == ExactStatus::Solved) {
          rec.k_result = res.strength;
          colouring = std::move(res.witness);
        } else {
          rec.status = res.status == ExactStatus::AboveKmax ? "above kmax" : "budget exceeded";
        }
        break;
      }
      case Method::Greedy: {
        auto est = greedy_strength_estimate(g, r, opt.seed);
        if (est.k) {
          rec.k_result = est.k;
          colouring = std::move(est.colouring);
        } else {
          rec.status = "bound exceeded: no k <= " + std::to_string(est.bound);
        }
        break;
      }
      case Method::Construct: {
        ConstructConfig cfg;
        cfg.profile = ThresholdProfile::parse(opt.profile, static_cast<std::int64_t>(std::max<std::size_t>(2, g.max_degree())));
        cfg.seed = opt.seed;
        cfg.max_rounds = opt.max_rounds;
        auto res = construct(g, r, cfg);
        if (res.success()) {
          rec.k_result = res.diagnostics.palette.k_total;
          colouring = std::move(res.colouring);
        } else {
          const auto& f = res.diagnostics.failures.front();
          rec.status = f.stage + ": " + f.reason;
        }
        break;
      }
    }
    if (colouring && rec.k_result) {
      rec.verified = is_r_irregular(g, *colouring, r, *rec.k_result);
      rec.status = rec.verified ? "ok" : "verifier rejected";
    }
  } catch (const std::exception& e) {
    rec.status = std::string("error: ") + e.what();
  }
  rec.elapsed_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  return rec;
}

}  // namespace detail

/// One record per (graph, method), in corpus-major order regardless of the
/// number of workers. Failures are recorded and the sweep continues.
inline std::vector<BenchRecord> run_bench(const std::vector<GenSpec>& corpus, int r, const std::vector<Method>& methods,
                                          const BenchOptions& opt = {}) {
  std::vector<BenchRecord> out(corpus.size() * methods.size());
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i; (i = next++) < out.size();) {
      out[i] = detail::bench_one(corpus[i / methods.size()], r, methods[i % methods.size()], opt);
    }
  };
  const unsigned workers = std::max(1u, opt.workers);
  if (workers == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }
  return out;
}

inline void write_bench_csv(std::ostream& out, const std::vector<BenchRecord>& records) {
  out << "graph,n,m,max_degree,min_degree,r,method,k_result,verified,elapsed_ms,seed,status\n";
  for (const auto& rec : records) {
    std::string status = rec.status;
    for (auto& ch : status) {
      if (ch == ',' || ch == '\n') ch = ';';
    }
    std::string graph = rec.graph;
    for (auto& ch : graph) {
      if (ch == ',') ch = ' ';
    }
    out << graph << ',' << rec.n << ',' << rec.m << ',' << rec.max_degree << ',' << rec.min_degree << ',' << rec.r
        << ',' << method_name(rec.method) << ',' << (rec.k_result ? std::to_string(*rec.k_result) : "") << ','
        << (rec.verified ? "true" : "false") << ',' << rec.elapsed_ms << ',' << rec.seed << ',' << status << '\n';
  }
}

}  // namespace rdist
