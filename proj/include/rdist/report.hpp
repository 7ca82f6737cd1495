#pragma once

// JSON views of results. Requires nlohmann/json (vendor/json.hpp).

#include <json.hpp>

#include "rdist/bench.hpp"
#include "rdist/construct.hpp"
#include "rdist/exact.hpp"
#include "rdist/greedy.hpp"

namespace rdist {

using nlohmann::json;

inline json to_json(const EdgeColouring& c) { return json(c.colours); }

inline json to_json(const StageStats& s) {
  return {{"processed", s.processed},
          {"max_forbidden", s.max_forbidden},
          {"max_candidates", s.max_candidates},
          {"backward_toggles", s.backward_toggles},
          {"forbidden_over_backward", s.forbidden_over_backward},
          {"f6_bound_exceeded", s.f6_bound_exceeded}};
}

inline json to_json(const StageFailure& f) {
  json j = {{"stage", f.stage}, {"reason", f.reason}};
  j["vertex"] = f.vertex ? json(*f.vertex) : json(nullptr);
  if (!f.residues.empty()) {
    json list = json::array();
    for (std::size_t i = 0; i < f.residues.size() && i < 100; ++i) list.push_back({f.residues[i].first, f.residues[i].second});
    j["residues"] = list;
    j["residue_violations"] = f.residues.size();
  }
  return j;
}

inline json to_json(const ConstructDiagnostics& d) {
  json failures = json::array();
  for (const auto& f : d.failures) failures.push_back(to_json(f));
  return {{"seed", d.seed},
          {"profile", d.profile},
          {"delta", d.palette.delta_max},
          {"r", d.palette.r},
          {"Q", d.palette.Q},
          {"q", d.palette.q},
          {"k_total", d.palette.k_total},
          {"parts", {{"A", d.size_A}, {"B", d.size_B}, {"C", d.size_C}}},
          {"e_prime_edges", d.size_e_prime},
          {"stage_rounds", {{"ordering", d.ordering_rounds}, {"e_prime", d.cset_rounds}, {"subtraction", d.subtraction_rounds}}},
          {"ordering_violations_per_round", d.ordering_violations_per_round},
          {"feature_violations", d.feature_violations},
          {"stages", {{"A", to_json(d.stats_A)}, {"B", to_json(d.stats_B)}, {"C", to_json(d.stats_C)}, {"fix_B_changes", d.fix_B_changes}}},
          {"boundaries", d.boundaries},
          {"reached", d.reached},
          {"invariant_violations", d.invariant_violations},
          {"colour_range", {d.colour_min, d.colour_max}},
          {"failures", failures},
          {"verified", d.verified}};
}

inline json to_json(const ExactResult& r) {
  json j = {{"nodes", r.nodes}, {"millis", r.elapsed.count()}, {"start_k", r.start_k}};
  switch (r.status) {
    case ExactStatus::Solved: j["strength"] = *r.strength; break;
    case ExactStatus::AboveKmax: j["strength"] = "unknown above k_max"; break;
    case ExactStatus::BudgetExceeded: j["strength"] = "budget exceeded"; break;
  }
  if (r.witness) j["witness"] = to_json(*r.witness);
  return j;
}

inline json to_json(const BenchRecord& rec) {
  return {{"graph", rec.graph},
          {"n", rec.n},
          {"m", rec.m},
          {"max_degree", rec.max_degree},
          {"min_degree", rec.min_degree},
          {"r", rec.r},
          {"method", method_name(rec.method)},
          {"k_result", rec.k_result ? json(*rec.k_result) : json(nullptr)},
          {"verified", rec.verified},
          {"elapsed_ms", rec.elapsed_ms},
          {"seed", rec.seed},
          {"status", rec.status}};
}

inline void write_bench_jsonl(std::ostream& out, const std::vector<BenchRecord>& records) {
  for (const auto& rec : records) out << to_json(rec).dump() << '\n';
}

}  // namespace rdist
