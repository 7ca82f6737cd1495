#pragma once

#include <istream>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "rdist/error.hpp"
#include "rdist/graph.hpp"

namespace rdist {

namespace detail {

// Splits a line into whitespace-separated tokens, dropping a trailing '#' comment.
inline std::vector<std::string> tokenize(const std::string& line) {
  std::vector<std::string> tokens;
  std::istringstream in(line.substr(0, line.find('#')));
  for (std::string tok; in >> tok;) tokens.push_back(std::move(tok));
  return tokens;
}

}  // namespace detail

/// Reads the "u v" edge-list format. Labels are arbitrary tokens and are
/// numbered in order of first appearance; the label table is kept on the graph.
inline Graph parse_edge_list(std::istream& in) {
  std::unordered_map<std::string, Vertex> ids;
  std::vector<std::string> labels;
  std::vector<Edge> edges;
  std::set<std::pair<Vertex, Vertex>> seen;

  auto intern = [&](const std::string& label) {
    auto [it, inserted] = ids.try_emplace(label, static_cast<Vertex>(labels.size()));
    if (inserted) labels.push_back(label);
    return it->second;
  };

  std::string line;
  for (std::size_t lineno = 1; std::getline(in, line); ++lineno) {
    auto tokens = detail::tokenize(line);
    if (tokens.empty()) continue;
    if (tokens.size() != 2) throw ParseError(lineno, "expected \"u v\", got " + std::to_string(tokens.size()) + " fields");
    if (tokens[0] == tokens[1]) throw ParseError(lineno, "self-loop on " + tokens[0]);
    Vertex u = intern(tokens[0]);
    Vertex v = intern(tokens[1]);
    if (!seen.emplace(std::min(u, v), std::max(u, v)).second) {
      throw ParseError(lineno, "duplicate edge " + tokens[0] + " " + tokens[1]);
    }
    edges.push_back({u, v});
  }
  const auto n = labels.size();
  return Graph(n, std::move(edges), std::move(labels));
}

inline Graph parse_edge_list(const std::string& text) {
  std::istringstream in(text);
  return parse_edge_list(in);
}

/// Writes one "u v" line per edge, in edge-index order, using the graph's labels.
inline void write_edge_list(std::ostream& out, const Graph& g) {
  for (const auto& e : g.edges()) out << g.label(e.u) << ' ' << g.label(e.v) << '\n';
}

}  // namespace rdist
