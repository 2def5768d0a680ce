#pragma once

#include <map>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "stc/polynomial.hpp"

namespace stc {

// k-regular graph given as an edge list; vertices are arbitrary integer ids.
struct RegularGraph {
  int k = 0;                         // common vertex degree
  int edges = 0;                     // number of edges = polynomial variables
  std::vector<std::vector<int>> blocks;  // incident edge indices per vertex, vertex-id order
  std::vector<int> signs;            // +-1 per block
};

// Format: one "u v" pair per line; optionally a final line
// "signs: +-+..." listing one sign per block in vertex-id order.
inline RegularGraph parse_graph(const std::string& text) {
  std::map<int, std::vector<int>> incident;
  std::set<std::pair<int, int>> seen;
  std::string signs_line;
  int edge_idx = 0;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    auto h = line.find('#');
    if (h != std::string::npos) line = line.substr(0, h);
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    if (line.find("signs:") != std::string::npos) {
      signs_line = line.substr(line.find("signs:") + 6);
      continue;
    }
    std::istringstream ls(line);
    int u, v;
    if (!(ls >> u >> v)) throw std::invalid_argument("bad edge line: " + line);
    if (u == v) throw std::invalid_argument("loop edge not allowed");
    auto key = std::minmax(u, v);
    if (!seen.insert(key).second) throw std::invalid_argument("repeated edge");
    incident[u].push_back(edge_idx);
    incident[v].push_back(edge_idx);
    ++edge_idx;
  }
  if (incident.empty()) throw std::invalid_argument("empty graph");

  RegularGraph g;
  g.edges = edge_idx;
  g.k = int(incident.begin()->second.size());
  for (const auto& [v, inc] : incident) {
    if (int(inc.size()) != g.k)
      throw std::invalid_argument("graph is not regular");
    g.blocks.push_back(inc);
  }
  if (g.k < 3)
    throw std::invalid_argument(
        "vertex degree must be at least 3; degree-2 graphs do not yield "
        "trace-free solutions (cycle counterexample)");
  g.signs.assign(g.blocks.size(), 1);
  if (!signs_line.empty()) {
    std::vector<int> s;
    for (char ch : signs_line) {
      if (ch == '+') s.push_back(1);
      else if (ch == '-') s.push_back(-1);
      else if (ch != ' ' && ch != '\t' && ch != '\r')
        throw std::invalid_argument("bad sign character");
    }
    if (s.size() != g.blocks.size())
      throw std::invalid_argument("sign count does not match block count");
    g.signs = s;
  }
  return g;
}

// P(x) = sum over blocks of eps_I x_I, one squarefree monomial per vertex.
template <class T>
Polynomial<T> graph_polynomial(const RegularGraph& g) {
  Polynomial<T> p(g.edges);
  for (size_t b = 0; b < g.blocks.size(); ++b) {
    std::vector<int> e(g.edges, 0);
    for (int idx : g.blocks[b]) e[idx] = 1;
    p.add_term(e, scalar_traits<T>::from_long(g.signs[b]));
  }
  return p;
}

}  // namespace stc
