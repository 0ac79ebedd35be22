// Brute-force references for graph distances and WL fingerprints, built on
// dense matrices and fully expanded strings.

#pragma once

#include <algorithm>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "simll/graph.hpp"

namespace oracle {

constexpr int kInf = 1 << 20;

// Random combinational graph: the first `inputs` nodes are inputs, every
// later node reads 1..3 earlier nodes (repeats allowed).
inline simll::CircuitGraph random_graph(std::mt19937_64& rng, std::size_t nodes, std::size_t inputs,
                                        std::size_t feature_kinds = 3) {
  static const char* kinds[] = {"AND", "OR", "NAND", "XOR", "NOT"};
  std::vector<std::string> names, features;
  std::vector<simll::Link> links;
  std::vector<bool> po(nodes, false);
  for (std::size_t v = 0; v < nodes; ++v) {
    names.push_back("n" + std::to_string(v));
    if (v < inputs) {
      features.emplace_back(simll::kInputFeature);
      continue;
    }
    features.emplace_back(kinds[rng() % feature_kinds]);
    const auto fanin = 1 + rng() % 3;
    for (std::uint32_t p = 0; p < fanin; ++p)
      links.push_back({static_cast<simll::NodeId>(rng() % v), static_cast<simll::NodeId>(v), p});
  }
  for (std::size_t v = nodes - 2; v < nodes; ++v) po[v] = true;
  return simll::CircuitGraph(names, features, links, po);
}

// Undirected adjacency matrix; `drop` removes one edge pair.
inline std::vector<std::vector<bool>> adjacency(const simll::CircuitGraph& g, int drop_a = -1, int drop_b = -1) {
  const auto n = g.node_count();
  std::vector<std::vector<bool>> a(n, std::vector<bool>(n, false));
  for (const auto& l : g.links()) {
    if (l.source == l.target) continue;
    a[l.source][l.target] = a[l.target][l.source] = true;
  }
  if (drop_a >= 0) a[drop_a][drop_b] = a[drop_b][drop_a] = false;
  return a;
}

inline std::vector<std::vector<int>> floyd_warshall(const std::vector<std::vector<bool>>& a) {
  const auto n = a.size();
  std::vector<std::vector<int>> d(n, std::vector<int>(n, kInf));
  for (std::size_t i = 0; i < n; ++i) {
    d[i][i] = 0;
    for (std::size_t j = 0; j < n; ++j)
      if (a[i][j]) d[i][j] = 1;
  }
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) d[i][j] = std::min(d[i][j], d[i][k] + d[k][j]);
  return d;
}

// Labels by enumeration: pairs (du, dv) with both >= 1 ordered by du + dv,
// then by min(du, dv), numbered from 2. The symmetric pair shares a label.
inline int drnl_enumerated(int du, int dv) {
  if (du == 0 || dv == 0) return 1;
  int label = 2;
  for (int d = 2;; ++d) {
    for (int m = 1; m <= d / 2; ++m) {
      if (d == du + dv && m == std::min(du, dv)) return label;
      ++label;
    }
  }
}

// Recursive neighbourhood expansion: T(v, 0) is the initial string and
// T(v, k) wraps T(v, k-1) with the sorted list of neighbour expansions.
inline std::vector<std::string> expand(const std::vector<std::vector<bool>>& adj,
                                       const std::vector<std::string>& initial, std::uint32_t rounds) {
  auto t = initial;
  const auto n = adj.size();
  for (std::uint32_t k = 0; k < rounds; ++k) {
    std::vector<std::string> next(n);
    for (std::size_t v = 0; v < n; ++v) {
      std::vector<std::string> nb;
      for (std::size_t w = 0; w < n; ++w)
        if (adj[v][w]) nb.push_back(t[w]);
      std::sort(nb.begin(), nb.end());
      std::string s = "(" + t[v] + ";";
      for (const auto& x : nb) s += x + ",";
      next[v] = s + ")";
    }
    t = std::move(next);
  }
  return t;
}

inline std::vector<std::string> node_strings(const simll::CircuitGraph& g, std::uint32_t hops) {
  std::vector<std::string> init;
  for (simll::NodeId v = 0; v < g.node_count(); ++v) init.push_back(g.feature(v));
  return expand(adjacency(g), init, hops);
}

// Fingerprint of candidate link u-v: the sorted expansions of every node
// within `hops` of u or v, using the induced subgraph without the u-v edge
// and DRNL labels from distances inside it.
inline std::vector<std::string> link_strings(const simll::CircuitGraph& g, simll::NodeId u, simll::NodeId v,
                                             std::uint32_t hops) {
  const auto full = floyd_warshall(adjacency(g));
  std::vector<std::size_t> members;
  for (std::size_t x = 0; x < g.node_count(); ++x)
    if (std::min(full[u][x], full[v][x]) <= static_cast<int>(hops)) members.push_back(x);
  const auto cut = adjacency(g, static_cast<int>(u), static_cast<int>(v));
  const auto m = members.size();
  std::vector<std::vector<bool>> sub(m, std::vector<bool>(m, false));
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) sub[i][j] = cut[members[i]][members[j]];
  const auto d = floyd_warshall(sub);
  const auto iu = std::find(members.begin(), members.end(), u) - members.begin();
  const auto iv = std::find(members.begin(), members.end(), v) - members.begin();
  std::vector<std::string> init;
  for (std::size_t i = 0; i < m; ++i) {
    int label;
    if (static_cast<long>(i) == iu || static_cast<long>(i) == iv) label = 1;
    else if (d[iu][i] >= kInf || d[iv][i] >= kInf) label = 0;
    else label = drnl_enumerated(d[iu][i], d[iv][i]);
    init.push_back(g.feature(members[i]) + ":" + std::to_string(label));
  }
  auto t = expand(sub, init, hops);
  std::sort(t.begin(), t.end());
  return t;
}

// Canonical partition: each class sorted, classes ordered by first member.
template <typename Key>
std::vector<std::vector<std::uint32_t>> partition(const std::vector<Key>& keys) {
  std::map<Key, std::vector<std::uint32_t>> groups;
  for (std::uint32_t i = 0; i < keys.size(); ++i) groups[keys[i]].push_back(i);
  std::vector<std::vector<std::uint32_t>> out;
  for (auto& [_, members] : groups) out.push_back(members);
  std::sort(out.begin(), out.end());
  return out;
}

inline std::vector<std::vector<std::uint32_t>> canonical(std::vector<std::vector<std::uint32_t>> p) {
  for (auto& c : p) std::sort(c.begin(), c.end());
  std::sort(p.begin(), p.end());
  return p;
}

}  // namespace oracle
