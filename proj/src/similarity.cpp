#include "simll/similarity.hpp"

#include <algorithm>

#include "simll/hash.hpp"

namespace simll {

namespace {

// Refinement rounds over one adjacency structure. `initial` holds the
// round-0 strings.
template <typename Adjacency>
std::string round_string(const std::vector<NodeState>& states, const Adjacency& adj, std::size_t v) {
  std::vector<NodeState> nb;
  nb.reserve(adj[v].size());
  for (auto w : adj[v]) nb.push_back(states[w]);
  return concat_state(states[v], std::move(nb));
}

std::vector<NodeState> refine_serial(const std::vector<std::vector<std::uint32_t>>& adj,
                                     const std::vector<std::string>& initial, std::uint32_t hops,
                                     StateTable& table) {
  std::vector<NodeState> states(initial.size());
  for (std::size_t v = 0; v < initial.size(); ++v) states[v] = table.update(initial[v]);
  for (std::uint32_t k = 1; k <= hops; ++k) {
    std::vector<NodeState> next(states.size());
    for (std::size_t v = 0; v < states.size(); ++v) next[v] = table.update(round_string(states, adj, v));
    states = std::move(next);
  }
  return states;
}

std::vector<std::vector<std::uint32_t>> node_adjacency(const CircuitGraph& g) {
  std::vector<std::vector<std::uint32_t>> adj(g.node_count());
  for (NodeId v = 0; v < g.node_count(); ++v) {
    const auto nb = g.neighbors(v);
    adj[v].assign(nb.begin(), nb.end());
  }
  return adj;
}

std::vector<std::string> subgraph_initial(const CircuitGraph& g, const EnclosingSubgraph& sg) {
  std::vector<std::string> init(sg.size());
  for (std::size_t i = 0; i < sg.size(); ++i)
    init[i] = g.feature(sg.nodes[i]) + ":" + std::to_string(sg.labels[i]);
  return init;
}

template <typename Key>
ClusterSet group_by(const std::vector<Key>& keys, std::uint64_t (*hash)(const Key&)) {
  ClusterSet cs;
  std::map<Key, std::size_t> slot;
  for (std::uint32_t i = 0; i < keys.size(); ++i) {
    auto [it, inserted] = slot.emplace(keys[i], cs.clusters.size());
    if (inserted) {
      cs.clusters.emplace_back();
      cs.fingerprints.push_back(hash(keys[i]));
    }
    cs.clusters[it->second].push_back(i);
  }
  return cs;
}

std::uint64_t hash_state(const NodeState& s) { return fnv1a(std::span<const std::uint32_t>(&s, 1)); }
std::uint64_t hash_fingerprint(const LinkFingerprint& f) { return fnv1a(std::span<const std::uint32_t>(f)); }

}  // namespace

NodeState StateTable::update(std::string_view s) {
  auto [it, inserted] = table_.emplace(std::string(s), static_cast<NodeState>(table_.size()));
  return it->second;
}

std::string concat_state(NodeState own, std::vector<NodeState> neighbor_states) {
  std::vector<std::string> parts;
  parts.reserve(neighbor_states.size());
  for (auto s : neighbor_states) parts.push_back(std::to_string(s));
  std::sort(parts.begin(), parts.end());
  std::string out = std::to_string(own);
  out += '|';
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out += ',';
    out += parts[i];
  }
  return out;
}

std::size_t ClusterSet::element_count() const {
  std::size_t n = 0;
  for (const auto& c : clusters) n += c.size();
  return n;
}

std::vector<NodeState> node_states(const CircuitGraph& g, std::uint32_t hops, StateTable& table,
                                   Execution exec) {
  const auto adj = node_adjacency(g);
  std::vector<std::string> initial(g.node_count());
  for (NodeId v = 0; v < g.node_count(); ++v) initial[v] = g.feature(v);
  if (exec == Execution::Serial) return refine_serial(adj, initial, hops, table);

  const auto count = static_cast<std::int64_t>(g.node_count());
  std::vector<NodeState> states(initial.size());
  for (std::size_t v = 0; v < initial.size(); ++v) states[v] = table.update(initial[v]);
  std::vector<std::string> strings(initial.size());
  for (std::uint32_t k = 1; k <= hops; ++k) {
#pragma omp parallel for schedule(static)
    for (std::int64_t v = 0; v < count; ++v) strings[v] = round_string(states, adj, static_cast<std::size_t>(v));
    for (std::size_t v = 0; v < strings.size(); ++v) states[v] = table.update(strings[v]);
  }
  return states;
}

ClusterSet node_clusters(const CircuitGraph& g, std::uint32_t hops, Execution exec) {
  StateTable table;
  return group_by<NodeState>(node_states(g, hops, table, exec), hash_state);
}

LinkFingerprint link_fingerprint(const CircuitGraph& g, NodeId u, NodeId v, std::uint32_t hops,
                                 StateTable& table, SubgraphOptions opts) {
  const auto sg = extract_enclosing_subgraph(g, u, v, hops, opts);
  auto states = refine_serial(sg.adjacency, subgraph_initial(g, sg), hops, table);
  std::sort(states.begin(), states.end());
  return states;
}

ClusterSet link_clusters(const CircuitGraph& g, std::uint32_t hops, Execution exec, SubgraphOptions opts) {
  const auto links = g.links();
  std::vector<LinkFingerprint> prints(links.size());
  StateTable table;

  if (exec == Execution::Serial) {
    for (std::size_t i = 0; i < links.size(); ++i)
      prints[i] = link_fingerprint(g, links[i].source, links[i].target, hops, table, opts);
    return group_by<LinkFingerprint>(prints, hash_fingerprint);
  }

  // Rounds are synchronized across all links; interning happens serially in
  // (link, local node) order so tokens are reproducible.
  const auto count = static_cast<std::int64_t>(links.size());
  std::vector<EnclosingSubgraph> subgraphs(links.size());
  std::vector<std::vector<std::string>> strings(links.size());
#pragma omp parallel for schedule(dynamic, 16)
  for (std::int64_t i = 0; i < count; ++i) {
    subgraphs[i] = extract_enclosing_subgraph(g, links[i].source, links[i].target, hops, opts);
    strings[i] = subgraph_initial(g, subgraphs[i]);
  }
  std::vector<std::vector<NodeState>> states(links.size());
  for (std::size_t i = 0; i < links.size(); ++i) {
    states[i].resize(strings[i].size());
    for (std::size_t a = 0; a < strings[i].size(); ++a) states[i][a] = table.update(strings[i][a]);
  }
  for (std::uint32_t k = 1; k <= hops; ++k) {
#pragma omp parallel for schedule(dynamic, 16)
    for (std::int64_t i = 0; i < count; ++i) {
      for (std::size_t a = 0; a < strings[i].size(); ++a)
        strings[i][a] = round_string(states[i], subgraphs[i].adjacency, a);
    }
    for (std::size_t i = 0; i < links.size(); ++i) {
      for (std::size_t a = 0; a < strings[i].size(); ++a) states[i][a] = table.update(strings[i][a]);
    }
  }
  for (std::size_t i = 0; i < links.size(); ++i) {
    prints[i] = std::move(states[i]);
    std::sort(prints[i].begin(), prints[i].end());
  }
  return group_by<LinkFingerprint>(prints, hash_fingerprint);
}

ClusterSummary summarize(const ClusterSet& cs) {
  ClusterSummary s;
  s.clusters = cs.clusters.size();
  std::size_t shared = 0;
  for (const auto& c : cs.clusters) {
    s.elements += c.size();
    ++s.histogram[c.size()];
    if (c.size() >= 2) shared += c.size();
  }
  s.fraction_shared = s.elements ? static_cast<double>(shared) / static_cast<double>(s.elements) : 0.0;
  return s;
}

ClusterReport cluster_stats(const ClusterSet& nc, const ClusterSet& lc) {
  return {summarize(nc), summarize(lc)};
}

}  // namespace simll
