#include "simll/graph.hpp"

#include <algorithm>
#include <deque>
#include <sstream>
#include <stdexcept>

namespace simll {

namespace {

constexpr std::uint32_t kFar = static_cast<std::uint32_t>(-1);

// BFS over local adjacency; kFar for unreachable nodes.
std::vector<std::uint32_t> local_bfs(const std::vector<std::vector<std::uint32_t>>& adj,
                                     std::uint32_t source) {
  std::vector<std::uint32_t> dist(adj.size(), kFar);
  std::deque<std::uint32_t> queue{source};
  dist[source] = 0;
  while (!queue.empty()) {
    const auto x = queue.front();
    queue.pop_front();
    for (auto y : adj[x]) {
      if (dist[y] != kFar) continue;
      dist[y] = dist[x] + 1;
      queue.push_back(y);
    }
  }
  return dist;
}

}  // namespace

CircuitGraph::CircuitGraph(std::vector<std::string> names, std::vector<std::string> features,
                           std::vector<Link> links, std::vector<bool> primary_output)
    : names_(std::move(names)),
      features_(std::move(features)),
      primary_output_(std::move(primary_output)),
      links_(std::move(links)) {
  if (features_.size() != names_.size()) throw std::invalid_argument("features/names size mismatch");
  if (primary_output_.empty()) primary_output_.assign(names_.size(), false);
  for (const auto& l : links_) {
    if (l.source >= names_.size() || l.target >= names_.size())
      throw std::invalid_argument("link references unknown node");
  }
  index();
}

void CircuitGraph::index() {
  const auto count = names_.size();
  by_name_.clear();
  for (NodeId v = 0; v < count; ++v) by_name_.emplace(names_[v], v);
  out_links_.assign(count, {});
  in_links_.assign(count, {});
  neighbors_.assign(count, {});
  for (std::uint32_t i = 0; i < links_.size(); ++i) {
    const auto& l = links_[i];
    out_links_[l.source].push_back(i);
    in_links_[l.target].push_back(i);
    neighbors_[l.source].push_back(l.target);
    neighbors_[l.target].push_back(l.source);
  }
  for (auto& nb : neighbors_) {
    std::sort(nb.begin(), nb.end());
    nb.erase(std::unique(nb.begin(), nb.end()), nb.end());
  }
}

std::optional<NodeId> CircuitGraph::find(std::string_view net) const {
  auto it = by_name_.find(std::string(net));
  if (it == by_name_.end()) return std::nullopt;
  return it->second;
}

NodeId CircuitGraph::id(std::string_view net) const {
  auto v = find(net);
  if (!v) throw std::out_of_range("unknown node " + std::string(net));
  return *v;
}

std::string CircuitGraph::link_name(const Link& l) const {
  return names_[l.source] + "->" + names_[l.target];
}

CircuitGraph to_graph(const Netlist& n) {
  std::vector<std::string> names;
  std::vector<std::string> features;
  for (const auto& in : n.inputs) {
    names.push_back(in);
    features.emplace_back(kInputFeature);
  }
  for (const auto& k : n.key_inputs) {
    names.push_back(k);
    features.emplace_back(kInputFeature);
  }
  for (const auto& g : n.gates) {
    names.push_back(g.output);
    features.emplace_back(to_string(g.type));
  }
  std::unordered_map<std::string, NodeId> id;
  for (NodeId v = 0; v < names.size(); ++v) id.emplace(names[v], v);

  const auto first_gate = static_cast<NodeId>(n.inputs.size() + n.key_inputs.size());
  std::vector<Link> links;
  for (std::size_t gi = 0; gi < n.gates.size(); ++gi) {
    const auto& g = n.gates[gi];
    for (std::uint32_t pin = 0; pin < g.inputs.size(); ++pin) {
      links.push_back({id.at(g.inputs[pin]), static_cast<NodeId>(first_gate + gi), pin});
    }
  }
  std::vector<bool> po(names.size(), false);
  for (const auto& out : n.outputs) po[id.at(out)] = true;
  return CircuitGraph(std::move(names), std::move(features), std::move(links), std::move(po));
}

std::vector<std::string> undirected_neighbors(const CircuitGraph& g, std::string_view net) {
  std::vector<std::string> out;
  for (auto w : g.neighbors(g.id(net))) out.push_back(g.name(w));
  return out;
}

std::map<NodeId, std::uint32_t> bfs_distances(const CircuitGraph& g, NodeId v, std::uint32_t hops) {
  std::map<NodeId, std::uint32_t> dist{{v, 0}};
  std::deque<NodeId> queue{v};
  while (!queue.empty()) {
    const auto x = queue.front();
    queue.pop_front();
    const auto dx = dist[x];
    if (dx == hops) continue;
    for (auto y : g.neighbors(x)) {
      if (dist.emplace(y, dx + 1).second) queue.push_back(y);
    }
  }
  return dist;
}

bool reaches(const CircuitGraph& g, NodeId from, NodeId to) {
  if (from == to) return true;
  std::vector<bool> seen(g.node_count(), false);
  std::vector<NodeId> stack{from};
  seen[from] = true;
  while (!stack.empty()) {
    const auto x = stack.back();
    stack.pop_back();
    for (auto li : g.out_links(x)) {
      const auto y = g.link(li).target;
      if (y == to) return true;
      if (!seen[y]) {
        seen[y] = true;
        stack.push_back(y);
      }
    }
  }
  return false;
}

std::uint32_t drnl_label(std::optional<std::uint32_t> du, std::optional<std::uint32_t> dv) {
  if (!du || !dv) return 0;
  const auto d = *du + *dv;
  const auto half = d / 2;
  return 1 + std::min(*du, *dv) + half * (half + d % 2 - 1);
}

EnclosingSubgraph extract_enclosing_subgraph(const CircuitGraph& g, NodeId u, NodeId v,
                                             std::uint32_t hops, SubgraphOptions opts) {
  if (u >= g.node_count() || v >= g.node_count()) throw std::out_of_range("link endpoint not in graph");
  EnclosingSubgraph sg;
  sg.u = u;
  sg.v = v;
  {
    auto du = bfs_distances(g, u, hops);
    auto dv = bfs_distances(g, v, hops);
    for (const auto& [x, _] : du) sg.nodes.push_back(x);
    for (const auto& [x, _] : dv) sg.nodes.push_back(x);
    std::sort(sg.nodes.begin(), sg.nodes.end());
    sg.nodes.erase(std::unique(sg.nodes.begin(), sg.nodes.end()), sg.nodes.end());
  }
  std::unordered_map<NodeId, std::uint32_t> local;
  for (std::uint32_t i = 0; i < sg.nodes.size(); ++i) local.emplace(sg.nodes[i], i);
  sg.local_u = local.at(u);
  sg.local_v = local.at(v);

  sg.adjacency.resize(sg.nodes.size());
  for (std::uint32_t i = 0; i < sg.nodes.size(); ++i) {
    for (auto w : g.neighbors(sg.nodes[i])) {
      auto it = local.find(w);
      if (it == local.end()) continue;
      if (opts.drop_target_link && ((i == sg.local_u && it->second == sg.local_v) ||
                                    (i == sg.local_v && it->second == sg.local_u)))
        continue;
      sg.adjacency[i].push_back(it->second);
    }
  }

  const auto du = local_bfs(sg.adjacency, sg.local_u);
  const auto dv = local_bfs(sg.adjacency, sg.local_v);
  sg.labels.resize(sg.nodes.size());
  for (std::uint32_t i = 0; i < sg.nodes.size(); ++i) {
    if (i == sg.local_u || i == sg.local_v) {
      sg.labels[i] = 1;
      continue;
    }
    auto opt = [](std::uint32_t d) { return d == kFar ? std::nullopt : std::optional<std::uint32_t>(d); };
    sg.labels[i] = drnl_label(opt(du[i]), opt(dv[i]));
  }
  return sg;
}

std::string to_edge_list(const CircuitGraph& g, const EnclosingSubgraph& sg) {
  std::ostringstream os;
  for (std::size_t i = 0; i < sg.size(); ++i) os << "# " << g.name(sg.nodes[i]) << " " << sg.labels[i] << "\n";
  for (std::uint32_t i = 0; i < sg.size(); ++i) {
    for (auto j : sg.adjacency[i]) {
      if (i < j) os << g.name(sg.nodes[i]) << " " << g.name(sg.nodes[j]) << "\n";
    }
  }
  return os.str();
}

}  // namespace simll
