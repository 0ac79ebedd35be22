// Graph view of a netlist: one node per net driver (primary input, key input
// or gate output) and one directed link per (driver, reader pin) pair.

#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "simll/netlist.hpp"

namespace simll {

using NodeId = std::uint32_t;

/// A wire from `source` into input pin `pin` of gate `target`.
struct Link {
  NodeId source;
  NodeId target;
  std::uint32_t pin;

  bool operator==(const Link&) const = default;
  auto operator<=>(const Link&) const = default;
};

/// Node feature for primary and key inputs.
inline constexpr std::string_view kInputFeature = "IN";

class CircuitGraph {
 public:
  CircuitGraph() = default;

  /// Builds a graph directly; used for synthetic graphs in tests. Links must
  /// reference existing nodes.
  CircuitGraph(std::vector<std::string> names, std::vector<std::string> features,
               std::vector<Link> links, std::vector<bool> primary_output = {});

  std::size_t node_count() const { return names_.size(); }
  std::size_t link_count() const { return links_.size(); }

  const std::string& name(NodeId v) const { return names_[v]; }
  const std::string& feature(NodeId v) const { return features_[v]; }
  bool is_primary_output(NodeId v) const { return primary_output_[v]; }

  std::optional<NodeId> find(std::string_view net) const;
  /// Throws std::out_of_range for an unknown net.
  NodeId id(std::string_view net) const;

  std::span<const Link> links() const { return links_; }
  const Link& link(std::size_t index) const { return links_[index]; }
  /// Indices into links() leaving / entering v.
  std::span<const std::uint32_t> out_links(NodeId v) const { return out_links_[v]; }
  std::span<const std::uint32_t> in_links(NodeId v) const { return in_links_[v]; }

  /// Fan-in ∪ fan-out, sorted, without duplicates.
  std::span<const NodeId> neighbors(NodeId v) const { return neighbors_[v]; }

  /// Number of reader pins of v.
  std::size_t fanout(NodeId v) const { return out_links_[v].size(); }

  std::string link_name(const Link& l) const;

 private:
  void index();

  std::vector<std::string> names_;
  std::vector<std::string> features_;
  std::vector<bool> primary_output_;
  std::vector<Link> links_;
  std::unordered_map<std::string, NodeId> by_name_;
  std::vector<std::vector<std::uint32_t>> out_links_;
  std::vector<std::vector<std::uint32_t>> in_links_;
  std::vector<std::vector<NodeId>> neighbors_;
};

/// Nodes are inputs, then key inputs, then gates, in file order. Links are
/// ordered by reader gate, then pin.
CircuitGraph to_graph(const Netlist& n);

/// Undirected neighbourhood of the named net. Throws std::out_of_range for an
/// unknown net.
std::vector<std::string> undirected_neighbors(const CircuitGraph& g, std::string_view net);

/// Undirected shortest-path distances from v, truncated at `hops`. Nodes
/// farther than `hops` (or disconnected) are absent.
std::map<NodeId, std::uint32_t> bfs_distances(const CircuitGraph& g, NodeId v, std::uint32_t hops);

/// Directed reachability; reaches(g, a, a) is true.
bool reaches(const CircuitGraph& g, NodeId from, NodeId to);

/// Double-radius node label from the distances to the two targets; nullopt
/// means unreachable and yields 0.
std::uint32_t drnl_label(std::optional<std::uint32_t> du, std::optional<std::uint32_t> dv);

struct SubgraphOptions {
  /// Remove the u–v adjacency before computing labels and refining states.
  bool drop_target_link = true;
};

struct EnclosingSubgraph {
  NodeId u = 0;
  NodeId v = 0;
  /// Global ids of member nodes, ascending. Local index = position here.
  std::vector<NodeId> nodes;
  /// Local undirected adjacency, sorted and deduplicated.
  std::vector<std::vector<std::uint32_t>> adjacency;
  std::vector<std::uint32_t> labels;
  std::uint32_t local_u = 0;
  std::uint32_t local_v = 0;

  std::size_t size() const { return nodes.size(); }
};

/// h-hop enclosing subgraph of the (possibly absent) link u–v with DRNL
/// labels. Distances for labelling are measured inside the subgraph. Throws
/// std::out_of_range if u or v is not a node.
EnclosingSubgraph extract_enclosing_subgraph(const CircuitGraph& g, NodeId u, NodeId v,
                                             std::uint32_t hops, SubgraphOptions opts = {});

/// Debug dump: `# <node> <label>` header lines, then one `<a> <b>` line per
/// undirected edge.
std::string to_edge_list(const CircuitGraph& g, const EnclosingSubgraph& sg);

}  // namespace simll
