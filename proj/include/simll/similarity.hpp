// Weisfeiler-Lehman style state refinement over circuit graphs: node
// clustering and link clustering over h-hop enclosing subgraphs.

#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "simll/graph.hpp"

namespace simll {

using NodeState = std::uint32_t;

/// Injective state update: each distinct string is interned to a fresh
/// sequential token, so update(a) == update(b) iff a == b. Token values depend
/// only on the order of first insertion.
class StateTable {
 public:
  NodeState update(std::string_view s);
  std::size_t size() const { return table_.size(); }

 private:
  std::unordered_map<std::string, NodeState> table_;
};

/// `own|n1,n2,...` with neighbour tokens sorted by their decimal spelling.
std::string concat_state(NodeState own, std::vector<NodeState> neighbor_states);

/// Serial runs everything on the calling thread in canonical order and is the
/// reference; Parallel computes per-round strings with OpenMP and interns them
/// in the same canonical order.
enum class Execution { Serial, Parallel };

struct ClusterSet {
  /// Node ids (node clusters) or indices into CircuitGraph::links() (link
  /// clusters), each ascending. Clusters appear in order of first member.
  std::vector<std::vector<std::uint32_t>> clusters;
  /// Stable per-cluster hash of the shared fingerprint.
  std::vector<std::uint64_t> fingerprints;

  std::size_t element_count() const;
};

/// Final states s_v^h for every node.
std::vector<NodeState> node_states(const CircuitGraph& g, std::uint32_t hops, StateTable& table,
                                   Execution exec = Execution::Parallel);

ClusterSet node_clusters(const CircuitGraph& g, std::uint32_t hops,
                         Execution exec = Execution::Parallel);

/// Sorted multiset of final subgraph states.
using LinkFingerprint = std::vector<NodeState>;

/// Fingerprint of the candidate link u–v (the link need not exist). Tokens
/// come from `table`, so fingerprints are comparable only when computed with
/// the same table.
LinkFingerprint link_fingerprint(const CircuitGraph& g, NodeId u, NodeId v, std::uint32_t hops,
                                 StateTable& table, SubgraphOptions opts = {});

ClusterSet link_clusters(const CircuitGraph& g, std::uint32_t hops,
                         Execution exec = Execution::Parallel, SubgraphOptions opts = {});

struct ClusterSummary {
  std::size_t clusters = 0;
  std::size_t elements = 0;
  /// cluster size -> number of clusters of that size
  std::map<std::size_t, std::size_t> histogram;
  /// share of elements that sit in a cluster of size >= 2
  double fraction_shared = 0.0;
};

struct ClusterReport {
  ClusterSummary nodes;
  ClusterSummary links;
};

ClusterSummary summarize(const ClusterSet& cs);
ClusterReport cluster_stats(const ClusterSet& nc, const ClusterSet& lc);

}  // namespace simll
