// MUX key-gate insertion with the deceptive strategies S1-S4, driven either
// by similarity clusters or at random. A naive locker is kept as a negative
// control.

#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <set>
#include <stdexcept>
#include <tuple>
#include <string>
#include <unordered_map>
#include <vector>

#include "simll/graph.hpp"
#include "simll/keys.hpp"
#include "simll/netlist.hpp"
#include "simll/similarity.hpp"

namespace simll {

enum class Strategy { S1, S2, S3, S4, Naive };
enum class Provenance { LinkCluster, NodeCluster, Random };

std::string_view to_string(Strategy s);
std::string_view to_string(Provenance p);
std::optional<Strategy> parse_strategy(std::string_view s);

/// A driver-to-reader wire. `load` names the reading gate by its output net.
struct Wire {
  std::string source;
  std::string load;

  bool operator==(const Wire&) const = default;
  auto operator<=>(const Wire&) const = default;
};

struct LockRecord {
  std::size_t key_index = 0;
  Strategy strategy = Strategy::S1;
  std::string mux;
  Wire true_wire;
  Wire false_wire;
  /// Input pin of the load that the MUX now drives.
  std::uint32_t pin = 0;
  /// Key value that routes the true wire.
  std::uint8_t correct_bit = 0;
  Provenance provenance = Provenance::Random;
  /// For link-cluster pairs: the other original wire of the pair.
  std::optional<Wire> partner;

  bool operator==(const LockRecord&) const = default;
};

struct LockedDesign {
  Netlist netlist;
  KeyVector key;
  std::vector<LockRecord> records;
  std::uint64_t seed = 0;
  std::uint32_t hops = 0;

  bool operator==(const LockedDesign&) const = default;
};

class LockError : public std::runtime_error {
 public:
  enum class Kind { Precondition, Loop, Fanout, KeysExhausted, AlreadyLocked, Capacity };
  LockError(Kind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  Kind kind() const noexcept { return kind_; }

 private:
  Kind kind_;
};

/// Where an S3 MUX goes. FanoutOfMulti drives a fan-out of the multi-output
/// gate and keeps every input gate connected. ConsumerOfSingle drives the
/// single-output gate's consumer instead; that placement can strand the
/// single-output gate under the wrong key and exists only for comparison.
enum class S3Placement { FanoutOfMulti, ConsumerOfSingle };

struct LockOptions {
  std::uint32_t hops = 2;
  std::vector<Strategy> strategies{Strategy::S1, Strategy::S2, Strategy::S3, Strategy::S4};
  S3Placement s3_placement = S3Placement::FanoutOfMulti;
  SubgraphOptions subgraph{};
  Execution execution = Execution::Parallel;
};

/// Mutable locking workspace over one netlist. Key bits are allocated in
/// index order and their values drawn from the seeded generator. Every apply
/// call either succeeds completely or throws LockError and leaves the
/// workspace untouched.
///
/// "Fan-out" below counts unconditional readers: non-MUX gate pins, MUX
/// select pins, primary-output status, and one per S4 pair the net feeds
/// (an S4 pair always forwards both of its sources).
class Locker {
 public:
  Locker(const Netlist& original, std::size_t key_size, std::uint64_t seed,
         S3Placement s3 = S3Placement::FanoutOfMulti);

  std::size_t keys_left() const { return key_.size() - next_key_; }
  std::size_t fanout(const std::string& net) const;
  std::mt19937_64& rng() { return rng_; }

  /// Current wire source -> load exists on some pin of a non-MUX load.
  bool has_wire(const std::string& source, const std::string& load) const;

  std::vector<LockRecord> apply_s1(const std::string& fi, const std::string& fj, const std::string& gi,
                                   const std::string& gj, Provenance prov = Provenance::Random);
  std::vector<LockRecord> apply_s2(const std::string& fi, const std::string& fj, const std::string& gi,
                                   Provenance prov = Provenance::Random);
  /// With ConsumerOfSingle placement `g` must read fj instead of fi.
  std::vector<LockRecord> apply_s3(const std::string& fi, const std::string& fj, const std::string& g,
                                   Provenance prov = Provenance::Random);
  std::vector<LockRecord> apply_s4(const std::string& fi, const std::string& fj, const std::string& gi,
                                   const std::string& gj, Provenance prov = Provenance::Random);
  /// Naive key gate: MUX(true source, false source) into `load`, no
  /// rerouting.
  std::vector<LockRecord> apply_naive(const std::string& source, const std::string& false_source,
                                      const std::string& load);

  /// Pin-level variants used by the schemes (load is a gate index).
  std::vector<LockRecord> apply_pair(Strategy s, std::uint32_t fi, std::uint32_t fj, std::uint32_t gi,
                                     std::uint32_t pin_i, std::uint32_t gj, std::uint32_t pin_j, Provenance prov);
  std::vector<LockRecord> apply_single(Strategy s, std::uint32_t fi, std::uint32_t fj, std::uint32_t g,
                                       std::uint32_t pin, Provenance prov);

  const std::vector<LockRecord>& records() const { return records_; }

  /// Locked design; throws LockError(Capacity) if key bits are unused.
  LockedDesign finish(std::uint32_t hops = 0) const;

  // Workspace introspection for the schemes.
  std::uint32_t net_id(const std::string& name) const;
  const std::string& net_name(std::uint32_t id) const { return names_[id]; }
  std::size_t net_count() const { return names_.size(); }
  /// Gate index driving `net`, or -1 for inputs.
  std::int64_t driver(std::uint32_t net) const { return driver_[net]; }
  std::uint32_t gate_output(std::uint32_t gate) const { return gates_[gate].out; }
  std::size_t gate_count() const { return gates_.size(); }
  bool is_mux_gate(std::uint32_t gate) const { return gates_[gate].type == GateType::Mux; }
  bool is_key_net(std::uint32_t net) const { return net >= first_key_ && net < first_key_ + key_.size(); }
  bool is_mux_net(std::uint32_t net) const;
  /// Input net of (gate, pin).
  std::uint32_t pin_source(std::uint32_t gate, std::uint32_t pin) const { return gates_[gate].ins[pin]; }
  bool pin_locked(std::uint32_t gate, std::uint32_t pin) const { return locked_pins_.count({gate, pin}) > 0; }
  /// (gate, pin) readers of `net` on non-MUX gates.
  std::vector<std::pair<std::uint32_t, std::uint32_t>> lockable_fanout(std::uint32_t net, bool fresh_only) const;
  /// Does a directed path from net `from` reach net `to`?
  bool reaches_net(std::uint32_t from, std::uint32_t to) const;

 private:
  struct WGate {
    GateType type;
    std::uint32_t out;
    std::vector<std::uint32_t> ins;
  };

  std::uint32_t add_net(const std::string& base);
  std::size_t take_key();
  std::pair<std::uint32_t, std::uint32_t> find_pin(std::uint32_t source, std::uint32_t gate) const;
  std::uint32_t gate_of(const std::string& load) const;
  void require_false_edge(std::uint32_t false_source, std::uint32_t gate) const;
  std::string insert_mux(std::uint32_t gate, std::uint32_t pin, std::size_t key, std::uint32_t d0,
                         std::uint32_t d1);
  LockRecord make_record(std::size_t key, Strategy s, const std::string& mux, std::uint32_t t,
                         std::uint32_t f, std::uint32_t gate, std::uint32_t pin, std::uint8_t bit,
                         Provenance prov) const;

  Netlist original_;
  S3Placement s3_;
  std::mt19937_64 rng_;
  KeyVector key_;
  std::size_t next_key_ = 0;
  std::uint32_t first_key_ = 0;
  std::vector<std::string> names_;
  std::unordered_map<std::string, std::uint32_t> ids_;
  std::vector<std::int64_t> driver_;
  std::vector<bool> primary_output_;
  std::vector<std::uint32_t> s4_pairs_;
  std::vector<WGate> gates_;
  std::size_t original_gates_ = 0;
  std::vector<std::vector<std::pair<std::uint32_t, std::uint32_t>>> readers_;
  std::set<std::pair<std::uint32_t, std::uint32_t>> locked_pins_;
  std::set<std::tuple<std::uint32_t, std::uint32_t, std::uint32_t>> locked_wires_;
  std::vector<LockRecord> records_;
  std::size_t mux_counter_ = 0;
};

/// Similarity-based locking: link clusters first (S1 on multi-output-source
/// links, then S4 on single-output-source links), then node clusters with a
/// shuffled strategy list, then D-MUX for any key bits left over.
LockedDesign simll_lock(const Netlist& n, std::size_t key_size, std::uint64_t seed, const LockOptions& opts = {});

/// Random D-MUX locking with the given strategies.
LockedDesign dmux_lock(const Netlist& n, std::size_t key_size, std::uint64_t seed,
                       const std::vector<Strategy>& strategies = {Strategy::S1, Strategy::S2, Strategy::S3,
                                                                  Strategy::S4});

/// Adds one random D-MUX key gate (or pair) to a workspace; throws
/// LockError(Capacity) when no strategy has an applicable candidate.
void dmux_step(Locker& locker, std::vector<Strategy> strategies);

/// Negative control: every true wire floats under the wrong key.
LockedDesign naive_mux_lock(const Netlist& n, std::size_t key_size, std::uint64_t seed);

/// Netlist under a full key assignment (MUXes collapsed to buffers).
Netlist resolve_key(const Netlist& locked, const std::vector<std::uint8_t>& bits);

/// One line per record: `key=<i> strategy=<S> true=<f>-><g> false=<f'>-><g>
/// pin=<p> mux=<net> correct=<b> provenance=<P> [partner=<f>-><g>]`.
std::string write_lock_report(const std::vector<LockRecord>& records);
std::vector<LockRecord> parse_lock_report(std::string_view text);

}  // namespace simll
