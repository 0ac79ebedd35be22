// Oracle-less key-recovery attacks on MUX-locked netlists.

#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "simll/keys.hpp"
#include "simll/locking.hpp"
#include "simll/netlist.hpp"

namespace simll {

struct AttackResult {
  std::string method;
  KeyGuess guess;
  /// Free-form per-bit note, e.g. "float0=2 float1=0".
  std::vector<std::string> evidence;
  std::map<std::string, std::string> params;
};

/// Structural features of a netlist.
struct FeatureVector {
  std::size_t gates = 0;
  std::map<GateType, std::size_t> per_type;
  std::size_t nets = 0;

  bool operator==(const FeatureVector&) const = default;
};

FeatureVector extract_features(const Netlist& n);

/// Structural analysis: a key value that leaves a gate output unread is
/// wrong, so the other value is predicted. Otherwise X. Throws
/// std::invalid_argument when the netlist has no key inputs.
AttackResult saam_attack(const Netlist& locked);

/// Folds constants from a partial input assignment and removes the logic
/// that no longer reaches an output. The interface (inputs, key inputs, outputs) is
/// kept; a constant output is rebuilt as BUF or NOT of an assigned input.
/// Throws std::invalid_argument for a net that is not a primary or key input.
Netlist simplify_const(const Netlist& n, const std::map<std::string, bool>& assignment);

/// Per bit, compares the gate-count reduction under 0 and 1 and predicts
/// the value with the smaller reduction when the two differ by more than
/// `margin` gates.
AttackResult cp_attack(const Netlist& locked, double margin = 0.0);

/// Uniform random bit per key bit.
AttackResult random_guess(std::size_t key_size, std::uint64_t seed);

struct WlVerdict {
  std::size_t key_index = 0;
  std::string mux;
  bool distinguishable = false;
};

struct WlReport {
  std::vector<WlVerdict> verdicts;
  /// Share of key gates whose true and false candidate links look alike.
  double indistinguishable_rate = 0.0;
};

/// Removes every key gate, then compares the h-hop fingerprints of the true
/// and false candidate links of each record with one shared state table. A
/// candidate whose source is itself a key gate output counts as
/// distinguishable. Throws std::invalid_argument when a record does not
/// match the netlist.
WlReport wl_distinguishability(const Netlist& locked, const std::vector<LockRecord>& records, std::uint32_t hops);

/// Key guess that reveals distinguishable bits and leaves the rest X.
AttackResult wl_attack(const Netlist& locked, const std::vector<LockRecord>& records, std::uint32_t hops);

}  // namespace simll
