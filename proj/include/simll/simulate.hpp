// Logic simulation. The scalar evaluator is the reference. CompiledCircuit
// evaluates 64 patterns per pass, and Comparison spreads pattern blocks over
// OpenMP threads.

#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "simll/netlist.hpp"
#include "simll/similarity.hpp"  // Execution

namespace simll {

using Bits = std::vector<std::uint8_t>;

/// Scalar reference: recursive evaluation straight off the gate list.
/// `inputs` follows n.inputs, `keys` follows n.key_inputs. Throws
/// std::invalid_argument on a width mismatch.
Bits simulate(const Netlist& n, const Bits& inputs, const Bits& keys = {});

/// Gates flattened into topological order over dense net indices.
class CompiledCircuit {
 public:
  explicit CompiledCircuit(const Netlist& n);

  std::size_t input_count() const { return input_names_.size(); }
  std::size_t key_count() const { return key_names_.size(); }
  std::size_t output_count() const { return outputs_.size(); }
  std::size_t net_count() const { return net_count_; }

  const std::vector<std::string>& input_names() const { return input_names_; }
  const std::vector<std::string>& key_names() const { return key_names_; }
  const std::vector<std::string>& output_names() const { return output_names_; }

  /// One 64-pattern block. `scratch` must hold net_count() words.
  void eval(std::span<const std::uint64_t> inputs, std::span<const std::uint64_t> keys,
            std::span<std::uint64_t> outputs, std::span<std::uint64_t> scratch) const;

 private:
  struct Op {
    GateType type;
    std::uint32_t out;
    std::uint32_t first;
    std::uint32_t count;
  };
  std::vector<std::string> input_names_, key_names_, output_names_;
  std::vector<std::uint32_t> outputs_;
  std::vector<Op> ops_;
  std::vector<std::uint32_t> operands_;
  std::size_t net_count_ = 0;
};

/// A reproducible pattern stream. Random patterns are addressed by
/// (seed, index); exhaustive patterns enumerate index = input vector.
struct PatternSet {
  enum class Kind { Random, Exhaustive };
  Kind kind = Kind::Random;
  std::uint64_t seed = 0;
  std::uint64_t count = 0;

  static PatternSet random(std::uint64_t seed, std::uint64_t count) { return {Kind::Random, seed, count}; }
  static PatternSet exhaustive(std::size_t inputs) { return {Kind::Exhaustive, 0, std::uint64_t{1} << inputs}; }

  std::uint64_t blocks() const { return (count + 63) / 64; }
  /// 64 consecutive patterns' values of input `input` in block `block`.
  std::uint64_t word(std::size_t input, std::uint64_t block) const;
  /// Valid lanes of `block`.
  std::uint64_t lane_mask(std::uint64_t block) const;
};

/// Pattern `index` of a pattern set, one byte per input.
Bits make_pattern(const PatternSet& ps, std::uint64_t index, std::size_t width);

struct CompareCounts {
  std::uint64_t patterns = 0;
  /// patterns with at least one differing output
  std::uint64_t erroneous = 0;
  /// differing output bits summed over patterns
  std::uint64_t bit_errors = 0;
  std::size_t output_width = 0;
};

/// Oracle (no keys) vs locked design (with keys), inputs and outputs matched
/// by name. Throws std::invalid_argument when the interfaces differ.
class Comparison {
 public:
  Comparison(const Netlist& oracle, const Netlist& locked);

  const CompiledCircuit& oracle() const { return oracle_; }
  const CompiledCircuit& locked() const { return locked_; }

  /// `key` follows the locked netlist's key input order.
  CompareCounts count(const Bits& key, const PatternSet& patterns, Execution exec = Execution::Parallel) const;

  /// First pattern (oracle input order) whose outputs differ.
  std::optional<Bits> first_mismatch(const Bits& key, const PatternSet& patterns) const;

 private:
  void run_block(const PatternSet& ps, std::uint64_t block, std::span<const std::uint64_t> key_words,
                 std::vector<std::uint64_t>& scratch, std::uint64_t& erroneous, std::uint64_t& bit_errors,
                 std::uint64_t* diff_lanes) const;

  CompiledCircuit oracle_;
  CompiledCircuit locked_;
  std::vector<std::uint32_t> locked_input_from_oracle_;
  std::vector<std::uint32_t> locked_output_for_oracle_;
};

}  // namespace simll
