// Scores for key guesses and for the output corruption a wrong key causes.

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "simll/keys.hpp"
#include "simll/simulate.hpp"

namespace simll {

struct KeyAccuracy {
  double ac = 0.0;  // percent
  double pc = 0.0;  // percent
  std::size_t correct = 0;
  std::size_t undecided = 0;
  std::size_t total = 0;
};

/// X bits never count as correct; PC counts them as correct.
KeyAccuracy ac_pc(const KeyGuess& guess, const KeyVector& truth);

/// Replaces every X with an independent uniform bit drawn from `seed`.
KeyVector resolve_x(const KeyGuess& guess, std::uint64_t seed);

/// Fraction of patterns with any output mismatch.
double fc(const Netlist& oracle, const Netlist& locked, const KeyVector& key, const PatternSet& patterns);

struct HammingDistance {
  double raw = 0.0;      // mean differing output bits per pattern
  double percent = 0.0;  // raw / output width * 100
};

HammingDistance hd(const Netlist& oracle, const Netlist& locked, const KeyVector& key,
                   const PatternSet& patterns);

struct MetricsReport {
  double ac = 0.0;
  double pc = 0.0;
  double fc = 0.0;
  double hd_raw = 0.0;
  double hd_pct = 0.0;
  std::size_t key_bits = 0;
  std::size_t key_correct = 0;
  std::size_t key_undecided = 0;
  std::size_t output_width = 0;
  std::uint64_t patterns = 0;
  std::uint64_t pattern_seed = 0;
  std::vector<std::uint64_t> x_seeds;
  /// FC and HD_raw of each X-resolved key, same order as x_seeds.
  std::vector<double> fc_runs;
  std::vector<double> hd_runs;
};

struct EvalOptions {
  std::uint64_t patterns = 200000;
  std::uint64_t pattern_seed = 1;
  /// X-resolution runs averaged when the guess has undecided bits.
  std::uint32_t x_seeds = 10;
  std::uint64_t x_seed_base = 1;
};

MetricsReport evaluate(const Netlist& oracle, const Netlist& locked, const KeyVector& truth,
                       const KeyGuess& guess, const EvalOptions& opts);

/// Line-oriented `key=value` form.
std::string format_report(const MetricsReport& r);
std::string format_report_table(const MetricsReport& r);

struct EquivalenceVerdict {
  bool equivalent = false;
  bool exhaustive = false;
  std::uint64_t patterns = 0;
  /// Oracle input order.
  std::optional<Bits> counterexample;
};

/// Exhaustive over primary inputs when there are at most 16, otherwise
/// `random_patterns` (at least 10,000) random patterns.
EquivalenceVerdict equivalence_check(const Netlist& oracle, const Netlist& locked, const KeyVector& key,
                                     std::uint64_t random_patterns = 10000, std::uint64_t seed = 1);

}  // namespace simll
