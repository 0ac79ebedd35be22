#include "simll/metrics.hpp"

#include <algorithm>
#include <iomanip>
#include <random>
#include <sstream>
#include <stdexcept>

namespace simll {

namespace {

CompareCounts compare(const Netlist& oracle, const Netlist& locked, const KeyVector& key,
                      const PatternSet& patterns) {
  Comparison cmp(oracle, locked);
  return cmp.count(key_values_for(locked, key.bits), patterns);
}

std::string fixed(double v, int digits = 6) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(digits) << v;
  return os.str();
}

}  // namespace

KeyAccuracy ac_pc(const KeyGuess& guess, const KeyVector& truth) {
  if (guess.size() != truth.size())
    throw std::invalid_argument("guess has " + std::to_string(guess.size()) + " bits, key has " +
                                std::to_string(truth.size()));
  KeyAccuracy a;
  a.total = truth.size();
  for (std::size_t i = 0; i < truth.size(); ++i) {
    if (guess.bits[i] == KeyBit::X)
      ++a.undecided;
    else if ((guess.bits[i] == KeyBit::One) == (truth.bits[i] != 0))
      ++a.correct;
  }
  if (a.total) {
    a.ac = 100.0 * static_cast<double>(a.correct) / static_cast<double>(a.total);
    a.pc = 100.0 * static_cast<double>(a.correct + a.undecided) / static_cast<double>(a.total);
  }
  return a;
}

KeyVector resolve_x(const KeyGuess& guess, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::bernoulli_distribution coin(0.5);
  KeyVector key;
  for (auto b : guess.bits) key.bits.push_back(b == KeyBit::X ? coin(rng) : b == KeyBit::One);
  key.consumed.assign(key.bits.size(), true);
  return key;
}

double fc(const Netlist& oracle, const Netlist& locked, const KeyVector& key, const PatternSet& patterns) {
  const auto c = compare(oracle, locked, key, patterns);
  return c.patterns ? static_cast<double>(c.erroneous) / static_cast<double>(c.patterns) : 0.0;
}

HammingDistance hd(const Netlist& oracle, const Netlist& locked, const KeyVector& key,
                   const PatternSet& patterns) {
  const auto c = compare(oracle, locked, key, patterns);
  HammingDistance h;
  if (c.patterns) h.raw = static_cast<double>(c.bit_errors) / static_cast<double>(c.patterns);
  if (c.output_width) h.percent = 100.0 * h.raw / static_cast<double>(c.output_width);
  return h;
}

MetricsReport evaluate(const Netlist& oracle, const Netlist& locked, const KeyVector& truth,
                       const KeyGuess& guess, const EvalOptions& opts) {
  MetricsReport r;
  const auto acc = ac_pc(guess, truth);
  r.ac = acc.ac;
  r.pc = acc.pc;
  r.key_bits = acc.total;
  r.key_correct = acc.correct;
  r.key_undecided = acc.undecided;
  r.patterns = opts.patterns;
  r.pattern_seed = opts.pattern_seed;

  Comparison cmp(oracle, locked);
  r.output_width = cmp.oracle().output_count();
  const auto patterns = PatternSet::random(opts.pattern_seed, opts.patterns);
  const auto runs = acc.undecided ? std::max<std::uint32_t>(opts.x_seeds, 1) : 1;
  for (std::uint32_t i = 0; i < runs; ++i) {
    const auto seed = opts.x_seed_base + i;
    const auto key = resolve_x(guess, seed);
    const auto c = cmp.count(key_values_for(locked, key.bits), patterns);
    const double n = c.patterns ? static_cast<double>(c.patterns) : 1.0;
    r.x_seeds.push_back(seed);
    r.fc_runs.push_back(static_cast<double>(c.erroneous) / n);
    r.hd_runs.push_back(static_cast<double>(c.bit_errors) / n);
  }
  for (std::size_t i = 0; i < runs; ++i) {
    r.fc += r.fc_runs[i] / runs;
    r.hd_raw += r.hd_runs[i] / runs;
  }
  r.hd_pct = r.output_width ? 100.0 * r.hd_raw / static_cast<double>(r.output_width) : 0.0;
  return r;
}

std::string format_report(const MetricsReport& r) {
  std::ostringstream os;
  os << "ac=" << fixed(r.ac, 4) << "\n"
     << "pc=" << fixed(r.pc, 4) << "\n"
     << "fc=" << fixed(r.fc) << "\n"
     << "hd_raw=" << fixed(r.hd_raw) << "\n"
     << "hd_pct=" << fixed(r.hd_pct, 4) << "\n"
     << "key_bits=" << r.key_bits << "\n"
     << "key_correct=" << r.key_correct << "\n"
     << "key_x=" << r.key_undecided << "\n"
     << "output_width=" << r.output_width << "\n"
     << "patterns=" << r.patterns << "\n"
     << "pattern_seed=" << r.pattern_seed << "\n"
     << "x_seeds=";
  for (std::size_t i = 0; i < r.x_seeds.size(); ++i) os << (i ? "," : "") << r.x_seeds[i];
  os << "\n";
  return os.str();
}

std::string format_report_table(const MetricsReport& r) {
  std::ostringstream os;
  auto row = [&](const std::string& k, const std::string& v) {
    os << "  " << std::left << std::setw(14) << k << std::right << std::setw(14) << v << "\n";
  };
  os << "  metric                 value\n  ----------------------------\n";
  row("AC (%)", fixed(r.ac, 2));
  row("PC (%)", fixed(r.pc, 2));
  row("FC", fixed(r.fc, 4));
  row("HD (bits)", fixed(r.hd_raw, 4));
  row("HD (%)", fixed(r.hd_pct, 2));
  row("key bits", std::to_string(r.key_bits));
  row("undecided", std::to_string(r.key_undecided));
  row("patterns", std::to_string(r.patterns));
  row("X runs", std::to_string(r.x_seeds.size()));
  return os.str();
}

EquivalenceVerdict equivalence_check(const Netlist& oracle, const Netlist& locked, const KeyVector& key,
                                     std::uint64_t random_patterns, std::uint64_t seed) {
  Comparison cmp(oracle, locked);
  EquivalenceVerdict v;
  const auto inputs = cmp.oracle().input_count();
  v.exhaustive = inputs <= 16;
  const auto patterns = v.exhaustive ? PatternSet::exhaustive(inputs)
                                     : PatternSet::random(seed, std::max<std::uint64_t>(random_patterns, 10000));
  v.patterns = patterns.count;
  const auto key_values = key_values_for(locked, key.bits);
  const auto counts = cmp.count(key_values, patterns);
  v.equivalent = counts.erroneous == 0;
  if (!v.equivalent) v.counterexample = cmp.first_mismatch(key_values, patterns);
  return v;
}

}  // namespace simll
