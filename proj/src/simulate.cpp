#include "simll/simulate.hpp"

#include <algorithm>
#include <bit>
#include <functional>
#include <stdexcept>
#include <unordered_map>

#include "simll/hash.hpp"

namespace simll {

namespace {

bool eval_scalar(GateType type, const std::vector<bool>& in) {
  switch (type) {
    case GateType::And:
    case GateType::Nand: {
      bool v = true;
      for (bool b : in) v = v && b;
      return type == GateType::And ? v : !v;
    }
    case GateType::Or:
    case GateType::Nor: {
      bool v = false;
      for (bool b : in) v = v || b;
      return type == GateType::Or ? v : !v;
    }
    case GateType::Xor:
    case GateType::Xnor: {
      bool v = false;
      for (bool b : in) v = v != b;
      return type == GateType::Xor ? v : !v;
    }
    case GateType::Not: return !in[0];
    case GateType::Buf: return in[0];
    case GateType::Mux: return in[0] ? in[2] : in[1];
  }
  return false;
}

}  // namespace

Bits simulate(const Netlist& n, const Bits& inputs, const Bits& keys) {
  if (inputs.size() != n.inputs.size())
    throw std::invalid_argument("pattern width " + std::to_string(inputs.size()) + " != " +
                                std::to_string(n.inputs.size()) + " inputs");
  if (keys.size() != n.key_inputs.size())
    throw std::invalid_argument("key width " + std::to_string(keys.size()) + " != " +
                                std::to_string(n.key_inputs.size()) + " key inputs");
  std::unordered_map<std::string, bool> value;
  for (std::size_t i = 0; i < inputs.size(); ++i) value[n.inputs[i]] = inputs[i] != 0;
  for (std::size_t i = 0; i < keys.size(); ++i) value[n.key_inputs[i]] = keys[i] != 0;
  std::unordered_map<std::string, const Gate*> driver;
  for (const auto& g : n.gates) driver[g.output] = &g;

  std::function<bool(const std::string&)> get = [&](const std::string& net) -> bool {
    if (auto it = value.find(net); it != value.end()) return it->second;
    auto d = driver.find(net);
    if (d == driver.end()) throw std::invalid_argument("undriven net " + net);
    std::vector<bool> in;
    for (const auto& x : d->second->inputs) in.push_back(get(x));
    const bool v = eval_scalar(d->second->type, in);
    value[net] = v;
    return v;
  };
  Bits out;
  for (const auto& o : n.outputs) out.push_back(get(o) ? 1 : 0);
  return out;
}

CompiledCircuit::CompiledCircuit(const Netlist& n)
    : input_names_(n.inputs), key_names_(n.key_inputs), output_names_(n.outputs) {
  std::unordered_map<std::string, std::uint32_t> index;
  std::uint32_t next = 0;
  for (const auto& in : n.inputs) index.emplace(in, next++);
  for (const auto& k : n.key_inputs) index.emplace(k, next++);
  const auto order = topological_order(n);
  for (auto gi : order) index.emplace(n.gates[gi].output, next++);
  net_count_ = next;
  for (auto gi : order) {
    const auto& g = n.gates[gi];
    Op op{g.type, index.at(g.output), static_cast<std::uint32_t>(operands_.size()),
          static_cast<std::uint32_t>(g.inputs.size())};
    for (const auto& in : g.inputs) operands_.push_back(index.at(in));
    ops_.push_back(op);
  }
  for (const auto& o : n.outputs) outputs_.push_back(index.at(o));
}

void CompiledCircuit::eval(std::span<const std::uint64_t> inputs, std::span<const std::uint64_t> keys,
                           std::span<std::uint64_t> outputs, std::span<std::uint64_t> scratch) const {
  std::size_t k = 0;
  for (auto w : inputs) scratch[k++] = w;
  for (auto w : keys) scratch[k++] = w;
  const auto* operand = operands_.data();
  for (const auto& op : ops_) {
    const auto* in = operand + op.first;
    std::uint64_t v = 0;
    switch (op.type) {
      case GateType::And:
      case GateType::Nand:
        v = ~std::uint64_t{0};
        for (std::uint32_t i = 0; i < op.count; ++i) v &= scratch[in[i]];
        if (op.type == GateType::Nand) v = ~v;
        break;
      case GateType::Or:
      case GateType::Nor:
        for (std::uint32_t i = 0; i < op.count; ++i) v |= scratch[in[i]];
        if (op.type == GateType::Nor) v = ~v;
        break;
      case GateType::Xor:
      case GateType::Xnor:
        for (std::uint32_t i = 0; i < op.count; ++i) v ^= scratch[in[i]];
        if (op.type == GateType::Xnor) v = ~v;
        break;
      case GateType::Not: v = ~scratch[in[0]]; break;
      case GateType::Buf: v = scratch[in[0]]; break;
      case GateType::Mux: {
        const auto s = scratch[in[0]];
        v = (~s & scratch[in[1]]) | (s & scratch[in[2]]);
        break;
      }
    }
    scratch[op.out] = v;
  }
  for (std::size_t i = 0; i < outputs_.size(); ++i) outputs[i] = scratch[outputs_[i]];
}

std::uint64_t PatternSet::word(std::size_t input, std::uint64_t block) const {
  if (kind == Kind::Random) return mix64(mix64(seed + 0x632be59bd9b4e019ULL * (input + 1)) ^ block);
  static constexpr std::uint64_t kLow[6] = {0xAAAAAAAAAAAAAAAAULL, 0xCCCCCCCCCCCCCCCCULL, 0xF0F0F0F0F0F0F0F0ULL,
                                            0xFF00FF00FF00FF00ULL, 0xFFFF0000FFFF0000ULL, 0xFFFFFFFF00000000ULL};
  if (input < 6) return kLow[input];
  return ((block >> (input - 6)) & 1) ? ~std::uint64_t{0} : 0;
}

std::uint64_t PatternSet::lane_mask(std::uint64_t block) const {
  const auto rem = count - block * 64;
  return rem >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << rem) - 1;
}

Bits make_pattern(const PatternSet& ps, std::uint64_t index, std::size_t width) {
  Bits bits(width);
  for (std::size_t j = 0; j < width; ++j) bits[j] = (ps.word(j, index / 64) >> (index % 64)) & 1;
  return bits;
}

Comparison::Comparison(const Netlist& oracle, const Netlist& locked) : oracle_(oracle), locked_(locked) {
  if (oracle_.input_count() != locked_.input_count() || oracle_.output_count() != locked_.output_count())
    throw std::invalid_argument("oracle and locked netlists have different interfaces");
  std::unordered_map<std::string, std::uint32_t> oracle_in;
  for (std::uint32_t i = 0; i < oracle_.input_count(); ++i) oracle_in.emplace(oracle_.input_names()[i], i);
  for (const auto& name : locked_.input_names()) {
    auto it = oracle_in.find(name);
    if (it == oracle_in.end()) throw std::invalid_argument("input " + name + " missing from oracle");
    locked_input_from_oracle_.push_back(it->second);
  }
  std::unordered_map<std::string, std::uint32_t> locked_out;
  for (std::uint32_t i = 0; i < locked_.output_count(); ++i) locked_out.emplace(locked_.output_names()[i], i);
  for (const auto& name : oracle_.output_names()) {
    auto it = locked_out.find(name);
    if (it == locked_out.end()) throw std::invalid_argument("output " + name + " missing from locked netlist");
    locked_output_for_oracle_.push_back(it->second);
  }
}

void Comparison::run_block(const PatternSet& ps, std::uint64_t block, std::span<const std::uint64_t> key_words,
                           std::vector<std::uint64_t>& scratch, std::uint64_t& erroneous,
                           std::uint64_t& bit_errors, std::uint64_t* diff_lanes) const {
  const auto ni = oracle_.input_count();
  const auto no = oracle_.output_count();
  // scratch layout: [oracle inputs | locked inputs | oracle out | locked out | net values]
  std::uint64_t* oin = scratch.data();
  std::uint64_t* lin = oin + ni;
  std::uint64_t* oout = lin + ni;
  std::uint64_t* lout = oout + no;
  std::uint64_t* nets = lout + no;
  for (std::size_t j = 0; j < ni; ++j) oin[j] = ps.word(j, block);
  for (std::size_t j = 0; j < ni; ++j) lin[j] = oin[locked_input_from_oracle_[j]];
  const std::size_t net_words = std::max(oracle_.net_count(), locked_.net_count());
  oracle_.eval({oin, ni}, {}, {oout, no}, {nets, net_words});
  locked_.eval({lin, ni}, key_words, {lout, no}, {nets, net_words});
  const auto mask = ps.lane_mask(block);
  std::uint64_t any = 0;
  for (std::size_t j = 0; j < no; ++j) {
    const auto diff = (oout[j] ^ lout[locked_output_for_oracle_[j]]) & mask;
    any |= diff;
    bit_errors += static_cast<std::uint64_t>(std::popcount(diff));
  }
  erroneous += static_cast<std::uint64_t>(std::popcount(any));
  if (diff_lanes) *diff_lanes = any;
}

CompareCounts Comparison::count(const Bits& key, const PatternSet& patterns, Execution exec) const {
  if (key.size() != locked_.key_count())
    throw std::invalid_argument("key width " + std::to_string(key.size()) + " != " +
                                std::to_string(locked_.key_count()) + " key inputs");
  std::vector<std::uint64_t> key_words(key.size());
  for (std::size_t i = 0; i < key.size(); ++i) key_words[i] = key[i] ? ~std::uint64_t{0} : 0;
  const std::size_t scratch_words = 2 * oracle_.input_count() + 2 * oracle_.output_count() +
                                    std::max(oracle_.net_count(), locked_.net_count());
  const auto blocks = static_cast<std::int64_t>(patterns.blocks());
  std::uint64_t erroneous = 0, bit_errors = 0;

  if (exec == Execution::Serial) {
    std::vector<std::uint64_t> scratch(scratch_words);
    for (std::int64_t b = 0; b < blocks; ++b)
      run_block(patterns, static_cast<std::uint64_t>(b), key_words, scratch, erroneous, bit_errors, nullptr);
  } else {
#pragma omp parallel reduction(+ : erroneous, bit_errors)
    {
      std::vector<std::uint64_t> scratch(scratch_words);
#pragma omp for schedule(static)
      for (std::int64_t b = 0; b < blocks; ++b)
        run_block(patterns, static_cast<std::uint64_t>(b), key_words, scratch, erroneous, bit_errors, nullptr);
    }
  }
  return {patterns.count, erroneous, bit_errors, oracle_.output_count()};
}

std::optional<Bits> Comparison::first_mismatch(const Bits& key, const PatternSet& patterns) const {
  std::vector<std::uint64_t> key_words(key.size());
  for (std::size_t i = 0; i < key.size(); ++i) key_words[i] = key[i] ? ~std::uint64_t{0} : 0;
  std::vector<std::uint64_t> scratch(2 * oracle_.input_count() + 2 * oracle_.output_count() +
                                     std::max(oracle_.net_count(), locked_.net_count()));
  std::uint64_t e = 0, b = 0;
  for (std::uint64_t block = 0; block < patterns.blocks(); ++block) {
    std::uint64_t lanes = 0;
    run_block(patterns, block, key_words, scratch, e, b, &lanes);
    if (lanes) {
      const auto index = block * 64 + static_cast<std::uint64_t>(std::countr_zero(lanes));
      return make_pattern(patterns, index, oracle_.input_count());
    }
  }
  return std::nullopt;
}

}  // namespace simll
