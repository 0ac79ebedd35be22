#include "simll/attacks.hpp"

#include <algorithm>
#include <random>
#include <set>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

#include "simll/graph.hpp"
#include "simll/similarity.hpp"

namespace simll {

namespace {

std::vector<std::vector<std::size_t>> muxes_by_key(const Netlist& locked) {
  std::unordered_map<std::string, std::size_t> key_pos;
  for (std::size_t k = 0; k < locked.key_inputs.size(); ++k) {
    const auto idx = key_index(locked.key_inputs[k]);
    if (!idx) throw std::invalid_argument("bad key input name " + locked.key_inputs[k]);
    key_pos[locked.key_inputs[k]] = *idx;
  }
  std::vector<std::vector<std::size_t>> out(key_size_of(locked));
  for (std::size_t gi = 0; gi < locked.gates.size(); ++gi) {
    const auto& g = locked.gates[gi];
    if (g.type != GateType::Mux) continue;
    auto it = key_pos.find(g.inputs[0]);
    if (it != key_pos.end()) out[it->second].push_back(gi);
  }
  return out;
}

Netlist collapse(const Netlist& n, const std::vector<std::size_t>& muxes, bool value) {
  Netlist out = n;
  for (auto gi : muxes) {
    auto& g = out.gates[gi];
    g.inputs = {g.inputs[value ? 2 : 1]};
    g.type = GateType::Buf;
  }
  return out;
}

struct Value {
  enum class Kind { Free, Const, Alias, Gate } kind = Kind::Free;
  bool constant = false;
  std::string alias;
  GateType type = GateType::Buf;
  std::vector<std::string> inputs;
};

}  // namespace

FeatureVector extract_features(const Netlist& n) {
  FeatureVector f;
  f.gates = n.gates.size();
  for (const auto& g : n.gates) ++f.per_type[g.type];
  std::unordered_set<std::string> nets(n.inputs.begin(), n.inputs.end());
  nets.insert(n.key_inputs.begin(), n.key_inputs.end());
  for (const auto& g : n.gates) nets.insert(g.output);
  f.nets = nets.size();
  return f;
}

AttackResult saam_attack(const Netlist& locked) {
  if (locked.key_inputs.empty()) throw std::invalid_argument("netlist has no key inputs");
  const auto groups = muxes_by_key(locked);
  const auto baseline = count_kind(validate(locked), DiagnosticKind::FloatingWire);
  AttackResult r;
  r.method = "saam";
  r.guess.bits.assign(groups.size(), KeyBit::X);
  r.evidence.assign(groups.size(), {});
  const auto k_count = static_cast<std::int64_t>(groups.size());
#pragma omp parallel for schedule(dynamic)
  for (std::int64_t k = 0; k < k_count; ++k) {
    if (groups[k].empty()) {
      r.evidence[k] = "no controlled MUX";
      continue;
    }
    std::size_t floats[2];
    for (int v = 0; v < 2; ++v) {
      const auto d = validate(collapse(locked, groups[k], v == 1));
      const auto c = count_kind(d, DiagnosticKind::FloatingWire);
      floats[v] = c > baseline ? c - baseline : 0;
    }
    auto& bit = r.guess.bits[k];
    if (floats[0] > 0 && floats[1] == 0) bit = KeyBit::One;
    if (floats[1] > 0 && floats[0] == 0) bit = KeyBit::Zero;
    r.evidence[k] = "float0=" + std::to_string(floats[0]) + " float1=" + std::to_string(floats[1]);
  }
  return r;
}

Netlist simplify_const(const Netlist& n, const std::map<std::string, bool>& assignment) {
  std::unordered_map<std::string, Value> val;
  std::set<std::string> interface_inputs(n.inputs.begin(), n.inputs.end());
  interface_inputs.insert(n.key_inputs.begin(), n.key_inputs.end());
  for (const auto& [net, v] : assignment) {
    if (!interface_inputs.count(net)) throw std::invalid_argument("cannot assign non-input net " + net);
  }
  for (const auto& in : interface_inputs) {
    Value x;
    auto it = assignment.find(in);
    if (it != assignment.end()) {
      x.kind = Value::Kind::Const;
      x.constant = it->second;
    }
    val[in] = x;
  }

  std::unordered_set<std::string> taken;
  for (const auto& in : interface_inputs) taken.insert(in);
  for (const auto& g : n.gates) taken.insert(g.output);
  auto fresh = [&](const std::string& base) {
    std::string name = base;
    for (int i = 1; taken.count(name); ++i) name = base + "_" + std::to_string(i);
    taken.insert(name);
    return name;
  };

  std::vector<Gate> extra;
  std::optional<std::string> const_nets[2];
  auto const_gate = [&](bool c, const std::string& out) {
    if (assignment.empty()) throw std::invalid_argument("constant output needs an assigned input");
    const auto& [src, v] = *assignment.begin();
    return Gate{out, c == v ? GateType::Buf : GateType::Not, {src}};
  };
  auto const_net = [&](bool c) {
    auto& slot = const_nets[c ? 1 : 0];
    if (!slot) {
      const std::string base = c ? "simll_const1" : "simll_const0";
      // A constant net left by an earlier simplification keeps its name.
      auto prior = val.find(base);
      const bool reuse = prior != val.end() && prior->second.kind == Value::Kind::Const && prior->second.constant == c;
      slot = reuse ? base : fresh(base);
      extra.push_back(const_gate(c, *slot));
    }
    return *slot;
  };

  struct Operand {
    bool is_const;
    bool constant;
    std::string net;
  };
  auto operand = [&](const std::string& net) {
    const auto& v = val.at(net);
    if (v.kind == Value::Kind::Const) return Operand{true, v.constant, {}};
    if (v.kind == Value::Kind::Alias) return Operand{false, false, v.alias};
    return Operand{false, false, net};
  };

  for (auto gi : topological_order(n)) {
    const auto& g = n.gates[gi];
    Value out;
    out.kind = Value::Kind::Gate;
    out.type = g.type;
    auto set_const = [&](bool c) {
      out = {};
      out.kind = Value::Kind::Const;
      out.constant = c;
    };
    auto set_alias = [&](const std::string& net, bool invert) {
      out = {};
      if (invert) {
        out.kind = Value::Kind::Gate;
        out.type = GateType::Not;
        out.inputs = {net};
      } else {
        out.kind = Value::Kind::Alias;
        out.alias = net;
      }
    };
    std::vector<Operand> ops;
    for (const auto& in : g.inputs) ops.push_back(operand(in));

    switch (g.type) {
      case GateType::And:
      case GateType::Nand:
      case GateType::Or:
      case GateType::Nor: {
        const bool ctrl = g.type == GateType::Or || g.type == GateType::Nor;
        const bool inv = g.type == GateType::Nand || g.type == GateType::Nor;
        std::vector<std::string> rest;
        bool controlled = false;
        for (const auto& o : ops) {
          if (o.is_const) controlled |= o.constant == ctrl;
          else rest.push_back(o.net);
        }
        if (controlled) set_const(ctrl != inv);
        else if (rest.empty()) set_const(!ctrl != inv);
        else if (rest.size() == 1) set_alias(rest[0], inv);
        else out.inputs = rest;
        break;
      }
      case GateType::Xor:
      case GateType::Xnor: {
        bool inv = g.type == GateType::Xnor;
        std::vector<std::string> rest;
        for (const auto& o : ops) {
          if (o.is_const) inv ^= o.constant;
          else rest.push_back(o.net);
        }
        if (rest.empty()) set_const(inv);
        else if (rest.size() == 1) set_alias(rest[0], inv);
        else {
          out.type = inv ? GateType::Xnor : GateType::Xor;
          out.inputs = rest;
        }
        break;
      }
      case GateType::Not:
      case GateType::Buf: {
        const bool inv = g.type == GateType::Not;
        if (ops[0].is_const) set_const(ops[0].constant != inv);
        else set_alias(ops[0].net, inv);
        break;
      }
      case GateType::Mux: {
        const auto& s = ops[0];
        const auto& d0 = ops[1];
        const auto& d1 = ops[2];
        auto take = [&](const Operand& d) {
          if (d.is_const) set_const(d.constant);
          else set_alias(d.net, false);
        };
        if (s.is_const) take(s.constant ? d1 : d0);
        else if (d0.is_const && d1.is_const && d0.constant == d1.constant) set_const(d0.constant);
        else if (!d0.is_const && !d1.is_const && d0.net == d1.net) set_alias(d0.net, false);
        else if (d0.is_const && d1.is_const) set_alias(s.net, d0.constant);
        else {
          out.inputs = {s.net, d0.is_const ? const_net(d0.constant) : d0.net,
                        d1.is_const ? const_net(d1.constant) : d1.net};
        }
        break;
      }
    }
    val[g.output] = std::move(out);
  }

  // Outputs that are constants or aliases get a driver of their own.
  std::unordered_map<std::string, Gate> driver;
  for (const auto& o : n.outputs) {
    const auto& v = val.at(o);
    if (v.kind == Value::Kind::Const) driver.emplace(o, const_gate(v.constant, o));
    else if (v.kind == Value::Kind::Alias) driver.emplace(o, Gate{o, GateType::Buf, {v.alias}});
    else if (v.kind == Value::Kind::Free && interface_inputs.count(o) == 0)
      throw std::invalid_argument("output " + o + " has no driver");
  }
  for (const auto& g : n.gates) {
    const auto& v = val.at(g.output);
    if (v.kind == Value::Kind::Gate && !driver.count(g.output)) driver.emplace(g.output, Gate{g.output, v.type, v.inputs});
  }
  for (const auto& g : extra) driver.emplace(g.output, g);

  std::unordered_set<std::string> live;
  std::vector<std::string> stack(n.outputs.begin(), n.outputs.end());
  while (!stack.empty()) {
    auto net = stack.back();
    stack.pop_back();
    if (!live.insert(net).second) continue;
    auto it = driver.find(net);
    if (it == driver.end()) continue;
    for (const auto& in : it->second.inputs) stack.push_back(in);
  }

  Netlist out;
  out.name = n.name;
  out.inputs = n.inputs;
  out.key_inputs = n.key_inputs;
  out.outputs = n.outputs;
  std::unordered_set<std::string> emitted;
  auto emit = [&](const std::string& net) {
    auto it = driver.find(net);
    if (it != driver.end() && live.count(net) && emitted.insert(net).second) out.gates.push_back(it->second);
  };
  for (const auto& g : n.gates) emit(g.output);
  for (const auto& g : extra) emit(g.output);
  return out;
}

AttackResult cp_attack(const Netlist& locked, double margin) {
  const auto k_count = key_size_of(locked);
  const auto base = extract_features(locked);
  AttackResult r;
  r.method = "cp";
  r.params["margin"] = std::to_string(margin);
  r.guess.bits.assign(k_count, KeyBit::X);
  r.evidence.assign(k_count, {});
#pragma omp parallel for schedule(dynamic)
  for (std::int64_t k = 0; k < static_cast<std::int64_t>(k_count); ++k) {
    FeatureVector f[2];
    for (int v = 0; v < 2; ++v)
      f[v] = extract_features(simplify_const(locked, {{key_input_name(static_cast<std::size_t>(k)), v == 1}}));
    auto reduction = [&](int v) { return static_cast<std::int64_t>(base.gates) - static_cast<std::int64_t>(f[v].gates); };
    const auto diff = reduction(0) - reduction(1);
    if (static_cast<double>(std::abs(diff)) > margin) r.guess.bits[k] = diff < 0 ? KeyBit::Zero : KeyBit::One;
    r.evidence[k] = "reduce0=" + std::to_string(reduction(0)) + " reduce1=" + std::to_string(reduction(1)) +
                    " nets0=" + std::to_string(f[0].nets) + " nets1=" + std::to_string(f[1].nets);
  }
  return r;
}

AttackResult random_guess(std::size_t key_size, std::uint64_t seed) {
  AttackResult r;
  r.method = "random";
  r.params["seed"] = std::to_string(seed);
  std::mt19937_64 rng(seed);
  std::bernoulli_distribution coin(0.5);
  for (std::size_t k = 0; k < key_size; ++k) r.guess.bits.push_back(coin(rng) ? KeyBit::One : KeyBit::Zero);
  r.evidence.assign(key_size, {});
  return r;
}

WlReport wl_distinguishability(const Netlist& locked, const std::vector<LockRecord>& records, std::uint32_t hops) {
  std::unordered_set<std::string> removed(locked.key_inputs.begin(), locked.key_inputs.end());
  std::unordered_set<std::string> muxes;
  for (const auto& g : locked.gates)
    if (g.type == GateType::Mux) muxes.insert(g.output);
  removed.insert(muxes.begin(), muxes.end());

  std::vector<std::string> names;
  std::vector<std::string> features;
  std::unordered_map<std::string, NodeId> id;
  for (const auto& in : locked.inputs) {
    id[in] = static_cast<NodeId>(names.size());
    names.push_back(in);
    features.emplace_back(kInputFeature);
  }
  for (const auto& g : locked.gates) {
    if (g.type == GateType::Mux) continue;
    id[g.output] = static_cast<NodeId>(names.size());
    names.push_back(g.output);
    features.emplace_back(to_string(g.type));
  }
  std::vector<Link> links;
  for (const auto& g : locked.gates) {
    if (g.type == GateType::Mux) continue;
    for (std::uint32_t pin = 0; pin < g.inputs.size(); ++pin)
      if (!removed.count(g.inputs[pin])) links.push_back({id.at(g.inputs[pin]), id.at(g.output), pin});
  }
  std::vector<bool> po(names.size(), false);
  for (const auto& o : locked.outputs) {
    auto it = id.find(o);
    if (it != id.end()) po[it->second] = true;
  }
  const CircuitGraph graph(names, features, links, po);

  StateTable table;
  WlReport rep;
  std::size_t alike = 0;
  for (const auto& r : records) {
    WlVerdict v{r.key_index, r.mux, true};
    if (!muxes.count(r.mux)) throw std::invalid_argument("record names unknown key gate " + r.mux);
    for (const auto& net : {r.true_wire.source, r.false_wire.source, r.true_wire.load})
      if (!id.count(net) && !muxes.count(net)) throw std::invalid_argument("record names unknown net " + net);
    auto t_src = id.find(r.true_wire.source);
    auto f_src = id.find(r.false_wire.source);
    auto load = id.find(r.true_wire.load);
    if (t_src != id.end() && f_src != id.end() && load != id.end()) {
      const auto ft = link_fingerprint(graph, t_src->second, load->second, hops, table);
      const auto ff = link_fingerprint(graph, f_src->second, load->second, hops, table);
      v.distinguishable = ft != ff;
    }
    if (!v.distinguishable) ++alike;
    rep.verdicts.push_back(std::move(v));
  }
  rep.indistinguishable_rate = records.empty() ? 0.0 : static_cast<double>(alike) / static_cast<double>(records.size());
  return rep;
}

AttackResult wl_attack(const Netlist& locked, const std::vector<LockRecord>& records, std::uint32_t hops) {
  const auto rep = wl_distinguishability(locked, records, hops);
  const auto k_count = key_size_of(locked);
  AttackResult r;
  r.method = "wl";
  r.params["hops"] = std::to_string(hops);
  r.guess.bits.assign(k_count, KeyBit::X);
  r.evidence.assign(k_count, {});
  for (std::size_t i = 0; i < records.size(); ++i) {
    const auto k = records[i].key_index;
    if (k >= k_count) throw std::invalid_argument("lock report key index out of range");
    if (rep.verdicts[i].distinguishable) r.guess.bits[k] = records[i].correct_bit ? KeyBit::One : KeyBit::Zero;
    r.evidence[k] += (r.evidence[k].empty() ? "" : " ") + records[i].mux +
                     (rep.verdicts[i].distinguishable ? "=distinct" : "=alike");
  }
  return r;
}

}  // namespace simll
