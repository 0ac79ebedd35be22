#include "simll/locking.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

namespace simll {

namespace {

using Kind = LockError::Kind;

template <typename T>
void shuffle(std::vector<T>& v, std::mt19937_64& rng) {
  std::shuffle(v.begin(), v.end(), rng);
}

}  // namespace

std::string_view to_string(Strategy s) {
  switch (s) {
    case Strategy::S1: return "S1";
    case Strategy::S2: return "S2";
    case Strategy::S3: return "S3";
    case Strategy::S4: return "S4";
    case Strategy::Naive: return "NAIVE";
  }
  return "?";
}

std::string_view to_string(Provenance p) {
  switch (p) {
    case Provenance::LinkCluster: return "LINK_CLUSTER";
    case Provenance::NodeCluster: return "NODE_CLUSTER";
    case Provenance::Random: return "RANDOM";
  }
  return "?";
}

std::optional<Strategy> parse_strategy(std::string_view s) {
  for (auto st : {Strategy::S1, Strategy::S2, Strategy::S3, Strategy::S4, Strategy::Naive})
    if (to_string(st) == s) return st;
  return std::nullopt;
}

Locker::Locker(const Netlist& original, std::size_t key_size, std::uint64_t seed, S3Placement s3)
    : original_(original), s3_(s3), rng_(seed) {
  if (key_size == 0) throw LockError(Kind::Precondition, "key size must be at least 1");
  if (!original.key_inputs.empty()) throw LockError(Kind::Precondition, "netlist already has key inputs");
  for (const auto& d : validate(original)) {
    if (d.severity == Severity::Error) throw LockError(Kind::Precondition, "invalid netlist: " + d.message);
  }

  std::bernoulli_distribution coin(0.5);
  key_.bits.resize(key_size);
  for (auto& b : key_.bits) b = coin(rng_) ? 1 : 0;
  key_.consumed.assign(key_size, false);

  auto add = [&](const std::string& name, std::int64_t drv) {
    if (!ids_.emplace(name, static_cast<std::uint32_t>(names_.size())).second)
      throw LockError(Kind::Precondition, "net name clash: " + name);
    names_.push_back(name);
    driver_.push_back(drv);
  };
  for (const auto& in : original.inputs) add(in, -1);
  first_key_ = static_cast<std::uint32_t>(names_.size());
  for (std::size_t k = 0; k < key_size; ++k) add(key_input_name(k), -1);
  for (std::size_t gi = 0; gi < original.gates.size(); ++gi)
    add(original.gates[gi].output, static_cast<std::int64_t>(gi));
  readers_.resize(names_.size());
  primary_output_.assign(names_.size(), false);
  s4_pairs_.assign(names_.size(), 0);
  for (const auto& o : original.outputs) primary_output_[ids_.at(o)] = true;
  for (std::size_t gi = 0; gi < original.gates.size(); ++gi) {
    const auto& g = original.gates[gi];
    WGate w{g.type, ids_.at(g.output), {}};
    for (std::uint32_t pin = 0; pin < g.inputs.size(); ++pin) {
      const auto src = ids_.at(g.inputs[pin]);
      w.ins.push_back(src);
      readers_[src].push_back({static_cast<std::uint32_t>(gi), pin});
    }
    gates_.push_back(std::move(w));
  }
  original_gates_ = gates_.size();
}

std::uint32_t Locker::net_id(const std::string& name) const {
  auto it = ids_.find(name);
  if (it == ids_.end()) throw LockError(Kind::Precondition, "unknown net " + name);
  return it->second;
}

bool Locker::is_mux_net(std::uint32_t net) const {
  return driver_[net] >= 0 && gates_[static_cast<std::size_t>(driver_[net])].type == GateType::Mux;
}

std::size_t Locker::fanout(const std::string& net) const {
  const auto id = net_id(net);
  std::size_t n = (primary_output_[id] ? 1 : 0) + s4_pairs_[id];
  for (const auto& [g, pin] : readers_[id])
    if (gates_[g].type != GateType::Mux || pin == 0) ++n;
  return n;
}

bool Locker::has_wire(const std::string& source, const std::string& load) const {
  auto s = ids_.find(source);
  auto l = ids_.find(load);
  if (s == ids_.end() || l == ids_.end() || driver_[l->second] < 0) return false;
  const auto& g = gates_[static_cast<std::size_t>(driver_[l->second])];
  return g.type != GateType::Mux && std::find(g.ins.begin(), g.ins.end(), s->second) != g.ins.end();
}

std::vector<std::pair<std::uint32_t, std::uint32_t>> Locker::lockable_fanout(std::uint32_t net,
                                                                            bool fresh_only) const {
  std::vector<std::pair<std::uint32_t, std::uint32_t>> out;
  for (const auto& r : readers_[net]) {
    if (gates_[r.first].type == GateType::Mux) continue;
    if (fresh_only && locked_pins_.count(r)) continue;
    out.push_back(r);
  }
  return out;
}

bool Locker::reaches_net(std::uint32_t from, std::uint32_t to) const {
  if (from == to) return true;
  std::vector<bool> seen(names_.size(), false);
  std::vector<std::uint32_t> stack{from};
  seen[from] = true;
  while (!stack.empty()) {
    const auto x = stack.back();
    stack.pop_back();
    for (const auto& [g, pin] : readers_[x]) {
      const auto y = gates_[g].out;
      if (y == to) return true;
      if (!seen[y]) {
        seen[y] = true;
        stack.push_back(y);
      }
    }
  }
  return false;
}

std::uint32_t Locker::add_net(const std::string& base) {
  std::string name = base;
  for (int i = 1; ids_.count(name); ++i) name = base + "_" + std::to_string(i);
  const auto id = static_cast<std::uint32_t>(names_.size());
  ids_.emplace(name, id);
  names_.push_back(name);
  driver_.push_back(static_cast<std::int64_t>(gates_.size()));
  readers_.emplace_back();
  primary_output_.push_back(false);
  s4_pairs_.push_back(0);
  return id;
}

std::size_t Locker::take_key() {
  if (!keys_left()) throw LockError(Kind::KeysExhausted, "no key bits left");
  key_.consumed[next_key_] = true;
  return next_key_++;
}

std::uint32_t Locker::gate_of(const std::string& load) const {
  const auto id = net_id(load);
  if (driver_[id] < 0) throw LockError(Kind::Precondition, load + " is not a gate output");
  const auto g = static_cast<std::uint32_t>(driver_[id]);
  if (gates_[g].type == GateType::Mux) throw LockError(Kind::Precondition, load + " is a key gate");
  return g;
}

std::pair<std::uint32_t, std::uint32_t> Locker::find_pin(std::uint32_t source, std::uint32_t gate) const {
  const auto& ins = gates_[gate].ins;
  for (std::uint32_t p = 0; p < ins.size(); ++p)
    if (ins[p] == source) return {gate, p};
  throw LockError(Kind::Precondition, "no wire " + names_[source] + " -> " + names_[gates_[gate].out]);
}

void Locker::require_false_edge(std::uint32_t false_source, std::uint32_t gate) const {
  const auto& g = gates_[gate];
  if (std::find(g.ins.begin(), g.ins.end(), false_source) != g.ins.end())
    throw LockError(Kind::Precondition, names_[g.out] + " already reads " + names_[false_source]);
  if (reaches_net(g.out, false_source))
    throw LockError(Kind::Loop, "wire " + names_[false_source] + " -> " + names_[g.out] +
                                    " would close a combinational loop");
}

std::string Locker::insert_mux(std::uint32_t gate, std::uint32_t pin, std::size_t key, std::uint32_t d0,
                               std::uint32_t d1) {
  const auto old = gates_[gate].ins[pin];
  const auto mux = add_net("simll_mux" + std::to_string(mux_counter_++));
  const auto mux_gate = static_cast<std::uint32_t>(gates_.size());
  const auto key_net = first_key_ + static_cast<std::uint32_t>(key);
  gates_.push_back({GateType::Mux, mux, {key_net, d0, d1}});
  readers_[key_net].push_back({mux_gate, 0});
  readers_[d0].push_back({mux_gate, 1});
  readers_[d1].push_back({mux_gate, 2});
  auto& r = readers_[old];
  r.erase(std::find(r.begin(), r.end(), std::pair{gate, pin}));
  gates_[gate].ins[pin] = mux;
  readers_[mux].push_back({gate, pin});
  locked_pins_.insert({gate, pin});
  locked_wires_.insert({old, gate, pin});
  return names_[mux];
}

LockRecord Locker::make_record(std::size_t key, Strategy s, const std::string& mux, std::uint32_t t,
                               std::uint32_t f, std::uint32_t gate, std::uint32_t pin, std::uint8_t bit,
                               Provenance prov) const {
  LockRecord r;
  r.key_index = key;
  r.strategy = s;
  r.mux = mux;
  r.true_wire = {names_[t], names_[gates_[gate].out]};
  r.false_wire = {names_[f], names_[gates_[gate].out]};
  r.pin = pin;
  r.correct_bit = bit;
  r.provenance = prov;
  return r;
}

std::vector<LockRecord> Locker::apply_pair(Strategy s, std::uint32_t fi, std::uint32_t fj, std::uint32_t gi,
                                           std::uint32_t pin_i, std::uint32_t gj, std::uint32_t pin_j,
                                           Provenance prov) {
  if (s != Strategy::S1 && s != Strategy::S4) throw LockError(Kind::Precondition, "pair strategy must be S1 or S4");
  if (fi == fj) throw LockError(Kind::Precondition, "input gates must differ");
  if (gi == gj) throw LockError(Kind::Precondition, "output gates must differ");
  if (is_key_net(fi) || is_key_net(fj)) throw LockError(Kind::Precondition, "key inputs cannot be MUX data");
  for (auto [g, p, f] : {std::tuple{gi, pin_i, fi}, std::tuple{gj, pin_j, fj}}) {
    if (gates_[g].type == GateType::Mux) throw LockError(Kind::Precondition, "load is a key gate");
    if (gates_[g].ins.at(p) != f)
      throw LockError(Kind::Precondition, "no wire " + names_[f] + " -> " + names_[gates_[g].out]);
    if (locked_wires_.count({f, g, p})) throw LockError(Kind::AlreadyLocked, "wire already locked");
  }
  if (keys_left() < (s == Strategy::S1 ? 2u : 1u))
    throw LockError(Kind::KeysExhausted, std::string(to_string(s)) + " needs more key bits");
  if (s == Strategy::S1 && (fanout(names_[fi]) < 2 || fanout(names_[fj]) < 2))
    throw LockError(Kind::Fanout, "S1 needs two multi-output input gates");
  require_false_edge(fj, gi);
  require_false_edge(fi, gj);

  std::vector<LockRecord> out;
  const Wire wire_i{names_[fi], names_[gates_[gi].out]};
  const Wire wire_j{names_[fj], names_[gates_[gj].out]};
  const auto ki = take_key();
  const auto kj = s == Strategy::S1 ? take_key() : ki;
  const auto bi = key_.bits[ki];
  const auto bj = key_.bits[kj];
  const auto m1 = bi ? insert_mux(gi, pin_i, ki, fj, fi) : insert_mux(gi, pin_i, ki, fi, fj);
  const auto m2 = bj ? insert_mux(gj, pin_j, kj, fi, fj) : insert_mux(gj, pin_j, kj, fj, fi);
  out.push_back(make_record(ki, s, m1, fi, fj, gi, pin_i, bi, prov));
  out.push_back(make_record(kj, s, m2, fj, fi, gj, pin_j, bj, prov));
  if (prov == Provenance::LinkCluster) {
    out[0].partner = wire_j;
    out[1].partner = wire_i;
  }
  if (s == Strategy::S4) {
    ++s4_pairs_[fi];
    ++s4_pairs_[fj];
  }
  records_.insert(records_.end(), out.begin(), out.end());
  return out;
}

std::vector<LockRecord> Locker::apply_single(Strategy s, std::uint32_t fi, std::uint32_t fj, std::uint32_t g,
                                             std::uint32_t pin, Provenance prov) {
  if (s != Strategy::S2 && s != Strategy::S3)
    throw LockError(Kind::Precondition, "single-MUX strategy must be S2 or S3");
  if (fi == fj) throw LockError(Kind::Precondition, "input gates must differ");
  if (is_key_net(fi) || is_key_net(fj)) throw LockError(Kind::Precondition, "key inputs cannot be MUX data");
  if (gates_[g].type == GateType::Mux) throw LockError(Kind::Precondition, "load is a key gate");
  const bool consumer = s == Strategy::S3 && s3_ == S3Placement::ConsumerOfSingle;
  const auto true_src = consumer ? fj : fi;
  const auto false_src = consumer ? fi : fj;
  if (gates_[g].ins.at(pin) != true_src)
    throw LockError(Kind::Precondition, "no wire " + names_[true_src] + " -> " + names_[gates_[g].out]);
  if (locked_wires_.count({true_src, g, pin})) throw LockError(Kind::AlreadyLocked, "wire already locked");
  if (!keys_left()) throw LockError(Kind::KeysExhausted, "no key bits left");
  const auto ui = fanout(names_[fi]);
  const auto uj = fanout(names_[fj]);
  if (s == Strategy::S2 && (ui < 2 || uj < 2)) throw LockError(Kind::Fanout, "S2 needs two multi-output gates");
  if (s == Strategy::S3 && (ui < 2 || uj != 1))
    throw LockError(Kind::Fanout, "S3 needs a multi-output and a single-output gate");
  require_false_edge(false_src, g);

  const auto k = take_key();
  const auto b = key_.bits[k];
  const auto m = b ? insert_mux(g, pin, k, false_src, true_src) : insert_mux(g, pin, k, true_src, false_src);
  auto rec = make_record(k, s, m, true_src, false_src, g, pin, b, prov);
  records_.push_back(rec);
  return {rec};
}

std::vector<LockRecord> Locker::apply_s1(const std::string& fi, const std::string& fj, const std::string& gi,
                                         const std::string& gj, Provenance prov) {
  const auto a = net_id(fi), b = net_id(fj);
  const auto [g1, p1] = find_pin(a, gate_of(gi));
  const auto [g2, p2] = find_pin(b, gate_of(gj));
  return apply_pair(Strategy::S1, a, b, g1, p1, g2, p2, prov);
}

std::vector<LockRecord> Locker::apply_s4(const std::string& fi, const std::string& fj, const std::string& gi,
                                         const std::string& gj, Provenance prov) {
  const auto a = net_id(fi), b = net_id(fj);
  const auto [g1, p1] = find_pin(a, gate_of(gi));
  const auto [g2, p2] = find_pin(b, gate_of(gj));
  return apply_pair(Strategy::S4, a, b, g1, p1, g2, p2, prov);
}

std::vector<LockRecord> Locker::apply_s2(const std::string& fi, const std::string& fj, const std::string& gi,
                                         Provenance prov) {
  const auto a = net_id(fi), b = net_id(fj);
  const auto [g, p] = find_pin(a, gate_of(gi));
  return apply_single(Strategy::S2, a, b, g, p, prov);
}

std::vector<LockRecord> Locker::apply_s3(const std::string& fi, const std::string& fj, const std::string& g,
                                         Provenance prov) {
  const auto a = net_id(fi), b = net_id(fj);
  const auto [gate, p] = find_pin(s3_ == S3Placement::ConsumerOfSingle ? b : a, gate_of(g));
  return apply_single(Strategy::S3, a, b, gate, p, prov);
}

std::vector<LockRecord> Locker::apply_naive(const std::string& source, const std::string& false_source,
                                            const std::string& load) {
  const auto t = net_id(source), f = net_id(false_source);
  const auto [g, pin] = find_pin(t, gate_of(load));
  if (t == f) throw LockError(Kind::Precondition, "false wire must differ from true wire");
  if (is_key_net(t) || is_key_net(f)) throw LockError(Kind::Precondition, "key inputs cannot be MUX data");
  if (locked_wires_.count({t, g, pin})) throw LockError(Kind::AlreadyLocked, "wire already locked");
  if (!keys_left()) throw LockError(Kind::KeysExhausted, "no key bits left");
  require_false_edge(f, g);
  const auto k = take_key();
  const auto b = key_.bits[k];
  const auto m = b ? insert_mux(g, pin, k, f, t) : insert_mux(g, pin, k, t, f);
  auto rec = make_record(k, Strategy::Naive, m, t, f, g, pin, b, Provenance::Random);
  records_.push_back(rec);
  return {rec};
}

LockedDesign Locker::finish(std::uint32_t hops) const {
  if (keys_left())
    throw LockError(Kind::Capacity, "could only place " + std::to_string(next_key_) + " of " +
                                        std::to_string(key_.size()) + " key bits (shortfall " +
                                        std::to_string(keys_left()) + ")");
  LockedDesign d;
  d.netlist.name = original_.name;
  d.netlist.inputs = original_.inputs;
  d.netlist.outputs = original_.outputs;
  for (std::size_t k = 0; k < key_.size(); ++k) d.netlist.key_inputs.push_back(key_input_name(k));
  for (const auto& g : gates_) {
    Gate out{names_[g.out], g.type, {}};
    for (auto in : g.ins) out.inputs.push_back(names_[in]);
    d.netlist.gates.push_back(std::move(out));
  }
  d.key = key_;
  d.records = records_;
  d.hops = hops;
  return d;
}

namespace {

// Original fan-out of a graph node: reader pins plus primary-output status.
std::size_t graph_fanout(const CircuitGraph& g, NodeId v) {
  return g.fanout(v) + (g.is_primary_output(v) ? 1 : 0);
}

std::vector<std::size_t> by_size_desc(const ClusterSet& cs) {
  std::vector<std::size_t> order(cs.clusters.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](auto a, auto b) { return cs.clusters[a].size() > cs.clusters[b].size(); });
  return order;
}

bool try_nodes(Locker& L, Strategy s, std::uint32_t fi, std::uint32_t fj, Provenance prov, bool fresh_only,
               S3Placement s3) {
  auto gi = L.lockable_fanout(fi, fresh_only);
  shuffle(gi, L.rng());
  if (s == Strategy::S1 || s == Strategy::S4) {
    auto gj = L.lockable_fanout(fj, fresh_only);
    shuffle(gj, L.rng());
    for (const auto& [g1, p1] : gi) {
      for (const auto& [g2, p2] : gj) {
        try {
          L.apply_pair(s, fi, fj, g1, p1, g2, p2, prov);
          return true;
        } catch (const LockError&) {
        }
      }
    }
    return false;
  }
  if (s == Strategy::S3 && s3 == S3Placement::ConsumerOfSingle) {
    gi = L.lockable_fanout(fj, fresh_only);
    shuffle(gi, L.rng());
  }
  for (const auto& [g, p] : gi) {
    try {
      L.apply_single(s, fi, fj, g, p, prov);
      return true;
    } catch (const LockError&) {
    }
  }
  return false;
}

bool role_ok(Strategy s, bool first, std::size_t u) {
  switch (s) {
    case Strategy::S1:
    case Strategy::S2: return u >= 2;
    case Strategy::S3: return first ? u >= 2 : u == 1;
    default: return u >= 1;
  }
}

}  // namespace

void dmux_step(Locker& L, std::vector<Strategy> strategies) {
  shuffle(strategies, L.rng());
  const auto s3 = S3Placement::FanoutOfMulti;
  for (bool fresh : {true, false}) {
    // Candidate input gates per role.
    std::vector<std::uint32_t> nets;
    std::vector<std::size_t> u(L.net_count());
    for (std::uint32_t n = 0; n < L.net_count(); ++n) {
      if (L.is_key_net(n)) continue;
      nets.push_back(n);
      u[n] = L.fanout(L.net_name(n));
    }
    for (auto s : strategies) {
      if (s == Strategy::Naive) continue;
      if (s == Strategy::S1 && L.keys_left() < 2) continue;
      const bool needs_fj_links = s == Strategy::S1 || s == Strategy::S4;
      std::vector<std::uint32_t> first, second;
      for (auto n : nets) {
        const bool has_links = !L.lockable_fanout(n, fresh).empty();
        if (has_links && role_ok(s, true, u[n])) first.push_back(n);
        if ((has_links || !needs_fj_links) && role_ok(s, false, u[n])) second.push_back(n);
      }
      if (first.empty() || second.empty()) continue;
      std::uniform_int_distribution<std::size_t> pick_first(0, first.size() - 1);
      std::uniform_int_distribution<std::size_t> pick_second(0, second.size() - 1);
      for (int attempt = 0; attempt < 256; ++attempt) {
        const auto fi = first[pick_first(L.rng())];
        const auto fj = second[pick_second(L.rng())];
        if (fi != fj && try_nodes(L, s, fi, fj, Provenance::Random, fresh, s3)) return;
      }
      shuffle(first, L.rng());
      shuffle(second, L.rng());
      for (auto fi : first)
        for (auto fj : second)
          if (fi != fj && try_nodes(L, s, fi, fj, Provenance::Random, fresh, s3)) return;
    }
  }
  throw LockError(Kind::Capacity, "no applicable D-MUX candidate left (" + std::to_string(L.keys_left()) +
                                      " key bits unplaced)");
}

LockedDesign simll_lock(const Netlist& n, std::size_t key_size, std::uint64_t seed, const LockOptions& opts) {
  Locker L(n, key_size, seed, opts.s3_placement);
  const auto g = to_graph(n);
  const auto nc = node_clusters(g, opts.hops, opts.execution);
  const auto lc = link_clusters(g, opts.hops, opts.execution, opts.subgraph);
  auto net_of = [&](NodeId v) { return L.net_id(g.name(v)); };
  const auto first_gate = static_cast<NodeId>(n.inputs.size());
  auto gate_of = [&](const Link& l) { return static_cast<std::uint32_t>(l.target - first_gate); };
  auto current = [&](const Link& l) { return L.pin_source(gate_of(l), l.pin) == net_of(l.source); };

  // Pair up links from one cluster; the first link that finds no partner is
  // dropped.
  auto pair_links = [&](std::vector<std::uint32_t>& pool, Strategy s, std::size_t min_keys) {
    while (L.keys_left() >= min_keys) {
      std::erase_if(pool, [&](auto li) { return !current(g.link(li)); });
      if (pool.size() < 2) return;
      const auto& a = g.link(pool[0]);
      bool placed = false;
      for (std::size_t j = 1; j < pool.size() && !placed; ++j) {
        const auto& b = g.link(pool[j]);
        try {
          L.apply_pair(s, net_of(a.source), net_of(b.source), gate_of(a), a.pin, gate_of(b), b.pin,
                       Provenance::LinkCluster);
          pool.erase(pool.begin() + static_cast<std::ptrdiff_t>(j));
          placed = true;
        } catch (const LockError&) {
        }
      }
      pool.erase(pool.begin());
    }
  };

  for (auto ci : by_size_desc(lc)) {
    const auto& c = lc.clusters[ci];
    if (c.size() < 2) break;
    if (!L.keys_left()) break;
    std::vector<std::uint32_t> single, multi;
    for (auto li : c) (graph_fanout(g, g.link(li).source) >= 2 ? multi : single).push_back(li);
    pair_links(multi, Strategy::S1, 2);
    pair_links(single, Strategy::S4, 1);
  }

  auto strategies = opts.strategies;
  for (auto ci : by_size_desc(nc)) {
    const auto& c = nc.clusters[ci];
    if (c.size() < 2 || !L.keys_left()) break;
    std::vector<std::uint32_t> members;
    for (auto v : c) members.push_back(net_of(v));
    std::vector<bool> used(members.size(), false);
    while (L.keys_left() >= 1) {
      std::vector<std::uint32_t> fm, fs;
      for (std::size_t i = 0; i < members.size(); ++i) {
        if (used[i]) continue;
        const auto u = L.fanout(L.net_name(members[i]));
        if (u >= 2) fm.push_back(members[i]);
        else if (u == 1) fs.push_back(members[i]);
      }
      if (fm.size() + fs.size() < 2) break;
      std::vector<std::uint32_t> all = fm;
      all.insert(all.end(), fs.begin(), fs.end());
      shuffle(strategies, L.rng());
      std::optional<std::pair<std::uint32_t, std::uint32_t>> chosen;
      for (auto s : strategies) {
        const std::vector<std::uint32_t>* first = nullptr;
        const std::vector<std::uint32_t>* second = nullptr;
        if (s == Strategy::S1 && fm.size() >= 2 && L.keys_left() >= 2) first = second = &fm;
        else if (s == Strategy::S2 && fm.size() >= 2) first = second = &fm;
        else if (s == Strategy::S3 && !fm.empty() && !fs.empty()) first = &fm, second = &fs;
        else if (s == Strategy::S4) first = second = &all;
        if (!first) continue;
        for (auto fi : *first) {
          for (auto fj : *second) {
            if (fi == fj) continue;
            if (try_nodes(L, s, fi, fj, Provenance::NodeCluster, true, opts.s3_placement)) {
              chosen = {fi, fj};
              break;
            }
          }
          if (chosen) break;
        }
        if (chosen) break;
      }
      if (!chosen) break;
      for (std::size_t i = 0; i < members.size(); ++i)
        if (members[i] == chosen->first || members[i] == chosen->second) used[i] = true;
    }
  }

  while (L.keys_left() >= 1) dmux_step(L, opts.strategies);
  auto d = L.finish(opts.hops);
  d.seed = seed;
  return d;
}

LockedDesign dmux_lock(const Netlist& n, std::size_t key_size, std::uint64_t seed,
                       const std::vector<Strategy>& strategies) {
  Locker L(n, key_size, seed);
  while (L.keys_left() >= 1) dmux_step(L, strategies);
  auto d = L.finish();
  d.seed = seed;
  return d;
}

LockedDesign naive_mux_lock(const Netlist& n, std::size_t key_size, std::uint64_t seed) {
  Locker L(n, key_size, seed);
  std::set<std::uint32_t> true_sources, false_sources;
  for (std::size_t k = 0; k < key_size; ++k) {
    std::vector<std::pair<std::uint32_t, std::uint32_t>> pins;
    for (std::uint32_t gate = 0; gate < L.gate_count(); ++gate) {
      if (L.is_mux_gate(gate)) continue;
      const auto out = L.gate_output(gate);
      for (std::uint32_t pin = 0; pin < n.gates[gate].inputs.size(); ++pin) {
        const auto src = L.pin_source(gate, pin);
        if (L.pin_locked(gate, pin) || L.driver(src) < 0 || L.is_mux_net(src)) continue;
        if (false_sources.count(src) || L.fanout(L.net_name(src)) != 1) continue;
        // A primary output never floats.
        if (std::find(n.outputs.begin(), n.outputs.end(), L.net_name(src)) != n.outputs.end()) continue;
        (void)out;
        pins.push_back({gate, pin});
      }
    }
    shuffle(pins, L.rng());
    std::vector<std::uint32_t> decoys;
    for (std::uint32_t net = 0; net < L.net_count(); ++net) {
      if (L.is_key_net(net) || L.is_mux_net(net) || true_sources.count(net)) continue;
      if (L.fanout(L.net_name(net)) == 0) continue;
      decoys.push_back(net);
    }
    bool placed = false;
    for (const auto& [gate, pin] : pins) {
      shuffle(decoys, L.rng());
      const auto src = L.pin_source(gate, pin);
      for (auto f : decoys) {
        if (f == src) continue;
        try {
          L.apply_naive(L.net_name(src), L.net_name(f), L.net_name(L.gate_output(gate)));
          true_sources.insert(src);
          false_sources.insert(f);
          placed = true;
          break;
        } catch (const LockError&) {
        }
      }
      if (placed) break;
    }
    if (!placed)
      throw LockError(Kind::Capacity, "insufficient nets for naive locking: placed " + std::to_string(k) +
                                          " of " + std::to_string(key_size) + " key bits");
  }
  auto d = L.finish();
  d.seed = seed;
  return d;
}

Netlist resolve_key(const Netlist& locked, const std::vector<std::uint8_t>& bits) {
  std::vector<std::pair<std::string, bool>> assignment;
  for (const auto& k : locked.key_inputs) {
    const auto idx = key_index(k);
    if (!idx || *idx >= bits.size()) throw std::invalid_argument("key input " + k + " outside key vector");
    assignment.emplace_back(k, bits[*idx] != 0);
  }
  return apply_key_to_muxes(locked, assignment);
}

std::string write_lock_report(const std::vector<LockRecord>& records) {
  std::ostringstream os;
  for (const auto& r : records) {
    os << "key=" << r.key_index << " strategy=" << to_string(r.strategy) << " true=" << r.true_wire.source
       << "->" << r.true_wire.load << " false=" << r.false_wire.source << "->" << r.false_wire.load
       << " pin=" << r.pin << " mux=" << r.mux << " correct=" << int(r.correct_bit)
       << " provenance=" << to_string(r.provenance);
    if (r.partner) os << " partner=" << r.partner->source << "->" << r.partner->load;
    os << "\n";
  }
  return os.str();
}

std::vector<LockRecord> parse_lock_report(std::string_view text) {
  std::vector<LockRecord> out;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t line_no = 0;
  auto wire = [&](const std::string& v) {
    const auto arrow = v.find("->");
    if (arrow == std::string::npos) throw std::runtime_error("lock report line " + std::to_string(line_no) + ": bad wire " + v);
    return Wire{v.substr(0, arrow), v.substr(arrow + 2)};
  };
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    std::istringstream fields(line);
    std::string tok;
    LockRecord r;
    while (fields >> tok) {
      const auto eq = tok.find('=');
      if (eq == std::string::npos) throw std::runtime_error("lock report line " + std::to_string(line_no) + ": bad field " + tok);
      const auto k = tok.substr(0, eq);
      const auto v = tok.substr(eq + 1);
      if (k == "key") r.key_index = std::stoul(v);
      else if (k == "strategy") {
        auto s = parse_strategy(v);
        if (!s) throw std::runtime_error("lock report line " + std::to_string(line_no) + ": bad strategy " + v);
        r.strategy = *s;
      } else if (k == "true") r.true_wire = wire(v);
      else if (k == "false") r.false_wire = wire(v);
      else if (k == "pin") r.pin = static_cast<std::uint32_t>(std::stoul(v));
      else if (k == "mux") r.mux = v;
      else if (k == "correct") r.correct_bit = v == "1" ? 1 : 0;
      else if (k == "provenance") {
        r.provenance = v == "LINK_CLUSTER" ? Provenance::LinkCluster
                       : v == "NODE_CLUSTER" ? Provenance::NodeCluster
                                             : Provenance::Random;
      } else if (k == "partner") r.partner = wire(v);
    }
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace simll
