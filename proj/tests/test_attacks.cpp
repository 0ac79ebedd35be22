#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "graph_oracle.hpp"
#include "simll/attacks.hpp"
#include "simll/metrics.hpp"
#include "test_util.hpp"

using namespace simll;

namespace {

// Graph of the locked netlist with all MUXes and key inputs deleted, built
// independently of the attack code.
CircuitGraph mux_free_graph(const Netlist& locked) {
  Netlist stripped;
  stripped.inputs = locked.inputs;
  std::set<std::string> gone(locked.key_inputs.begin(), locked.key_inputs.end());
  for (const auto& g : locked.gates)
    if (g.type == GateType::Mux) gone.insert(g.output);
  std::vector<std::string> names = locked.inputs, features(locked.inputs.size(), std::string(kInputFeature));
  for (const auto& g : locked.gates) {
    if (gone.count(g.output)) continue;
    names.push_back(g.output);
    features.emplace_back(to_string(g.type));
  }
  auto idx = [&](const std::string& s) {
    return static_cast<NodeId>(std::find(names.begin(), names.end(), s) - names.begin());
  };
  std::vector<Link> links;
  for (const auto& g : locked.gates) {
    if (gone.count(g.output)) continue;
    for (std::uint32_t p = 0; p < g.inputs.size(); ++p)
      if (!gone.count(g.inputs[p])) links.push_back({idx(g.inputs[p]), idx(g.output), p});
  }
  return CircuitGraph(names, features, links);
}

const char* kSymmetric =
    "INPUT(a)\nINPUT(b)\nOUTPUT(y1)\nOUTPUT(y2)\nOUTPUT(y3)\nOUTPUT(y4)\n"
    "y1 = NOT(a)\ny2 = BUF(a)\ny3 = NOT(b)\ny4 = BUF(b)\n";

}  // namespace

TEST_CASE("feature vectors") {
  const auto f = extract_features(testutil::load("c17"));
  CHECK(f.gates == 6);
  CHECK(f.per_type.at(GateType::Nand) == 6);
  CHECK(f.nets == 11);
}

TEST_CASE("simplify_const folds constants") {
  const auto n = parse_bench("INPUT(x)\nINPUT(y)\nINPUT(z)\nOUTPUT(o)\nOUTPUT(p)\nt = AND(x, y)\no = OR(t, z)\np = XOR(y, z)\n");
  SUBCASE("AND(x, 0) propagates") {
    const auto s = simplify_const(n, {{"y", false}});
    // t is constant 0, so o = z and p = z.
    CHECK(s.gates.size() == 2);
    for (const auto& g : s.gates) CHECK(g == Gate{g.output, GateType::Buf, {"z"}});
  }
  SUBCASE("controlling constant reaches an output") {
    const auto s = simplify_const(n, {{"z", true}});
    CHECK(s.gates.size() == 2);
    // o is constant 1, built from the assigned input z.
    CHECK(s.gates[0] == Gate{"o", GateType::Buf, {"z"}});
    CHECK(s.gates[1] == Gate{"p", GateType::Not, {"y"}});
  }
}

TEST_CASE("MUX with a constant select drops the other cone") {
  const auto n = parse_bench(
      "INPUT(a)\nINPUT(b)\nINPUT(c)\nINPUT(keyinput0)\nOUTPUT(y)\n"
      "u = AND(a, c)\nv = NOR(b, c)\nm = MUX(keyinput0, u, v)\ny = NOT(m)\n");
  const auto s1 = simplify_const(n, {{"keyinput0", true}});
  CHECK(s1.gates == std::vector<Gate>{{"v", GateType::Nor, {"b", "c"}}, {"y", GateType::Not, {"v"}}});
  const auto s0 = simplify_const(n, {{"keyinput0", false}});
  CHECK(s0.gates == std::vector<Gate>{{"u", GateType::And, {"a", "c"}}, {"y", GateType::Not, {"u"}}});
  CHECK(s1.key_inputs == n.key_inputs);
}

TEST_CASE("simplify_const keeps the function under the assignment") {
  std::mt19937_64 rng(21);
  for (const auto* name : {"c17", "c432", "c499", "c880"}) {
    const auto base = testutil::load(name);
    const auto locked = simll_lock(base, 16, 3).netlist;
    std::map<std::string, bool> assignment;
    for (const auto& in : locked.inputs)
      if (rng() % 3 == 0) assignment[in] = rng() & 1;
    for (const auto& k : locked.key_inputs)
      if (rng() % 2 == 0) assignment[k] = rng() & 1;
    if (assignment.empty()) assignment[locked.inputs[0]] = true;
    const auto s = simplify_const(locked, assignment);
    CHECK(validate(s).empty());
    CHECK(s.gates.size() <= locked.gates.size());
    for (int i = 0; i < 1000; ++i) {
      std::map<std::string, bool> v;
      for (const auto& in : locked.inputs) v[in] = rng() & 1;
      for (const auto& k : locked.key_inputs) v[k] = rng() & 1;
      for (const auto& [net, val] : assignment) v[net] = val;
      const auto a = testutil::eval_ref(locked, v);
      const auto b = testutil::eval_ref(s, v);
      for (const auto& o : locked.outputs) REQUIRE(a.at(o) == b.at(o));
    }
    CHECK(simplify_const(s, assignment) == s);
  }
}

TEST_CASE("simplify_const on MUX data inputs") {
  const auto n = parse_bench("INPUT(s)\nINPUT(a)\nINPUT(b)\nOUTPUT(y)\nt = AND(a, b)\ny = MUX(s, t, a)\n");
  const auto s = simplify_const(n, {{"b", true}});
  CHECK(s.gates == std::vector<Gate>{{"y", GateType::Buf, {"a"}}});
  const auto c = simplify_const(n, {{"b", false}});
  CHECK(validate(c).empty());
  CHECK(simplify_const(c, {{"b", false}}) == c);
  for (unsigned v = 0; v < 4; ++v) {
    std::map<std::string, bool> in{{"s", bool(v & 1)}, {"a", bool(v & 2)}, {"b", false}};
    CHECK(testutil::eval_ref(n, in).at("y") == testutil::eval_ref(c, in).at("y"));
  }
}

TEST_CASE("simplify_const rejects bad assignments") {
  const auto n = testutil::load("c17");
  CHECK_THROWS_AS(simplify_const(n, {{"ghost", true}}), std::invalid_argument);
  CHECK_THROWS_AS(simplify_const(n, {{"N10", true}}), std::invalid_argument);
}

TEST_CASE("SAAM recovers every naive key bit") {
  for (const auto* name : {"c432", "c880"}) {
    const auto d = naive_mux_lock(testutil::load(name), 32, 7);
    const auto r = saam_attack(d.netlist);
    CHECK(r.method == "saam");
    CHECK(ac_pc(r.guess, d.key).ac == 100.0);
  }
}

TEST_CASE("SAAM decides nothing on SimLL and D-MUX") {
  for (const auto* name : {"c17", "c432", "c499"}) {
    const auto n = testutil::load(name);
    for (const auto& d : {simll_lock(n, 16, 2), dmux_lock(n, 16, 2)}) {
      const auto r = saam_attack(d.netlist);
      CHECK(r.guess.count(KeyBit::X) == 16);
    }
  }
}

TEST_CASE("SAAM edge cases") {
  const auto n = parse_bench("INPUT(a)\nINPUT(b)\nINPUT(keyinput0)\nINPUT(keyinput1)\nOUTPUT(y)\ny = MUX(keyinput0, a, b)\n");
  const auto r = saam_attack(n);
  REQUIRE(r.guess.size() == 2);
  CHECK(r.guess.bits[1] == KeyBit::X);
  CHECK(r.evidence[1] == "no controlled MUX");
  CHECK_THROWS_AS(saam_attack(testutil::load("c17")), std::invalid_argument);
}

TEST_CASE("constant propagation decides a stranded cone") {
  // keyinput0 = 0 is correct; the wrong value strands u and its NOT.
  const auto n = parse_bench(
      "INPUT(a)\nINPUT(b)\nINPUT(c)\nINPUT(keyinput0)\nOUTPUT(y)\nOUTPUT(z)\n"
      "u = AND(a, b)\nw = NOT(u)\nz = OR(b, c)\nm = MUX(keyinput0, w, c)\ny = XOR(m, a)\n");
  const auto r = cp_attack(n, 0);
  CHECK(r.guess.bits[0] == KeyBit::Zero);
  CHECK(r.evidence[0].find("reduce0=1 reduce1=3") != std::string::npos);
  CHECK(cp_attack(n, 2).guess.bits[0] == KeyBit::X);
  CHECK(cp_attack(n, 1.5).guess.bits[0] == KeyBit::Zero);
}

TEST_CASE("constant propagation on SimLL") {
  const auto d = simll_lock(testutil::load("c432"), 64, 1);
  CHECK(ac_pc(cp_attack(d.netlist, 0).guess, d.key).ac <= 25.0);
  const auto all_x = cp_attack(d.netlist, 1e9);
  const auto acc = ac_pc(all_x.guess, d.key);
  CHECK(acc.ac == 0.0);
  CHECK(acc.pc == 100.0);
}

TEST_CASE("random guesses") {
  const auto a = random_guess(64, 5);
  CHECK(a.guess.size() == 64);
  CHECK(a.guess.count(KeyBit::X) == 0);
  CHECK(a.guess.bits == random_guess(64, 5).guess.bits);
  CHECK(a.guess.bits != random_guess(64, 6).guess.bits);
  KeyVector truth;
  truth.bits.assign(64, 1);
  double sum = 0;
  for (std::uint64_t s = 0; s < 1000; ++s) {
    const auto acc = ac_pc(random_guess(64, s).guess, truth);
    CHECK(acc.ac == acc.pc);
    sum += acc.ac;
  }
  CHECK(sum / 1000 == doctest::Approx(50.0).epsilon(0.05));
}

TEST_CASE("WL oracle on an automorphic pair") {
  const auto n = parse_bench(kSymmetric);
  const auto d = simll_lock(n, 2, 1);
  const auto rep = wl_distinguishability(d.netlist, d.records, 2);
  REQUIRE(rep.verdicts.size() == 2);
  for (const auto& v : rep.verdicts) CHECK_FALSE(v.distinguishable);
  CHECK(rep.indistinguishable_rate == 1.0);
  const auto guess = wl_attack(d.netlist, d.records, 2).guess;
  CHECK(guess.count(KeyBit::X) == 2);
}

TEST_CASE("WL verdicts match the brute-force expansion") {
  for (const auto* name : {"c17", "c432"}) {
    const auto n = testutil::load(name);
    for (const auto& d : {naive_mux_lock(n, name == std::string("c17") ? 1 : 16, 3), simll_lock(n, 16, 3)}) {
      const auto rep = wl_distinguishability(d.netlist, d.records, 2);
      const auto g = mux_free_graph(d.netlist);
      for (std::size_t i = 0; i < d.records.size(); ++i) {
        const auto& r = d.records[i];
        const auto t = g.find(r.true_wire.source), f = g.find(r.false_wire.source), l = g.find(r.true_wire.load);
        if (!t || !f || !l) {
          CHECK(rep.verdicts[i].distinguishable);
          continue;
        }
        const bool differ = oracle::link_strings(g, *t, *l, 2) != oracle::link_strings(g, *f, *l, 2);
        CHECK(rep.verdicts[i].distinguishable == differ);
      }
    }
  }
}

TEST_CASE("WL verdicts ignore which candidate is labelled true") {
  const auto d = dmux_lock(testutil::load("c499"), 32, 4);
  auto swapped = d.records;
  for (auto& r : swapped) std::swap(r.true_wire, r.false_wire);
  const auto a = wl_distinguishability(d.netlist, d.records, 2);
  const auto b = wl_distinguishability(d.netlist, swapped, 2);
  for (std::size_t i = 0; i < a.verdicts.size(); ++i)
    CHECK(a.verdicts[i].distinguishable == b.verdicts[i].distinguishable);
}

TEST_CASE("WL oracle rejects records from another design") {
  const auto d = simll_lock(testutil::load("c432"), 8, 1);
  auto bad = d.records;
  bad[0].mux = "nope";
  CHECK_THROWS_AS(wl_distinguishability(d.netlist, bad, 2), std::invalid_argument);
  bad = d.records;
  bad[0].false_wire.source = "ghost";
  CHECK_THROWS_AS(wl_distinguishability(d.netlist, bad, 2), std::invalid_argument);
}

TEST_CASE("WL indistinguishability of SimLL is at least that of D-MUX") {
  const auto n = testutil::load("c432");
  double simll = 0, dmux = 0;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const auto a = simll_lock(n, 32, seed);
    const auto b = dmux_lock(n, 32, seed);
    simll += wl_distinguishability(a.netlist, a.records, 2).indistinguishable_rate;
    dmux += wl_distinguishability(b.netlist, b.records, 2).indistinguishable_rate;
  }
  CHECK(simll > dmux);
}
