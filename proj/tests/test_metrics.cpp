#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "simll/metrics.hpp"
#include "test_util.hpp"

using namespace simll;

namespace {

KeyGuess guess_of(const std::string& s) {
  KeyGuess g;
  for (char c : s) g.bits.push_back(c == '0' ? KeyBit::Zero : c == '1' ? KeyBit::One : KeyBit::X);
  return g;
}

KeyVector key_of(const std::string& s) {
  KeyVector k;
  for (char c : s) k.bits.push_back(c == '1');
  k.consumed.assign(k.bits.size(), true);
  return k;
}

const char* kOracle = "INPUT(a)\nINPUT(b)\nINPUT(c)\nOUTPUT(y)\nOUTPUT(z)\ny = AND(a, b)\nz = OR(b, c)\n";
// keyinput0 = 0 and keyinput1 = 1 restore the oracle.
const char* kLocked =
    "INPUT(a)\nINPUT(b)\nINPUT(c)\nINPUT(keyinput0)\nINPUT(keyinput1)\nOUTPUT(y)\nOUTPUT(z)\n"
    "m0 = MUX(keyinput0, a, c)\nm1 = MUX(keyinput1, a, b)\ny = AND(m0, b)\nz = OR(m1, c)\n";

// FC and HD by enumerating all 8 input vectors with the sweep evaluator.
std::pair<double, double> exhaustive_fc_hd(const Netlist& o, const Netlist& l, const std::vector<bool>& key) {
  int err = 0, bits = 0;
  for (unsigned v = 0; v < 8; ++v) {
    std::vector<bool> in{bool(v & 1), bool(v & 2), bool(v & 4)};
    const auto a = testutil::outputs_ref(o, in);
    const auto b = testutil::outputs_ref(l, in, key);
    int d = 0;
    for (std::size_t i = 0; i < a.size(); ++i) d += a[i] != b[i];
    err += d > 0;
    bits += d;
  }
  return {err / 8.0, bits / 8.0};
}

}  // namespace

TEST_CASE("AC and PC formulas") {
  SUBCASE("half right, no X") {
    std::string g(64, '0'), t(64, '0');
    for (int i = 0; i < 32; ++i) t[i] = '1';
    const auto r = ac_pc(guess_of(g), key_of(t));
    CHECK(r.ac == doctest::Approx(50.0));
    CHECK(r.pc == doctest::Approx(50.0));
  }
  SUBCASE("all X") {
    const auto r = ac_pc(guess_of(std::string(64, 'X')), key_of(std::string(64, '1')));
    CHECK(r.ac == 0.0);
    CHECK(r.pc == 100.0);
    CHECK(r.undecided == 64);
  }
  SUBCASE("33 correct, 20 X, 11 wrong") {
    const std::string t(64, '1');
    const auto g = std::string(33, '1') + std::string(20, 'X') + std::string(11, '0');
    const auto r = ac_pc(guess_of(g), key_of(t));
    CHECK(r.correct == 33);
    CHECK(r.undecided == 20);
    CHECK(r.total == 64);
    CHECK(r.ac == doctest::Approx(33.0 / 64.0 * 100.0));
    CHECK(r.pc == doctest::Approx(53.0 / 64.0 * 100.0));
    CHECK(r.ac == 51.5625);
    CHECK(r.pc == 82.8125);
  }
  CHECK_THROWS(ac_pc(guess_of("01"), key_of("011")));
}

TEST_CASE("resolve_x fills only undecided bits") {
  const auto g = guess_of("01X1X");
  const auto k = resolve_x(g, 3);
  CHECK(k.bits[0] == 0);
  CHECK(k.bits[1] == 1);
  CHECK(k.bits[3] == 1);
  CHECK(resolve_x(guess_of("0110"), 9).bits == std::vector<std::uint8_t>{0, 1, 1, 0});
  CHECK(resolve_x(g, 3) == resolve_x(g, 3));
}

TEST_CASE("resolved X bits are fair coins") {
  const auto g = guess_of("X");
  int ones = 0;
  for (std::uint64_t s = 0; s < 1000; ++s) ones += resolve_x(g, s).bits[0];
  CHECK(ones >= 450);
  CHECK(ones <= 550);
  bool differ = false;
  const auto all_x = guess_of(std::string(32, 'X'));
  for (std::uint64_t s = 1; s < 5; ++s) differ |= resolve_x(all_x, s) != resolve_x(all_x, 0);
  CHECK(differ);
}

TEST_CASE("FC and HD match exhaustive enumeration") {
  const auto o = parse_bench(kOracle);
  const auto l = parse_bench(kLocked);
  const auto ps = PatternSet::exhaustive(3);
  for (unsigned k = 0; k < 4; ++k) {
    const std::vector<bool> key{bool(k & 1), bool(k & 2)};
    const auto [fc_ref, hd_ref] = exhaustive_fc_hd(o, l, key);
    const auto kv = key_of(std::string{char('0' + key[0]), char('0' + key[1])});
    CHECK(fc(o, l, kv, ps) == doctest::Approx(fc_ref));
    const auto h = hd(o, l, kv, ps);
    CHECK(h.raw == doctest::Approx(hd_ref));
    CHECK(h.percent == doctest::Approx(hd_ref / 2.0 * 100.0));
  }
  CHECK(fc(o, l, key_of("01"), ps) == 0.0);
  CHECK(hd(o, l, key_of("01"), ps).raw == 0.0);
}

TEST_CASE("an inverted single output gives FC = HD = 1") {
  const auto o = parse_bench("INPUT(a)\nOUTPUT(y)\ny = BUF(a)\n");
  const auto l = parse_bench("INPUT(a)\nOUTPUT(y)\ny = NOT(a)\n");
  const auto ps = PatternSet::random(1, 1000);
  CHECK(fc(o, l, {}, ps) == 1.0);
  CHECK(hd(o, l, {}, ps).raw == 1.0);
  CHECK(hd(o, l, {}, ps).percent == 100.0);
}

TEST_CASE("FC <= HD_raw <= FC * m") {
  const auto o = testutil::load("c432");
  auto l = o;
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 10; ++trial) {
    l = o;
    l.gates[rng() % l.gates.size()].type = GateType::Xor;
    const auto ps = PatternSet::random(trial, 5000);
    const double f = fc(o, l, {}, ps);
    const auto h = hd(o, l, {}, ps);
    CHECK(f <= h.raw + 1e-12);
    CHECK(h.raw <= f * static_cast<double>(o.outputs.size()) + 1e-12);
    CHECK((f == 0.0) == (h.raw == 0.0));
  }
}

TEST_CASE("evaluate averages over X seeds") {
  const auto o = parse_bench(kOracle);
  const auto l = parse_bench(kLocked);
  EvalOptions opts;
  opts.patterns = 4096;
  opts.x_seeds = 10;
  SUBCASE("no X: single run") {
    const auto r = evaluate(o, l, key_of("01"), guess_of("01"), opts);
    CHECK(r.x_seeds.size() == 1);
    CHECK(r.fc == 0.0);
    CHECK(r.ac == 100.0);
  }
  SUBCASE("X bits: ten runs, mean of the runs") {
    const auto r = evaluate(o, l, key_of("01"), guess_of("XX"), opts);
    REQUIRE(r.fc_runs.size() == 10);
    double mean = 0;
    for (double x : r.fc_runs) mean += x / 10;
    CHECK(r.fc == doctest::Approx(mean));
    CHECK(r.pc == 100.0);
    CHECK(r.ac == 0.0);
    CHECK(r.hd_pct == doctest::Approx(r.hd_raw / 2 * 100));
    CHECK(r.fc <= r.hd_raw + 1e-12);
    CHECK(r.hd_raw <= r.fc * 2 + 1e-12);
  }
}

TEST_CASE("report formatting") {
  MetricsReport r;
  r.ac = 51.5625;
  r.pc = 82.8125;
  r.key_bits = 64;
  r.x_seeds = {1, 2};
  const auto text = format_report(r);
  CHECK(text.find("ac=51.5625\n") != std::string::npos);
  CHECK(text.find("pc=82.8125\n") != std::string::npos);
  CHECK(text.find("key_bits=64\n") != std::string::npos);
  CHECK(text.find("x_seeds=1,2\n") != std::string::npos);
  CHECK(format_report_table(r).find("AC (%)") != std::string::npos);
}

TEST_CASE("equivalence check") {
  const auto o = parse_bench(kOracle);
  const auto l = parse_bench(kLocked);
  const auto good = equivalence_check(o, l, key_of("01"));
  CHECK(good.equivalent);
  CHECK(good.exhaustive);
  CHECK(good.patterns == 8);
  const auto bad = equivalence_check(o, l, key_of("11"));
  CHECK_FALSE(bad.equivalent);
  REQUIRE(bad.counterexample.has_value());
  const auto& cx = *bad.counterexample;
  const std::vector<bool> in{cx[0] != 0, cx[1] != 0, cx[2] != 0};
  CHECK(testutil::outputs_ref(o, in) != testutil::outputs_ref(l, in, {true, true}));
  CHECK(equivalence_check(o, o, {}).equivalent);
  const auto big = testutil::load("c432");
  const auto v = equivalence_check(big, big, {}, 10000);
  CHECK(v.equivalent);
  CHECK_FALSE(v.exhaustive);
  CHECK(v.patterns >= 10000);
  CHECK_THROWS_AS(equivalence_check(o, big, {}), std::invalid_argument);
}
