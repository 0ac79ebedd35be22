// simll command-line front end.

#include <omp.h>

#include <CLI11.hpp>
#include <filesystem>
#include <iostream>
#include <sstream>

#include "simll/attacks.hpp"
#include "simll/locking.hpp"
#include "simll/manifest.hpp"
#include "simll/metrics.hpp"
#include "simll/similarity.hpp"

namespace fs = std::filesystem;
using namespace simll;

namespace {

constexpr int kExitFail = 1;
constexpr int kExitError = 2;

std::string comment_block(const RunManifest& m) {
  std::istringstream in(m.str());
  std::string line, out;
  while (std::getline(in, line)) out += "# " + line + "\n";
  return out;
}

std::vector<Strategy> parse_strategy_list(const std::string& text) {
  std::vector<Strategy> out;
  std::istringstream in(text);
  std::string tok;
  while (std::getline(in, tok, ',')) {
    auto s = parse_strategy(tok);
    if (!s || *s == Strategy::Naive) throw CLI::ValidationError("--strategies", "unknown strategy " + tok);
    out.push_back(*s);
  }
  if (out.empty()) throw CLI::ValidationError("--strategies", "empty list");
  return out;
}

std::string join_strategies(const std::vector<Strategy>& v) {
  std::string out;
  for (auto s : v) out += (out.empty() ? "" : ",") + std::string(to_string(s));
  return out;
}

void emit(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") std::cout << text;
  else write_text_file(path, text);
}

struct LockArgs {
  std::string in, out_dir, scheme = "simll", strategies = "S1,S2,S3,S4";
  std::size_t keys = 0;
  std::uint32_t hops = 2;
  std::uint64_t seed = 1;
};

int cmd_lock(const LockArgs& a) {
  const auto n = read_bench_file(a.in);
  const auto strategies = parse_strategy_list(a.strategies);
  LockedDesign d;
  if (a.scheme == "simll") {
    LockOptions opts;
    opts.hops = a.hops;
    opts.strategies = strategies;
    d = simll_lock(n, a.keys, a.seed, opts);
  } else if (a.scheme == "dmux") {
    d = dmux_lock(n, a.keys, a.seed, strategies);
  } else {
    d = naive_mux_lock(n, a.keys, a.seed);
  }
  fs::create_directories(a.out_dir);
  const fs::path dir(a.out_dir);
  RunManifest m("lock");
  m.add_file("in", a.in);
  m.set("keys", std::to_string(a.keys));
  m.set("hops", std::to_string(a.hops));
  m.set("seed", std::to_string(a.seed));
  m.set("scheme", a.scheme);
  m.set("strategies", join_strategies(strategies));
  write_text_file((dir / "locked.bench").string(), write_bench(d.netlist));
  write_text_file((dir / "key.txt").string(), write_key_file(d.key));
  write_text_file((dir / "lockreport.txt").string(), write_lock_report(d.records));
  m.add_file("out.locked", (dir / "locked.bench").string(), "locked.bench");
  m.add_file("out.key", (dir / "key.txt").string(), "key.txt");
  m.add_file("out.lockreport", (dir / "lockreport.txt").string(), "lockreport.txt");
  write_text_file((dir / "manifest.txt").string(), m.str());
  std::cout << "locked " << n.name << " with " << a.keys << " key bits (" << d.records.size() << " key gates) into "
            << a.out_dir << "\n";
  return 0;
}

struct ClusterArgs {
  std::string in, out;
  std::uint32_t hops = 2;
  std::uint64_t seed = 1;
};

std::string summary_lines(const std::string& prefix, const ClusterSummary& s) {
  std::ostringstream os;
  os << prefix << ".clusters=" << s.clusters << "\n"
     << prefix << ".elements=" << s.elements << "\n"
     << prefix << ".fraction_shared=" << s.fraction_shared << "\n";
  os << prefix << ".histogram=";
  bool first = true;
  for (const auto& [size, count] : s.histogram) {
    os << (first ? "" : ",") << size << ":" << count;
    first = false;
  }
  os << "\n";
  return os.str();
}

int cmd_clusters(const ClusterArgs& a) {
  const auto n = read_bench_file(a.in);
  const auto g = to_graph(n);
  const auto nc = node_clusters(g, a.hops);
  const auto lc = link_clusters(g, a.hops);
  RunManifest m("clusters");
  m.add_file("in", a.in);
  m.set("hops", std::to_string(a.hops));
  m.set("seed", std::to_string(a.seed));
  std::ostringstream os;
  os << comment_block(m);
  os << "# node clusters\n";
  for (std::size_t i = 0; i < nc.clusters.size(); ++i) {
    os << hex64(nc.fingerprints[i]);
    for (auto v : nc.clusters[i]) os << " " << g.name(v);
    os << "\n";
  }
  os << "# link clusters\n";
  for (std::size_t i = 0; i < lc.clusters.size(); ++i) {
    os << hex64(lc.fingerprints[i]);
    for (auto l : lc.clusters[i]) os << " " << g.link_name(g.link(l));
    os << "\n";
  }
  const auto stats = cluster_stats(nc, lc);
  os << "# stats\n" << summary_lines("nodes", stats.nodes) << summary_lines("links", stats.links);
  emit(a.out, os.str());
  return 0;
}

struct AttackArgs {
  std::string in, method, lockreport, out;
  double margin = 0.0;
  std::uint32_t hops = 2;
  std::uint64_t seed = 1;
};

int cmd_attack(const AttackArgs& a) {
  const auto n = read_bench_file(a.in);
  RunManifest m("attack");
  m.add_file("in", a.in);
  m.set("method", a.method);
  m.set("margin", std::to_string(a.margin));
  m.set("hops", std::to_string(a.hops));
  m.set("seed", std::to_string(a.seed));
  AttackResult r;
  if (a.method == "saam") {
    r = saam_attack(n);
  } else if (a.method == "cp") {
    r = cp_attack(n, a.margin);
  } else if (a.method == "random") {
    r = random_guess(key_size_of(n), a.seed);
  } else {
    if (a.lockreport.empty()) throw CLI::RequiredError("--lockreport (required by --method wl)");
    m.add_file("lockreport", a.lockreport);
    r = wl_attack(n, parse_lock_report(read_text_file(a.lockreport)), a.hops);
  }
  emit(a.out, comment_block(m) + write_guess_file(r.guess));
  std::cerr << a.method << ": decided " << (r.guess.size() - r.guess.count(KeyBit::X)) << " of " << r.guess.size()
            << " key bits\n";
  return 0;
}

struct EvalArgs {
  std::string oracle, locked, key, guess, out;
  std::uint64_t patterns = 200000;
  std::uint32_t xseeds = 10;
  std::uint64_t seed = 1;
  bool pretty = false;
};

int cmd_eval(const EvalArgs& a) {
  const auto oracle = read_bench_file(a.oracle);
  const auto locked = read_bench_file(a.locked);
  const auto key = parse_key_file(read_text_file(a.key));
  const auto guess = parse_guess_file(read_text_file(a.guess));
  EvalOptions opts;
  opts.patterns = a.patterns;
  opts.pattern_seed = a.seed;
  opts.x_seeds = a.xseeds;
  const auto report = evaluate(oracle, locked, key, guess, opts);
  RunManifest m("eval");
  m.add_file("oracle", a.oracle);
  m.add_file("locked", a.locked);
  m.add_file("key", a.key);
  m.add_file("guess", a.guess);
  m.set("patterns", std::to_string(a.patterns));
  m.set("xseeds", std::to_string(a.xseeds));
  m.set("seed", std::to_string(a.seed));
  emit(a.out, comment_block(m) + format_report(report));
  if (a.pretty) std::cout << format_report_table(report);
  return 0;
}

struct VerifyArgs {
  std::string oracle, locked, key;
  std::uint64_t patterns = 10000;
  std::uint64_t seed = 1;
};

int cmd_verify(const VerifyArgs& a) {
  const auto oracle = read_bench_file(a.oracle);
  const auto locked = read_bench_file(a.locked);
  const auto key = parse_key_file(read_text_file(a.key));
  const auto v = equivalence_check(oracle, locked, key, a.patterns, a.seed);
  std::cout << "seed=" << a.seed << "\n";
  std::cout << "mode=" << (v.exhaustive ? "exhaustive" : "random") << "\npatterns=" << v.patterns << "\n";
  if (v.equivalent) {
    std::cout << "verdict=PASS\n";
    return 0;
  }
  std::cout << "verdict=FAIL\ncounterexample=";
  for (std::size_t i = 0; i < oracle.inputs.size(); ++i)
    std::cout << (i ? " " : "") << oracle.inputs[i] << "=" << int((*v.counterexample)[i]);
  std::cout << "\n";
  return kExitFail;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Similarity-based MUX logic locking toolkit"};
  app.require_subcommand(1);
  app.fallthrough();
  int threads = 0;
  app.add_option("--threads", threads, "Worker thread cap (0 = runtime default)")->check(CLI::NonNegativeNumber);

  LockArgs lock;
  auto* lock_cmd = app.add_subcommand("lock", "Lock a bench netlist");
  lock_cmd->add_option("--in", lock.in, "Input bench file")->required()->check(CLI::ExistingFile);
  lock_cmd->add_option("--keys", lock.keys, "Key size")->required()->check(CLI::PositiveNumber);
  lock_cmd->add_option("--hops", lock.hops, "Neighbourhood depth h")->check(CLI::Range(1, 4));
  lock_cmd->add_option("--seed", lock.seed, "Random seed");
  lock_cmd->add_option("--scheme", lock.scheme, "Locking scheme")->check(CLI::IsMember({"simll", "dmux", "naive"}));
  lock_cmd->add_option("--strategies", lock.strategies, "Comma-separated subset of S1,S2,S3,S4");
  lock_cmd->add_option("--out-dir", lock.out_dir, "Output directory")->required();

  ClusterArgs clusters;
  auto* clusters_cmd = app.add_subcommand("clusters", "List node and link clusters");
  clusters_cmd->add_option("--in", clusters.in, "Input bench file")->required()->check(CLI::ExistingFile);
  clusters_cmd->add_option("--hops", clusters.hops, "Neighbourhood depth h")->check(CLI::Range(1, 4));
  clusters_cmd->add_option("--seed", clusters.seed, "Random seed (recorded)");
  clusters_cmd->add_option("--out", clusters.out, "Output file (default stdout)");

  AttackArgs attack;
  auto* attack_cmd = app.add_subcommand("attack", "Run an oracle-less attack and write a guess file");
  attack_cmd->add_option("--in", attack.in, "Locked bench file")->required()->check(CLI::ExistingFile);
  attack_cmd->add_option("--method", attack.method, "Attack")->required()->check(
      CLI::IsMember({"saam", "cp", "wl", "random"}));
  attack_cmd->add_option("--margin", attack.margin, "Decision margin m (cp)")->check(CLI::NonNegativeNumber);
  attack_cmd->add_option("--hops", attack.hops, "Neighbourhood depth h (wl)")->check(CLI::Range(1, 4));
  attack_cmd->add_option("--seed", attack.seed, "Random seed");
  attack_cmd->add_option("--lockreport", attack.lockreport, "Lock report (wl)")->check(CLI::ExistingFile);
  attack_cmd->add_option("--out", attack.out, "Guess file (default stdout)");

  EvalArgs eval;
  auto* eval_cmd = app.add_subcommand("eval", "Score a key guess");
  eval_cmd->add_option("--oracle", eval.oracle, "Original bench file")->required()->check(CLI::ExistingFile);
  eval_cmd->add_option("--locked", eval.locked, "Locked bench file")->required()->check(CLI::ExistingFile);
  eval_cmd->add_option("--key", eval.key, "Correct key file")->required()->check(CLI::ExistingFile);
  eval_cmd->add_option("--guess", eval.guess, "Guess file")->required()->check(CLI::ExistingFile);
  eval_cmd->add_option("--patterns", eval.patterns, "Random input patterns")->check(CLI::PositiveNumber);
  eval_cmd->add_option("--xseeds", eval.xseeds, "X-resolution runs")->check(CLI::PositiveNumber);
  eval_cmd->add_option("--seed", eval.seed, "Pattern seed");
  eval_cmd->add_flag("--pretty", eval.pretty, "Also print a table");
  eval_cmd->add_option("--out", eval.out, "Report file (default stdout)");

  VerifyArgs verify;
  auto* verify_cmd = app.add_subcommand("verify", "Check the locked netlist against the original under a key");
  verify_cmd->add_option("--oracle", verify.oracle, "Original bench file")->required()->check(CLI::ExistingFile);
  verify_cmd->add_option("--locked", verify.locked, "Locked bench file")->required()->check(CLI::ExistingFile);
  verify_cmd->add_option("--key", verify.key, "Key file")->required()->check(CLI::ExistingFile);
  verify_cmd->add_option("--patterns", verify.patterns, "Random patterns above 16 inputs")->check(CLI::Range(10000, 100000000));
  verify_cmd->add_option("--seed", verify.seed, "Pattern seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitError;
  }
  if (threads > 0) omp_set_num_threads(threads);

  try {
    if (*lock_cmd) return cmd_lock(lock);
    if (*clusters_cmd) return cmd_clusters(clusters);
    if (*attack_cmd) return cmd_attack(attack);
    if (*eval_cmd) return cmd_eval(eval);
    if (*verify_cmd) return cmd_verify(verify);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitError;
  } catch (const NetlistError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  }
  return kExitError;
}
