#include "simll/netlist.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <functional>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

namespace simll {

namespace {

std::string upper(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return out;
}

std::string_view trim(std::string_view s) {
  const auto* ws = " \t\r\n";
  const auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(ws);
  return s.substr(b, e - b + 1);
}

bool valid_net_name(std::string_view s) {
  if (s.empty()) return false;
  return std::none_of(s.begin(), s.end(), [](char c) {
    return std::isspace(static_cast<unsigned char>(c)) || c == '(' || c == ')' ||
           c == ',' || c == '=' || c == '#';
  });
}

// Returns the text between the first '(' and the matching final ')'.
std::optional<std::string_view> paren_body(std::string_view s) {
  const auto open = s.find('(');
  if (open == std::string_view::npos || s.empty() || s.back() != ')') return std::nullopt;
  return s.substr(open + 1, s.size() - open - 2);
}

// Walks driver links among `pending` gates until a gate repeats.
std::vector<std::string> find_cycle(const Netlist& n, const std::vector<bool>& pending,
                                    const std::unordered_map<std::string, std::size_t>& driver) {
  std::size_t start = 0;
  while (start < pending.size() && !pending[start]) ++start;
  std::vector<std::size_t> path;
  std::unordered_map<std::size_t, std::size_t> pos;
  // Every pending gate has a pending driver, so the walk always continues.
  std::size_t g = start;
  while (!pos.count(g)) {
    pos[g] = path.size();
    path.push_back(g);
    for (const auto& in : n.gates[g].inputs) {
      auto it = driver.find(in);
      if (it != driver.end() && pending[it->second]) {
        g = it->second;
        break;
      }
    }
  }
  std::vector<std::string> cycle;
  for (std::size_t i = pos[g]; i < path.size(); ++i) cycle.push_back(n.gates[path[i]].output);
  std::reverse(cycle.begin(), cycle.end());
  return cycle;
}

std::string join(const std::vector<std::string>& v, std::string_view sep) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += sep;
    out += v[i];
  }
  return out;
}

}  // namespace

std::string_view to_string(GateType type) {
  switch (type) {
    case GateType::And: return "AND";
    case GateType::Nand: return "NAND";
    case GateType::Or: return "OR";
    case GateType::Nor: return "NOR";
    case GateType::Xor: return "XOR";
    case GateType::Xnor: return "XNOR";
    case GateType::Not: return "NOT";
    case GateType::Buf: return "BUF";
    case GateType::Mux: return "MUX";
  }
  return "?";
}

std::optional<GateType> parse_gate_type(std::string_view name) {
  const auto u = upper(name);
  if (u == "AND") return GateType::And;
  if (u == "NAND") return GateType::Nand;
  if (u == "OR") return GateType::Or;
  if (u == "NOR") return GateType::Nor;
  if (u == "XOR") return GateType::Xor;
  if (u == "XNOR") return GateType::Xnor;
  if (u == "NOT") return GateType::Not;
  if (u == "BUF" || u == "BUFF") return GateType::Buf;
  if (u == "MUX") return GateType::Mux;
  return std::nullopt;
}

bool arity_ok(GateType type, std::size_t arity) {
  switch (type) {
    case GateType::Mux: return arity == 3;
    case GateType::Not:
    case GateType::Buf: return arity == 1;
    default: return arity >= 2;
  }
}

std::size_t Netlist::mux_count() const {
  return static_cast<std::size_t>(std::count_if(
      gates.begin(), gates.end(), [](const Gate& g) { return g.type == GateType::Mux; }));
}

bool is_key_input_name(std::string_view net) { return key_index(net).has_value(); }

std::optional<std::size_t> key_index(std::string_view net) {
  constexpr std::string_view prefix = "keyinput";
  if (net.size() <= prefix.size() || net.substr(0, prefix.size()) != prefix) return std::nullopt;
  std::size_t value = 0;
  for (char c : net.substr(prefix.size())) {
    if (!std::isdigit(static_cast<unsigned char>(c))) return std::nullopt;
    value = value * 10 + static_cast<std::size_t>(c - '0');
  }
  return value;
}

std::string key_input_name(std::size_t index) { return "keyinput" + std::to_string(index); }

Netlist parse_bench(std::string_view text, std::string name) {
  Netlist n;
  n.name = std::move(name);
  std::unordered_map<std::string, std::size_t> defined_at;  // net -> line
  std::unordered_map<std::string, std::size_t> output_line;
  std::vector<std::size_t> gate_line;

  auto define = [&](const std::string& net, std::size_t line) {
    auto [it, inserted] = defined_at.emplace(net, line);
    if (!inserted) {
      throw NetlistError("line " + std::to_string(line) + ": duplicate driver for net " + net +
                             " (first defined on line " + std::to_string(it->second) + ")",
                         line);
    }
  };

  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto eol = text.find('\n', pos);
    std::string_view raw = text.substr(pos, eol == std::string_view::npos ? text.size() - pos : eol - pos);
    pos = eol == std::string_view::npos ? text.size() + 1 : eol + 1;
    ++line_no;
    if (const auto hash = raw.find('#'); hash != std::string_view::npos) raw = raw.substr(0, hash);
    const auto line = trim(raw);
    if (line.empty()) continue;

    auto syntax = [&](const std::string& msg) {
      return NetlistError("line " + std::to_string(line_no) + ": " + msg, line_no);
    };

    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      const auto open = line.find('(');
      if (open == std::string_view::npos) throw syntax("expected INPUT(..), OUTPUT(..) or assignment");
      const auto keyword = upper(trim(line.substr(0, open)));
      const auto body = paren_body(line);
      if (!body) throw syntax("unbalanced parentheses");
      const std::string net(trim(*body));
      if (!valid_net_name(net)) throw syntax("bad net name '" + net + "'");
      if (keyword == "INPUT") {
        define(net, line_no);
        (is_key_input_name(net) ? n.key_inputs : n.inputs).push_back(net);
      } else if (keyword == "OUTPUT") {
        if (!output_line.emplace(net, line_no).second) throw syntax("duplicate OUTPUT " + net);
        n.outputs.push_back(net);
      } else {
        throw syntax("unknown declaration '" + keyword + "'");
      }
      continue;
    }

    const std::string out(trim(line.substr(0, eq)));
    const auto rhs = trim(line.substr(eq + 1));
    if (!valid_net_name(out)) throw syntax("bad net name '" + out + "'");
    const auto open = rhs.find('(');
    if (open == std::string_view::npos) throw syntax("expected GATE(...) after '='");
    const auto gate_name = trim(rhs.substr(0, open));
    const auto body = paren_body(rhs);
    if (!body) throw syntax("unbalanced parentheses");
    const auto upper_name = upper(gate_name);
    if (upper_name == "DFF" || upper_name == "DFFR" || upper_name == "LATCH") {
      throw syntax("sequential element " + upper_name + " is not supported (combinational netlists only)");
    }
    const auto type = parse_gate_type(gate_name);
    if (!type) throw syntax("unknown gate type '" + std::string(gate_name) + "'");

    Gate g{out, *type, {}};
    std::string_view args = *body;
    while (true) {
      const auto comma = args.find(',');
      const std::string arg(trim(args.substr(0, comma)));
      if (!valid_net_name(arg)) throw syntax("bad gate input '" + arg + "'");
      g.inputs.push_back(arg);
      if (comma == std::string_view::npos) break;
      args = args.substr(comma + 1);
    }
    if (!arity_ok(g.type, g.inputs.size())) {
      throw syntax(std::string(to_string(g.type)) + " with " + std::to_string(g.inputs.size()) +
                   " inputs");
    }
    define(out, line_no);
    n.gates.push_back(std::move(g));
    gate_line.push_back(line_no);
  }

  for (std::size_t i = 0; i < n.gates.size(); ++i) {
    for (const auto& in : n.gates[i].inputs) {
      if (!defined_at.count(in)) throw NetlistError("undefined net " + in, gate_line[i]);
    }
  }
  for (const auto& [out, line] : output_line) {
    if (!defined_at.count(out)) throw NetlistError("undefined net " + out, line);
  }
  topological_order(n);  // throws on a cycle
  return n;
}

Netlist read_bench_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  auto name = path;
  if (const auto slash = name.find_last_of('/'); slash != std::string::npos) name = name.substr(slash + 1);
  if (const auto dot = name.rfind('.'); dot != std::string::npos) name = name.substr(0, dot);
  return parse_bench(ss.str(), name);
}

std::string write_bench(const Netlist& n, MuxStyle style) {
  std::ostringstream os;
  if (!n.name.empty()) os << "# " << n.name << "\n";
  for (const auto& in : n.inputs) os << "INPUT(" << in << ")\n";
  for (const auto& k : n.key_inputs) os << "INPUT(" << k << ")\n";
  for (const auto& out : n.outputs) os << "OUTPUT(" << out << ")\n";

  std::unordered_set<std::string> taken;
  if (style == MuxStyle::Decomposed) {
    taken.insert(n.inputs.begin(), n.inputs.end());
    taken.insert(n.key_inputs.begin(), n.key_inputs.end());
    for (const auto& g : n.gates) taken.insert(g.output);
  }
  auto fresh = [&](const std::string& base) {
    std::string candidate = base;
    for (int i = 1; taken.count(candidate); ++i) candidate = base + "_" + std::to_string(i);
    taken.insert(candidate);
    return candidate;
  };

  for (const auto& g : n.gates) {
    if (g.type == GateType::Mux && style == MuxStyle::Decomposed) {
      const auto& s = g.inputs[0];
      const auto ns = fresh(g.output + "_mux_ns");
      const auto t0 = fresh(g.output + "_mux_d0");
      const auto t1 = fresh(g.output + "_mux_d1");
      os << ns << " = NOT(" << s << ")\n";
      os << t0 << " = AND(" << ns << ", " << g.inputs[1] << ")\n";
      os << t1 << " = AND(" << s << ", " << g.inputs[2] << ")\n";
      os << g.output << " = OR(" << t0 << ", " << t1 << ")\n";
      continue;
    }
    os << g.output << " = " << to_string(g.type) << "(" << join(g.inputs, ", ") << ")\n";
  }
  return os.str();
}

std::vector<std::size_t> topological_order(const Netlist& n) {
  std::unordered_map<std::string, std::size_t> driver;
  for (std::size_t i = 0; i < n.gates.size(); ++i) driver.emplace(n.gates[i].output, i);
  std::unordered_set<std::string> primary(n.inputs.begin(), n.inputs.end());
  primary.insert(n.key_inputs.begin(), n.key_inputs.end());

  std::vector<std::size_t> indegree(n.gates.size(), 0);
  std::vector<std::vector<std::size_t>> readers(n.gates.size());
  for (std::size_t i = 0; i < n.gates.size(); ++i) {
    for (const auto& in : n.gates[i].inputs) {
      auto it = driver.find(in);
      if (it == driver.end()) {
        if (!primary.count(in)) throw NetlistError("undefined net " + in);
        continue;
      }
      ++indegree[i];
      readers[it->second].push_back(i);
    }
  }
  std::vector<std::size_t> order;
  order.reserve(n.gates.size());
  for (std::size_t i = 0; i < n.gates.size(); ++i)
    if (indegree[i] == 0) order.push_back(i);
  for (std::size_t head = 0; head < order.size(); ++head) {
    for (auto r : readers[order[head]])
      if (--indegree[r] == 0) order.push_back(r);
  }
  if (order.size() != n.gates.size()) {
    std::vector<bool> pending(n.gates.size(), true);
    for (auto i : order) pending[i] = false;
    throw NetlistError("combinational cycle: " + join(find_cycle(n, pending, driver), " -> "));
  }
  return order;
}

Diagnostics validate(const Netlist& n) {
  Diagnostics d;
  auto report = [&](Severity sev, DiagnosticKind kind, std::string msg, std::string loc) {
    d.push_back({sev, kind, std::move(msg), std::move(loc)});
  };

  std::unordered_map<std::string, std::size_t> driver;  // net -> gate index
  std::unordered_set<std::string> declared;
  std::unordered_set<std::string> plain_inputs(n.inputs.begin(), n.inputs.end());
  for (const auto& k : n.key_inputs) {
    if (plain_inputs.count(k))
      report(Severity::Error, DiagnosticKind::KeyInputOverlap, "net " + k + " is both input and key input", k);
  }
  for (const auto& list : {&n.inputs, &n.key_inputs}) {
    for (const auto& net : *list) {
      if (!declared.insert(net).second)
        report(Severity::Error, DiagnosticKind::DuplicateDriver, "duplicate driver for net " + net, net);
    }
  }
  for (std::size_t i = 0; i < n.gates.size(); ++i) {
    const auto& g = n.gates[i];
    if (!declared.insert(g.output).second)
      report(Severity::Error, DiagnosticKind::DuplicateDriver, "duplicate driver for net " + g.output, g.output);
    driver.emplace(g.output, i);
    if (!arity_ok(g.type, g.inputs.size())) {
      report(Severity::Error, DiagnosticKind::Arity,
             std::string(to_string(g.type)) + " gate " + g.output + " has " +
                 std::to_string(g.inputs.size()) + " inputs",
             g.output);
    }
  }

  std::unordered_set<std::string> read;
  for (const auto& g : n.gates) {
    for (const auto& in : g.inputs) {
      read.insert(in);
      if (!declared.count(in))
        report(Severity::Error, DiagnosticKind::UndefinedNet, "undefined net " + in, g.output);
    }
  }
  for (const auto& out : n.outputs) {
    if (!declared.count(out)) report(Severity::Error, DiagnosticKind::UndefinedNet, "undefined net " + out, out);
  }

  // Tarjan SCC over gates; edges run driver gate -> reader gate.
  const std::size_t count = n.gates.size();
  std::vector<std::vector<std::size_t>> succ(count);
  std::vector<bool> self_loop(count, false);
  for (std::size_t i = 0; i < count; ++i) {
    for (const auto& in : n.gates[i].inputs) {
      auto it = driver.find(in);
      if (it == driver.end()) continue;
      if (it->second == i) self_loop[i] = true;
      succ[it->second].push_back(i);
    }
  }
  constexpr std::size_t unvisited = static_cast<std::size_t>(-1);
  std::vector<std::size_t> index(count, unvisited), low(count, 0);
  std::vector<bool> on_stack(count, false);
  std::vector<std::size_t> stack;
  std::size_t counter = 0;
  // Iterative Tarjan to stay safe on deep netlists.
  for (std::size_t root = 0; root < count; ++root) {
    if (index[root] != unvisited) continue;
    std::vector<std::pair<std::size_t, std::size_t>> frames{{root, 0}};
    index[root] = low[root] = counter++;
    stack.push_back(root);
    on_stack[root] = true;
    while (!frames.empty()) {
      auto& [v, next] = frames.back();
      if (next < succ[v].size()) {
        const auto w = succ[v][next++];
        if (index[w] == unvisited) {
          index[w] = low[w] = counter++;
          stack.push_back(w);
          on_stack[w] = true;
          frames.push_back({w, 0});
        } else if (on_stack[w]) {
          low[v] = std::min(low[v], index[w]);
        }
        continue;
      }
      if (low[v] == index[v]) {
        std::vector<std::string> members;
        std::size_t w;
        do {
          w = stack.back();
          stack.pop_back();
          on_stack[w] = false;
          members.push_back(n.gates[w].output);
        } while (w != v);
        if (members.size() > 1 || self_loop[v]) {
          std::sort(members.begin(), members.end());
          report(Severity::Error, DiagnosticKind::Cycle,
                 "combinational cycle through " + join(members, ", "), join(members, " "));
        }
      }
      const auto finished = v;
      frames.pop_back();
      if (!frames.empty()) {
        auto& parent = frames.back().first;
        low[parent] = std::min(low[parent], low[finished]);
      }
    }
  }

  std::unordered_set<std::string> outputs(n.outputs.begin(), n.outputs.end());
  for (const auto& g : n.gates) {
    if (!read.count(g.output) && !outputs.count(g.output)) {
      report(Severity::Warning, DiagnosticKind::FloatingWire, "floating internal wire " + g.output, g.output);
    }
  }
  return d;
}

std::size_t count_kind(const Diagnostics& d, DiagnosticKind kind) {
  return static_cast<std::size_t>(
      std::count_if(d.begin(), d.end(), [kind](const Diagnostic& x) { return x.kind == kind; }));
}

Netlist apply_key_to_muxes(const Netlist& n,
                           const std::vector<std::pair<std::string, bool>>& assignment) {
  std::unordered_map<std::string, bool> value(assignment.begin(), assignment.end());
  Netlist out = n;
  for (auto& g : out.gates) {
    if (g.type != GateType::Mux) continue;
    auto it = value.find(g.inputs[0]);
    if (it == value.end()) continue;
    const auto chosen = g.inputs[it->second ? 2 : 1];
    g.type = GateType::Buf;
    g.inputs = {chosen};
  }
  return out;
}

}  // namespace simll
