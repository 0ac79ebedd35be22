// Gate-level combinational netlists in ISCAS-85 bench form, extended with a
// 2-input MUX primitive and `keyinput<i>` key inputs.

#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace simll {

enum class GateType { And, Nand, Or, Nor, Xor, Xnor, Not, Buf, Mux };

/// Upper-case bench spelling ("NAND", "MUX", ...).
std::string_view to_string(GateType type);

/// Case-insensitive; accepts the ISCAS spelling BUFF for BUF.
std::optional<GateType> parse_gate_type(std::string_view name);

/// True when `arity` inputs are legal for `type`: MUX takes exactly 3
/// (select, data0, data1), NOT/BUF exactly 1, the rest 2 or more.
bool arity_ok(GateType type, std::size_t arity);

struct Gate {
  std::string output;
  GateType type;
  std::vector<std::string> inputs;

  bool operator==(const Gate&) const = default;
};

struct Netlist {
  std::string name;
  std::vector<std::string> inputs;
  std::vector<std::string> key_inputs;
  std::vector<std::string> outputs;
  std::vector<Gate> gates;

  bool operator==(const Netlist&) const = default;

  std::size_t mux_count() const;
};

/// `keyinput<digits>`
bool is_key_input_name(std::string_view net);
/// Numeric suffix of a key input name; nullopt for any other net.
std::optional<std::size_t> key_index(std::string_view net);
std::string key_input_name(std::size_t index);

/// Raised by parse_bench for syntax and structural errors. `line` is 1-based,
/// 0 when the error is not tied to one line (cycles, undefined nets).
class NetlistError : public std::runtime_error {
 public:
  NetlistError(const std::string& what, std::size_t line = 0)
      : std::runtime_error(what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

Netlist parse_bench(std::string_view text, std::string name = {});
Netlist read_bench_file(const std::string& path);

enum class MuxStyle { Primitive, Decomposed };

/// Primitive keeps `y = MUX(s, a, b)` (s=0 selects a). Decomposed expands each
/// MUX to NOT/AND/AND/OR with fresh net names.
std::string write_bench(const Netlist& n, MuxStyle style = MuxStyle::Primitive);

enum class Severity { Error, Warning };

enum class DiagnosticKind {
  Syntax,
  UndefinedNet,
  DuplicateDriver,
  Cycle,
  Arity,
  FloatingWire,
  KeyInputOverlap,
};

struct Diagnostic {
  Severity severity;
  DiagnosticKind kind;
  std::string message;
  /// Net or gate the diagnostic is about; for cycles, the member nets joined
  /// by spaces.
  std::string location;
};

using Diagnostics = std::vector<Diagnostic>;

/// Structural checks: undefined nets, duplicate drivers, arity, combinational
/// cycles (one diagnostic per strongly connected component) and floating
/// internal wires (gate outputs that nothing reads and that are not primary
/// outputs). Empty result means the netlist is clean.
Diagnostics validate(const Netlist& n);

std::size_t count_kind(const Diagnostics& d, DiagnosticKind kind);

/// Gate indices in topological order (drivers before readers). Throws
/// NetlistError on a cycle or an undefined net.
std::vector<std::size_t> topological_order(const Netlist& n);

/// Collapse every MUX whose select is an assigned key input into a BUF of the
/// selected data input. Unassigned key inputs are left symbolic. The bypassed
/// data wire is simply no longer read by that gate.
Netlist apply_key_to_muxes(const Netlist& n,
                           const std::vector<std::pair<std::string, bool>>& assignment);

}  // namespace simll
