#include "simll/keys.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace simll {

namespace {

struct Entry {
  std::size_t index;
  char value;
};

std::vector<Entry> parse_entries(std::string_view text, std::string_view allowed) {
  std::vector<Entry> entries;
  std::size_t line_no = 0;
  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line.erase(std::remove_if(line.begin(), line.end(), [](unsigned char c) { return std::isspace(c); }),
               line.end());
    if (line.empty()) continue;
    const auto eq = line.find('=');
    const auto bad = [&](const std::string& why) {
      return std::runtime_error("key file line " + std::to_string(line_no) + ": " + why);
    };
    if (eq == std::string::npos || eq + 2 != line.size()) throw bad("expected keyinput<i>=<value>");
    const auto idx = key_index(std::string_view(line).substr(0, eq));
    if (!idx) throw bad("'" + line.substr(0, eq) + "' is not a key input");
    const char v = line[eq + 1];
    if (allowed.find(v) == std::string_view::npos) throw bad(std::string("bad value '") + v + "'");
    entries.push_back({*idx, v});
  }
  std::sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) { return a.index < b.index; });
  for (std::size_t i = 0; i < entries.size(); ++i) {
    if (entries[i].index != i)
      throw std::runtime_error("key file must list keyinput0..keyinput" + std::to_string(entries.size() - 1) +
                               " exactly once");
  }
  return entries;
}

}  // namespace

char to_char(KeyBit b) {
  switch (b) {
    case KeyBit::Zero: return '0';
    case KeyBit::One: return '1';
    case KeyBit::X: return 'X';
  }
  return '?';
}

std::size_t KeyGuess::count(KeyBit b) const {
  return static_cast<std::size_t>(std::count(bits.begin(), bits.end(), b));
}

KeyGuess to_guess(const KeyVector& key) {
  KeyGuess g;
  for (auto b : key.bits) g.bits.push_back(b ? KeyBit::One : KeyBit::Zero);
  return g;
}

std::string write_key_file(const KeyVector& key) {
  std::string out;
  for (std::size_t i = 0; i < key.size(); ++i) out += key_input_name(i) + "=" + (key.bits[i] ? "1" : "0") + "\n";
  return out;
}

KeyVector parse_key_file(std::string_view text) {
  KeyVector key;
  for (const auto& e : parse_entries(text, "01")) key.bits.push_back(e.value == '1');
  key.consumed.assign(key.bits.size(), true);
  return key;
}

std::string write_guess_file(const KeyGuess& guess) {
  std::string out;
  for (std::size_t i = 0; i < guess.size(); ++i) out += key_input_name(i) + "=" + to_char(guess.bits[i]) + "\n";
  return out;
}

KeyGuess parse_guess_file(std::string_view text) {
  KeyGuess g;
  for (const auto& e : parse_entries(text, "01Xx"))
    g.bits.push_back(e.value == '0' ? KeyBit::Zero : e.value == '1' ? KeyBit::One : KeyBit::X);
  return g;
}

std::size_t key_size_of(const Netlist& n) {
  std::vector<bool> seen(n.key_inputs.size(), false);
  for (const auto& k : n.key_inputs) {
    const auto idx = key_index(k);
    if (!idx || *idx >= seen.size() || seen[*idx])
      throw std::runtime_error("key inputs must be keyinput0..keyinput" + std::to_string(seen.size() - 1));
    seen[*idx] = true;
  }
  return n.key_inputs.size();
}

std::vector<std::uint8_t> key_values_for(const Netlist& n, const std::vector<std::uint8_t>& bits) {
  if (bits.size() != key_size_of(n))
    throw std::invalid_argument("key width " + std::to_string(bits.size()) + " does not match " +
                                std::to_string(n.key_inputs.size()) + " key inputs");
  std::vector<std::uint8_t> values;
  values.reserve(bits.size());
  for (const auto& k : n.key_inputs) values.push_back(bits[*key_index(k)]);
  return values;
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::string& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
}

}  // namespace simll
