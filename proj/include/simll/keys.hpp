// Key vectors and key guesses, with their text files
// (`keyinput<i>=<0|1|X>`, one per line).

#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "simll/netlist.hpp"

namespace simll {

enum class KeyBit : std::uint8_t { Zero, One, X };

char to_char(KeyBit b);

struct KeyVector {
  /// bits[i] is the value of keyinput<i>.
  std::vector<std::uint8_t> bits;
  /// Set once a lock record has claimed the bit.
  std::vector<bool> consumed;

  std::size_t size() const { return bits.size(); }
  bool operator==(const KeyVector&) const = default;
};

struct KeyGuess {
  std::vector<KeyBit> bits;

  std::size_t size() const { return bits.size(); }
  std::size_t count(KeyBit b) const;
};

KeyGuess to_guess(const KeyVector& key);

std::string write_key_file(const KeyVector& key);
/// Indices must be exactly 0..K-1, each once; values 0 or 1.
KeyVector parse_key_file(std::string_view text);

std::string write_guess_file(const KeyGuess& guess);
/// Same layout as key files; values 0, 1, X (or x).
KeyGuess parse_guess_file(std::string_view text);

/// Key size of a locked netlist: its key inputs must be keyinput0..K-1.
std::size_t key_size_of(const Netlist& n);

/// Values of n.key_inputs in declaration order, looked up by key index.
std::vector<std::uint8_t> key_values_for(const Netlist& n, const std::vector<std::uint8_t>& bits);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, std::string_view text);

}  // namespace simll
