#include "simll/manifest.hpp"

#include <cstdint>
#include <cstdio>
#include <sstream>
#include <stdexcept>

#include "simll/hash.hpp"
#include "simll/keys.hpp"

namespace simll {

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

RunManifest::RunManifest(std::string subcommand) : subcommand_(std::move(subcommand)) {}

void RunManifest::set(const std::string& key, const std::string& value) {
  if (key.empty() || key.find('=') != std::string::npos || value.find('\n') != std::string::npos)
    throw std::invalid_argument("bad manifest entry " + key);
  for (auto& [k, v] : entries_) {
    if (k == key) {
      v = value;
      return;
    }
  }
  entries_.emplace_back(key, value);
}

void RunManifest::add_file(const std::string& key, const std::string& path, const std::string& shown) {
  set(key, shown.empty() ? path : shown);
  set("digest." + key, hex64(fnv1a(read_text_file(path))));
}

std::string RunManifest::get(const std::string& key) const {
  for (const auto& [k, v] : entries_)
    if (k == key) return v;
  return {};
}

std::string RunManifest::str() const {
  std::ostringstream os;
  os << "tool=simll " << kToolVersion << "\n";
  os << "subcommand=" << subcommand_ << "\n";
  for (const auto& [k, v] : entries_) os << k << "=" << v << "\n";
  return os.str();
}

RunManifest RunManifest::parse(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  RunManifest m("");
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw std::runtime_error("bad manifest line: " + line);
    const auto k = line.substr(0, eq);
    const auto v = line.substr(eq + 1);
    if (k == "tool") continue;
    if (k == "subcommand") m.subcommand_ = v;
    else m.set(k, v);
  }
  return m;
}

}  // namespace simll
