// Run manifests: the parameters of a CLI run plus digests of the files it
// read and wrote.

#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace simll {

inline constexpr std::string_view kToolVersion = "1.0.0";

class RunManifest {
 public:
  explicit RunManifest(std::string subcommand);

  void set(const std::string& key, const std::string& value);
  /// Records `key=<shown>` (default: the path) and `digest.<key>` as the
  /// FNV-1a hash of the file contents.
  void add_file(const std::string& key, const std::string& path, const std::string& shown = {});

  const std::string& subcommand() const { return subcommand_; }
  /// Value for `key`; empty if absent.
  std::string get(const std::string& key) const;

  /// `key=value` lines in insertion order, tool version first.
  std::string str() const;
  static RunManifest parse(std::string_view text);

 private:
  std::string subcommand_;
  std::vector<std::pair<std::string, std::string>> entries_;
};

/// 16-digit lowercase hex.
std::string hex64(std::uint64_t v);

}  // namespace simll
