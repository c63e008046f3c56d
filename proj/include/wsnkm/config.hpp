#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "wsnkm/types.hpp"

namespace wsnkm {

/// `key = value` text with `#` comments and blank lines. Keys are unique.
class KeyValueFile {
 public:
  /// Throws Error{parse} on a malformed line or duplicate key.
  static KeyValueFile parse(std::string_view text);
  /// Throws Error{io} when the file cannot be read.
  static KeyValueFile load(const std::filesystem::path& path);

  bool has(const std::string& key) const { return values_.count(key) != 0; }
  std::optional<std::string> get(const std::string& key) const;
  const std::map<std::string, std::string>& entries() const { return values_; }

  /// Typed accessors; throw Error{parse} when the value does not convert.
  std::optional<double> get_double(const std::string& key) const;
  std::optional<std::uint64_t> get_u64(const std::string& key) const;
  std::optional<std::vector<double>> get_double_list(const std::string& key) const;

 private:
  std::map<std::string, std::string> values_;
};

double parse_double(std::string_view text, std::string_view what);
std::uint64_t parse_u64(std::string_view text, std::string_view what);

}  // namespace wsnkm
