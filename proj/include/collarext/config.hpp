#pragma once

// Line-oriented scenario configuration:
//
//   # comment            (also ';' at line start)
//   [section]
//   key = value          (value runs to end of line, surrounding blanks trimmed)
//
// Keys are addressed as "section.key". Keys before the first header belong
// to section "scenario". Duplicate keys are errors.

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace collarext {

class Config {
 public:
  struct Entry {
    std::string value;
    int line = 0;
  };

  /// Throws UsageError with "<origin>:<line>: ..." diagnostics.
  static Config parse(const std::string& text, const std::string& origin = "config");
  static Config load(const std::string& path);

  const std::string& origin() const { return origin_; }
  /// Directory of the loaded file ("" for in-memory text).
  const std::string& base_dir() const { return base_dir_; }
  bool has(const std::string& key) const { return entries_.count(key) > 0; }
  std::vector<std::string> keys() const;

  std::string get_string(const std::string& key) const;
  std::string get_string(const std::string& key, const std::string& fallback) const;
  double get_double(const std::string& key, double fallback) const;
  double get_double(const std::string& key) const;
  long get_int(const std::string& key, long fallback) const;
  std::uint64_t get_seed(const std::string& key, std::uint64_t fallback) const;
  /// Semicolon-separated list, entries trimmed, empty entries dropped.
  std::vector<std::string> get_list(const std::string& key) const;

  /// Throws UsageError naming the first key (by line) not in `allowed`.
  void reject_unknown(const std::set<std::string>& allowed) const;
  [[noreturn]] void fail(const std::string& key, const std::string& message) const;

 private:
  std::string origin_;
  std::string base_dir_;
  std::map<std::string, Entry> entries_;
};

}  // namespace collarext
