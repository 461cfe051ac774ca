#include "collarext/config.hpp"

#include "collarext/errors.hpp"

#include <algorithm>
#include <cctype>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace collarext {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

bool valid_name(const std::string& s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](unsigned char c) {
    return std::isalnum(c) || c == '_';
  });
}

}  // namespace

Config Config::parse(const std::string& text, const std::string& origin) {
  Config cfg;
  cfg.origin_ = origin;
  std::istringstream in(text);
  std::string raw, section = "scenario";
  int line_no = 0;
  auto err = [&](const std::string& msg) {
    throw UsageError(origin + ":" + std::to_string(line_no) + ": " + msg);
  };
  while (std::getline(in, raw)) {
    ++line_no;
    const std::string line = trim(raw);
    if (line.empty() || line[0] == '#' || line[0] == ';') continue;
    if (line.front() == '[') {
      if (line.back() != ']') err("unterminated section header");
      section = trim(line.substr(1, line.size() - 2));
      if (!valid_name(section)) err("invalid section name '" + section + "'");
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) err("expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (!valid_name(key)) err("invalid key '" + key + "'");
    if (value.empty()) err("empty value for '" + key + "'");
    const std::string full = section + "." + key;
    if (cfg.entries_.count(full)) {
      err("duplicate key '" + full + "' (first set on line " +
          std::to_string(cfg.entries_[full].line) + ")");
    }
    cfg.entries_[full] = {value, line_no};
  }
  return cfg;
}

Config Config::load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot read config file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  Config cfg = parse(ss.str(), path);
  cfg.base_dir_ = std::filesystem::path(path).parent_path().string();
  return cfg;
}

std::vector<std::string> Config::keys() const {
  std::vector<std::string> k;
  for (const auto& [name, e] : entries_) k.push_back(name);
  return k;
}

void Config::fail(const std::string& key, const std::string& message) const {
  const auto it = entries_.find(key);
  const std::string where = it == entries_.end() ? "" : std::to_string(it->second.line) + ":";
  throw UsageError(origin_ + ":" + where + " " + key + ": " + message);
}

std::string Config::get_string(const std::string& key) const {
  const auto it = entries_.find(key);
  if (it == entries_.end()) throw UsageError(origin_ + ": missing required key '" + key + "'");
  return it->second.value;
}

std::string Config::get_string(const std::string& key, const std::string& fallback) const {
  return has(key) ? get_string(key) : fallback;
}

double Config::get_double(const std::string& key) const {
  const std::string v = get_string(key);
  try {
    std::size_t used = 0;
    const double d = std::stod(v, &used);
    if (used == v.size()) return d;
  } catch (const std::exception&) {
  }
  fail(key, "expected a number, got '" + v + "'");
}

double Config::get_double(const std::string& key, double fallback) const {
  return has(key) ? get_double(key) : fallback;
}

long Config::get_int(const std::string& key, long fallback) const {
  if (!has(key)) return fallback;
  const std::string v = get_string(key);
  try {
    std::size_t used = 0;
    const long n = std::stol(v, &used);
    if (used == v.size()) return n;
  } catch (const std::exception&) {
  }
  fail(key, "expected an integer, got '" + v + "'");
}

std::uint64_t Config::get_seed(const std::string& key, std::uint64_t fallback) const {
  if (!has(key)) return fallback;
  const std::string v = get_string(key);
  try {
    std::size_t used = 0;
    if (!v.empty() && v[0] != '-') {
      const auto n = std::stoull(v, &used);
      if (used == v.size()) return n;
    }
  } catch (const std::exception&) {
  }
  fail(key, "expected a non-negative integer seed, got '" + v + "'");
}

std::vector<std::string> Config::get_list(const std::string& key) const {
  std::vector<std::string> out;
  std::istringstream in(get_string(key));
  std::string item;
  while (std::getline(in, item, ';')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

void Config::reject_unknown(const std::set<std::string>& allowed) const {
  const Entry* first = nullptr;
  std::string name;
  for (const auto& [k, e] : entries_) {
    if (allowed.count(k)) continue;
    if (!first || e.line < first->line) {
      first = &e;
      name = k;
    }
  }
  if (first) fail(name, "unknown key for this scenario kind");
}

}  // namespace collarext
