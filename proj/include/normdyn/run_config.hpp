#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

namespace normdyn {

// Flat key=value run configuration with [section] headers. Grammar:
//   - '#' starts a comment (full line or trailing); blank lines ignored
//   - "[name]" opens a section; valid names: game, graph, scheduler, run
//   - "key = value" inside a section; duplicate keys are rejected
// Typed accessors mark keys as consumed; finish() rejects leftovers, so a
// command accepts exactly the keys it reads.
class RunConfig {
 public:
  static RunConfig parse_file(const std::string& path);
  static RunConfig parse_text(const std::string& text);

  bool has(const std::string& section, const std::string& key) const;
  bool has_section(const std::string& section) const;

  std::string get_string(const std::string& section, const std::string& key) const;
  std::string get_string_or(const std::string& section, const std::string& key,
                            const std::string& fallback) const;
  double get_double(const std::string& section, const std::string& key) const;
  double get_double_or(const std::string& section, const std::string& key, double fallback) const;
  std::int64_t get_int(const std::string& section, const std::string& key) const;
  std::int64_t get_int_or(const std::string& section, const std::string& key,
                          std::int64_t fallback) const;
  std::uint64_t get_uint(const std::string& section, const std::string& key) const;
  std::uint64_t get_uint_or(const std::string& section, const std::string& key,
                            std::uint64_t fallback) const;
  bool get_bool_or(const std::string& section, const std::string& key, bool fallback) const;
  // Comma-separated integers, e.g. "16,32,64,128".
  std::vector<int> get_int_list(const std::string& section, const std::string& key) const;

  // "inf" (case-insensitive) or a nonnegative number.
  double get_beta(const std::string& section, const std::string& key) const;

  // Throws ValidationError naming every key that no accessor consumed.
  void finish() const;

  // FNV-1a 64 over the raw configuration bytes.
  std::uint64_t content_hash() const;

 private:
  std::string raw_;
  std::map<std::string, std::map<std::string, std::string>> values_;
  mutable std::set<std::string> consumed_;  // "section.key"

  const std::string* find(const std::string& section, const std::string& key) const;
};

}  // namespace normdyn
