#include "normdyn/run_config.hpp"

#include <cctype>
#include <cerrno>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <sstream>

#include "normdyn/errors.hpp"

namespace normdyn {

namespace {

const std::set<std::string> kSections{"game", "graph", "scheduler", "run"};

std::string trim(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

std::string lower(std::string s) {
  for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

}  // namespace

RunConfig RunConfig::parse_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("config: cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_text(buf.str());
}

RunConfig RunConfig::parse_text(const std::string& text) {
  RunConfig cfg;
  cfg.raw_ = text;
  std::istringstream in(text);
  std::string line;
  std::string section;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const std::string at = " (line " + std::to_string(lineno) + ")";
    if (line.front() == '[') {
      if (line.back() != ']') throw ValidationError("config: unterminated section header" + at);
      section = trim(line.substr(1, line.size() - 2));
      if (!kSections.count(section))
        throw ValidationError("config: unknown section '" + section + "'" + at);
      continue;
    }
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw ValidationError("config: expected 'key = value'" + at);
    if (section.empty())
      throw ValidationError("config: key outside any [section]" + at);
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) throw ValidationError("config: empty key" + at);
    if (value.empty()) throw ValidationError("config: empty value for '" + key + "'" + at);
    auto& sec = cfg.values_[section];
    if (sec.count(key))
      throw ValidationError("config: duplicate key '" + section + "." + key + "'" + at);
    sec[key] = value;
  }
  return cfg;
}

const std::string* RunConfig::find(const std::string& section, const std::string& key) const {
  const auto sec = values_.find(section);
  if (sec == values_.end()) return nullptr;
  const auto it = sec->second.find(key);
  if (it == sec->second.end()) return nullptr;
  consumed_.insert(section + "." + key);
  return &it->second;
}

bool RunConfig::has(const std::string& section, const std::string& key) const {
  const auto sec = values_.find(section);
  return sec != values_.end() && sec->second.count(key) > 0;
}

bool RunConfig::has_section(const std::string& section) const {
  return values_.count(section) > 0;
}

std::string RunConfig::get_string(const std::string& section, const std::string& key) const {
  const std::string* v = find(section, key);
  if (!v) throw ValidationError("config: missing required key '" + section + "." + key + "'");
  return *v;
}

std::string RunConfig::get_string_or(const std::string& section, const std::string& key,
                                     const std::string& fallback) const {
  const std::string* v = find(section, key);
  return v ? *v : fallback;
}

double RunConfig::get_double(const std::string& section, const std::string& key) const {
  const std::string v = get_string(section, key);
  errno = 0;
  char* end = nullptr;
  const double d = std::strtod(v.c_str(), &end);
  if (errno != 0 || end == v.c_str() || *end != '\0')
    throw ValidationError("config: '" + section + "." + key + "' is not a number: '" + v + "'");
  return d;
}

double RunConfig::get_double_or(const std::string& section, const std::string& key,
                                double fallback) const {
  return has(section, key) ? get_double(section, key) : fallback;
}

std::int64_t RunConfig::get_int(const std::string& section, const std::string& key) const {
  const std::string v = get_string(section, key);
  errno = 0;
  char* end = nullptr;
  const long long i = std::strtoll(v.c_str(), &end, 10);
  if (errno != 0 || end == v.c_str() || *end != '\0')
    throw ValidationError("config: '" + section + "." + key + "' is not an integer: '" + v + "'");
  return i;
}

std::int64_t RunConfig::get_int_or(const std::string& section, const std::string& key,
                                   std::int64_t fallback) const {
  return has(section, key) ? get_int(section, key) : fallback;
}

std::uint64_t RunConfig::get_uint(const std::string& section, const std::string& key) const {
  const std::string v = get_string(section, key);
  errno = 0;
  char* end = nullptr;
  const unsigned long long u = std::strtoull(v.c_str(), &end, 10);
  if (errno != 0 || end == v.c_str() || *end != '\0' || v.front() == '-')
    throw ValidationError("config: '" + section + "." + key +
                          "' is not a nonnegative integer: '" + v + "'");
  return u;
}

std::uint64_t RunConfig::get_uint_or(const std::string& section, const std::string& key,
                                     std::uint64_t fallback) const {
  return has(section, key) ? get_uint(section, key) : fallback;
}

bool RunConfig::get_bool_or(const std::string& section, const std::string& key,
                            bool fallback) const {
  if (!has(section, key)) return fallback;
  const std::string v = lower(get_string(section, key));
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw ValidationError("config: '" + section + "." + key + "' is not a boolean: '" + v + "'");
}

std::vector<int> RunConfig::get_int_list(const std::string& section,
                                         const std::string& key) const {
  const std::string v = get_string(section, key);
  std::vector<int> out;
  std::string item;
  std::istringstream in(v);
  while (std::getline(in, item, ',')) {
    item = trim(item);
    errno = 0;
    char* end = nullptr;
    const long long i = std::strtoll(item.c_str(), &end, 10);
    if (errno != 0 || end == item.c_str() || *end != '\0')
      throw ValidationError("config: '" + section + "." + key + "' has a non-integer item: '" +
                            item + "'");
    out.push_back(static_cast<int>(i));
  }
  if (out.empty())
    throw ValidationError("config: '" + section + "." + key + "' is an empty list");
  return out;
}

double RunConfig::get_beta(const std::string& section, const std::string& key) const {
  const std::string v = lower(get_string(section, key));
  if (v == "inf" || v == "infinity") return std::numeric_limits<double>::infinity();
  errno = 0;
  char* end = nullptr;
  const double d = std::strtod(v.c_str(), &end);
  if (errno != 0 || end == v.c_str() || *end != '\0')
    throw ValidationError("config: '" + section + "." + key + "' must be a number or 'inf'");
  return d;
}

void RunConfig::finish() const {
  std::vector<std::string> leftover;
  for (const auto& [section, keys] : values_)
    for (const auto& [key, value] : keys)
      if (!consumed_.count(section + "." + key)) leftover.push_back(section + "." + key);
  if (leftover.empty()) return;
  std::string msg = "config: unknown key(s) for this command:";
  for (const auto& k : leftover) msg += " " + k;
  throw ValidationError(msg);
}

std::uint64_t RunConfig::content_hash() const {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : raw_) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

}  // namespace normdyn
