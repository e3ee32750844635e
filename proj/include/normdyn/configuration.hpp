#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "normdyn/errors.hpp"
#include "normdyn/game.hpp"

namespace normdyn {

// Strategy assignment for every vertex. Two serializations:
//  - bitstring "10…" with vertex 0 leftmost and A = 1 (the external format);
//  - packed integer index with vertex 0 in the least significant bit, A = 1
//    (used to index exact-analysis state spaces; all-B is 0, all-A is 2^n - 1).
class Configuration {
 public:
  Configuration(int n, Strategy fill) : bits_(check_size(n), fill) {}

  static Configuration all_a(int n) { return Configuration(n, Strategy::A); }
  static Configuration all_b(int n) { return Configuration(n, Strategy::B); }

  static Configuration from_bitstring(const std::string& s) {
    Configuration c(static_cast<int>(s.size()), Strategy::B);
    for (std::size_t i = 0; i < s.size(); ++i) {
      if (s[i] == '1') c.bits_[i] = Strategy::A;
      else if (s[i] != '0') throw ValidationError("bitstring must contain only 0/1");
    }
    return c;
  }

  static Configuration from_index(std::uint64_t packed, int n) {
    if (n > 63) throw ValidationError("packed configurations support at most 63 vertices");
    Configuration c(n, Strategy::B);
    for (int v = 0; v < n; ++v)
      if ((packed >> v) & 1ULL) c.bits_[static_cast<std::size_t>(v)] = Strategy::A;
    return c;
  }

  std::uint64_t to_index() const {
    if (size() > 63) throw ValidationError("packed configurations support at most 63 vertices");
    std::uint64_t packed = 0;
    for (int v = 0; v < size(); ++v)
      if (bits_[static_cast<std::size_t>(v)] == Strategy::A) packed |= 1ULL << v;
    return packed;
  }

  std::string to_bitstring() const {
    std::string s(bits_.size(), '0');
    for (std::size_t i = 0; i < bits_.size(); ++i)
      if (bits_[i] == Strategy::A) s[i] = '1';
    return s;
  }

  Strategy at(int v) const { return bits_[static_cast<std::size_t>(v)]; }
  void set(int v, Strategy s) { bits_[static_cast<std::size_t>(v)] = s; }

  int size() const { return static_cast<int>(bits_.size()); }

  int count_a() const {
    int k = 0;
    for (Strategy s : bits_)
      if (s == Strategy::A) ++k;
    return k;
  }

  bool operator==(const Configuration& o) const { return bits_ == o.bits_; }
  bool operator!=(const Configuration& o) const { return !(*this == o); }

 private:
  static int check_size(int n) {
    if (n <= 0) throw ValidationError("configuration needs at least one vertex");
    return n;
  }

  std::vector<Strategy> bits_;
};

}  // namespace normdyn
