#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "normdyn/errors.hpp"

namespace normdyn {

// splitmix64 finalizer; used both to condition raw seeds and to split
// per-replica streams (replica seed = mix64(master ^ replica index)).
inline std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t replica_seed(std::uint64_t master, std::uint64_t replica) {
  return mix64(master ^ replica);
}

// mt19937_64 with explicit sampling helpers. The helpers avoid
// std::uniform_*_distribution so draws are a pure function of the engine
// stream (replay determinism is a stated contract of the dynamics engine).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(mix64(seed)) {}

  std::uint64_t raw() { return gen_(); }

  // [0,1) with 53 random bits.
  double unit() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

  // Uniform over {0,...,n-1} by 128-bit multiply-shift (bias < n/2^64).
  int uniform_index(int n) {
    return static_cast<int>((static_cast<__uint128_t>(gen_()) * static_cast<std::uint64_t>(n)) >> 64);
  }

  bool bernoulli(double p) { return unit() < p; }

 private:
  std::mt19937_64 gen_;
};

// Finite distribution over {0,...,n-1}, sampled by inverse CDF.
class DiscreteDistribution {
 public:
  DiscreteDistribution() = default;
  explicit DiscreteDistribution(std::vector<double> probs) : probs_(std::move(probs)) {
    double sum = 0.0;
    for (double p : probs_) {
      if (p < 0.0) throw ValidationError("distribution has a negative entry");
      sum += p;
    }
    if (probs_.empty() || sum <= 0.0) throw ValidationError("distribution has no mass");
    if (std::abs(sum - 1.0) > 1e-9) throw ValidationError("distribution does not sum to 1");
    cum_.resize(probs_.size());
    double acc = 0.0;
    for (std::size_t i = 0; i < probs_.size(); ++i) {
      acc += probs_[i];
      cum_[i] = acc;
    }
    cum_.back() = 1.0;
  }

  int sample(Rng& rng) const {
    const double u = rng.unit();
    std::size_t lo = 0, hi = cum_.size() - 1;
    while (lo < hi) {
      const std::size_t mid = (lo + hi) / 2;
      if (cum_[mid] > u) hi = mid; else lo = mid + 1;
    }
    return static_cast<int>(lo);
  }

  double prob(int i) const { return probs_[static_cast<std::size_t>(i)]; }
  int size() const { return static_cast<int>(probs_.size()); }
  const std::vector<double>& probs() const { return probs_; }

  bool in_support(int i) const { return probs_[static_cast<std::size_t>(i)] > 0.0; }

 private:
  std::vector<double> probs_;
  std::vector<double> cum_;
};

}  // namespace normdyn
