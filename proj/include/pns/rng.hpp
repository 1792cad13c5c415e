#pragma once

#include <cstdint>
#include <random>

namespace pns {

// SplitMix64 mixing step; bijective on 64-bit values.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

// Random stream owned by exactly one chain/run at a time.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  // [0, 1)
  double uniform01() {
    return std::uniform_real_distribution<double>(0.0, 1.0)(eng_);
  }

  // (0, 1]; keeps log() finite.
  double uniform_open_closed() { return 1.0 - uniform01(); }

  double normal() {
    return std::normal_distribution<double>(0.0, 1.0)(eng_);
  }

  std::uint64_t below(std::uint64_t n) {
    return std::uniform_int_distribution<std::uint64_t>(0, n - 1)(eng_);
  }

  std::mt19937_64& engine() { return eng_; }

 private:
  std::mt19937_64 eng_;
};

}  // namespace pns
