#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace qabench {

// Deterministic, platform-independent randomness. std::uniform_int_distribution
// and std::normal_distribution are implementation-defined, so bounded draws
// use rejection sampling and Gaussians use Box-Muller, both on top of
// mt19937_64 (whose output sequence is pinned by the standard).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  std::uint64_t next_u64() { return gen_(); }

  // Uniform integer in [0, n), n > 0.
  std::uint64_t next_below(std::uint64_t n);

  // Uniform double in [0, 1) with 53 random bits.
  double uniform() { return (gen_() >> 11) * 0x1.0p-53; }

  double normal(double mu, double sigma);

 private:
  std::mt19937_64 gen_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

std::uint64_t splitmix64(std::uint64_t x);
std::uint64_t fnv1a(std::string_view s);

// Per-item seed: hash of the master seed and a textual item key.
std::uint64_t derive_seed(std::uint64_t master, std::string_view key);

}  // namespace qabench
