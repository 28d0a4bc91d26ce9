#pragma once

// Deterministic random number generation.
//
// Every Monte Carlo trial gets its own generator, seeded from the master
// seed, the sample size n and the trial index t:
//
//   mix(x)  = splitmix64 finaliser of (x + 0x9E3779B97F4A7C15):
//               z = x + 0x9E3779B97F4A7C15
//               z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
//               z = (z ^ (z >> 27)) * 0x94D049BB133111EB
//               return z ^ (z >> 31)
//   trial_seed(master, n, t) = mix(mix(master ^ mix(n)) ^ t)
//
// The trial generator is xoshiro256** whose four state words are the
// successive outputs of a splitmix64 stream started at trial_seed. Uniform
// doubles use the top 53 bits of a draw. All arithmetic is on uint64_t, so
// runs are reproducible across platforms and thread counts.

#include <cstdint>
#include <span>
#include <vector>

namespace sideinfo {

constexpr std::uint64_t splitmix64_mix(std::uint64_t x) noexcept {
  std::uint64_t z = x + 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

constexpr std::uint64_t trial_seed(std::uint64_t master, std::uint64_t n, std::uint64_t trial) noexcept {
  return splitmix64_mix(splitmix64_mix(master ^ splitmix64_mix(n)) ^ trial);
}

class Rng {
 public:
  explicit Rng(std::uint64_t seed) noexcept;

  std::uint64_t next() noexcept;
  // Uniform on [0, 1).
  double uniform() noexcept { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
  // Uniform on (0, 1]; safe to take the log of.
  double uniform_open_low() noexcept { return 1.0 - uniform(); }
  // Uniform integer in [0, bound).
  std::uint64_t below(std::uint64_t bound) noexcept;
  double exponential() noexcept;

 private:
  std::uint64_t s_[4];
};

// Walker/Vose alias table for O(1) draws from a fixed finite distribution.
class AliasTable {
 public:
  explicit AliasTable(std::span<const double> probs);

  std::size_t size() const noexcept { return accept_.size(); }
  std::size_t draw(Rng& rng) const noexcept;

 private:
  std::vector<double> accept_;
  std::vector<std::uint32_t> alias_;
};

}  // namespace sideinfo
