#include "sideinfo/rng.hpp"

#include <cmath>

#include "sideinfo/error.hpp"

namespace sideinfo {
namespace {

constexpr std::uint64_t rotl(std::uint64_t x, int k) noexcept { return (x << k) | (x >> (64 - k)); }

}  // namespace

Rng::Rng(std::uint64_t seed) noexcept {
  std::uint64_t state = seed;
  for (auto& word : s_) {
    word = splitmix64_mix(state);
    state += 0x9E3779B97F4A7C15ULL;
  }
}

std::uint64_t Rng::next() noexcept {
  const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
  const std::uint64_t t = s_[1] << 17;
  s_[2] ^= s_[0];
  s_[3] ^= s_[1];
  s_[1] ^= s_[2];
  s_[0] ^= s_[3];
  s_[2] ^= t;
  s_[3] = rotl(s_[3], 45);
  return result;
}

std::uint64_t Rng::below(std::uint64_t bound) noexcept {
  // Rejection keeps the draw exactly uniform.
  const std::uint64_t limit = bound == 0 ? 0 : (~std::uint64_t{0} - bound + 1) % bound;
  while (true) {
    const std::uint64_t x = next();
    if (x >= limit) return x % bound;
  }
}

double Rng::exponential() noexcept { return -std::log(uniform_open_low()); }

AliasTable::AliasTable(std::span<const double> probs) : accept_(probs.size()), alias_(probs.size()) {
  const std::size_t d = probs.size();
  if (d == 0) fail(ErrorCode::kInput, "alias table needs a nonempty distribution");
  if (d > UINT32_MAX) fail(ErrorCode::kTooLarge, "alias table alphabet too large");
  double total = 0.0;
  for (double p : probs) total += p;
  std::vector<double> scaled(d);
  std::vector<std::uint32_t> small;
  std::vector<std::uint32_t> large;
  for (std::size_t i = 0; i < d; ++i) {
    scaled[i] = probs[i] / total * static_cast<double>(d);
    (scaled[i] < 1.0 ? small : large).push_back(static_cast<std::uint32_t>(i));
  }
  while (!small.empty() && !large.empty()) {
    const auto s = small.back();
    small.pop_back();
    const auto l = large.back();
    accept_[s] = scaled[s];
    alias_[s] = l;
    scaled[l] = (scaled[l] + scaled[s]) - 1.0;
    if (scaled[l] < 1.0) {
      large.pop_back();
      small.push_back(l);
    }
  }
  for (auto l : large) {
    accept_[l] = 1.0;
    alias_[l] = l;
  }
  // Leftovers are rounding residue; they keep their own column.
  for (auto s : small) {
    accept_[s] = 1.0;
    alias_[s] = s;
  }
}

std::size_t AliasTable::draw(Rng& rng) const noexcept {
  const std::uint64_t x = rng.next();
  const std::size_t column = static_cast<std::size_t>(((x >> 32) * accept_.size()) >> 32);
  const double coin = static_cast<double>(x & 0xFFFFFFFFULL) * 0x1.0p-32;
  return coin < accept_[column] ? column : alias_[column];
}

}  // namespace sideinfo
