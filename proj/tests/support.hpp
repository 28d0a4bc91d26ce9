#pragma once

// Test-side helpers. Randomness here comes from std::mt19937_64 so that test
// inputs do not depend on the library's own generator.

#include <cmath>
#include <cstdint>
#include <functional>
#include <random>
#include <stdexcept>
#include <vector>

#include "sideinfo/core.hpp"
#include "sideinfo/error.hpp"

namespace testing {

inline sideinfo::Distribution random_distribution(std::mt19937_64& gen, std::size_t d) {
  std::exponential_distribution<double> e(1.0);
  std::vector<double> w(d);
  for (auto& x : w) x = e(gen);
  return sideinfo::Distribution::normalized(std::move(w));
}

inline std::vector<sideinfo::Symbol> random_samples(std::mt19937_64& gen, const sideinfo::Distribution& p,
                                                     std::size_t n) {
  std::discrete_distribution<std::size_t> pick(p.probs().begin(), p.probs().end());
  std::vector<sideinfo::Symbol> out(n);
  for (auto& s : out) s = pick(gen);
  return out;
}

// Sum over all d^n ordered sequences of P(sequence) * f(sequence).
inline double brute_force_expectation(const sideinfo::Distribution& p, std::size_t n,
                                      const std::function<double(const std::vector<sideinfo::Symbol>&)>& f) {
  const std::size_t d = p.size();
  std::vector<sideinfo::Symbol> seq(n, 0);
  double total = 0.0;
  for (;;) {
    double prob = 1.0;
    for (auto s : seq) prob *= p[s];
    total += prob * f(seq);
    std::size_t k = 0;
    while (k < n && ++seq[k] == d) seq[k++] = 0;
    if (k == n) break;
  }
  return total;
}

inline double sq_dist(const std::vector<double>& a, const sideinfo::Distribution& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return s;
}

}  // namespace testing

namespace testing {

// Code of the sideinfo::Error thrown by f; throws std::logic_error if f returns.
template <class F>
sideinfo::ErrorCode code_of(F&& f) {
  try {
    f();
  } catch (const sideinfo::Error& e) {
    return e.code();
  }
  throw std::logic_error("expected a sideinfo::Error");
}

}  // namespace testing
