#pragma once

// Core value types: distributions on the simplex, sample profiles
// (counts N_i, occupancy sets S_l, prevalences phi_l, level masses M_l) and
// the two side-information containers.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace sideinfo {

using Symbol = std::size_t;

// Absolute tolerance used for normalisation and ball membership.
inline constexpr double kSimplexTolerance = 1e-12;

// A point on the d-simplex. Zero entries are allowed.
class Distribution {
 public:
  // Validates nonnegativity, finiteness and |sum - 1| <= 1e-12; throws
  // Error(kInput) otherwise. Inputs are never renormalised.
  explicit Distribution(std::vector<double> probs);

  static Distribution uniform(std::size_t d);
  // Point mass on `symbol`.
  static Distribution point_mass(std::size_t d, Symbol symbol);
  // Divides by the sum. Use only where renormalisation is intended.
  static Distribution normalized(std::vector<double> weights);

  std::size_t size() const noexcept { return probs_.size(); }
  double operator[](Symbol i) const { return probs_[i]; }
  std::span<const double> probs() const noexcept { return probs_; }

  double norm() const;          // l2 norm ||pi||
  double norm_squared() const;  // ||pi||^2
  // pi_S = sum of masses over `symbols`.
  double mass_of(std::span<const Symbol> symbols) const;

  bool operator==(const Distribution&) const = default;

 private:
  std::vector<double> probs_;
};

// Counts and occupancy statistics of a sample over a known alphabet [d].
class SampleProfile {
 public:
  std::size_t alphabet_size() const noexcept { return counts_.size(); }
  std::uint64_t sample_size() const noexcept { return n_; }
  std::uint64_t count(Symbol i) const { return counts_[i]; }
  std::span<const std::uint64_t> counts() const noexcept { return counts_; }

  // Largest l with phi_l > 0.
  std::uint64_t max_level() const noexcept { return occupancy_.size() - 1; }
  // S_l in increasing symbol order; empty for levels above max_level().
  std::span<const Symbol> occupancy(std::uint64_t l) const;
  // phi_l = |S_l|.
  std::size_t phi(std::uint64_t l) const { return occupancy(l).size(); }

  bool has_truth() const noexcept { return truth_.has_value(); }
  // Throws Error(kMissingTruth) when the profile was built without truth.
  const Distribution& truth() const;
  // M_l = sum_{i in S_l} pi_i; requires truth.
  double mass(std::uint64_t l) const;

 private:
  friend SampleProfile build_profile(std::span<const Symbol>, std::size_t,
                                     std::optional<Distribution>);
  friend SampleProfile profile_from_counts(std::vector<std::uint64_t>,
                                           std::optional<Distribution>);

  std::uint64_t n_ = 0;
  std::vector<std::uint64_t> counts_;
  std::vector<std::vector<Symbol>> occupancy_;
  std::optional<Distribution> truth_;
  std::vector<double> mass_;
};

SampleProfile build_profile(std::span<const Symbol> samples, std::size_t alphabet_size,
                            std::optional<Distribution> truth = std::nullopt);
SampleProfile profile_from_counts(std::vector<std::uint64_t> counts,
                                  std::optional<Distribution> truth = std::nullopt);

double l2_distance_squared(const Distribution& p, const Distribution& q);

// Model 1 side information: the true distribution lies in B(center, radius).
class BallSideInfo {
 public:
  BallSideInfo(Distribution center, double radius);

  const Distribution& center() const noexcept { return center_; }
  double radius() const noexcept { return radius_; }

 private:
  Distribution center_;
  double radius_;
};

bool ball_contains(const BallSideInfo& info, const Distribution& p);

enum class Side { kLow, kHigh };

// Model 2 side information: [d] split into a low-probability set A and a
// high-probability set B.
class PartitionSideInfo {
 public:
  // `low_set` lists A; B is the complement in [d]. Throws when either side
  // is empty or a symbol is out of range or repeated.
  PartitionSideInfo(std::size_t alphabet_size, std::span<const Symbol> low_set);
  static PartitionSideInfo from_membership(std::vector<bool> in_low);

  std::size_t alphabet_size() const noexcept { return in_low_.size(); }
  bool in_low(Symbol i) const { return in_low_[i]; }
  Side side_of(Symbol i) const { return in_low_[i] ? Side::kLow : Side::kHigh; }
  std::vector<Symbol> members(Side side) const;

  // N_A or N_B.
  std::uint64_t side_count(const SampleProfile& profile, Side side) const;
  // S_l^A or S_l^B.
  std::vector<Symbol> side_occupancy(const SampleProfile& profile, Side side,
                                     std::uint64_t l) const;
  // phi_l^A or phi_l^B.
  std::size_t side_phi(const SampleProfile& profile, Side side, std::uint64_t l) const;
  // pi_A or pi_B.
  double side_mass(const Distribution& dist, Side side) const;

 private:
  explicit PartitionSideInfo(std::vector<bool> in_low);
  void validate() const;

  std::vector<bool> in_low_;
};

struct RiskPoint {
  std::uint64_t n = 0;
  double loss = 0.0;
  double std_error = 0.0;
  std::uint64_t trials = 0;
  std::uint64_t failures = 0;
  // Additional named per-point columns (e.g. regret breakdown means).
  std::vector<std::pair<std::string, double>> extra;
};

struct BoundOverlay {
  std::uint64_t n = 0;
  std::optional<double> upper;
  std::vector<std::pair<std::string, double>> lowers;
};

// Monte Carlo risk estimates for one estimator over a grid of n.
struct RiskReport {
  std::string estimator;
  std::vector<RiskPoint> grid;  // sorted by n
  std::vector<BoundOverlay> bounds;
};

}  // namespace sideinfo
