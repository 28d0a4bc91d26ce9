#pragma once

// Estimators for the two side-information models.
//
// Full-distribution estimators (empirical, add-constant, interpolation)
// return a Distribution. Level estimators (Good-Turing one-level, two-level,
// oracles) return the single value assigned to each symbol of S_l and are
// evaluated with the per-level loss Q_l.

#include <cstdint>
#include <optional>
#include <utility>

#include "sideinfo/core.hpp"

namespace sideinfo {

struct NaturalLevelEstimate {
  std::uint64_t level = 0;
  double value = 0.0;         // mass given to every symbol of S_l
  double implied_mass = 0.0;  // phi_l * value
};

struct TwoLevelEstimate {
  std::uint64_t level = 0;
  double value_low = 0.0;   // for S_l intersect A
  double value_high = 0.0;  // for S_l intersect B
};

// N_i / n. Throws Error(kUndefined) when n = 0.
Distribution empirical(const SampleProfile& profile);

// (N_i + beta) / (n + d beta); beta defaults to sqrt(n)/d.
Distribution add_constant(const SampleProfile& profile, std::optional<double> beta = std::nullopt);

// Shrinkage weight minimising alpha^2 c + (1 - alpha)^2 Delta^2 with
// c = (1 - (||pi0|| - Delta)^2) / n.
double optimal_interpolation_weight(std::uint64_t n, double center_norm, double radius);

// alpha * empirical + (1 - alpha) * center. alpha defaults to
// optimal_interpolation_weight(n, ||center||, radius).
Distribution interpolation(const SampleProfile& profile, const BallSideInfo& info,
                           std::optional<double> alpha = std::nullopt);

// Good-Turing level mass estimate (l+1) phi_{l+1} / (n - l); needs l < n.
double good_turing_mass(const SampleProfile& profile, std::uint64_t l);

// Good-Turing mass spread evenly over S_l; needs phi_l >= 1.
NaturalLevelEstimate one_level_estimate(const SampleProfile& profile, std::uint64_t l);

// Separate Good-Turing estimates on each side of the partition, each using
// the side's own sample count: (l+1)/max(1, N_side - l) * phi_{l+1}^side / phi_l^side.
// A side with phi_l^side = 0 gets value 0.
//
// The per-side formula estimates probabilities conditional on the side. With
// kSideShare each value is multiplied by N_side / n, the empirical share of
// the side, turning it into an unconditional probability.
enum class TwoLevelScale { kWithinSide, kSideShare };

TwoLevelEstimate two_level_estimate(const SampleProfile& profile, const PartitionSideInfo& part,
                                    std::uint64_t l, TwoLevelScale scale = TwoLevelScale::kWithinSide);

// Mean of the true masses over `symbols`, computed as a shifted mean so that a
// set of identical masses returns that mass exactly. Empty input throws.
double mean_mass(const Distribution& truth, std::span<const Symbol> symbols);

// Oracle natural value M_l / phi_l. Needs truth and phi_l >= 1.
double oracle_level(const SampleProfile& profile, std::uint64_t l);

// Per-side oracle values; nullopt for a side whose part of S_l is empty.
std::pair<std::optional<double>, std::optional<double>> oracle_two_level(
    const SampleProfile& profile, const PartitionSideInfo& part, std::uint64_t l);

// Q_l for a natural estimator assigning `value` to all of S_l.
double level_loss(const SampleProfile& profile, std::uint64_t l, double value);
// Q_l for a full distribution estimate restricted to S_l.
double level_loss(const SampleProfile& profile, std::uint64_t l, const Distribution& estimate);
// Q_l for a two-level assignment.
double two_level_loss(const SampleProfile& profile, const PartitionSideInfo& part, std::uint64_t l,
                      double value_low, double value_high);

}  // namespace sideinfo
