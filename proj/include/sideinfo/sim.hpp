#pragma once

// Sampling, exact and Monte Carlo risk evaluation, the Model 2 regret
// decomposition, and synthetic distribution generators.

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "sideinfo/core.hpp"
#include "sideinfo/estimators.hpp"
#include "sideinfo/rng.hpp"

namespace sideinfo::sim {

// ---- sampling ---------------------------------------------------------------

std::vector<Symbol> sample_iid(const Distribution& dist, std::uint64_t n, std::uint64_t seed);
std::vector<Symbol> sample_iid(const AliasTable& table, std::uint64_t n, Rng& rng);

// Draws a distribution from B(center, radius). Half of the proposals are
// interior (random direction, radius uniform on [0, 1.25 Delta], rejected
// when outside the simplex or the ball); half are pushed to the ball
// boundary along the segment towards a uniform simplex point. Throws
// Error(kSampling) when 1e5 proposals in a row are rejected.
Distribution sample_in_ball(const BallSideInfo& info, std::uint64_t seed);
Distribution sample_in_ball(const BallSideInfo& info, Rng& rng);

// ---- synthetic distributions -------------------------------------------------

// First d/2 symbols 1/(2d), the rest 3/(2d). Needs d even.
Distribution two_level_synthetic(std::uint64_t d);
// A = first d/2 symbols.
PartitionSideInfo lower_half_partition(std::uint64_t d);
// A = a uniformly random half of [d] (seeded).
PartitionSideInfo random_half_partition(std::uint64_t d, std::uint64_t seed);
// pi_i proportional to 1 / (i + 1)^exponent.
Distribution zipf(std::uint64_t d, double exponent = 1.0);

// ---- exact risk --------------------------------------------------------------

using DistributionEstimator = std::function<Distribution(const SampleProfile&)>;
using ProfileFunction = std::function<double(const SampleProfile&)>;

inline constexpr std::size_t kExactMaxAlphabet = 5;
inline constexpr std::uint64_t kExactMaxSamples = 8;

// E[f(profile)] by enumerating all count vectors with their multinomial
// probabilities. Needs d <= 5 and n <= 8.
double exact_expectation(const Distribution& dist, std::uint64_t n, const ProfileFunction& f);
// E ||pi - estimate||^2.
double exact_risk(const Distribution& dist, const DistributionEstimator& estimator, std::uint64_t n);

// ---- Monte Carlo -------------------------------------------------------------

enum class LossKind { kFullL2, kPerLevel };

struct SimConfig {
  std::uint64_t master_seed = 0;
  std::uint64_t trials = 1;
  std::vector<std::uint64_t> n_grid;
  // 0 = one worker per hardware thread. Results do not depend on this.
  unsigned threads = 1;
  LossKind loss = LossKind::kFullL2;
  std::vector<std::uint64_t> levels;
};

// Throws Error(kInput) unless trials >= 1, the grid is nonempty and strictly
// ascending, and levels are given for per-level loss.
void validate(const SimConfig& config);

// Fills `counts` (size d, zeroed by the caller) with the sample counts of one
// trial of size n.
using Sampler = std::function<void(std::uint64_t n, Rng& rng, std::vector<std::uint64_t>& counts)>;

Sampler iid_sampler(const Distribution& dist);

struct TrialResult {
  double loss = 0.0;
  std::vector<double> extras;
};

// One named quantity evaluated on every trial. May throw sideinfo::Error to
// mark the trial as failed for this evaluator.
struct Evaluation {
  std::string name;
  std::function<TrialResult(const SampleProfile&)> evaluate;
  std::vector<std::string> extra_names;
};

// Runs config.trials trials per n and evaluates every Evaluation on the same
// sampled profile. Failed trials are excluded and counted; more than 1%
// failures for any evaluator aborts with Error(kSampling). Reports come out
// in the order of `evaluations`.
std::vector<RiskReport> mc_evaluate(const Distribution& truth, const Sampler& sampler,
                                    const std::vector<Evaluation>& evaluations,
                                    const SimConfig& config);

// Risk of a distribution estimator under config.loss. Full l2 gives one
// report named `name`; per-level gives one report per level named
// `name@l<level>`.
std::vector<RiskReport> mc_risk(const Distribution& dist, const std::string& name,
                                const DistributionEstimator& estimator, const SimConfig& config);

// ---- Model 2 regret ------------------------------------------------------------

struct RegretBreakdown {
  double gain = 0.0;                     // phiA phiB / phi (orA - orB)^2
  double one_level_error = 0.0;          // phi (or - one-level)^2
  double two_level_error_low = 0.0;      // phiA (orA - two-level A)^2
  double two_level_error_high = 0.0;     // phiB (orB - two-level B)^2
  double total_regret = 0.0;             // Q_l(one-level) - Q_l(two-level), computed directly

  double decomposed() const {
    return gain + one_level_error - two_level_error_low - two_level_error_high;
  }
  double residual() const { return total_regret - decomposed(); }
};

RegretBreakdown regret_breakdown(const SampleProfile& profile, const PartitionSideInfo& part,
                                 std::uint64_t l, TwoLevelScale scale = TwoLevelScale::kWithinSide);
RegretBreakdown regret_breakdown(const Distribution& dist, const PartitionSideInfo& part,
                                 std::span<const Symbol> samples, std::uint64_t l,
                                 TwoLevelScale scale = TwoLevelScale::kWithinSide);

// Q_l(pi, value) - [oracle error + (M_l - phi_l value)^2 / phi_l].
double level_decomposition_residual(const SampleProfile& profile, std::uint64_t l, double value);
// phi_l or - (phiA orA + phiB orB).
double oracle_identity_residual(const SampleProfile& profile, const PartitionSideInfo& part,
                                std::uint64_t l);

// Mean of x over trials and its normal-approximation standard error.
struct MeanStderr {
  double mean = 0.0;
  double std_error = 0.0;
};
MeanStderr mean_stderr(std::span<const double> values);

}  // namespace sideinfo::sim
