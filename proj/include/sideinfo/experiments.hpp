#pragma once

// End-to-end experiment drivers behind the `simulate` and `bounds` commands.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "sideinfo/core.hpp"
#include "sideinfo/sim.hpp"

namespace sideinfo::experiments {

// ---- Model 1 ---------------------------------------------------------------

struct Model1Setup {
  BallSideInfo info;
  // True distributions to evaluate. Each reported loss is the largest mean
  // loss over these (with that point's stderr).
  std::vector<Distribution> truths;
  // Replaces i.i.d. sampling from the truth (used for corpus windows).
  std::optional<sim::Sampler> sampler;
  std::optional<double> alpha;
  sim::SimConfig config;
};

// Empirical, add-sqrt(n)/d and interpolation estimators, in that order, with
// bounds overlaid on every report.
std::vector<RiskReport> run_model1(const Model1Setup& setup);

// `draws` distributions sampled from the ball, draw k seeded with
// trial_seed(master, 0, k).
std::vector<Distribution> ball_truths(const BallSideInfo& info, std::uint64_t draws, std::uint64_t master);

// Bounds overlay for a ball: upper bound and every applicable lower bound.
// The uniform-center bound is included only for a uniform center with d even
// and n >= d.
BoundOverlay model1_bounds(const BallSideInfo& info, std::uint64_t n);

// ---- Model 2 ---------------------------------------------------------------

struct Model2Setup {
  Distribution truth;
  PartitionSideInfo partition;
  std::optional<sim::Sampler> sampler;
  sim::SimConfig config;  // levels taken from config.levels
  std::vector<TwoLevelScale> scales{TwoLevelScale::kWithinSide, TwoLevelScale::kSideShare};
};

// Per level l: reports one_level@l<l>, then for each scale two_level@l<l>
// (within-side) or two_level_share@l<l> (side-share), each with mean regret
// breakdown columns, then oracle_two_level@l<l>. Losses are Q_l.
std::vector<RiskReport> run_model2(const Model2Setup& setup);

// ---- corpus samplers ---------------------------------------------------------

// Counts of the successors of `context` within a contiguous window holding
// n occurrences of it; successors index into `lexicon`.
sim::Sampler bigram_window_sampler(std::vector<std::string> tokens, std::string context,
                                   std::vector<std::string> lexicon_tokens);

// Counts of a contiguous run of n tokens starting uniformly at random.
sim::Sampler token_window_sampler(std::vector<std::string> tokens, std::vector<std::string> lexicon_tokens);

// ---- bounds grid -------------------------------------------------------------

struct BoundsRow {
  std::uint64_t n = 0;
  std::uint64_t d = 0;
  double delta = 0.0;
  double center_norm = 0.0;
  std::optional<double> ub_interp, lb_lecam, lb_uniform, lb_general;
  std::string notes;
};

// Evaluates every bound whose preconditions hold; the others are left empty
// with the reason in `notes`. `uniform_center` says whether the norm comes
// from the uniform distribution (the uniform-center bound needs it).
BoundsRow bounds_row(std::uint64_t n, std::uint64_t d, double delta, double center_norm, bool uniform_center);

std::string format_bounds(const std::vector<BoundsRow>& rows);

}  // namespace sideinfo::experiments
