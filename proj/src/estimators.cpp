#include "sideinfo/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "sideinfo/error.hpp"

namespace sideinfo {
namespace {

void require_samples(const SampleProfile& profile, const char* estimator) {
  if (profile.sample_size() == 0) {
    fail(ErrorCode::kUndefined, std::string(estimator) + " estimator is undefined for n = 0");
  }
}

}  // namespace

Distribution empirical(const SampleProfile& profile) {
  require_samples(profile, "empirical");
  const double n = static_cast<double>(profile.sample_size());
  std::vector<double> probs(profile.alphabet_size());
  for (Symbol i = 0; i < probs.size(); ++i) probs[i] = static_cast<double>(profile.count(i)) / n;
  return Distribution(std::move(probs));
}

Distribution add_constant(const SampleProfile& profile, std::optional<double> beta) {
  require_samples(profile, "add-constant");
  const double n = static_cast<double>(profile.sample_size());
  const double d = static_cast<double>(profile.alphabet_size());
  const double b = beta.value_or(std::sqrt(n) / d);
  if (!(b >= 0.0) || !std::isfinite(b)) fail(ErrorCode::kRange, "add-constant beta must be finite and nonnegative");
  std::vector<double> probs(profile.alphabet_size());
  const double denom = n + d * b;
  for (Symbol i = 0; i < probs.size(); ++i) probs[i] = (static_cast<double>(profile.count(i)) + b) / denom;
  return Distribution(std::move(probs));
}

double optimal_interpolation_weight(std::uint64_t n, double center_norm, double radius) {
  if (n == 0) fail(ErrorCode::kUndefined, "interpolation weight is undefined for n = 0");
  const double gap = center_norm - radius;
  const double nd2 = static_cast<double>(n) * radius * radius;
  return nd2 / (nd2 + 1.0 - gap * gap);
}

Distribution interpolation(const SampleProfile& profile, const BallSideInfo& info,
                           std::optional<double> alpha) {
  require_samples(profile, "interpolation");
  const Distribution& center = info.center();
  if (center.size() != profile.alphabet_size()) {
    fail(ErrorCode::kDimension, "ball center and sample use different alphabet sizes");
  }
  double a = 0.0;
  if (alpha) {
    if (!(*alpha >= 0.0 && *alpha <= 1.0)) fail(ErrorCode::kRange, "interpolation alpha must lie in [0, 1]");
    a = *alpha;
  } else {
    a = optimal_interpolation_weight(profile.sample_size(), center.norm(), info.radius());
  }
  const double n = static_cast<double>(profile.sample_size());
  std::vector<double> probs(profile.alphabet_size());
  for (Symbol i = 0; i < probs.size(); ++i) {
    probs[i] = a * (static_cast<double>(profile.count(i)) / n) + (1.0 - a) * center[i];
  }
  return Distribution(std::move(probs));
}

double good_turing_mass(const SampleProfile& profile, std::uint64_t l) {
  const std::uint64_t n = profile.sample_size();
  if (l >= n) {
    std::ostringstream msg;
    msg << "Good-Turing mass needs l < n (l = " << l << ", n = " << n << ")";
    fail(ErrorCode::kRange, msg.str());
  }
  return static_cast<double>(l + 1) * static_cast<double>(profile.phi(l + 1)) /
         static_cast<double>(n - l);
}

NaturalLevelEstimate one_level_estimate(const SampleProfile& profile, std::uint64_t l) {
  const std::size_t phi = profile.phi(l);
  if (phi == 0) fail(ErrorCode::kEmptyLevel, "level " + std::to_string(l) + " is empty");
  const double mass = good_turing_mass(profile, l);
  return {l, mass / static_cast<double>(phi), mass};
}

TwoLevelEstimate two_level_estimate(const SampleProfile& profile, const PartitionSideInfo& part,
                                    std::uint64_t l, TwoLevelScale scale) {
  auto side_value = [&](Side side) {
    const std::size_t phi = part.side_phi(profile, side, l);
    if (phi == 0) return 0.0;
    const std::size_t phi_next = part.side_phi(profile, side, l + 1);
    const std::uint64_t count = part.side_count(profile, side);
    const double denom = count > l ? static_cast<double>(count - l) : 1.0;
    double value = static_cast<double>(l + 1) / denom * static_cast<double>(phi_next) / static_cast<double>(phi);
    if (scale == TwoLevelScale::kSideShare) {
      const std::uint64_t n = profile.sample_size();
      value = n == 0 ? 0.0 : value * static_cast<double>(count) / static_cast<double>(n);
    }
    return value;
  };
  return {l, side_value(Side::kLow), side_value(Side::kHigh)};
}

double mean_mass(const Distribution& truth, std::span<const Symbol> symbols) {
  if (symbols.empty()) fail(ErrorCode::kEmptyLevel, "mean over an empty set");
  const double shift = truth[symbols.front()];
  double s = 0.0;
  for (Symbol i : symbols) s += truth[i] - shift;
  return shift + s / static_cast<double>(symbols.size());
}

double oracle_level(const SampleProfile& profile, std::uint64_t l) {
  const Distribution& truth = profile.truth();
  auto level = profile.occupancy(l);
  if (level.empty()) fail(ErrorCode::kEmptyLevel, "level " + std::to_string(l) + " is empty");
  return mean_mass(truth, level);
}

std::pair<std::optional<double>, std::optional<double>> oracle_two_level(
    const SampleProfile& profile, const PartitionSideInfo& part, std::uint64_t l) {
  const Distribution& truth = profile.truth();
  auto side = [&](Side s) -> std::optional<double> {
    auto members = part.side_occupancy(profile, s, l);
    if (members.empty()) return std::nullopt;
    return mean_mass(truth, members);
  };
  return {side(Side::kLow), side(Side::kHigh)};
}

double level_loss(const SampleProfile& profile, std::uint64_t l, double value) {
  const Distribution& truth = profile.truth();
  double s = 0.0;
  for (Symbol i : profile.occupancy(l)) {
    const double diff = truth[i] - value;
    s += diff * diff;
  }
  return s;
}

double level_loss(const SampleProfile& profile, std::uint64_t l, const Distribution& estimate) {
  const Distribution& truth = profile.truth();
  if (estimate.size() != truth.size()) fail(ErrorCode::kDimension, "estimate and truth sizes differ");
  double s = 0.0;
  for (Symbol i : profile.occupancy(l)) {
    const double diff = truth[i] - estimate[i];
    s += diff * diff;
  }
  return s;
}

double two_level_loss(const SampleProfile& profile, const PartitionSideInfo& part, std::uint64_t l,
                      double value_low, double value_high) {
  const Distribution& truth = profile.truth();
  if (part.alphabet_size() != truth.size()) fail(ErrorCode::kDimension, "partition and truth sizes differ");
  double s = 0.0;
  for (Symbol i : profile.occupancy(l)) {
    const double diff = truth[i] - (part.in_low(i) ? value_low : value_high);
    s += diff * diff;
  }
  return s;
}

}  // namespace sideinfo
