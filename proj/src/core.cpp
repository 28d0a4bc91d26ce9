#include "sideinfo/core.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "sideinfo/error.hpp"

namespace sideinfo {

const char* code_name(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::kInput: return "input";
    case ErrorCode::kDimension: return "dimension";
    case ErrorCode::kUndefined: return "undefined";
    case ErrorCode::kEmptyLevel: return "empty-level";
    case ErrorCode::kMissingTruth: return "missing-truth";
    case ErrorCode::kRange: return "range";
    case ErrorCode::kConstruction: return "construction";
    case ErrorCode::kTooLarge: return "too-large";
    case ErrorCode::kIo: return "io";
    case ErrorCode::kParse: return "parse";
    case ErrorCode::kSampling: return "sampling";
  }
  return "unknown";
}

Distribution::Distribution(std::vector<double> probs) : probs_(std::move(probs)) {
  if (probs_.empty()) fail(ErrorCode::kInput, "distribution must have at least one symbol");
  double sum = 0.0;
  for (std::size_t i = 0; i < probs_.size(); ++i) {
    const double p = probs_[i];
    if (!std::isfinite(p) || p < 0.0) {
      std::ostringstream msg;
      msg << "probability at index " << i << " is not a finite nonnegative number (" << p << ")";
      fail(ErrorCode::kInput, msg.str());
    }
    sum += p;
  }
  if (std::abs(sum - 1.0) > kSimplexTolerance) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "probabilities sum to " << sum << ", not 1";
    fail(ErrorCode::kInput, msg.str());
  }
}

Distribution Distribution::uniform(std::size_t d) {
  if (d == 0) fail(ErrorCode::kInput, "alphabet size must be positive");
  return Distribution(std::vector<double>(d, 1.0 / static_cast<double>(d)));
}

Distribution Distribution::point_mass(std::size_t d, Symbol symbol) {
  if (symbol >= d) fail(ErrorCode::kInput, "point mass symbol out of range");
  std::vector<double> probs(d, 0.0);
  probs[symbol] = 1.0;
  return Distribution(std::move(probs));
}

Distribution Distribution::normalized(std::vector<double> weights) {
  double sum = 0.0;
  for (double w : weights) {
    if (!std::isfinite(w) || w < 0.0) fail(ErrorCode::kInput, "weights must be finite and nonnegative");
    sum += w;
  }
  if (!(sum > 0.0)) fail(ErrorCode::kInput, "weights sum to zero");
  for (double& w : weights) w /= sum;
  return Distribution(std::move(weights));
}

double Distribution::norm_squared() const {
  double s = 0.0;
  for (double p : probs_) s += p * p;
  return s;
}

double Distribution::norm() const { return std::sqrt(norm_squared()); }

double Distribution::mass_of(std::span<const Symbol> symbols) const {
  double s = 0.0;
  for (Symbol i : symbols) s += probs_.at(i);
  return s;
}

std::span<const Symbol> SampleProfile::occupancy(std::uint64_t l) const {
  if (l >= occupancy_.size()) return {};
  return occupancy_[l];
}

const Distribution& SampleProfile::truth() const {
  if (!truth_) fail(ErrorCode::kMissingTruth, "profile was built without the true distribution");
  return *truth_;
}

double SampleProfile::mass(std::uint64_t l) const {
  if (!truth_) fail(ErrorCode::kMissingTruth, "level masses need the true distribution");
  return l < mass_.size() ? mass_[l] : 0.0;
}

SampleProfile profile_from_counts(std::vector<std::uint64_t> counts,
                                  std::optional<Distribution> truth) {
  if (counts.empty()) fail(ErrorCode::kInput, "alphabet size must be positive");
  if (truth && truth->size() != counts.size()) {
    fail(ErrorCode::kDimension, "truth has a different alphabet size than the counts");
  }
  SampleProfile profile;
  std::uint64_t max_count = 0;
  for (auto c : counts) {
    profile.n_ += c;
    max_count = std::max(max_count, c);
  }
  profile.occupancy_.resize(max_count + 1);
  for (Symbol i = 0; i < counts.size(); ++i) profile.occupancy_[counts[i]].push_back(i);
  profile.counts_ = std::move(counts);
  if (truth) {
    profile.mass_.assign(profile.occupancy_.size(), 0.0);
    for (std::size_t l = 0; l < profile.occupancy_.size(); ++l) {
      profile.mass_[l] = truth->mass_of(profile.occupancy_[l]);
    }
    profile.truth_ = std::move(truth);
  }
  return profile;
}

SampleProfile build_profile(std::span<const Symbol> samples, std::size_t alphabet_size,
                            std::optional<Distribution> truth) {
  if (alphabet_size == 0) fail(ErrorCode::kInput, "alphabet size must be positive");
  std::vector<std::uint64_t> counts(alphabet_size, 0);
  for (std::size_t k = 0; k < samples.size(); ++k) {
    if (samples[k] >= alphabet_size) {
      std::ostringstream msg;
      msg << "sample " << k << " has symbol " << samples[k] << " outside alphabet of size "
          << alphabet_size;
      fail(ErrorCode::kInput, msg.str());
    }
    ++counts[samples[k]];
  }
  return profile_from_counts(std::move(counts), std::move(truth));
}

double l2_distance_squared(const Distribution& p, const Distribution& q) {
  if (p.size() != q.size()) fail(ErrorCode::kDimension, "l2 distance between different alphabet sizes");
  double s = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double diff = p[i] - q[i];
    s += diff * diff;
  }
  return s;
}

BallSideInfo::BallSideInfo(Distribution center, double radius)
    : center_(std::move(center)), radius_(radius) {
  if (!(radius > 0.0 && radius <= 1.0)) {
    std::ostringstream msg;
    msg << "ball radius must lie in (0, 1], got " << radius;
    fail(ErrorCode::kRange, msg.str());
  }
}

bool ball_contains(const BallSideInfo& info, const Distribution& p) {
  return std::sqrt(l2_distance_squared(info.center(), p)) <= info.radius() + kSimplexTolerance;
}

PartitionSideInfo::PartitionSideInfo(std::vector<bool> in_low) : in_low_(std::move(in_low)) {
  validate();
}

PartitionSideInfo::PartitionSideInfo(std::size_t alphabet_size, std::span<const Symbol> low_set)
    : in_low_(alphabet_size, false) {
  for (Symbol i : low_set) {
    if (i >= alphabet_size) fail(ErrorCode::kInput, "partition symbol out of range");
    if (in_low_[i]) fail(ErrorCode::kInput, "partition lists a symbol twice");
    in_low_[i] = true;
  }
  validate();
}

PartitionSideInfo PartitionSideInfo::from_membership(std::vector<bool> in_low) {
  return PartitionSideInfo(std::move(in_low));
}

void PartitionSideInfo::validate() const {
  const auto low = std::count(in_low_.begin(), in_low_.end(), true);
  if (low == 0) fail(ErrorCode::kInput, "partition low set A is empty");
  if (static_cast<std::size_t>(low) == in_low_.size()) {
    fail(ErrorCode::kInput, "partition high set B is empty");
  }
}

std::vector<Symbol> PartitionSideInfo::members(Side side) const {
  std::vector<Symbol> out;
  for (Symbol i = 0; i < in_low_.size(); ++i) {
    if (side_of(i) == side) out.push_back(i);
  }
  return out;
}

std::uint64_t PartitionSideInfo::side_count(const SampleProfile& profile, Side side) const {
  if (profile.alphabet_size() != in_low_.size()) {
    fail(ErrorCode::kDimension, "partition and profile alphabet sizes differ");
  }
  std::uint64_t total = 0;
  for (Symbol i = 0; i < in_low_.size(); ++i) {
    if (side_of(i) == side) total += profile.count(i);
  }
  return total;
}

std::vector<Symbol> PartitionSideInfo::side_occupancy(const SampleProfile& profile, Side side,
                                                      std::uint64_t l) const {
  if (profile.alphabet_size() != in_low_.size()) {
    fail(ErrorCode::kDimension, "partition and profile alphabet sizes differ");
  }
  std::vector<Symbol> out;
  for (Symbol i : profile.occupancy(l)) {
    if (side_of(i) == side) out.push_back(i);
  }
  return out;
}

std::size_t PartitionSideInfo::side_phi(const SampleProfile& profile, Side side,
                                        std::uint64_t l) const {
  return side_occupancy(profile, side, l).size();
}

double PartitionSideInfo::side_mass(const Distribution& dist, Side side) const {
  if (dist.size() != in_low_.size()) fail(ErrorCode::kDimension, "partition and distribution sizes differ");
  double s = 0.0;
  for (Symbol i = 0; i < in_low_.size(); ++i) {
    if (side_of(i) == side) s += dist[i];
  }
  return s;
}

}  // namespace sideinfo
