#include "sideinfo/sim.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <memory>
#include <numeric>
#include <sstream>
#include <thread>

#include "sideinfo/error.hpp"
#include "sideinfo/estimators.hpp"

namespace sideinfo::sim {

std::vector<Symbol> sample_iid(const AliasTable& table, std::uint64_t n, Rng& rng) {
  std::vector<Symbol> out(n);
  for (auto& x : out) x = table.draw(rng);
  return out;
}

std::vector<Symbol> sample_iid(const Distribution& dist, std::uint64_t n, std::uint64_t seed) {
  AliasTable table(dist.probs());
  Rng rng(seed);
  return sample_iid(table, n, rng);
}

namespace {

// Uniform point of the simplex (flat Dirichlet).
std::vector<double> uniform_simplex_point(std::size_t d, Rng& rng) {
  std::vector<double> q(d);
  double total = 0.0;
  for (auto& x : q) {
    x = rng.exponential();
    total += x;
  }
  for (auto& x : q) x /= total;
  return q;
}

}  // namespace

Distribution sample_in_ball(const BallSideInfo& info, Rng& rng) {
  const Distribution& center = info.center();
  const std::size_t d = center.size();
  const double radius = info.radius();
  constexpr int kMaxProposals = 100000;
  for (int attempt = 0; attempt < kMaxProposals; ++attempt) {
    const bool boundary = rng.uniform() < 0.5;
    const auto q = uniform_simplex_point(d, rng);
    double dist2 = 0.0;
    for (std::size_t i = 0; i < d; ++i) dist2 += (q[i] - center[i]) * (q[i] - center[i]);
    const double dist = std::sqrt(dist2);
    if (dist == 0.0) continue;
    std::vector<double> p(d);
    if (boundary) {
      const double t = std::min(1.0, radius / dist);
      for (std::size_t i = 0; i < d; ++i) p[i] = (1.0 - t) * center[i] + t * q[i];
    } else {
      const double r = 1.25 * radius * rng.uniform();
      bool inside_simplex = true;
      for (std::size_t i = 0; i < d; ++i) {
        p[i] = center[i] + r * (q[i] - center[i]) / dist;
        if (p[i] < 0.0) inside_simplex = false;
      }
      if (!inside_simplex || r > radius) continue;
    }
    Distribution candidate(std::move(p));
    if (ball_contains(info, candidate)) return candidate;
  }
  fail(ErrorCode::kSampling, "no proposal inside the ball after 100000 attempts");
}

Distribution sample_in_ball(const BallSideInfo& info, std::uint64_t seed) {
  Rng rng(seed);
  return sample_in_ball(info, rng);
}

Distribution two_level_synthetic(std::uint64_t d) {
  if (d < 2 || d % 2 != 0) fail(ErrorCode::kInput, "two-level synthetic distribution needs even d");
  const double low = 1.0 / (2.0 * static_cast<double>(d));
  const double high = 3.0 / (2.0 * static_cast<double>(d));
  std::vector<double> probs(d);
  for (std::uint64_t i = 0; i < d; ++i) probs[i] = i < d / 2 ? low : high;
  return Distribution(std::move(probs));
}

PartitionSideInfo lower_half_partition(std::uint64_t d) {
  if (d < 2) fail(ErrorCode::kInput, "partition needs d >= 2");
  std::vector<Symbol> low(d / 2);
  std::iota(low.begin(), low.end(), Symbol{0});
  return PartitionSideInfo(d, low);
}

PartitionSideInfo random_half_partition(std::uint64_t d, std::uint64_t seed) {
  if (d < 2) fail(ErrorCode::kInput, "partition needs d >= 2");
  std::vector<Symbol> perm(d);
  std::iota(perm.begin(), perm.end(), Symbol{0});
  Rng rng(seed);
  for (std::uint64_t i = d - 1; i > 0; --i) std::swap(perm[i], perm[rng.below(i + 1)]);
  perm.resize(d / 2);
  std::sort(perm.begin(), perm.end());
  return PartitionSideInfo(d, perm);
}

Distribution zipf(std::uint64_t d, double exponent) {
  if (d < 1) fail(ErrorCode::kInput, "zipf needs d >= 1");
  std::vector<double> w(d);
  for (std::uint64_t i = 0; i < d; ++i) w[i] = std::pow(static_cast<double>(i + 1), -exponent);
  return Distribution::normalized(std::move(w));
}

double exact_expectation(const Distribution& dist, std::uint64_t n, const ProfileFunction& f) {
  const std::size_t d = dist.size();
  if (d > kExactMaxAlphabet || n > kExactMaxSamples) {
    std::ostringstream msg;
    msg << "exact enumeration limited to d <= " << kExactMaxAlphabet << " and n <= " << kExactMaxSamples
        << " (got d = " << d << ", n = " << n << ")";
    fail(ErrorCode::kTooLarge, msg.str());
  }
  double factorial[kExactMaxSamples + 1];
  factorial[0] = 1.0;
  for (std::uint64_t k = 1; k <= kExactMaxSamples; ++k) factorial[k] = factorial[k - 1] * static_cast<double>(k);

  std::vector<std::uint64_t> counts(d, 0);
  double total = 0.0;
  // Enumerate compositions of n into d parts in lexicographic order.
  auto recurse = [&](auto&& self, std::size_t pos, std::uint64_t remaining) -> void {
    if (pos + 1 == d) {
      counts[pos] = remaining;
      double prob = factorial[n];
      for (std::size_t i = 0; i < d; ++i) {
        prob /= factorial[counts[i]];
        prob *= std::pow(dist[i], static_cast<double>(counts[i]));
      }
      if (prob > 0.0) total += prob * f(profile_from_counts(counts, dist));
      return;
    }
    for (std::uint64_t c = 0; c <= remaining; ++c) {
      counts[pos] = c;
      self(self, pos + 1, remaining - c);
    }
  };
  recurse(recurse, 0, n);
  return total;
}

double exact_risk(const Distribution& dist, const DistributionEstimator& estimator, std::uint64_t n) {
  return exact_expectation(dist, n, [&](const SampleProfile& profile) {
    return l2_distance_squared(dist, estimator(profile));
  });
}

void validate(const SimConfig& config) {
  if (config.trials < 1) fail(ErrorCode::kInput, "trials must be at least 1");
  if (config.n_grid.empty()) fail(ErrorCode::kInput, "n grid is empty");
  for (std::size_t k = 1; k < config.n_grid.size(); ++k) {
    if (config.n_grid[k] <= config.n_grid[k - 1]) fail(ErrorCode::kInput, "n grid must be strictly ascending");
  }
  if (config.loss == LossKind::kPerLevel && config.levels.empty()) {
    fail(ErrorCode::kInput, "per-level loss needs at least one level");
  }
}

Sampler iid_sampler(const Distribution& dist) {
  auto table = std::make_shared<const AliasTable>(dist.probs());
  return [table](std::uint64_t n, Rng& rng, std::vector<std::uint64_t>& counts) {
    for (std::uint64_t k = 0; k < n; ++k) ++counts[table->draw(rng)];
  };
}

MeanStderr mean_stderr(std::span<const double> values) {
  if (values.empty()) return {};
  double sum = 0.0;
  for (double v : values) sum += v;
  const double m = static_cast<double>(values.size());
  const double mean = sum / m;
  if (values.size() < 2) return {mean, 0.0};
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  return {mean, std::sqrt(ss / (m - 1.0) / m)};
}

std::vector<RiskReport> mc_evaluate(const Distribution& truth, const Sampler& sampler,
                                    const std::vector<Evaluation>& evaluations,
                                    const SimConfig& config) {
  validate(config);
  const std::size_t num_eval = evaluations.size();
  std::vector<RiskReport> reports(num_eval);
  for (std::size_t e = 0; e < num_eval; ++e) reports[e].estimator = evaluations[e].name;

  unsigned workers = config.threads == 0 ? std::max(1u, std::thread::hardware_concurrency()) : config.threads;
  workers = static_cast<unsigned>(std::min<std::uint64_t>(workers, config.trials));

  struct Slot {
    bool ok = false;
    TrialResult result;
  };

  for (std::uint64_t n : config.n_grid) {
    // slots[e * trials + t]
    std::vector<Slot> slots(num_eval * config.trials);
    std::vector<std::exception_ptr> errors(workers);

    auto run = [&](unsigned w) {
      try {
        std::vector<std::uint64_t> counts(truth.size());
        for (std::uint64_t t = w; t < config.trials; t += workers) {
          Rng rng(trial_seed(config.master_seed, n, t));
          std::fill(counts.begin(), counts.end(), 0);
          sampler(n, rng, counts);
          const SampleProfile profile = profile_from_counts(counts, truth);
          for (std::size_t e = 0; e < num_eval; ++e) {
            Slot& slot = slots[e * config.trials + t];
            try {
              slot.result = evaluations[e].evaluate(profile);
              slot.ok = true;
            } catch (const Error&) {
              slot.ok = false;
            }
          }
        }
      } catch (...) {
        errors[w] = std::current_exception();
      }
    };

    if (workers <= 1) {
      run(0);
    } else {
      std::vector<std::thread> pool;
      for (unsigned w = 0; w < workers; ++w) pool.emplace_back(run, w);
      for (auto& th : pool) th.join();
    }
    for (auto& err : errors) {
      if (err) std::rethrow_exception(err);
    }

    for (std::size_t e = 0; e < num_eval; ++e) {
      const Evaluation& eval = evaluations[e];
      std::vector<double> losses;
      std::vector<double> extra_sums(eval.extra_names.size(), 0.0);
      std::uint64_t failures = 0;
      for (std::uint64_t t = 0; t < config.trials; ++t) {
        const Slot& slot = slots[e * config.trials + t];
        if (!slot.ok) {
          ++failures;
          continue;
        }
        losses.push_back(slot.result.loss);
        for (std::size_t x = 0; x < extra_sums.size() && x < slot.result.extras.size(); ++x) {
          extra_sums[x] += slot.result.extras[x];
        }
      }
      if (static_cast<double>(failures) > 0.01 * static_cast<double>(config.trials)) {
        std::ostringstream msg;
        msg << eval.name << ": " << failures << " of " << config.trials << " trials failed at n = " << n;
        fail(ErrorCode::kSampling, msg.str());
      }
      const auto stats = mean_stderr(losses);
      RiskPoint point;
      point.n = n;
      point.loss = stats.mean;
      point.std_error = stats.std_error;
      point.trials = losses.size();
      point.failures = failures;
      for (std::size_t x = 0; x < extra_sums.size(); ++x) {
        const double mean = losses.empty() ? 0.0 : extra_sums[x] / static_cast<double>(losses.size());
        point.extra.emplace_back(eval.extra_names[x], mean);
      }
      reports[e].grid.push_back(std::move(point));
    }
  }
  return reports;
}

std::vector<RiskReport> mc_risk(const Distribution& dist, const std::string& name,
                                const DistributionEstimator& estimator, const SimConfig& config) {
  std::vector<Evaluation> evaluations;
  if (config.loss == LossKind::kFullL2) {
    evaluations.push_back({name, [&](const SampleProfile& profile) {
                             return TrialResult{l2_distance_squared(profile.truth(), estimator(profile)), {}};
                           }, {}});
  } else {
    for (std::uint64_t l : config.levels) {
      evaluations.push_back({name + "@l" + std::to_string(l), [&estimator, l](const SampleProfile& profile) {
                               return TrialResult{level_loss(profile, l, estimator(profile)), {}};
                             }, {}});
    }
  }
  return mc_evaluate(dist, iid_sampler(dist), evaluations, config);
}

RegretBreakdown regret_breakdown(const SampleProfile& profile, const PartitionSideInfo& part,
                                 std::uint64_t l, TwoLevelScale scale) {
  const std::size_t phi = profile.phi(l);
  if (phi == 0) fail(ErrorCode::kEmptyLevel, "level " + std::to_string(l) + " is empty");
  const double one = one_level_estimate(profile, l).value;
  const TwoLevelEstimate two = two_level_estimate(profile, part, l, scale);
  const double oracle = oracle_level(profile, l);
  const auto [oracle_low, oracle_high] = oracle_two_level(profile, part, l);
  const double phi_low = static_cast<double>(part.side_phi(profile, Side::kLow, l));
  const double phi_high = static_cast<double>(part.side_phi(profile, Side::kHigh, l));

  RegretBreakdown out;
  if (oracle_low && oracle_high) {
    const double sep = *oracle_low - *oracle_high;
    out.gain = phi_low * phi_high / static_cast<double>(phi) * sep * sep;
  }
  out.one_level_error = static_cast<double>(phi) * (oracle - one) * (oracle - one);
  if (oracle_low) out.two_level_error_low = phi_low * (*oracle_low - two.value_low) * (*oracle_low - two.value_low);
  if (oracle_high) {
    out.two_level_error_high = phi_high * (*oracle_high - two.value_high) * (*oracle_high - two.value_high);
  }
  out.total_regret = level_loss(profile, l, one) - two_level_loss(profile, part, l, two.value_low, two.value_high);
  return out;
}

RegretBreakdown regret_breakdown(const Distribution& dist, const PartitionSideInfo& part,
                                 std::span<const Symbol> samples, std::uint64_t l, TwoLevelScale scale) {
  return regret_breakdown(build_profile(samples, dist.size(), dist), part, l, scale);
}

double level_decomposition_residual(const SampleProfile& profile, std::uint64_t l, double value) {
  const double phi = static_cast<double>(profile.phi(l));
  const double oracle = oracle_level(profile, l);
  const double oracle_error = level_loss(profile, l, oracle);
  const double mass_gap = profile.mass(l) - phi * value;
  return level_loss(profile, l, value) - (oracle_error + mass_gap * mass_gap / phi);
}

double oracle_identity_residual(const SampleProfile& profile, const PartitionSideInfo& part,
                                std::uint64_t l) {
  const double phi = static_cast<double>(profile.phi(l));
  const double oracle = oracle_level(profile, l);
  const auto [low, high] = oracle_two_level(profile, part, l);
  double split = 0.0;
  if (low) split += static_cast<double>(part.side_phi(profile, Side::kLow, l)) * *low;
  if (high) split += static_cast<double>(part.side_phi(profile, Side::kHigh, l)) * *high;
  return phi * oracle - split;
}

}  // namespace sideinfo::sim
