#include "sideinfo/verify.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "sideinfo/bounds.hpp"
#include "sideinfo/error.hpp"
#include "sideinfo/estimators.hpp"
#include "sideinfo/io.hpp"
#include "sideinfo/rng.hpp"
#include "sideinfo/sim.hpp"

namespace sideinfo::verify {
namespace {

std::uint64_t between(Rng& rng, std::uint64_t lo, std::uint64_t hi) { return lo + rng.below(hi - lo + 1); }

double between(Rng& rng, double lo, double hi) { return lo + (hi - lo) * rng.uniform(); }

Distribution random_simplex_point(Rng& rng, std::size_t d) {
  std::vector<double> w(d);
  for (auto& x : w) x = rng.exponential();
  return Distribution::normalized(std::move(w));
}

PartitionSideInfo random_partition(Rng& rng, std::size_t d) {
  std::vector<bool> low(d);
  for (;;) {
    std::size_t count = 0;
    for (std::size_t i = 0; i < d; ++i) {
      low[i] = (rng.next() >> 63) != 0;
      count += low[i] ? 1 : 0;
    }
    if (count > 0 && count < d) return PartitionSideInfo::from_membership(low);
  }
}

// A profile with truth and one level l < n with phi_l >= 1.
struct LevelCase {
  SampleProfile profile;
  PartitionSideInfo part;
  std::uint64_t level;
};

LevelCase random_level_case(Rng& rng) {
  const std::size_t d = between(rng, std::uint64_t{4}, std::uint64_t{30});
  const std::uint64_t n = between(rng, std::uint64_t{5}, std::uint64_t{60});
  Distribution dist = random_simplex_point(rng, d);
  AliasTable table(dist.probs());
  const auto samples = sim::sample_iid(table, n, rng);
  SampleProfile profile = build_profile(samples, d, dist);
  std::vector<std::uint64_t> levels;
  for (std::uint64_t l = 0; l <= profile.max_level() && l < n; ++l) {
    if (profile.phi(l) > 0) levels.push_back(l);
  }
  const std::uint64_t level = levels[rng.below(levels.size())];
  PartitionSideInfo part = random_partition(rng, d);
  return {std::move(profile), std::move(part), level};
}

CheckResult finish(std::string name, std::uint64_t cases, double residual, double tolerance,
                   std::string detail = {}) {
  CheckResult r;
  r.name = std::move(name);
  r.cases = cases;
  r.max_residual = residual;
  r.tolerance = tolerance;
  r.passed = std::isfinite(residual) && residual <= tolerance;
  r.detail = std::move(detail);
  return r;
}

}  // namespace

CheckResult check_empirical_exact_risk(std::uint64_t seed) {
  Rng rng(seed);
  double worst = 0.0;
  std::uint64_t cases = 0;
  for (int k = 0; k < 40; ++k) {
    const std::size_t d = between(rng, std::uint64_t{2}, std::uint64_t{sim::kExactMaxAlphabet});
    const Distribution dist = random_simplex_point(rng, d);
    for (std::uint64_t n = 1; n <= 6; ++n) {
      const double exact = sim::exact_risk(dist, [](const SampleProfile& p) { return empirical(p); }, n);
      const double closed = (1.0 - dist.norm_squared()) / static_cast<double>(n);
      worst = std::max(worst, std::abs(exact - closed));
      ++cases;
    }
  }
  return finish("empirical_exact_risk", cases, worst, 1e-12);
}

CheckResult check_interpolation_optimality(std::uint64_t seed, double alpha_fault_factor) {
  Rng rng(seed);
  double worst = 0.0;
  std::uint64_t cases = 0;
  while (cases < 200) {
    const std::size_t d = between(rng, std::uint64_t{3}, std::uint64_t{20});
    const std::uint64_t n = between(rng, std::uint64_t{20}, std::uint64_t{1000});
    const double delta = between(rng, 0.1, 0.5);
    const Distribution center = random_simplex_point(rng, d);
    const BallSideInfo info(center, delta);
    AliasTable table(center.probs());
    const SampleProfile profile = build_profile(sim::sample_iid(table, n, rng), d, center);

    std::optional<double> alpha;
    if (alpha_fault_factor != 1.0) {
      alpha = std::clamp(alpha_fault_factor * optimal_interpolation_weight(n, center.norm(), delta), 0.0, 1.0);
    }
    const Distribution estimate = interpolation(profile, info, alpha);
    const Distribution emp = empirical(profile);

    // Read the weight back off the estimate at the coordinate where the
    // empirical and the center differ most.
    Symbol k = 0;
    for (Symbol i = 1; i < d; ++i) {
      if (std::abs(emp[i] - center[i]) > std::abs(emp[k] - center[k])) k = i;
    }
    const double gap = emp[k] - center[k];
    if (std::abs(gap) < 1e-6) continue;
    const double used = (estimate[k] - center[k]) / gap;

    const double shift = center.norm() - delta;
    const double c = (1.0 - shift * shift) / static_cast<double>(n);
    auto proxy = [&](double a) { return a * a * c + (1.0 - a) * (1.0 - a) * delta * delta; };
    double grid_min = proxy(0.0);
    for (int g = 1; g <= 100; ++g) grid_min = std::min(grid_min, proxy(g / 100.0));
    worst = std::max(worst, std::max(0.0, proxy(used) - grid_min) / grid_min);
    ++cases;
  }
  return finish("interpolation_optimality", cases, worst, 1e-9,
                "relative excess of the used weight's risk proxy over a 0.01 grid search");
}

CheckResult check_regret_identity(std::uint64_t seed) {
  Rng rng(seed);
  double worst = 0.0;
  for (int k = 0; k < 1000; ++k) {
    const LevelCase c = random_level_case(rng);
    worst = std::max(worst, std::abs(sim::regret_breakdown(c.profile, c.part, c.level).residual()));
  }
  return finish("regret_identity", 1000, worst, 1e-10);
}

CheckResult check_level_decomposition(std::uint64_t seed) {
  Rng rng(seed);
  double worst = 0.0;
  for (int k = 0; k < 1000; ++k) {
    const LevelCase c = random_level_case(rng);
    const double value = one_level_estimate(c.profile, c.level).value;
    worst = std::max(worst, std::abs(sim::level_decomposition_residual(c.profile, c.level, value)));
  }
  return finish("level_decomposition", 1000, worst, 1e-12);
}

CheckResult check_oracle_identity(std::uint64_t seed) {
  Rng rng(seed);
  double worst = 0.0;
  for (int k = 0; k < 1000; ++k) {
    const LevelCase c = random_level_case(rng);
    worst = std::max(worst, std::abs(sim::oracle_identity_residual(c.profile, c.part, c.level)));
  }
  return finish("oracle_identity", 1000, worst, 1e-12);
}

CheckResult check_good_turing_implied_mass(std::uint64_t seed) {
  Rng rng(seed);
  double worst = 0.0;
  for (int k = 0; k < 1000; ++k) {
    const LevelCase c = random_level_case(rng);
    const NaturalLevelEstimate e = one_level_estimate(c.profile, c.level);
    worst = std::max(worst, std::abs(e.implied_mass - good_turing_mass(c.profile, c.level)));
  }
  return finish("good_turing_implied_mass", 1000, worst, 1e-14);
}

CheckResult check_trace_identity(std::uint64_t seed) {
  Rng rng(seed);
  double worst = 0.0;
  for (int k = 0; k < 100; ++k) {
    const Distribution center = random_simplex_point(rng, between(rng, std::uint64_t{2}, std::uint64_t{50}));
    const double trace = bounds::projected_weight_trace(center, bounds::orthogonal_complement_basis(center));
    worst = std::max(worst, std::abs(trace - (1.0 - center.norm_squared())));
  }
  return finish("trace_identity", 100, worst, 1e-10);
}

CheckResult check_best_direction(std::uint64_t seed) {
  Rng rng(seed);
  double worst = 0.0;
  for (int k = 0; k < 100; ++k) {
    const std::size_t d = between(rng, std::uint64_t{2}, std::uint64_t{50});
    const Distribution center = random_simplex_point(rng, d);
    const bounds::Direction dir = bounds::best_direction(center);
    double norm2 = 0.0;
    double dot = 0.0;
    for (std::size_t i = 0; i < d; ++i) {
      norm2 += dir.vector[i] * dir.vector[i];
      dot += dir.vector[i] * std::sqrt(center[i]);
    }
    const double average = (1.0 - center.norm_squared()) / static_cast<double>(d - 1);
    worst = std::max({worst, average - dir.value, std::abs(norm2 - 1.0), std::abs(dot)});
  }
  return finish("best_direction", 100, worst, 1e-10,
                "unit, orthogonal to sqrt(center), value at least the complement average");
}

CheckResult check_lecam_construction(std::uint64_t seed) {
  Rng rng(seed);
  double worst = 0.0;
  for (int k = 0; k < 200; ++k) {
    const std::size_t d = between(rng, std::uint64_t{3}, std::uint64_t{20});
    const Distribution center = random_simplex_point(rng, d);
    const double delta = between(rng, 0.01, 1.0);
    const std::uint64_t n = between(rng, std::uint64_t{1}, std::uint64_t{10000});
    const bounds::LeCamPair pair = bounds::lecam_pair(center, delta, n);
    const double t2 = pair.tau * pair.tau;
    const double out_plus = std::sqrt(l2_distance_squared(pair.plus, center)) - delta;
    const double out_minus = std::sqrt(l2_distance_squared(pair.minus, center)) - delta;
    const double sep = std::abs(l2_distance_squared(pair.plus, pair.minus) - 8.0 * t2);
    const double kl_excess = bounds::kl(pair.plus, pair.minus) - 80.0 * t2 / delta;
    worst = std::max({worst, out_plus, out_minus, sep, kl_excess});
  }
  return finish("lecam_construction", 200, worst, 1e-10, "ball membership, separation 8 tau^2, KL <= 80 tau^2 / Delta");
}

CheckResult check_assouad_construction() {
  const std::uint64_t d = 6;
  const Distribution center = Distribution::uniform(d);
  double worst = 0.0;
  std::uint64_t cases = 0;
  for (std::uint64_t n : {6u, 50u, 1000u}) {
    for (double delta : {0.01, 0.1, 0.5}) {
      const double tau = bounds::assouad_tau(n, d, delta);
      std::vector<Distribution> vertices;
      for (int mask = 0; mask < 8; ++mask) {
        std::vector<int> signs(3);
        for (int b = 0; b < 3; ++b) signs[b] = (mask >> b) & 1 ? 1 : -1;
        vertices.push_back(bounds::assouad_vertex(d, tau, signs));
        worst = std::max(worst, std::sqrt(l2_distance_squared(vertices.back(), center)) - delta);
      }
      for (int a = 0; a < 8; ++a) {
        for (int b = 0; b < 3; ++b) {
          const int c = a ^ (1 << b);
          const double kl = bounds::kl(vertices[a], vertices[c]);
          worst = std::max({worst, kl - 8.0 * d * tau * tau,
                            std::abs(l2_distance_squared(vertices[a], vertices[c]) - 8.0 * tau * tau)});
          ++cases;
        }
      }
    }
  }
  return finish("assouad_construction", cases, worst, 1e-12, "d = 6; ball membership and neighbour KL <= 8 d tau^2");
}

CheckResult check_sqrt_perturbation(std::uint64_t seed) {
  Rng rng(seed);
  double worst = 0.0;
  for (int k = 0; k < 200; ++k) {
    const Distribution center = random_simplex_point(rng, between(rng, std::uint64_t{2}, std::uint64_t{30}));
    const double tau = rng.uniform();
    const bounds::SqrtPerturbation p = bounds::sqrt_perturbation(center, tau);
    worst = std::max({worst, l2_distance_squared(p.result, center) - 12.0 * tau * tau,
                      std::abs(p.perturbed_norm_squared - (1.0 + tau * tau))});
  }
  return finish("sqrt_perturbation", 200, worst, 1e-12, "distance <= 12 tau^2 and ||theta||^2 = 1 + tau^2");
}

CheckResult check_bound_ordering() {
  double worst = 0.0;
  std::uint64_t cases = 0;
  std::uint64_t violations = 0;
  for (std::uint64_t n : {1u, 3u, 10u, 30u, 100u, 1000u, 10000u, 100000u}) {
    for (std::uint64_t d : {2u, 4u, 10u, 100u, 1000u}) {
      const double uniform_norm = 1.0 / std::sqrt(static_cast<double>(d));
      for (double norm : {uniform_norm, 0.5 * (uniform_norm + 1.0), 1.0}) {
        for (double delta : {1e-3, 0.01, 0.05, 0.1, 0.3, 0.5, 1.0}) {
          const double ub = bounds::ub_interpolation(n, d, norm, delta).value;
          std::vector<double> lower{bounds::lb_lecam(n, delta).value,
                                    bounds::lb_general(n, d, norm, delta).value};
          if (norm == uniform_norm && d % 2 == 0 && n >= d) lower.push_back(bounds::lb_uniform(n, d, delta).value);
          for (double lb : lower) {
            if (lb > ub) ++violations;
            worst = std::max(worst, lb - ub);
          }
          ++cases;
        }
      }
    }
  }
  return finish("bound_ordering", cases, worst, 0.0, std::to_string(violations) + " violations");
}

std::vector<CheckResult> run_all(const VerifyOptions& options) {
  const std::uint64_t s = options.seed;
  return {check_empirical_exact_risk(trial_seed(s, 0, 1)),
          check_interpolation_optimality(trial_seed(s, 0, 2), options.alpha_fault_factor),
          check_regret_identity(trial_seed(s, 0, 3)),
          check_level_decomposition(trial_seed(s, 0, 4)),
          check_oracle_identity(trial_seed(s, 0, 5)),
          check_good_turing_implied_mass(trial_seed(s, 0, 6)),
          check_trace_identity(trial_seed(s, 0, 7)),
          check_best_direction(trial_seed(s, 0, 8)),
          check_lecam_construction(trial_seed(s, 0, 9)),
          check_assouad_construction(),
          check_sqrt_perturbation(trial_seed(s, 0, 10)),
          check_bound_ordering()};
}

std::string to_csv(const std::vector<CheckResult>& results) {
  std::ostringstream out;
  out << "# schema: sideinfo-verify/1\n";
  out << "check,cases,max_residual,tolerance,status\n";
  for (const auto& r : results) {
    out << r.name << ',' << r.cases << ',' << io::format_double(r.max_residual) << ','
        << io::format_double(r.tolerance) << ',' << (r.passed ? "pass" : "fail") << '\n';
  }
  return out.str();
}

}  // namespace sideinfo::verify
