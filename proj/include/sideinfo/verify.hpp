#pragma once

// Numerical self-checks for the identities and constructions the library
// relies on. Each check reports its worst residual against a fixed tolerance.

#include <cstdint>
#include <string>
#include <vector>

namespace sideinfo::verify {

struct CheckResult {
  std::string name;
  std::uint64_t cases = 0;
  double max_residual = 0.0;
  double tolerance = 0.0;
  bool passed = false;
  std::string detail;
};

struct VerifyOptions {
  std::uint64_t seed = 1;
  // Multiplies the shrinkage weight handed to the interpolation estimator.
  // 1.0 leaves it untouched; other values exist to confirm that the
  // optimality check notices a wrong weight.
  double alpha_fault_factor = 1.0;
};

std::vector<CheckResult> run_all(const VerifyOptions& options);

CheckResult check_empirical_exact_risk(std::uint64_t seed);
CheckResult check_interpolation_optimality(std::uint64_t seed, double alpha_fault_factor);
CheckResult check_regret_identity(std::uint64_t seed);
CheckResult check_level_decomposition(std::uint64_t seed);
CheckResult check_oracle_identity(std::uint64_t seed);
CheckResult check_good_turing_implied_mass(std::uint64_t seed);
CheckResult check_trace_identity(std::uint64_t seed);
CheckResult check_best_direction(std::uint64_t seed);
CheckResult check_lecam_construction(std::uint64_t seed);
CheckResult check_assouad_construction();
CheckResult check_sqrt_perturbation(std::uint64_t seed);
CheckResult check_bound_ordering();

std::string to_csv(const std::vector<CheckResult>& results);

}  // namespace sideinfo::verify
