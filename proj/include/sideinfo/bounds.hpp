#pragma once

// Minimax risk bounds for estimation inside an l2 ball, the distribution
// families behind the lower bounds, and divergence utilities used to check
// those families numerically.

#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sideinfo/core.hpp"

namespace sideinfo::bounds {

// ---- divergences -----------------------------------------------------------

// KL(p || q) in nats. +infinity when p puts mass where q has none.
double kl(const Distribution& p, const Distribution& q);
double tv(const Distribution& p, const Distribution& q);
// Unsquared Hellinger distance ||sqrt(p) - sqrt(q)||_2.
double hellinger(const Distribution& p, const Distribution& q);

// Distribution of a pair of independent draws, indexed i * d + j.
Distribution product(const Distribution& p, const Distribution& q);

// ---- closed-form bounds ----------------------------------------------------

enum class BoundKind { kUpperInterpolation, kLowerLeCam, kLowerUniform, kLowerGeneral };

const char* bound_name(BoundKind kind) noexcept;

struct BoundParams {
  std::uint64_t n = 0;
  std::optional<std::uint64_t> d;
  double delta = 0.0;
  std::optional<double> center_norm;
};

struct BoundValue {
  BoundKind kind;
  double value = 0.0;
  BoundParams params;
};

// min(Delta^2, (1 - (||pi0|| - Delta)^2) / n). Needs 1/sqrt(d) <= ||pi0|| <= 1.
BoundValue ub_interpolation(std::uint64_t n, std::uint64_t d, double center_norm, double delta);
// min(Delta^2/32, Delta/(100 n)) e^{-4/5}.
BoundValue lb_lecam(std::uint64_t n, double delta);
// Uniform center: min(Delta^2, 1/n) e^{-2} / 8. Needs n >= d and d even.
BoundValue lb_uniform(std::uint64_t n, std::uint64_t d, double delta);
// (1 - ||pi0||^2)/(d - 1) * min(Delta^2/12, 1/(4n)). Needs d >= 2.
BoundValue lb_general(std::uint64_t n, std::uint64_t d, double center_norm, double delta);

// ---- two-point construction around a rearranged center ---------------------

struct Rearrangement {
  Distribution shifted;  // pi0'
  Symbol i = 0;
  Symbol j = 0;
};

// Moves mass onto the two largest coordinates of `center` (ties to the lower
// index) until both reach Delta/sqrt(12), taking it from the largest other
// coordinates. Guarantees ||pi0' - pi0||^2 <= Delta^2 / 2. Needs d >= 3.
Rearrangement mass_rearrange(const Distribution& center, double delta);

struct LeCamPair {
  Distribution plus;
  Distribution minus;
  double tau = 0.0;
  Distribution rearranged;
  Symbol i = 0;
  Symbol j = 0;
};

// tau = min(Delta/sqrt(32), sqrt(Delta/n)/10).
double lecam_tau(std::uint64_t n, double delta);
// pi(+/-) = pi0' +/- tau (e_i - e_j).
LeCamPair lecam_pair(const Distribution& center, double delta, std::uint64_t n);

// ---- hypercube construction around the uniform distribution ----------------

// tau with tau^2 = min(Delta^2, 1/n) / (4 d).
double assouad_tau(std::uint64_t n, std::uint64_t d, double delta);

// (1/d + tau v_1, 1/d - tau v_1, ..., 1/d + tau v_{d/2}, 1/d - tau v_{d/2}).
// Needs d even, |signs| = d/2, entries of signs in {-1, +1}, 0 <= tau <= 1/(2d).
Distribution assouad_vertex(std::uint64_t d, double tau, std::span<const int> signs);

// ---- square-root coordinate perturbation -----------------------------------

struct SqrtPerturbation {
  Distribution base;
  std::vector<double> theta0;     // sqrt(base)
  std::vector<double> direction;  // unit, orthogonal to theta0
  double tau = 0.0;
  Distribution result;            // (theta0 + tau g)^2 / (1 + tau^2)
  double perturbed_norm_squared = 0.0;  // ||theta0 + tau g||^2
};

// Unit vector g orthogonal to sqrt(center) maximising g^T diag(center) g,
// together with the attained value.
struct Direction {
  std::vector<double> vector;
  double value = 0.0;
};

Direction best_direction(const Distribution& center);

// Orthonormal basis (d - 1 vectors) of the complement of sqrt(center).
std::vector<std::vector<double>> orthogonal_complement_basis(const Distribution& center);

// sum_k g_k^T diag(center) g_k over a basis of the complement.
double projected_weight_trace(const Distribution& center,
                              const std::vector<std::vector<double>>& basis);

// Needs 0 <= tau <= 1. The direction defaults to best_direction(center);
// a supplied direction must be unit-norm and orthogonal to sqrt(center)
// within 1e-10.
SqrtPerturbation sqrt_perturbation(const Distribution& center, double tau,
                                   std::optional<std::vector<double>> direction = std::nullopt);

}  // namespace sideinfo::bounds
