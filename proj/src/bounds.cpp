#include "sideinfo/bounds.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "sideinfo/error.hpp"

namespace sideinfo::bounds {
namespace {

void same_size(const Distribution& p, const Distribution& q, const char* what) {
  if (p.size() != q.size()) fail(ErrorCode::kDimension, std::string(what) + " of distributions with different sizes");
}

void check_common(std::uint64_t n, double delta, const char* bound) {
  if (n < 1) fail(ErrorCode::kRange, std::string(bound) + ": n must be at least 1");
  if (!(delta > 0.0 && delta <= 1.0)) {
    std::ostringstream msg;
    msg << bound << ": delta must lie in (0, 1], got " << delta;
    fail(ErrorCode::kRange, msg.str());
  }
}

void check_center_norm(std::uint64_t d, double center_norm, const char* bound) {
  const double lowest = 1.0 / std::sqrt(static_cast<double>(d));
  if (!(center_norm >= lowest - kSimplexTolerance && center_norm <= 1.0 + kSimplexTolerance)) {
    std::ostringstream msg;
    msg << bound << ": ||pi0|| = " << center_norm << " outside [1/sqrt(d), 1] for d = " << d;
    fail(ErrorCode::kRange, msg.str());
  }
}

constexpr std::size_t kDenseEigenLimit = 2000;

std::vector<double> sqrt_coordinates(const Distribution& p) {
  std::vector<double> out(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) out[i] = std::sqrt(p[i]);
  return out;
}

double weighted_quadratic(const Distribution& w, std::span<const double> g) {
  double s = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) s += w[i] * g[i] * g[i];
  return s;
}

// Householder reflector mapping theta to a multiple of e_pivot. Its columns
// other than `pivot` span the orthogonal complement of theta.
Eigen::MatrixXd complement_basis_matrix(std::span<const double> theta) {
  const auto d = static_cast<Eigen::Index>(theta.size());
  Eigen::Map<const Eigen::VectorXd> t(theta.data(), d);
  Eigen::Index pivot = 0;
  t.cwiseAbs().maxCoeff(&pivot);
  Eigen::VectorXd v = t;
  v(pivot) += t(pivot) >= 0.0 ? 1.0 : -1.0;
  const double vv = v.squaredNorm();
  Eigen::MatrixXd basis(d, d - 1);
  Eigen::Index col = 0;
  for (Eigen::Index k = 0; k < d; ++k) {
    if (k == pivot) continue;
    Eigen::VectorXd e = Eigen::VectorXd::Unit(d, k);
    basis.col(col++) = e - (2.0 * v(k) / vv) * v;
  }
  return basis;
}

// Top eigenvector of P W P with P = I - theta theta^T, by power iteration.
Direction power_direction(const Distribution& center, std::span<const double> theta) {
  const std::size_t d = theta.size();
  auto project = [&](std::vector<double>& x) {
    double dot = 0.0;
    for (std::size_t i = 0; i < d; ++i) dot += x[i] * theta[i];
    for (std::size_t i = 0; i < d; ++i) x[i] -= dot * theta[i];
  };
  auto normalize = [&](std::vector<double>& x) {
    double nrm = 0.0;
    for (double xi : x) nrm += xi * xi;
    nrm = std::sqrt(nrm);
    for (double& xi : x) xi /= nrm;
  };
  std::vector<double> x(d);
  for (std::size_t i = 0; i < d; ++i) x[i] = 1.0 + static_cast<double>(i % 7) * 0.1 + center[i];
  project(x);
  normalize(x);
  double value = weighted_quadratic(center, x);
  for (int iter = 0; iter < 20000; ++iter) {
    for (std::size_t i = 0; i < d; ++i) x[i] *= center[i];
    project(x);
    normalize(x);
    const double next = weighted_quadratic(center, x);
    const bool converged = std::abs(next - value) <= 1e-8 * std::max(next, 1e-300);
    value = next;
    if (converged) break;
  }
  return {std::move(x), value};
}

}  // namespace

double kl(const Distribution& p, const Distribution& q) {
  same_size(p, q, "kl");
  double s = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] == 0.0) continue;
    if (q[i] == 0.0) return std::numeric_limits<double>::infinity();
    s += p[i] * std::log(p[i] / q[i]);
  }
  return std::max(s, 0.0);
}

double tv(const Distribution& p, const Distribution& q) {
  same_size(p, q, "tv");
  double s = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) s += std::abs(p[i] - q[i]);
  return 0.5 * s;
}

double hellinger(const Distribution& p, const Distribution& q) {
  same_size(p, q, "hellinger");
  double s = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double diff = std::sqrt(p[i]) - std::sqrt(q[i]);
    s += diff * diff;
  }
  return std::sqrt(s);
}

Distribution product(const Distribution& p, const Distribution& q) {
  std::vector<double> out;
  out.reserve(p.size() * q.size());
  for (std::size_t i = 0; i < p.size(); ++i) {
    for (std::size_t j = 0; j < q.size(); ++j) out.push_back(p[i] * q[j]);
  }
  return Distribution(std::move(out));
}

const char* bound_name(BoundKind kind) noexcept {
  switch (kind) {
    case BoundKind::kUpperInterpolation: return "ub_interp";
    case BoundKind::kLowerLeCam: return "lb_lecam";
    case BoundKind::kLowerUniform: return "lb_uniform";
    case BoundKind::kLowerGeneral: return "lb_general";
  }
  return "unknown";
}

BoundValue ub_interpolation(std::uint64_t n, std::uint64_t d, double center_norm, double delta) {
  check_common(n, delta, "ub_interp");
  if (d < 1) fail(ErrorCode::kRange, "ub_interp: d must be at least 1");
  check_center_norm(d, center_norm, "ub_interp");
  const double gap = center_norm - delta;
  const double value = std::min(delta * delta, (1.0 - gap * gap) / static_cast<double>(n));
  return {BoundKind::kUpperInterpolation, value, {n, d, delta, center_norm}};
}

BoundValue lb_lecam(std::uint64_t n, double delta) {
  check_common(n, delta, "lb_lecam");
  const double value =
      std::min(delta * delta / 32.0, delta / (100.0 * static_cast<double>(n))) * std::exp(-0.8);
  return {BoundKind::kLowerLeCam, value, {n, std::nullopt, delta, std::nullopt}};
}

BoundValue lb_uniform(std::uint64_t n, std::uint64_t d, double delta) {
  check_common(n, delta, "lb_uniform");
  if (d < 2 || d % 2 != 0) {
    fail(ErrorCode::kRange, "lb_uniform: d must be even (pad odd alphabets with a zero-mass symbol)");
  }
  if (n < d) {
    fail(ErrorCode::kRange, "lb_uniform: needs n >= d (n = " + std::to_string(n) +
                                ", d = " + std::to_string(d) + ")");
  }
  const double value = std::min(delta * delta, 1.0 / static_cast<double>(n)) * std::exp(-2.0) / 8.0;
  const double norm = 1.0 / std::sqrt(static_cast<double>(d));
  return {BoundKind::kLowerUniform, value, {n, d, delta, norm}};
}

BoundValue lb_general(std::uint64_t n, std::uint64_t d, double center_norm, double delta) {
  check_common(n, delta, "lb_general");
  if (d < 2) fail(ErrorCode::kRange, "lb_general: d must be at least 2");
  check_center_norm(d, center_norm, "lb_general");
  const double spread = std::max(0.0, 1.0 - center_norm * center_norm);
  const double value = spread / static_cast<double>(d - 1) *
                       std::min(delta * delta / 12.0, 1.0 / (4.0 * static_cast<double>(n)));
  return {BoundKind::kLowerGeneral, value, {n, d, delta, center_norm}};
}

Rearrangement mass_rearrange(const Distribution& center, double delta) {
  const std::size_t d = center.size();
  if (d < 3) {
    fail(ErrorCode::kConstruction, "mass rearrangement needs d >= 3 (no donor coordinates for d = 2)");
  }
  if (!(delta > 0.0 && delta <= 1.0)) fail(ErrorCode::kRange, "mass rearrangement: delta must lie in (0, 1]");
  const double threshold = delta / std::sqrt(12.0);

  std::vector<Symbol> order(d);
  std::iota(order.begin(), order.end(), Symbol{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](Symbol a, Symbol b) { return center[a] > center[b]; });
  const Symbol i = order[0];
  const Symbol j = order[1];

  std::vector<double> shifted(center.probs().begin(), center.probs().end());
  double needed = 0.0;
  for (Symbol k : {i, j}) {
    if (center[k] < threshold) {
      needed += threshold - center[k];
      shifted[k] = threshold;
    }
  }
  if (needed > 0.0) {
    for (Symbol k : order) {
      if (needed <= 0.0) break;
      double capacity = center[k];
      if (k == i || k == j) capacity = std::max(0.0, center[k] - threshold);
      const double take = std::min(capacity, needed);
      shifted[k] -= take;
      needed -= take;
    }
    if (needed > 1e-15) fail(ErrorCode::kConstruction, "mass rearrangement ran out of donor mass");
  }
  return {Distribution(std::move(shifted)), i, j};
}

double lecam_tau(std::uint64_t n, double delta) {
  check_common(n, delta, "lecam_tau");
  return std::min(delta / std::sqrt(32.0), 0.1 * std::sqrt(delta / static_cast<double>(n)));
}

LeCamPair lecam_pair(const Distribution& center, double delta, std::uint64_t n) {
  auto rearranged = mass_rearrange(center, delta);
  const double tau = lecam_tau(n, delta);
  std::vector<double> plus(rearranged.shifted.probs().begin(), rearranged.shifted.probs().end());
  std::vector<double> minus = plus;
  plus[rearranged.i] += tau;
  plus[rearranged.j] -= tau;
  minus[rearranged.i] -= tau;
  minus[rearranged.j] += tau;
  return {Distribution(std::move(plus)), Distribution(std::move(minus)), tau,
          std::move(rearranged.shifted), rearranged.i, rearranged.j};
}

double assouad_tau(std::uint64_t n, std::uint64_t d, double delta) {
  check_common(n, delta, "assouad_tau");
  if (d < 2) fail(ErrorCode::kRange, "assouad_tau: d must be at least 2");
  return std::sqrt(std::min(delta * delta, 1.0 / static_cast<double>(n)) / (4.0 * static_cast<double>(d)));
}

Distribution assouad_vertex(std::uint64_t d, double tau, std::span<const int> signs) {
  if (d < 2 || d % 2 != 0) fail(ErrorCode::kConstruction, "hypercube vertex needs an even alphabet size");
  if (signs.size() != d / 2) fail(ErrorCode::kConstruction, "sign vector must have length d/2");
  const double inv_d = 1.0 / static_cast<double>(d);
  if (!(tau >= 0.0 && tau <= 0.5 * inv_d)) {
    std::ostringstream msg;
    msg << "hypercube tau = " << tau << " outside [0, 1/(2d)] for d = " << d;
    fail(ErrorCode::kConstruction, msg.str());
  }
  std::vector<double> probs(d);
  for (std::size_t k = 0; k < signs.size(); ++k) {
    if (signs[k] != 1 && signs[k] != -1) fail(ErrorCode::kConstruction, "sign vector entries must be +1 or -1");
    probs[2 * k] = inv_d + tau * signs[k];
    probs[2 * k + 1] = inv_d - tau * signs[k];
  }
  return Distribution(std::move(probs));
}

std::vector<std::vector<double>> orthogonal_complement_basis(const Distribution& center) {
  if (center.size() < 2) fail(ErrorCode::kRange, "complement basis needs d >= 2");
  const auto theta = sqrt_coordinates(center);
  const Eigen::MatrixXd basis = complement_basis_matrix(theta);
  std::vector<std::vector<double>> out(static_cast<std::size_t>(basis.cols()));
  for (Eigen::Index k = 0; k < basis.cols(); ++k) {
    out[static_cast<std::size_t>(k)].assign(basis.col(k).data(), basis.col(k).data() + basis.rows());
  }
  return out;
}

double projected_weight_trace(const Distribution& center,
                              const std::vector<std::vector<double>>& basis) {
  double s = 0.0;
  for (const auto& g : basis) {
    if (g.size() != center.size()) fail(ErrorCode::kDimension, "basis vector size differs from d");
    s += weighted_quadratic(center, g);
  }
  return s;
}

Direction best_direction(const Distribution& center) {
  const std::size_t d = center.size();
  if (d < 2) fail(ErrorCode::kRange, "best_direction needs d >= 2");
  const auto theta = sqrt_coordinates(center);
  if (d > kDenseEigenLimit) return power_direction(center, theta);

  const Eigen::MatrixXd basis = complement_basis_matrix(theta);
  Eigen::Map<const Eigen::VectorXd> w(center.probs().data(), static_cast<Eigen::Index>(d));
  const Eigen::MatrixXd projected = basis.transpose() * w.asDiagonal() * basis;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(projected);
  if (solver.info() != Eigen::Success) fail(ErrorCode::kConstruction, "eigen decomposition failed");
  const Eigen::Index top = projected.rows() - 1;  // eigenvalues ascend
  Eigen::VectorXd g = basis * solver.eigenvectors().col(top);
  g.normalize();
  std::vector<double> out(g.data(), g.data() + g.size());
  const double value = weighted_quadratic(center, out);
  return {std::move(out), value};
}

SqrtPerturbation sqrt_perturbation(const Distribution& center, double tau,
                                   std::optional<std::vector<double>> direction) {
  if (!(tau >= 0.0 && tau <= 1.0)) fail(ErrorCode::kRange, "sqrt perturbation needs 0 <= tau <= 1");
  const std::size_t d = center.size();
  auto theta = sqrt_coordinates(center);
  std::vector<double> g;
  if (direction) {
    g = std::move(*direction);
    if (g.size() != d) fail(ErrorCode::kDimension, "direction size differs from d");
    double dot = 0.0;
    double nrm2 = 0.0;
    for (std::size_t i = 0; i < d; ++i) {
      dot += g[i] * theta[i];
      nrm2 += g[i] * g[i];
    }
    if (std::abs(nrm2 - 1.0) > 1e-10) fail(ErrorCode::kConstruction, "direction is not unit-norm");
    if (std::abs(dot) > 1e-10) fail(ErrorCode::kConstruction, "direction is not orthogonal to sqrt(pi0)");
    // Remove the residual component so the result normalises exactly.
    for (std::size_t i = 0; i < d; ++i) g[i] -= dot * theta[i];
    double fixed = 0.0;
    for (double gi : g) fixed += gi * gi;
    fixed = std::sqrt(fixed);
    for (double& gi : g) gi /= fixed;
  } else {
    g = best_direction(center).vector;
  }
  std::vector<double> shifted(d);
  std::vector<double> probs(d);
  double norm2 = 0.0;
  for (std::size_t i = 0; i < d; ++i) {
    shifted[i] = theta[i] + tau * g[i];
    norm2 += shifted[i] * shifted[i];
  }
  const double scale = 1.0 + tau * tau;
  for (std::size_t i = 0; i < d; ++i) probs[i] = shifted[i] * shifted[i] / scale;
  return {center, std::move(theta), std::move(g), tau, Distribution(std::move(probs)), norm2};
}

}  // namespace sideinfo::bounds
