#include "spinthermal/entanglement.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>

#include "spinthermal/hamiltonians.hpp"
#include "spinthermal/thermal.hpp"

namespace spinthermal {

namespace {

constexpr double kEigenClipFloor = -1e-12;
constexpr double kCornerTolerance = 1e-10;

// (sigma_y x sigma_y): the anti-diagonal (-1, 1, 1, -1) in the pair basis.
const Eigen::Matrix4d& flip_matrix() {
  static const Eigen::Matrix4d f = [] {
    Eigen::Matrix4d m = Eigen::Matrix4d::Zero();
    m(0, 3) = m(3, 0) = -1.0;
    m(1, 2) = m(2, 1) = 1.0;
    return m;
  }();
  return f;
}

Eigen::Vector4d clipped_eigenvalues(const Eigen::Vector4d& values,
                                    const char* what) {
  Eigen::Vector4d out = values;
  for (int i = 0; i < 4; ++i) {
    if (out[i] < kEigenClipFloor) {
      throw ValidationError(std::string(what) +
                            " has an eigenvalue below the clipping floor");
    }
    if (out[i] < 0.0) out[i] = 0.0;
  }
  return out;
}

double log_cosh(double x) {
  const double ax = std::abs(x);
  return ax + std::log1p(std::exp(-2.0 * ax)) - std::numbers::ln2;
}

double log_sinh(double x) {  // x > 0
  return x + std::log1p(-std::exp(-2.0 * x)) - std::numbers::ln2;
}

// Log of the threshold equation's left side, exp(gamma beta J / 2) *
// |sinh(xi beta J)|, minus log of the right side 2 xi. Strictly increasing
// past its single sign change whenever the asymptotic growth rate is
// positive.
double threshold_log_gap(const PairSpec& spec, double xi, double beta) {
  const double a = 0.5 * spec.gamma * spec.J;
  const double b = xi * std::abs(spec.J);
  return a * beta + log_sinh(b * beta) - std::log(2.0 * xi);
}

// Shared bisection: f must be negative at lo and positive at hi.
double bisect(const std::function<double(double)>& f, double lo, double hi) {
  for (int it = 0; it < 200 && (hi - lo) > 1e-12 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    (f(mid) < 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

DensityMatrix4 spin_flip(const DensityMatrix4& rho) {
  const Eigen::Matrix4d& f = flip_matrix();
  return f * rho.conjugate() * f;
}

ConcurrenceResult concurrence(const DensityMatrix4& rho) {
  validate_density_matrix(rho);
  const DensityMatrix4 herm = 0.5 * (rho + rho.adjoint());

  Eigen::SelfAdjointEigenSolver<DensityMatrix4> rho_solver(herm);
  const Eigen::Vector4d mu =
      clipped_eigenvalues(rho_solver.eigenvalues(), "density matrix");

  // Hermitian route, in factored form: with rho = X X^dag the lambdas are
  // the singular values of S = X^T (sy x sy) X, whose squares are the
  // eigenvalues of sqrt(rho) rho~ sqrt(rho) and of rho rho~. Singular
  // values retain full precision for the near-zero lambdas that an
  // eigensolve of the product matrix would square below machine epsilon.
  const Eigen::Matrix4cd factor =
      rho_solver.eigenvectors() * mu.cwiseSqrt().asDiagonal();
  const Eigen::Matrix4cd s = factor.transpose() * flip_matrix() * factor;
  const Eigen::JacobiSVD<Eigen::Matrix4cd> svd(s);

  ConcurrenceResult result;
  for (int i = 0; i < 4; ++i) result.lambdas[i] = svd.singularValues()[i];
  result.concurrence =
      std::clamp(result.lambdas[0] - result.lambdas[1] - result.lambdas[2] -
                     result.lambdas[3],
                 0.0, 1.0);
  return result;
}

ConcurrenceResult concurrence_x_state(const DensityMatrix4& rho) {
  validate_density_matrix(rho);
  if (std::abs(rho(0, 3)) > kCornerTolerance ||
      std::abs(rho(3, 0)) > kCornerTolerance) {
    throw ValidationError(
        "corner coherences are not negligible; use the general concurrence");
  }
  const double u = std::max(0.0, rho(0, 0).real());
  const double v = std::max(0.0, rho(3, 3).real());
  const double w = std::max(0.0, rho(1, 1).real());
  const double wp = std::max(0.0, rho(2, 2).real());
  const double z = std::abs(rho(1, 2));
  const double root_uv = std::sqrt(u * v);
  const double root_w = std::sqrt(w * wp);

  ConcurrenceResult result;
  result.lambdas = {root_w + z, root_uv, root_uv, std::abs(root_w - z)};
  std::sort(result.lambdas.rbegin(), result.lambdas.rend());
  result.concurrence = std::clamp(2.0 * (z - root_uv), 0.0, 1.0);
  return result;
}

double eof(double concurrence) {
  if (!(concurrence >= -1e-12 && concurrence <= 1.0 + 1e-12)) {
    throw ValidationError("concurrence must lie in [0, 1]");
  }
  const double c = std::clamp(concurrence, 0.0, 1.0);
  const double x = 0.5 * (1.0 + std::sqrt(1.0 - c * c));
  if (x >= 1.0) return 0.0;  // x log x -> 0 limit at the boundary
  return -x * std::log2(x) - (1.0 - x) * std::log2(1.0 - x);
}

double analytic_concurrence(const PairSpec& spec, double beta) {
  spec.validate();
  if (spec.J == 0.0) {
    throw std::domain_error(
        "J = 0: the thermal state is diagonal and separable (C = 0), but the "
        "closed form is undefined there");
  }
  if (!std::isfinite(beta) || beta < 0.0) {
    throw ValidationError("beta must be finite and >= 0");
  }
  if (beta == 0.0) return 0.0;

  const double xi = spec.xi();
  const double a = 0.5 * spec.gamma * beta * spec.J;
  const double b = xi * beta * std::abs(spec.J);
  const double c = 0.5 * (spec.h1 + spec.h2) * beta;

  // chi = [(1 / 2 xi) e^a |sinh b| - 1] / [e^a cosh b + cosh c], rescaled
  // by the largest exponent so nothing overflows at large beta.
  const double pair_log = a + log_cosh(b);
  const double m = std::max({pair_log, log_cosh(c), 0.0});
  const double numerator =
      (0.5 / xi) * std::exp(a + log_sinh(b) - m) - std::exp(-m);
  const double denominator =
      std::exp(pair_log - m) + std::exp(log_cosh(c) - m);
  return std::max(0.0, numerator / denominator);
}

ThresholdResult threshold_beta(const PairSpec& spec) {
  spec.validate();
  if (spec.J == 0.0) {
    throw std::domain_error("threshold undefined at J = 0 (always separable)");
  }
  const double xi = spec.xi();
  const double abs_j = std::abs(spec.J);
  // Large-beta growth rate of the left side.
  const double growth = 0.5 * spec.gamma * spec.J + xi * abs_j;

  if (growth <= 0.0) {
    // Left side is bounded by e^{growth beta} / 2 <= 1/2 < 1 <= 2 xi for
    // every beta, so no root exists: the state is separable at all
    // temperatures.
    return {ThresholdResult::Kind::None, 0.0, 0.5 - 2.0 * xi};
  }
  if (growth <= 1e-12) {
    throw IndeterminateThresholdError(
        "asymptotic growth rate is positive but below 1e-12; the root lies "
        "beyond numerical reach");
  }

  auto gap = [&](double beta) { return threshold_log_gap(spec, xi, beta); };
  double hi = 1.0 / abs_j;
  while (gap(hi) < 0.0) {
    hi *= 2.0;
    if (hi * abs_j > 1e6) {
      throw IndeterminateThresholdError(
          "no sign change up to beta |J| = 1e6; the root exists but is out "
          "of the scan range");
    }
  }
  const double beta_c = bisect(gap, 0.0, hi);
  const double residual =
      2.0 * xi * std::expm1(threshold_log_gap(spec, xi, beta_c));
  return {ThresholdResult::Kind::Finite, beta_c, residual};
}

DeltaEThresholdResult threshold_beta_delta_e(double gamma, double delta_h) {
  if (!std::isfinite(gamma) || !std::isfinite(delta_h)) {
    throw ValidationError("gamma and delta_h must be finite");
  }
  const double xi = 0.5 * std::sqrt(1.0 + delta_h * delta_h);
  // exp(3 gamma x / (4 xi)) sinh(3 x / 2) = 2 xi, solved for x.
  auto gap = [&](double x) {
    return 0.75 * gamma * x / xi + log_sinh(1.5 * x) - std::log(2.0 * xi);
  };

  DeltaEThresholdResult out;
  double hi = 1.0;
  bool bracketed = gap(hi) > 0.0;
  while (!bracketed && hi < 1e4) {
    hi *= 2.0;
    bracketed = gap(hi) > 0.0;
  }
  if (bracketed) {
    const double x = bisect(gap, 0.0, hi);
    out.root = {ThresholdResult::Kind::Finite, x,
                2.0 * xi * std::expm1(gap(x))};
  } else {
    out.root = {ThresholdResult::Kind::None, 0.0, gap(hi)};
  }

  // Cross-check against the plain beta solver through the pair spectrum
  // (zero-mean field; J = 1 fixes the scale of the dimensionless product).
  PairSpec pair{1.0, gamma, 0.5 * delta_h, -0.5 * delta_h};
  ThresholdResult beta_root;
  try {
    beta_root = threshold_beta(pair);
  } catch (const IndeterminateThresholdError&) {
    out.consistent = false;
    return out;
  }
  if (beta_root.kind == ThresholdResult::Kind::Finite &&
      out.root.kind == ThresholdResult::Kind::Finite) {
    const EnergyScales scales =
        energy_scales(diagonalize(two_spin_hamiltonian(pair)), 0.0);
    out.beta_c_times_delta_e = beta_root.beta_c * scales.delta_e;
    out.consistent =
        std::abs(out.beta_c_times_delta_e - out.root.beta_c) < 1e-8;
  } else {
    out.consistent = beta_root.kind == out.root.kind;
  }
  return out;
}

}  // namespace spinthermal
