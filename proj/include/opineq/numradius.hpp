// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numbers>
#include <random>
#include <vector>

#include "opineq/core_linalg.hpp"
#include "opineq/periodic_sweep.hpp"

namespace opineq {

/// Certified enclosure [lower, upper] of a maximum over an angle. For a
/// numerical radius, lambda_max(Re(e^{i theta_star} T)) equals `lower`.
struct RadiusEstimate {
  double lower = 0.0;
  double upper = 0.0;
  double theta_star = 0.0;
  std::size_t evaluations = 0;
  bool converged = true;

  double width() const noexcept { return upper - lower; }
  double midpoint() const noexcept { return 0.5 * (lower + upper); }
  bool contains(double x, double slack = 0.0) const noexcept {
    return x >= lower - slack && x <= upper + slack;
  }
};

/// (e^{i theta} T + e^{-i theta} T*) / 2
inline ComplexMatrix rotated_real_part(const ComplexMatrix& t, double theta) {
  require_square(t, "rotated_real_part");
  const std::size_t n = t.rows();
  const Complex e = std::polar(1.0, theta);
  ComplexMatrix h(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) h(i, j) = 0.5 * (e * t(i, j) + std::conj(e * t(j, i)));
  return h;
}

namespace detail {

inline double wrap_angle(double theta) {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  theta = std::fmod(theta, two_pi);
  return theta < 0.0 ? theta + two_pi : theta;
}

// Bound on eigenvalue error of a Jacobi solve on a matrix with Frobenius norm `fro`.
inline double eigen_error_bound(double fro, std::size_t n, const ToleranceConfig& cfg) {
  return (cfg.eig_tol + 64.0 * static_cast<double>(n) * std::numeric_limits<double>::epsilon()) * fro;
}

// ||Re(e^{i theta} T)|| written as cos(theta) R - sin(theta) I, with the sign
// of the winning eigenvalue so the caller can recover the attaining angle.
class RotatedNorm {
public:
  RotatedNorm(const ComplexMatrix& t, const ToleranceConfig& cfg)
      : n_(t.rows()), re_(real_part(t)), im_(imag_part(t)), eig_tol_(cfg.eig_tol), work_(n_ * n_) {}

  // max(lambda_max, -lambda_min); `positive` is true when lambda_max wins.
  double operator()(double theta, bool* positive = nullptr) const {
    const double c = std::cos(theta);
    const double s = std::sin(theta);
    const auto re = re_.entries();
    const auto im = im_.entries();
    for (std::size_t k = 0; k < work_.size(); ++k) work_[k] = c * re[k] - s * im[k];
    detail::eigenvalues_in_place(work_, n_, eig_tol_, ev_);
    double hi = ev_[0];
    double lo = ev_[0];
    for (double x : ev_) {
      hi = std::max(hi, x);
      lo = std::min(lo, x);
    }
    if (positive != nullptr) *positive = hi >= -lo;
    return std::max(hi, -lo);
  }

private:
  std::size_t n_;
  ComplexMatrix re_;
  ComplexMatrix im_;
  double eig_tol_;
  mutable std::vector<Complex> work_;
  mutable std::vector<double> ev_;
};

inline RadiusEstimate hermitian_radius(const ComplexMatrix& t, const ToleranceConfig& cfg) {
  const auto ev = hermitian_eigenvalues(real_part(t), cfg);
  const double hi = ev.front();
  const double lo = ev.back();
  RadiusEstimate r;
  r.lower = std::max(hi, -lo);
  r.upper = r.lower + eigen_error_bound(t.frobenius_norm(), t.rows(), cfg);
  r.theta_star = hi >= -lo ? 0.0 : std::numbers::pi;
  r.evaluations = 1;
  return r;
}

// For normal T the numerical radius is the spectral radius, equal to ||T||.
// Eigenvalues come from the eigenvectors of a generic Hermitian combination
// of Re T and Im T; if that combination is degenerate the attained value may
// fall short, in which case the caller falls back to the sweep.
inline bool try_normal_radius(const ComplexMatrix& t, const ToleranceConfig& cfg, RadiusEstimate& out) {
  const double fro = t.frobenius_norm();
  const ComplexMatrix tt = t * adjoint(t);
  const ComplexMatrix t_t = adjoint(t) * t;
  if ((tt - t_t).frobenius_norm() > cfg.eig_tol * fro * fro) return false;

  const double mix = std::numbers::sqrt2 - 1.0;
  const auto eig = hermitian_eigen(real_part(t) + mix * imag_part(t), cfg);
  const std::size_t n = t.rows();
  Complex best{};
  for (std::size_t k = 0; k < n; ++k) {
    Complex rq{};
    for (std::size_t i = 0; i < n; ++i) {
      Complex ti{};
      for (std::size_t j = 0; j < n; ++j) ti += t(i, j) * eig.eigenvectors(j, k);
      rq += std::conj(eig.eigenvectors(i, k)) * ti;
    }
    if (std::abs(rq) > std::abs(best)) best = rq;
  }
  const double theta = wrap_angle(-std::arg(best));
  const RotatedNorm g(t, cfg);
  bool positive = true;
  const double attained = g(theta, &positive);
  const double err = eigen_error_bound(fro, n, cfg);
  const double upper = std::max(attained, operator_norm(t, cfg)) + err;
  if (!positive || upper - attained > cfg.radius_tol * (1.0 + attained)) return false;

  out.lower = attained;
  out.upper = upper;
  out.theta_star = theta;
  out.evaluations = 3;
  out.converged = true;
  return true;
}

}  // namespace detail

/// Certified enclosure of the numerical radius w(T) = sup_theta ||Re(e^{i theta} T)||.
///
/// g(theta) = ||Re(e^{i theta} T)|| has period pi and is the pointwise maximum
/// of the sinusoids +-Re(e^{i theta} <Tx, x>), so each interval of the sweep is
/// bounded by the sine interpolant of its endpoint values as well as by the
/// Lipschitz ceiling with constant ||T||. Hermitian and normal inputs
/// short-circuit to the spectral radius.
inline RadiusEstimate numerical_radius(const ComplexMatrix& t, const ToleranceConfig& cfg = {},
                                       const SweepOptions& opts = {}) {
  require_square(t, "numerical_radius");
  cfg.validate();
  const double fro = t.frobenius_norm();
  if (fro == 0.0) return {};
  if (hermitian_defect(t) <= cfg.eig_tol * fro) return detail::hermitian_radius(t, cfg);

  RadiusEstimate normal;
  if (detail::try_normal_radius(t, cfg, normal)) return normal;

  const double norm = operator_norm(t, cfg);
  const double lipschitz = norm * (1.0 + 1e-12);
  const double err = detail::eigen_error_bound(fro, t.rows(), cfg);
  const detail::RotatedNorm g(t, cfg);

  auto ceiling = [&](double a, double fa, double b, double fb) {
    return std::min(sinusoid_ceiling(a, fa, b, fb), lipschitz_ceiling(a, fa, b, fb, lipschitz)) + err;
  };
  auto done = [&](double lower, double upper) { return upper - lower <= cfg.radius_tol * (1.0 + lower); };
  const SweepResult sweep = maximize_periodic([&](double th) { return g(th); }, std::numbers::pi, ceiling, done, opts);

  RadiusEstimate r;
  bool positive = true;
  r.lower = g(sweep.arg_max, &positive);
  r.upper = std::min(sweep.upper, norm + err);
  r.lower = std::min(r.lower, r.upper);
  r.theta_star = detail::wrap_angle(positive ? sweep.arg_max : sweep.arg_max + std::numbers::pi);
  r.evaluations = sweep.evaluations + 2;
  r.converged = sweep.converged;
  return r;
}

/// Deterministic lower bound on w(T): the largest |<Tx, x>| over `samples`
/// unit vectors drawn uniformly from the complex unit sphere.
inline double radius_sampling_oracle(const ComplexMatrix& t, std::size_t samples, std::uint64_t seed) {
  require_square(t, "radius_sampling_oracle");
  if (samples == 0) throw Error("radius_sampling_oracle needs at least one sample");
  const std::size_t n = t.rows();
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<Complex> x(n);
  std::vector<Complex> tx(n);
  double best = 0.0;
  for (std::size_t s = 0; s < samples; ++s) {
    double norm2 = 0.0;
    for (auto& xi : x) {
      xi = Complex(normal(rng), normal(rng));
      norm2 += std::norm(xi);
    }
    if (norm2 == 0.0) continue;
    Complex q{};
    for (std::size_t i = 0; i < n; ++i) {
      Complex acc{};
      for (std::size_t j = 0; j < n; ++j) acc += t(i, j) * x[j];
      q += std::conj(x[i]) * acc;
    }
    best = std::max(best, std::abs(q) / norm2);
  }
  return best;
}

}  // namespace opineq
