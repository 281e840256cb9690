// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "opineq/core_linalg.hpp"
#include "opineq/numradius.hpp"
#include "opineq/periodic_sweep.hpp"

namespace opineq {

/// The 2n x 2n operator matrix [[O, T1], [T2*, O]].
inline ComplexMatrix offdiag_block(const ComplexMatrix& t1, const ComplexMatrix& t2) {
  require_square(t1, "offdiag_block");
  require_square(t2, "offdiag_block");
  if (t1.rows() != t2.rows()) throw ShapeError("offdiag_block blocks must have the same dimension");
  const std::size_t n = t1.rows();
  ComplexMatrix b(2 * n, 2 * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      b(i, n + j) = t1(i, j);
      b(n + i, j) = std::conj(t2(j, i));
    }
  }
  return b;
}

/// Certified enclosure of sup_theta ||T1 + e^{i theta} T2||.
///
/// The sweep runs on G(theta) = ||T1 + e^{i theta} T2||^2
///   = lambda_max(T1*T1 + T2*T2 + 2 Re(e^{i theta} T1*T2)),
/// a maximum of constants plus sinusoids of amplitude at most 2||T1*T2||, so
/// both |G'| and -G'' are bounded by that amplitude. The Lipschitz ceiling
/// of the unsquared norm (constant ||T2||) is applied as well.
inline RadiusEstimate sup_theta_norm(const ComplexMatrix& t1, const ComplexMatrix& t2,
                                     const ToleranceConfig& cfg = {}, const SweepOptions& opts = {}) {
  if (t1.rows() != t2.rows() || t1.cols() != t2.cols()) {
    throw ShapeError("sup_theta_norm operands must have the same shape");
  }
  cfg.validate();
  const ComplexMatrix base = gram(t1) + gram(t2);
  const ComplexMatrix cross = adjoint(t1) * t2;
  const std::size_t n = base.rows();
  const double cross_norm = cross.max_abs() == 0.0 ? 0.0 : operator_norm(cross, cfg);
  const double amplitude = 2.0 * cross_norm * (1.0 + 1e-12);
  const double t2_norm = operator_norm(t2, cfg) * (1.0 + 1e-12);
  const double err = detail::eigen_error_bound(base.frobenius_norm() + 2.0 * cross.frobenius_norm(), n, cfg);

  std::vector<Complex> work(n * n);
  std::vector<double> ev;
  auto objective = [&](double theta) {
    const Complex e = std::polar(1.0, theta);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        work[i * n + j] = base(i, j) + e * cross(i, j) + std::conj(e * cross(j, i));
    detail::eigenvalues_in_place(work, n, cfg.eig_tol, ev);
    return std::max(*std::max_element(ev.begin(), ev.end()), 0.0);
  };
  auto ceiling = [&](double a, double fa, double b, double fb) {
    const double root = lipschitz_ceiling(a, std::sqrt(fa), b, std::sqrt(fb), t2_norm);
    return std::min(curvature_ceiling(a, fa, b, fb, amplitude), root * root) + err;
  };
  auto done = [&](double lower, double upper) {
    return std::sqrt(upper) - std::sqrt(lower) <= cfg.radius_tol * (1.0 + std::sqrt(lower));
  };

  RadiusEstimate r;
  if (amplitude == 0.0) {
    // No theta dependence.
    const double g = objective(0.0);
    r.lower = std::sqrt(g);
    r.upper = std::sqrt(g + err);
    r.evaluations = 1;
    return r;
  }
  const SweepResult sweep = maximize_periodic(objective, 2.0 * std::numbers::pi, ceiling, done, opts);
  r.lower = std::sqrt(sweep.lower);
  r.upper = std::sqrt(sweep.upper);
  r.theta_star = sweep.arg_max;
  r.evaluations = sweep.evaluations;
  r.converged = sweep.converged;
  return r;
}

struct BlockIdentityReport {
  RadiusEstimate omega_block;  // w([[O, T1], [T2*, O]]) by direct sweep on the 2n x 2n matrix
  RadiusEstimate half_sup;     // (1/2) sup_theta ||T1 + e^{i theta} T2||
  bool agree = false;
};

/// Checks w([[O, T1], [T2*, O]]) = (1/2) sup_theta ||T1 + e^{i theta} T2|| by
/// computing both sides independently; they agree when the enclosures overlap
/// after widening by slack_tol.
inline BlockIdentityReport block_identity_check(const ComplexMatrix& t1, const ComplexMatrix& t2,
                                                const ToleranceConfig& cfg = {}) {
  BlockIdentityReport rep;
  rep.omega_block = numerical_radius(offdiag_block(t1, t2), cfg);
  const RadiusEstimate sup = sup_theta_norm(t1, t2, cfg);
  rep.half_sup = sup;
  rep.half_sup.lower = 0.5 * sup.lower;
  rep.half_sup.upper = 0.5 * sup.upper;
  rep.agree = rep.omega_block.lower - cfg.slack_tol <= rep.half_sup.upper &&
              rep.half_sup.lower - cfg.slack_tol <= rep.omega_block.upper;
  return rep;
}

}  // namespace opineq
