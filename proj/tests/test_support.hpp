// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <random>
#include <vector>

#include "opineq/opineq.hpp"

namespace testing_support {

using opineq::Complex;
using opineq::ComplexMatrix;

inline ComplexMatrix random_matrix(std::mt19937_64& rng, std::size_t n, bool real_only = false) {
  std::normal_distribution<double> g(0.0, 1.0);
  ComplexMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) m(i, j) = Complex(g(rng), real_only ? 0.0 : g(rng));
  return m;
}

inline ComplexMatrix random_hermitian(std::mt19937_64& rng, std::size_t n) {
  const ComplexMatrix a = random_matrix(rng, n);
  return 0.5 * (a + opineq::adjoint(a));
}

// Determinant by Gaussian elimination with partial pivoting.
inline Complex lu_determinant(ComplexMatrix a) {
  const std::size_t n = a.rows();
  Complex det = 1.0;
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    for (std::size_t r = c + 1; r < n; ++r)
      if (std::abs(a(r, c)) > std::abs(a(p, c))) p = r;
    if (a(p, c) == Complex{}) return {};
    if (p != c) {
      for (std::size_t j = 0; j < n; ++j) std::swap(a(p, j), a(c, j));
      det = -det;
    }
    det *= a(c, c);
    for (std::size_t r = c + 1; r < n; ++r) {
      const Complex f = a(r, c) / a(c, c);
      for (std::size_t j = c; j < n; ++j) a(r, j) -= f * a(c, j);
    }
  }
  return det;
}

inline Complex trace(const ComplexMatrix& a) {
  Complex t{};
  for (std::size_t i = 0; i < a.rows(); ++i) t += a(i, i);
  return t;
}

// Numerical radius of a 2x2 matrix from its elliptical numerical range: foci at
// the eigenvalues, minor axis sqrt(tr(T*T) - |l1|^2 - |l2|^2).
inline double elliptic_radius_2x2(const ComplexMatrix& t, int samples = 200000) {
  const Complex tr = t(0, 0) + t(1, 1);
  const Complex det = t(0, 0) * t(1, 1) - t(0, 1) * t(1, 0);
  const Complex disc = std::sqrt(tr * tr - 4.0 * det);
  const Complex l1 = 0.5 * (tr + disc);
  const Complex l2 = 0.5 * (tr - disc);
  double fro2 = 0.0;
  for (const auto& z : t.entries()) fro2 += std::norm(z);
  const double minor = std::sqrt(std::max(0.0, fro2 - std::norm(l1) - std::norm(l2)));
  const double focal = std::abs(l1 - l2);
  const double major = std::hypot(focal, minor);
  const Complex center = 0.5 * (l1 + l2);
  const Complex dir = focal > 0.0 ? (l1 - l2) / focal : Complex(1.0);
  double best = 0.0;
  for (int k = 0; k < samples; ++k) {
    const double phi = 2.0 * std::numbers::pi * k / samples;
    const Complex z = center + dir * Complex(0.5 * major * std::cos(phi), 0.5 * minor * std::sin(phi));
    best = std::max(best, std::abs(z));
  }
  return best;
}

}  // namespace testing_support
