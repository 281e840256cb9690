// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <initializer_list>
#include <limits>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace opineq {

using Complex = std::complex<double>;

class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Operand shapes do not fit the operation (non-square, mismatched sizes, wrong arity).
class ShapeError : public Error {
public:
  using Error::Error;
};

class NotHermitianError : public Error {
public:
  using Error::Error;
};

/// Raised when an entry is NaN or infinite.
class NonFiniteError : public Error {
public:
  using Error::Error;
};

class ConvergenceError : public Error {
public:
  ConvergenceError(const std::string& what, double residual)
      : Error(what), residual_(residual) {}
  double residual() const noexcept { return residual_; }

private:
  double residual_;
};

struct ToleranceConfig {
  double eig_tol = 1e-12;    // relative Jacobi convergence threshold
  double radius_tol = 1e-8;  // certificate width, scaled by (1 + value)
  double slack_tol = 1e-7;   // absolute, on normalized operands

  void validate() const {
    if (!(eig_tol > 0.0) || !(radius_tol > 0.0) || !(slack_tol > 0.0)) {
      throw Error("tolerances must be strictly positive");
    }
  }
};

/// Dense row-major complex matrix with at least one row and one column.
class ComplexMatrix {
public:
  ComplexMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), data_(rows * cols) {
    check_dims();
  }

  ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<Complex> entries)
      : rows_(rows), cols_(cols), data_(std::move(entries)) {
    check_dims();
    if (data_.size() != rows_ * cols_) {
      throw ShapeError("entry count " + std::to_string(data_.size()) + " does not match " +
                       std::to_string(rows_) + "x" + std::to_string(cols_));
    }
    for (const auto& z : data_) {
      if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
        throw NonFiniteError("matrix entry is not finite");
      }
    }
  }

  ComplexMatrix(std::initializer_list<std::initializer_list<Complex>> rows)
      : rows_(rows.size()), cols_(rows.size() == 0 ? 0 : rows.begin()->size()) {
    check_dims();
    data_.reserve(rows_ * cols_);
    for (const auto& row : rows) {
      if (row.size() != cols_) throw ShapeError("ragged matrix literal");
      data_.insert(data_.end(), row.begin(), row.end());
    }
  }

  static ComplexMatrix zeros(std::size_t rows, std::size_t cols) { return {rows, cols}; }

  static ComplexMatrix identity(std::size_t n) {
    ComplexMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
  }

  static ComplexMatrix diagonal(std::span<const double> values) {
    ComplexMatrix m(values.size(), values.size());
    for (std::size_t i = 0; i < values.size(); ++i) m(i, i) = values[i];
    return m;
  }

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool is_square() const noexcept { return rows_ == cols_; }

  Complex& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const Complex& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  std::span<const Complex> entries() const noexcept { return data_; }

  ComplexMatrix& operator+=(const ComplexMatrix& rhs) {
    require_same_shape(rhs, "+");
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += rhs.data_[k];
    return *this;
  }

  ComplexMatrix& operator-=(const ComplexMatrix& rhs) {
    require_same_shape(rhs, "-");
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= rhs.data_[k];
    return *this;
  }

  ComplexMatrix& operator*=(Complex s) {
    for (auto& z : data_) z *= s;
    return *this;
  }

  double frobenius_norm() const {
    double acc = 0.0;
    for (const auto& z : data_) acc += std::norm(z);
    return std::sqrt(acc);
  }

  double max_abs() const {
    double m = 0.0;
    for (const auto& z : data_) m = std::max(m, std::abs(z));
    return m;
  }

  friend bool operator==(const ComplexMatrix&, const ComplexMatrix&) = default;

private:
  void check_dims() const {
    if (rows_ == 0 || cols_ == 0) throw ShapeError("matrix dimensions must be positive");
  }

  void require_same_shape(const ComplexMatrix& rhs, const char* op) const {
    if (rows_ != rhs.rows_ || cols_ != rhs.cols_) {
      throw ShapeError(std::string("shape mismatch in operator") + op);
    }
  }

  std::size_t rows_;
  std::size_t cols_;
  std::vector<Complex> data_;
};

inline ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b) { return a += b; }
inline ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b) { return a -= b; }
inline ComplexMatrix operator*(Complex s, ComplexMatrix a) { return a *= s; }
inline ComplexMatrix operator*(ComplexMatrix a, Complex s) { return a *= s; }
inline ComplexMatrix operator-(ComplexMatrix a) { return a *= -1.0; }

inline ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.cols() != b.rows()) throw ShapeError("inner dimensions differ in matrix product");
  ComplexMatrix c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const Complex aik = a(i, k);
      if (aik == Complex{}) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) c(i, j) += aik * b(k, j);
    }
  }
  return c;
}

inline void require_square(const ComplexMatrix& a, const char* what) {
  if (!a.is_square()) {
    throw ShapeError(std::string(what) + " requires a square matrix, got " +
                     std::to_string(a.rows()) + "x" + std::to_string(a.cols()));
  }
}

inline ComplexMatrix adjoint(const ComplexMatrix& a) {
  ComplexMatrix r(a.cols(), a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) r(j, i) = std::conj(a(i, j));
  return r;
}

/// A*A
inline ComplexMatrix gram(const ComplexMatrix& a) { return adjoint(a) * a; }

/// (A + A*) / 2
inline ComplexMatrix real_part(const ComplexMatrix& a) {
  require_square(a, "real_part");
  const std::size_t n = a.rows();
  ComplexMatrix r(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) r(i, j) = 0.5 * (a(i, j) + std::conj(a(j, i)));
  return r;
}

/// (A - A*) / (2i)
inline ComplexMatrix imag_part(const ComplexMatrix& a) {
  require_square(a, "imag_part");
  const std::size_t n = a.rows();
  ComplexMatrix r(n, n);
  const Complex half_over_i(0.0, -0.5);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) r(i, j) = half_over_i * (a(i, j) - std::conj(a(j, i)));
  return r;
}

inline double hermitian_defect(const ComplexMatrix& h) {
  double acc = 0.0;
  for (std::size_t i = 0; i < h.rows(); ++i)
    for (std::size_t j = 0; j < h.cols(); ++j) acc += std::norm(h(i, j) - std::conj(h(j, i)));
  return std::sqrt(acc);
}

struct HermitianEigenResult {
  std::vector<double> eigenvalues;  // non-increasing
  ComplexMatrix eigenvectors;       // columns, same order
};

namespace detail {

inline void check_hermitian(const ComplexMatrix& h, const ToleranceConfig& cfg) {
  require_square(h, "hermitian_eigen");
  const double defect = hermitian_defect(h);
  if (defect > cfg.eig_tol * (1.0 + h.frobenius_norm())) {
    throw NotHermitianError("matrix is not Hermitian (||H - H*||_F = " + std::to_string(defect) + ")");
  }
}

constexpr int kMaxJacobiSweeps = 100;

// Cyclic-by-row Jacobi on a Hermitian matrix stored row-major in `a`.
// On return the diagonal of `a` holds the eigenvalues; `v`, when non-null,
// accumulates the rotations (it must start as the identity).
inline void jacobi_sweeps(std::vector<Complex>& a, std::size_t n, std::vector<Complex>* v,
                          double eig_tol) {
  // Symmetrize so rounding in the input cannot leave a non-Hermitian residue.
  for (std::size_t i = 0; i < n; ++i) {
    a[i * n + i] = a[i * n + i].real();
    for (std::size_t j = i + 1; j < n; ++j) {
      const Complex m = 0.5 * (a[i * n + j] + std::conj(a[j * n + i]));
      a[i * n + j] = m;
      a[j * n + i] = std::conj(m);
    }
  }
  double total = 0.0;
  for (const auto& z : a) total += std::norm(z);
  const double target = eig_tol * std::sqrt(total);

  for (int sweep = 0;; ++sweep) {
    double off = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) off += std::norm(a[i * n + j]);
    off = std::sqrt(2.0 * off);
    if (off <= target || off == 0.0) return;
    if (sweep == kMaxJacobiSweeps) {
      throw ConvergenceError("Jacobi eigensolver did not converge in " +
                                 std::to_string(kMaxJacobiSweeps) + " sweeps",
                             off);
    }

    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const Complex apq = a[p * n + q];
        const double mag = std::abs(apq);
        if (mag == 0.0) continue;
        const double app = a[p * n + p].real();
        const double aqq = a[q * n + q].real();
        // Skip entries already below rounding relative to their diagonal.
        if (mag < std::numeric_limits<double>::epsilon() * 1e-2 * (std::abs(app) + std::abs(aqq))) {
          a[p * n + q] = 0.0;
          a[q * n + p] = 0.0;
          continue;
        }
        const Complex phase = apq / mag;
        const double tau = (aqq - app) / (2.0 * mag);
        const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;
        const Complex s_phase = s * phase;
        const Complex s_phase_conj = std::conj(s_phase);

        // A <- A G, G = [[c, s e], [-s conj(e), c]] on columns p, q.
        for (std::size_t k = 0; k < n; ++k) {
          const Complex akp = a[k * n + p];
          const Complex akq = a[k * n + q];
          a[k * n + p] = c * akp - s_phase_conj * akq;
          a[k * n + q] = s_phase * akp + c * akq;
        }
        // A <- G* A on rows p, q.
        for (std::size_t k = 0; k < n; ++k) {
          const Complex apk = a[p * n + k];
          const Complex aqk = a[q * n + k];
          a[p * n + k] = c * apk - s_phase * aqk;
          a[q * n + k] = s_phase_conj * apk + c * aqk;
        }
        a[p * n + q] = 0.0;
        a[q * n + p] = 0.0;
        a[p * n + p] = a[p * n + p].real();
        a[q * n + q] = a[q * n + q].real();

        if (v != nullptr) {
          auto& vv = *v;
          for (std::size_t k = 0; k < n; ++k) {
            const Complex vkp = vv[k * n + p];
            const Complex vkq = vv[k * n + q];
            vv[k * n + p] = c * vkp - s_phase_conj * vkq;
            vv[k * n + q] = s_phase * vkp + c * vkq;
          }
        }
      }
    }
  }
}

/// Eigenvalues of a Hermitian matrix given row-major in `a` (consumed),
/// unsorted. No Hermiticity check.
inline void eigenvalues_in_place(std::vector<Complex>& a, std::size_t n, double eig_tol,
                                 std::vector<double>& out) {
  out.resize(n);
  if (n == 1) {
    out[0] = a[0].real();
    return;
  }
  if (n == 2) {
    const double p = a[0].real();
    const double d = a[3].real();
    const Complex b = 0.5 * (a[1] + std::conj(a[2]));
    const double mid = 0.5 * (p + d);
    const double rad = std::hypot(0.5 * (p - d), std::abs(b));
    out[0] = mid + rad;
    out[1] = mid - rad;
    return;
  }
  jacobi_sweeps(a, n, nullptr, eig_tol);
  for (std::size_t i = 0; i < n; ++i) out[i] = a[i * n + i].real();
}

}  // namespace detail

/// Full eigendecomposition of a Hermitian matrix by cyclic Jacobi rotations.
inline HermitianEigenResult hermitian_eigen(const ComplexMatrix& h, const ToleranceConfig& cfg = {}) {
  detail::check_hermitian(h, cfg);
  const std::size_t n = h.rows();
  std::vector<Complex> a(h.entries().begin(), h.entries().end());
  std::vector<Complex> v(n * n);
  for (std::size_t i = 0; i < n; ++i) v[i * n + i] = 1.0;
  detail::jacobi_sweeps(a, n, &v, cfg.eig_tol);

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
    return a[x * n + x].real() > a[y * n + y].real();
  });

  HermitianEigenResult out{std::vector<double>(n), ComplexMatrix(n, n)};
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t src = order[k];
    out.eigenvalues[k] = a[src * n + src].real();
    for (std::size_t i = 0; i < n; ++i) out.eigenvectors(i, k) = v[i * n + src];
  }
  return out;
}

/// Eigenvalues only, non-increasing. Skips eigenvector accumulation.
inline std::vector<double> hermitian_eigenvalues(const ComplexMatrix& h, const ToleranceConfig& cfg = {}) {
  detail::check_hermitian(h, cfg);
  std::vector<Complex> a(h.entries().begin(), h.entries().end());
  std::vector<double> out;
  detail::eigenvalues_in_place(a, h.rows(), cfg.eig_tol, out);
  std::sort(out.begin(), out.end(), std::greater<>());
  return out;
}

/// Non-increasing singular values, min(rows, cols) of them.
inline std::vector<double> singular_values(const ComplexMatrix& a, const ToleranceConfig& cfg = {}) {
  const ComplexMatrix g = a.rows() < a.cols() ? a * adjoint(a) : gram(a);
  std::vector<double> ev = hermitian_eigenvalues(g, cfg);
  std::vector<double> sv(ev.size());
  std::transform(ev.begin(), ev.end(), sv.begin(), [](double x) { return std::sqrt(std::max(x, 0.0)); });
  return sv;
}

inline double operator_norm(const ComplexMatrix& a, const ToleranceConfig& cfg = {}) {
  return singular_values(a, cfg).front();
}

/// Spectral norm of a Hermitian matrix, max(|lambda_max|, |lambda_min|).
inline double hermitian_norm(const ComplexMatrix& h, const ToleranceConfig& cfg = {}) {
  const auto ev = hermitian_eigenvalues(h, cfg);
  return std::max(std::abs(ev.front()), std::abs(ev.back()));
}

/// |A| = (A*A)^{1/2}. Eigenvalues of A*A within eig_tol of zero on the negative
/// side are clamped; anything more negative is reported as an error.
inline ComplexMatrix abs_operator(const ComplexMatrix& a, const ToleranceConfig& cfg = {}) {
  const ComplexMatrix g = gram(a);
  const auto eig = hermitian_eigen(g, cfg);
  const std::size_t n = g.rows();
  const double scale = std::max(std::abs(eig.eigenvalues.front()), std::abs(eig.eigenvalues.back()));
  std::vector<double> roots(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double lam = eig.eigenvalues[k];
    if (lam < -cfg.eig_tol * scale - std::numeric_limits<double>::min()) {
      throw Error("A*A has a significantly negative eigenvalue " + std::to_string(lam));
    }
    roots[k] = std::sqrt(std::max(lam, 0.0));
  }
  ComplexMatrix r(n, n);
  const auto& v = eig.eigenvectors;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i; j < n; ++j) {
      Complex acc{};
      for (std::size_t k = 0; k < n; ++k) acc += v(i, k) * roots[k] * std::conj(v(j, k));
      r(i, j) = acc;
      r(j, i) = std::conj(acc);
    }
    r(i, i) = r(i, i).real();
  }
  return r;
}

}  // namespace opineq
