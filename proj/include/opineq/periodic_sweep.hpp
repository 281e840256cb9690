// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <queue>
#include <utility>
#include <vector>

namespace opineq {

/// Outcome of a certified maximization over one period: the true maximum lies
/// in [lower, upper], and f(arg_max) == lower.
struct SweepResult {
  double lower = 0.0;
  double upper = 0.0;
  double arg_max = 0.0;
  std::size_t evaluations = 0;
  bool converged = false;
};

struct SweepOptions {
  std::size_t initial_grid = 64;
  std::size_t max_evaluations = 20000;
  int polish_iterations = 32;
};

// Interval ceilings. Each returns a value no smaller than the objective on
// [a, b], given the endpoint values fa and fb.

/// Lipschitz (Piyavskii) ceiling for |f'| <= lipschitz.
inline double lipschitz_ceiling(double a, double fa, double b, double fb, double lipschitz) {
  return 0.5 * (fa + fb) + 0.5 * lipschitz * (b - a);
}

/// Ceiling for a pointwise maximum of functions whose second derivative is
/// bounded below by -curvature: linear interpolation plus the parabolic bulge.
inline double curvature_ceiling(double a, double fa, double b, double fb, double curvature) {
  const double h = b - a;
  if (curvature <= 0.0) return std::max(fa, fb);
  const double u = std::clamp(0.5 * h + (fb - fa) / (curvature * h), 0.0, h);
  return fa + (fb - fa) * u / h + 0.5 * curvature * u * (h - u);
}

/// Ceiling for a pointwise maximum of pure sinusoids r*cos(theta + phi).
/// Each such piece satisfies p'' = -p, so on an interval shorter than pi it
/// equals its sine interpolant, whose weights are non-negative; the interpolant
/// of the endpoint maxima therefore dominates every piece.
inline double sinusoid_ceiling(double a, double fa, double b, double fb) {
  const double h = b - a;
  const double sh = std::sin(h);
  // U(a + u) = P cos u + Q sin u on u in [0, h].
  const double p = fa;
  const double q = (fb - fa * std::cos(h)) / sh;
  double peak = std::atan2(q, p);
  if (peak < 0.0) peak += 2.0 * std::numbers::pi;
  if (peak <= h) return std::hypot(p, q);
  return std::max(fa, fb);
}

namespace detail {

struct SweepInterval {
  double a, fa, b, fb, ceiling;
  bool operator<(const SweepInterval& o) const { return ceiling < o.ceiling; }
};

}  // namespace detail

/// Certified global maximization of a periodic function by branch and bound.
///
/// `f` is sampled on a uniform grid over [0, period); the interval with the
/// highest ceiling is bisected until `done(lower, upper)` holds or the
/// evaluation budget is spent. Afterwards the best sample is polished by a
/// golden-section search, which can only raise `lower`.
template <typename Objective, typename Ceiling, typename Done>
SweepResult maximize_periodic(Objective&& f, double period, Ceiling&& ceiling, Done&& done,
                              const SweepOptions& opts = {}) {
  SweepResult res;
  const std::size_t grid = std::max<std::size_t>(opts.initial_grid, 4);
  const double step = period / static_cast<double>(grid);

  std::vector<double> samples(grid);
  for (std::size_t i = 0; i < grid; ++i) samples[i] = f(step * static_cast<double>(i));
  res.evaluations = grid;

  res.lower = samples[0];
  res.arg_max = 0.0;
  for (std::size_t i = 1; i < grid; ++i) {
    if (samples[i] > res.lower) {
      res.lower = samples[i];
      res.arg_max = step * static_cast<double>(i);
    }
  }

  std::priority_queue<detail::SweepInterval> heap;
  for (std::size_t i = 0; i < grid; ++i) {
    const double a = step * static_cast<double>(i);
    const double b = i + 1 == grid ? period : a + step;
    const double fa = samples[i];
    const double fb = samples[(i + 1) % grid];
    heap.push({a, fa, b, fb, ceiling(a, fa, b, fb)});
  }

  auto current_upper = [&] { return heap.empty() ? res.lower : std::max(res.lower, heap.top().ceiling); };

  while (true) {
    // Intervals that cannot beat the incumbent are settled.
    while (!heap.empty() && heap.top().ceiling <= res.lower) heap.pop();
    if (done(res.lower, current_upper())) {
      res.converged = true;
      break;
    }
    if (res.evaluations >= opts.max_evaluations) break;

    const auto top = heap.top();
    heap.pop();
    const double m = 0.5 * (top.a + top.b);
    const double fm = f(m);
    ++res.evaluations;
    if (fm > res.lower) {
      res.lower = fm;
      res.arg_max = m;
    }
    heap.push({top.a, top.fa, m, fm, ceiling(top.a, top.fa, m, fm)});
    heap.push({m, fm, top.b, top.fb, ceiling(m, fm, top.b, top.fb)});
  }
  res.upper = current_upper();

  // Golden-section polish around the incumbent.
  if (opts.polish_iterations > 0) {
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double radius = step;
    if (!heap.empty()) {
      // The finest active interval width is a good neighbourhood size.
      radius = std::min(step, heap.top().b - heap.top().a);
    }
    double lo = res.arg_max - radius;
    double hi = res.arg_max + radius;
    double x1 = hi - inv_phi * (hi - lo);
    double x2 = lo + inv_phi * (hi - lo);
    double f1 = f(x1);
    double f2 = f(x2);
    res.evaluations += 2;
    for (int it = 0; it < opts.polish_iterations; ++it) {
      if (f1 > res.lower) {
        res.lower = f1;
        res.arg_max = x1;
      }
      if (f2 > res.lower) {
        res.lower = f2;
        res.arg_max = x2;
      }
      if (f1 >= f2) {
        hi = x2;
        x2 = x1;
        f2 = f1;
        x1 = hi - inv_phi * (hi - lo);
        f1 = f(x1);
      } else {
        lo = x1;
        x1 = x2;
        f1 = f2;
        x2 = lo + inv_phi * (hi - lo);
        f2 = f(x2);
      }
      ++res.evaluations;
    }
    for (const auto& [x, fx] : {std::pair{x1, f1}, std::pair{x2, f2}}) {
      if (fx > res.lower) {
        res.lower = fx;
        res.arg_max = x;
      }
    }
    res.upper = std::max(res.upper, res.lower);
  }

  res.arg_max = std::fmod(res.arg_max, period);
  if (res.arg_max < 0.0) res.arg_max += period;
  return res;
}

}  // namespace opineq
