// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "opineq/blockops.hpp"
#include "opineq/core_linalg.hpp"
#include "opineq/numradius.hpp"

namespace opineq {

enum class BoundId {
  B1,
  B2,
  B3,
  B4,
  B5,
  B6,
  B7,
  B8,
  B9,
  B10,
  B10b,
  B11,
  B11b,
  B12,
  BaseTri,
  Base2W,
  BaseEq11Lower,
  BaseEq11Upper,
  BaseEq12Lower,
  BaseEq12Upper,
  BaseEq15,
};

/// How many operands a bound consumes. Single-operand bounds act on the sum
/// of the operands; pair bounds need exactly two.
enum class Arity { Single, Pair, NTuple };

struct BoundFormula {
  BoundId id;
  std::string_view name;
  Arity arity;
  bool baseline;
  std::string_view statement;
};

// Notation: S = T1 + ... + Tn, Q = sum Tk*Tk, w = numerical radius,
// Blk(A, B) = [[O, A], [B*, O]], all sums over k = 1..n.
inline constexpr std::array<BoundFormula, 21> kBoundCatalog{{
    {BoundId::B1, "B1", Arity::NTuple, false, "||S||^2 <= ||Q|| + w(S*S - Q)"},
    {BoundId::B2, "B2", Arity::Pair, false, "||T1+T2||^2 <= ||T1*T1 + T2*T2|| + 2||Re(T1*T2)||"},
    {BoundId::B3, "B3", Arity::Single, false, "||T||^2 <= 1/2 ||TT* + T*T|| + 2||Im(Re T Im T)||"},
    {BoundId::B4, "B4", Arity::NTuple, false, "||S||^2 <= sum_j w(Tj* S)"},
    {BoundId::B5, "B5", Arity::Pair, false, "||T1+T2||^2 <= w(T1*(T1+T2)) + w(T2*(T1+T2))"},
    {BoundId::B6, "B6", Arity::Single, false, "||Re T||^2 <= 1/2 (w(T* Re T) + w(T Re T))"},
    {BoundId::B7, "B7", Arity::Single, false, "||T||^2 <= w(Re T T) + w(Im T T)"},
    {BoundId::B8, "B8", Arity::Pair, false,
     "w^2(Blk(T1,T2)) <= 1/2 (w([[O,T1*T1],[T2*T1,O]]) + w([[O,T2*T2],[T1*T2,O]]))"},
    {BoundId::B9, "B9", Arity::NTuple, false, "||S||^2 <= ||Q + 1/2((n-2)Q + S*S)||"},
    {BoundId::B10, "B10", Arity::Pair, false, "||T1+T2||^2 <= ||3/2(|T1|^2+|T2|^2) + Re(T1*T2)||"},
    {BoundId::B10b, "B10b", Arity::Pair, false, "||T1+T2||^2 <= w(3/2(|T1|^2+|T2|^2) + T1*T2)"},
    {BoundId::B11, "B11", Arity::Pair, false,
     "w^2(Blk(T1,T2)) <= 1/2 w([[O,3/2(|T1|^2+|T2|^2)],[T2*T1,O]])"},
    {BoundId::B11b, "B11b", Arity::Single, false, "w^2(T) <= 1/2 w([[O,3/2(|T|^2+|T*|^2)],[T^2,O]])"},
    {BoundId::B12, "B12", Arity::NTuple, false, "s_j^2(S) <= s_j(Q + 1/2((n-2)Q + S*S)) for every j"},
    {BoundId::BaseTri, "BASE-TRI", Arity::NTuple, true, "||S||^2 <= (sum ||Tk||)^2"},
    {BoundId::Base2W, "BASE-2W", Arity::Single, true, "||T||^2 <= (2 w(T))^2"},
    {BoundId::BaseEq11Lower, "BASE-EQ11-LO", Arity::Single, true, "||T||^2 / 4 <= w^2(T)"},
    {BoundId::BaseEq11Upper, "BASE-EQ11-HI", Arity::Single, true, "w^2(T) <= ||T||^2"},
    {BoundId::BaseEq12Lower, "BASE-EQ12-LO", Arity::Single, true, "1/4 || |T|^2 + |T*|^2 || <= w^2(T)"},
    {BoundId::BaseEq12Upper, "BASE-EQ12-HI", Arity::Single, true, "w^2(T) <= 1/2 || |T|^2 + |T*|^2 ||"},
    {BoundId::BaseEq15, "BASE-EQ15", Arity::Pair, true, "w^2(Blk(T1,T2)) <= ((||T1|| + ||T2||)/2)^2"},
}};

inline const BoundFormula& formula(BoundId id) {
  for (const auto& f : kBoundCatalog)
    if (f.id == id) return f;
  throw Error("unknown bound id");
}

inline std::string_view to_string(BoundId id) { return formula(id).name; }

inline std::optional<BoundId> parse_bound_id(std::string_view name) {
  for (const auto& f : kBoundCatalog)
    if (f.name == name) return f.id;
  return std::nullopt;
}

/// One inequality evaluated on one operand tuple. lhs, rhs and components are
/// in the caller's units; `scale` is the factor (||S||^2 or a fallback) by
/// which they were divided before the verdict, so holds <=> slack >= -slack_tol * scale.
struct BoundReport {
  BoundId bound = BoundId::B1;
  double lhs = 0.0;
  double rhs = 0.0;
  double slack = 0.0;
  bool holds = true;
  double scale = 1.0;
  std::optional<std::size_t> index;  // singular value index j (1-based), B12 rows only
  std::map<std::string, double> components;

  double normalized_slack() const { return slack / scale; }
};

namespace detail {

// Shared, lazily computed quantities for one operand tuple, normalized so
// ||S|| = 1 (or max ||Tk|| = 1 when S = 0).
class OperandContext {
public:
  OperandContext(std::span<const ComplexMatrix> operands, const ToleranceConfig& cfg) : cfg_(cfg) {
    cfg.validate();
    if (operands.empty()) throw ShapeError("at least one operand is required");
    const std::size_t d = operands.front().rows();
    for (const auto& t : operands) {
      require_square(t, "bound evaluation");
      if (t.rows() != d) throw ShapeError("all operands must have the same dimension");
    }
    ComplexMatrix raw_sum = operands.front();
    for (std::size_t k = 1; k < operands.size(); ++k) raw_sum += operands[k];
    double norm = operator_norm(raw_sum, cfg);
    if (norm == 0.0) {
      for (const auto& t : operands) norm = std::max(norm, operator_norm(t, cfg));
    }
    unit_ = norm > 0.0 ? norm : 1.0;
    ops_.reserve(operands.size());
    for (const auto& t : operands) ops_.push_back((1.0 / unit_) * t);
    sum_.emplace(ops_.front());
    for (std::size_t k = 1; k < ops_.size(); ++k) *sum_ += ops_[k];
  }

  const ToleranceConfig& cfg() const { return cfg_; }
  std::size_t count() const { return ops_.size(); }
  std::size_t dim() const { return ops_.front().rows(); }
  const ComplexMatrix& op(std::size_t k) const { return ops_[k]; }
  const ComplexMatrix& sum() const { return *sum_; }
  double unit() const { return unit_; }

  /// Q = sum Tk* Tk
  const ComplexMatrix& gram_sum() const {
    if (!gram_sum_) {
      gram_sum_.emplace(gram(ops_.front()));
      for (std::size_t k = 1; k < ops_.size(); ++k) *gram_sum_ += gram(ops_[k]);
    }
    return *gram_sum_;
  }

  /// S* S
  const ComplexMatrix& sum_gram() const {
    if (!sum_gram_) sum_gram_.emplace(gram(sum()));
    return *sum_gram_;
  }

  /// ||S||^2 as lambda_max(S*S).
  double sum_norm_sq() const {
    if (!sum_norm_sq_) sum_norm_sq_ = std::max(hermitian_eigenvalues(sum_gram(), cfg_).front(), 0.0);
    return *sum_norm_sq_;
  }

  const RadiusEstimate& sum_radius() const {
    if (!sum_radius_) sum_radius_ = numerical_radius(sum(), cfg_);
    return *sum_radius_;
  }

  const RadiusEstimate& block_radius() const {
    if (!block_radius_) block_radius_ = numerical_radius(offdiag_block(ops_[0], ops_[1]), cfg_);
    return *block_radius_;
  }

  double op_norm(std::size_t k) const {
    if (op_norms_.empty()) {
      for (const auto& t : ops_) op_norms_.push_back(operator_norm(t, cfg_));
    }
    return op_norms_[k];
  }

  /// Q + 1/2((n-2) Q + S* S)
  const ComplexMatrix& tuple_matrix() const {
    if (!tuple_matrix_) {
      const double n = static_cast<double>(count());
      tuple_matrix_.emplace(gram_sum() + 0.5 * ((n - 2.0) * gram_sum() + sum_gram()));
    }
    return *tuple_matrix_;
  }

  /// Radii on the larger side of an inequality use the lower end of the
  /// enclosure, on the smaller side the upper end.
  double radius_rhs(const ComplexMatrix& t) const { return numerical_radius(t, cfg_).lower; }

private:
  ToleranceConfig cfg_;
  double unit_ = 1.0;
  std::vector<ComplexMatrix> ops_;
  std::optional<ComplexMatrix> sum_;
  mutable std::optional<ComplexMatrix> gram_sum_;
  mutable std::optional<ComplexMatrix> sum_gram_;
  mutable std::optional<ComplexMatrix> tuple_matrix_;
  mutable std::optional<double> sum_norm_sq_;
  mutable std::optional<RadiusEstimate> sum_radius_;
  mutable std::optional<RadiusEstimate> block_radius_;
  mutable std::vector<double> op_norms_;
};

// Normalized evaluation; components carry their homogeneity degree so they
// can be rescaled with the operands.
struct RawEvaluation {
  double lhs = 0.0;
  double rhs = 0.0;
  std::vector<std::pair<std::string, std::pair<double, int>>> components;

  void add(std::string name, double value, int degree = 2) {
    components.emplace_back(std::move(name), std::pair{value, degree});
  }
};

inline void require_arity(const BoundFormula& f, std::size_t n) {
  if (f.arity == Arity::Pair && n != 2) {
    throw ShapeError(std::string(f.name) + " takes exactly two operands, got " + std::to_string(n));
  }
}

inline std::string index_label(const char* fmt, std::size_t k) {
  std::string out(fmt);
  const auto pos = out.find('#');
  out.replace(pos, 1, std::to_string(k + 1));
  return out;
}

inline RawEvaluation evaluate_raw(BoundId id, const OperandContext& ctx) {
  const auto& cfg = ctx.cfg();
  RawEvaluation ev;
  const ComplexMatrix& s = ctx.sum();

  switch (id) {
    case BoundId::B1: {
      const double q_norm = hermitian_norm(ctx.gram_sum(), cfg);
      const double cross = ctx.radius_rhs(ctx.sum_gram() - ctx.gram_sum());
      ev.lhs = ctx.sum_norm_sq();
      ev.rhs = q_norm + cross;
      ev.add("||sum Tk*Tk||", q_norm);
      ev.add("w(S*S - sum Tk*Tk)", cross);
      break;
    }
    case BoundId::B2: {
      const auto& t1 = ctx.op(0);
      const auto& t2 = ctx.op(1);
      const double g = hermitian_norm(gram(t1) + gram(t2), cfg);
      const double re = hermitian_norm(real_part(adjoint(t1) * t2), cfg);
      ev.lhs = ctx.sum_norm_sq();
      ev.rhs = g + 2.0 * re;
      ev.add("||T1*T1 + T2*T2||", g);
      ev.add("||Re(T1*T2)||", re);
      break;
    }
    case BoundId::B3: {
      const ComplexMatrix re = real_part(s);
      const ComplexMatrix im = imag_part(s);
      const double sym = hermitian_norm(s * adjoint(s) + adjoint(s) * s, cfg);
      const double cross = hermitian_norm(imag_part(re * im), cfg);
      ev.lhs = ctx.sum_norm_sq();
      ev.rhs = 0.5 * sym + 2.0 * cross;
      ev.add("||TT* + T*T||", sym);
      ev.add("||Im(Re T Im T)||", cross);
      break;
    }
    case BoundId::B4:
    case BoundId::B5: {
      ev.lhs = ctx.sum_norm_sq();
      for (std::size_t j = 0; j < ctx.count(); ++j) {
        const double w = ctx.radius_rhs(adjoint(ctx.op(j)) * s);
        ev.rhs += w;
        ev.add(index_label("w(T#*S)", j), w);
      }
      break;
    }
    case BoundId::B6: {
      const ComplexMatrix re = real_part(s);
      const double w1 = ctx.radius_rhs(adjoint(s) * re);
      const double w2 = ctx.radius_rhs(s * re);
      const double re_norm = hermitian_norm(re, cfg);
      ev.lhs = re_norm * re_norm;
      ev.rhs = 0.5 * (w1 + w2);
      ev.add("w(T* Re T)", w1);
      ev.add("w(T Re T)", w2);
      break;
    }
    case BoundId::B7: {
      const double w1 = ctx.radius_rhs(real_part(s) * s);
      const double w2 = ctx.radius_rhs(imag_part(s) * s);
      ev.lhs = ctx.sum_norm_sq();
      ev.rhs = w1 + w2;
      ev.add("w(Re T T)", w1);
      ev.add("w(Im T T)", w2);
      break;
    }
    case BoundId::B8: {
      const auto& t1 = ctx.op(0);
      const auto& t2 = ctx.op(1);
      const double blk = ctx.block_radius().upper;
      const double w1 = ctx.radius_rhs(offdiag_block(gram(t1), adjoint(t1) * t2));
      const double w2 = ctx.radius_rhs(offdiag_block(gram(t2), adjoint(t2) * t1));
      ev.lhs = blk * blk;
      ev.rhs = 0.5 * (w1 + w2);
      ev.add("w(Blk(T1,T2))", blk, 1);
      ev.add("w([[O,T1*T1],[T2*T1,O]])", w1);
      ev.add("w([[O,T2*T2],[T1*T2,O]])", w2);
      break;
    }
    case BoundId::B9: {
      const double m = hermitian_norm(ctx.tuple_matrix(), cfg);
      ev.lhs = ctx.sum_norm_sq();
      ev.rhs = m;
      ev.add("||Q + 1/2((n-2)Q + S*S)||", m);
      break;
    }
    case BoundId::B10:
    case BoundId::B10b: {
      const auto& t1 = ctx.op(0);
      const auto& t2 = ctx.op(1);
      const ComplexMatrix grams = 1.5 * (gram(t1) + gram(t2));
      ev.lhs = ctx.sum_norm_sq();
      if (id == BoundId::B10) {
        ev.rhs = hermitian_norm(grams + real_part(adjoint(t1) * t2), cfg);
        ev.add("||3/2(|T1|^2+|T2|^2) + Re(T1*T2)||", ev.rhs);
      } else {
        ev.rhs = ctx.radius_rhs(grams + adjoint(t1) * t2);
        ev.add("w(3/2(|T1|^2+|T2|^2) + T1*T2)", ev.rhs);
      }
      break;
    }
    case BoundId::B11: {
      const auto& t1 = ctx.op(0);
      const auto& t2 = ctx.op(1);
      const double blk = ctx.block_radius().upper;
      const double w = ctx.radius_rhs(offdiag_block(1.5 * (gram(t1) + gram(t2)), adjoint(t1) * t2));
      ev.lhs = blk * blk;
      ev.rhs = 0.5 * w;
      ev.add("w(Blk(T1,T2))", blk, 1);
      ev.add("w([[O,3/2(|T1|^2+|T2|^2)],[T2*T1,O]])", w);
      break;
    }
    case BoundId::B11b: {
      const double w_t = ctx.sum_radius().upper;
      const ComplexMatrix p = 1.5 * (gram(s) + s * adjoint(s));
      const double w = ctx.radius_rhs(offdiag_block(p, adjoint(s * s)));
      ev.lhs = w_t * w_t;
      ev.rhs = 0.5 * w;
      ev.add("w(T)", w_t, 1);
      ev.add("w([[O,3/2(|T|^2+|T*|^2)],[T^2,O]])", w);
      break;
    }
    case BoundId::B12:
      throw Error("B12 is evaluated per singular value index");
    case BoundId::BaseTri: {
      double tri = 0.0;
      for (std::size_t k = 0; k < ctx.count(); ++k) {
        tri += ctx.op_norm(k);
        ev.add(index_label("||T#||", k), ctx.op_norm(k), 1);
      }
      ev.lhs = ctx.sum_norm_sq();
      ev.rhs = tri * tri;
      break;
    }
    case BoundId::Base2W: {
      const double w = ctx.sum_radius().lower;
      ev.lhs = ctx.sum_norm_sq();
      ev.rhs = 4.0 * w * w;
      ev.add("w(T)", w, 1);
      break;
    }
    case BoundId::BaseEq11Lower:
    case BoundId::BaseEq11Upper: {
      const double norm_sq = ctx.sum_norm_sq();
      if (id == BoundId::BaseEq11Lower) {
        const double w = ctx.sum_radius().lower;
        ev.lhs = 0.25 * norm_sq;
        ev.rhs = w * w;
        ev.add("w(T)", w, 1);
      } else {
        const double w = ctx.sum_radius().upper;
        ev.lhs = w * w;
        ev.rhs = norm_sq;
        ev.add("w(T)", w, 1);
      }
      ev.add("||T||^2", norm_sq);
      break;
    }
    case BoundId::BaseEq12Lower:
    case BoundId::BaseEq12Upper: {
      const double kit = hermitian_norm(gram(s) + s * adjoint(s), cfg);
      if (id == BoundId::BaseEq12Lower) {
        const double w = ctx.sum_radius().lower;
        ev.lhs = 0.25 * kit;
        ev.rhs = w * w;
        ev.add("w(T)", w, 1);
      } else {
        const double w = ctx.sum_radius().upper;
        ev.lhs = w * w;
        ev.rhs = 0.5 * kit;
        ev.add("w(T)", w, 1);
      }
      ev.add("|| |T|^2 + |T*|^2 ||", kit);
      break;
    }
    case BoundId::BaseEq15: {
      const double blk = ctx.block_radius().upper;
      const double half = 0.5 * (ctx.op_norm(0) + ctx.op_norm(1));
      ev.lhs = blk * blk;
      ev.rhs = half * half;
      ev.add("w(Blk(T1,T2))", blk, 1);
      ev.add("||T1||", ctx.op_norm(0), 1);
      ev.add("||T2||", ctx.op_norm(1), 1);
      break;
    }
  }
  return ev;
}

inline BoundReport finish_report(BoundId id, const RawEvaluation& raw, const OperandContext& ctx) {
  const double unit = ctx.unit();
  const double scale = unit * unit;
  BoundReport r;
  r.bound = id;
  r.lhs = raw.lhs * scale;
  r.rhs = raw.rhs * scale;
  r.slack = r.rhs - r.lhs;
  r.scale = scale;
  r.holds = raw.rhs - raw.lhs >= -ctx.cfg().slack_tol;
  for (const auto& [name, value] : raw.components) {
    r.components[name] = value.first * std::pow(unit, value.second);
  }
  return r;
}

inline std::vector<BoundReport> singular_value_rows(const OperandContext& ctx) {
  const auto& cfg = ctx.cfg();
  const ComplexMatrix& m = ctx.tuple_matrix();
  const auto ev = hermitian_eigenvalues(m, cfg);
  const double m_norm = std::max(std::abs(ev.front()), std::abs(ev.back()));
  if (ev.back() < -1e3 * cfg.eig_tol * (1.0 + m_norm)) {
    throw Error("tuple matrix is not positive semidefinite (lambda_min = " + std::to_string(ev.back()) + ")");
  }
  const auto sum_sv = singular_values(ctx.sum(), cfg);
  const auto m_sv = singular_values(m, cfg);
  std::vector<BoundReport> rows;
  for (std::size_t j = 0; j < sum_sv.size(); ++j) {
    RawEvaluation raw;
    raw.lhs = sum_sv[j] * sum_sv[j];
    raw.rhs = m_sv[j];
    raw.add("s_j(S)", sum_sv[j], 1);
    raw.add("s_j(M)", m_sv[j]);
    auto row = finish_report(BoundId::B12, raw, ctx);
    row.index = j + 1;
    rows.push_back(std::move(row));
  }
  return rows;
}

inline BoundReport evaluate_in_context(BoundId id, const OperandContext& ctx) {
  const auto& f = formula(id);
  require_arity(f, ctx.count());
  if (id == BoundId::B12) {
    auto rows = singular_value_rows(ctx);
    auto worst = std::min_element(rows.begin(), rows.end(), [](const auto& a, const auto& b) {
      return a.normalized_slack() < b.normalized_slack();
    });
    return *worst;
  }
  return finish_report(id, evaluate_raw(id, ctx), ctx);
}

}  // namespace detail

/// Evaluates one catalog inequality. Single-operand bounds are applied to the
/// sum of the operands; B12 reports its tightest singular value index.
inline BoundReport evaluate_bound(BoundId id, std::span<const ComplexMatrix> operands,
                                  const ToleranceConfig& cfg = {}) {
  const detail::OperandContext ctx(operands, cfg);
  return detail::evaluate_in_context(id, ctx);
}

/// s_j^2(S) <= s_j(Q + 1/2((n-2)Q + S*S)), one report per index j.
inline std::vector<BoundReport> singular_value_bounds(std::span<const ComplexMatrix> operands,
                                                      const ToleranceConfig& cfg = {}) {
  const detail::OperandContext ctx(operands, cfg);
  return detail::singular_value_rows(ctx);
}

inline bool applies_to(const BoundFormula& f, std::size_t operand_count) {
  return f.arity != Arity::Pair || operand_count == 2;
}

/// Every applicable bound and baseline, tightest right-hand side first.
inline std::vector<BoundReport> compare_all(std::span<const ComplexMatrix> operands,
                                            const ToleranceConfig& cfg = {}) {
  const detail::OperandContext ctx(operands, cfg);
  std::vector<BoundReport> out;
  for (const auto& f : kBoundCatalog) {
    if (applies_to(f, ctx.count())) out.push_back(detail::evaluate_in_context(f.id, ctx));
  }
  std::stable_sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.rhs < b.rhs; });
  return out;
}

/// max-entry deviation between sum_{k != j} (Tk + Tj)*(Tk + Tj) and
/// 2((n - 2) sum Tk*Tk + S*S).
inline double pairwise_sum_identity_check(std::span<const ComplexMatrix> operands) {
  if (operands.empty()) throw ShapeError("at least one operand is required");
  const std::size_t d = operands.front().rows();
  for (const auto& t : operands) {
    require_square(t, "pairwise_sum_identity_check");
    if (t.rows() != d) throw ShapeError("all operands must have the same dimension");
  }
  const std::size_t n = operands.size();
  ComplexMatrix pairs(d, d);
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t j = 0; j < n; ++j)
      if (k != j) pairs += gram(operands[k] + operands[j]);

  ComplexMatrix q(d, d);
  ComplexMatrix s(d, d);
  for (const auto& t : operands) {
    q += gram(t);
    s += t;
  }
  const ComplexMatrix closed = 2.0 * ((static_cast<double>(n) - 2.0) * q + gram(s));
  return (pairs - closed).max_abs();
}

}  // namespace opineq
