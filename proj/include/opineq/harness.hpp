// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <map>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include <json.hpp>

#include "opineq/blockops.hpp"
#include "opineq/bounds.hpp"
#include "opineq/core_linalg.hpp"
#include "opineq/numradius.hpp"

namespace opineq {

// ---------------------------------------------------------------------------
// Matrix files
//
// A JSON object mapping names to {"rows": r, "cols": c, "entries": [[re, im], ...]}
// with the entries flattened row-major.
// ---------------------------------------------------------------------------

class ParseError : public Error {
public:
  using Error::Error;
};

struct NamedMatrix {
  std::string name;
  ComplexMatrix matrix;
};

namespace detail {

inline std::string line_column(std::string_view text, std::size_t byte) {
  std::size_t line = 1;
  std::size_t col = 1;
  for (std::size_t i = 0; i < std::min(byte, text.size()); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return std::to_string(line) + ":" + std::to_string(col);
}

inline ComplexMatrix matrix_from_json(const std::string& key, const nlohmann::ordered_json& node) {
  auto fail = [&](const std::string& why) -> ParseError {
    return ParseError("matrix '" + key + "': " + why);
  };
  if (!node.is_object()) throw fail("expected an object with rows, cols, entries");
  for (const char* field : {"rows", "cols", "entries"}) {
    if (!node.contains(field)) throw fail(std::string("missing field '") + field + "'");
  }
  const auto& rows = node["rows"];
  const auto& cols = node["cols"];
  if (!rows.is_number_unsigned() || !cols.is_number_unsigned() || rows.get<std::size_t>() == 0 ||
      cols.get<std::size_t>() == 0) {
    throw fail("rows and cols must be positive integers");
  }
  const auto& entries = node["entries"];
  if (!entries.is_array()) throw fail("entries must be an array");
  const std::size_t r = rows.get<std::size_t>();
  const std::size_t c = cols.get<std::size_t>();
  if (entries.size() != r * c) {
    throw fail("expected " + std::to_string(r * c) + " entries for " + std::to_string(r) + "x" +
               std::to_string(c) + ", found " + std::to_string(entries.size()));
  }
  std::vector<Complex> values;
  values.reserve(entries.size());
  for (std::size_t k = 0; k < entries.size(); ++k) {
    const auto& e = entries[k];
    if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number()) {
      throw fail("entry " + std::to_string(k) + " must be a [re, im] pair");
    }
    const double re = e[0].get<double>();
    const double im = e[1].get<double>();
    if (!std::isfinite(re) || !std::isfinite(im)) throw fail("entry " + std::to_string(k) + " is not finite");
    values.emplace_back(re, im);
  }
  return ComplexMatrix(r, c, std::move(values));
}

}  // namespace detail

inline std::vector<NamedMatrix> parse_matrices(std::string_view text, const std::string& source = "<input>") {
  nlohmann::ordered_json doc;
  try {
    doc = nlohmann::ordered_json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(source + ":" + detail::line_column(text, e.byte == 0 ? 0 : e.byte - 1) + ": " + e.what());
  }
  if (!doc.is_object()) throw ParseError(source + ": top level must be an object of named matrices");
  std::vector<NamedMatrix> out;
  for (const auto& [key, node] : doc.items()) out.push_back({key, detail::matrix_from_json(key, node)});
  return out;
}

inline std::vector<NamedMatrix> load_matrices(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open matrix file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_matrices(buf.str(), path);
}

/// One matrix per line; numbers use the shortest round-trip representation.
inline std::string dump_matrices(const std::vector<NamedMatrix>& mats) {
  using nlohmann::ordered_json;
  std::string out = "{\n";
  for (std::size_t k = 0; k < mats.size(); ++k) {
    const auto& [name, m] = mats[k];
    out += "  " + ordered_json(name).dump() + ": {\"rows\": " + std::to_string(m.rows()) +
           ", \"cols\": " + std::to_string(m.cols()) + ", \"entries\": [";
    const auto entries = m.entries();
    for (std::size_t i = 0; i < entries.size(); ++i) {
      if (i) out += ", ";
      out += "[" + ordered_json(entries[i].real()).dump() + ", " + ordered_json(entries[i].imag()).dump() + "]";
    }
    out += k + 1 < mats.size() ? "]},\n" : "]}\n";
  }
  return out + "}\n";
}

inline void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write '" + path + "'");
  out << text;
}

inline void save_matrices(const std::vector<NamedMatrix>& mats, const std::string& path) {
  write_text(path, dump_matrices(mats));
}

inline const ComplexMatrix& find_matrix(const std::vector<NamedMatrix>& mats, std::string_view name) {
  for (const auto& nm : mats)
    if (nm.name == name) return nm.matrix;
  throw ParseError("no matrix named '" + std::string(name) + "'");
}

// ---------------------------------------------------------------------------
// Report emitters
// ---------------------------------------------------------------------------

enum class ReportFormat { Csv, Markdown };

inline std::string format_number(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", x);
  return buf;
}

/// Rows of cells with a header; CSV and markdown share the cell text.
struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  std::string render(ReportFormat fmt) const {
    std::string out;
    if (fmt == ReportFormat::Csv) {
      auto line = [&](const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) {
          if (i) out += ',';
          const bool quote = cells[i].find_first_of(",\"") != std::string::npos;
          if (!quote) {
            out += cells[i];
            continue;
          }
          out += '"';
          for (char ch : cells[i]) {
            if (ch == '"') out += '"';
            out += ch;
          }
          out += '"';
        }
        out += '\n';
      };
      line(header);
      for (const auto& r : rows) line(r);
      return out;
    }
    auto line = [&](const std::vector<std::string>& cells) {
      out += '|';
      for (const auto& c : cells) {
        out += ' ';
        for (char ch : c) {
          if (ch == '|') out += '\\';
          out += ch;
        }
        out += " |";
      }
      out += '\n';
    };
    line(header);
    out += '|';
    for (std::size_t i = 0; i < header.size(); ++i) out += "---|";
    out += '\n';
    for (const auto& r : rows) line(r);
    return out;
  }
};

inline std::string report_label(const BoundReport& r) {
  std::string label(to_string(r.bound));
  if (r.index) label += "[j=" + std::to_string(*r.index) + "]";
  return label;
}

inline Table bound_table(const std::vector<BoundReport>& reports) {
  Table t{{"bound_id", "lhs", "rhs", "slack", "holds"}, {}};
  for (const auto& r : reports) {
    t.rows.push_back({report_label(r), format_number(r.lhs), format_number(r.rhs), format_number(r.slack),
                      r.holds ? "true" : "false"});
  }
  return t;
}

inline Table radius_table(const std::string& name, const RadiusEstimate& e) {
  return {{"name", "lower", "upper", "width", "theta_star", "evaluations", "converged"},
          {{name, format_number(e.lower), format_number(e.upper), format_number(e.width()),
            format_number(e.theta_star), std::to_string(e.evaluations), e.converged ? "true" : "false"}}};
}

// ---------------------------------------------------------------------------
// Paper example registry
// ---------------------------------------------------------------------------

enum class ExpectationStatus { Verify, RecomputeFlagged };

/// `quantity` is "<bound>.lhs", "<bound>.rhs" or "<bound>.component.<name>".
struct Expectation {
  std::string quantity;
  double printed;
  double tolerance;
  ExpectationStatus status = ExpectationStatus::Verify;
};

struct PaperExample {
  std::string id;
  std::string description;
  std::vector<NamedMatrix> operands;
  std::vector<Expectation> expectations;
};

inline std::vector<PaperExample> paper_examples() {
  using CM = ComplexMatrix;
  using S = ExpectationStatus;
  return {
      {"rem-2.3",
       "sharpness of the pair bound ||T1+T2||^2 <= w(T1*(T1+T2)) + w(T2*(T1+T2))",
       {{"T1", CM{{3, 3}, {-3, 2}}}, {"T2", CM{{-1, 0}, {-3, -1}}}},
       {{"B5.lhs", 40.0, 1e-9},
        {"B5.rhs", 40.0, 1e-9},
        {"BASE-TRI.rhs", 59.4117, 5e-5},
        {"BASE-2W.rhs", 91.2676, 5e-5}}},
      {"eq-ned-001",
       "real-part bound against w^2(T)",
       {{"T", CM{{-1, 3}, {-3, -2}}}},
       {{"B6.lhs", 4.0, 1e-9}, {"B6.rhs", 5.31843, 5e-6}, {"BASE-EQ11-HI.lhs", 11.3143, 5e-5}}},
      {"eq-ned-01",
       "sharpness of ||T||^2 <= w(Re T T) + w(Im T T)",
       {{"T", CM{{3, 2}, {-2, -3}}}},
       {{"B7.lhs", 25.0, 1e-8}, {"B7.rhs", 25.0, 1e-8}}},
      {"eq-ned-02",
       "block bound against ((||T1|| + ||T2||)/2)^2; the printed right-hand side is recomputed",
       {{"T1", CM{{-2, 0}, {0, 1}}}, {"T2", CM{{-1, 1}, {-2, 2}}}},
       {{"B8.lhs", 5.15604, 5e-6},
        {"BASE-EQ15.rhs", 6.66228, 5e-6},
        {"B8.rhs", 2.25, 5e-3, S::RecomputeFlagged}}},
      {"cor-4-sharp",
       "sharpness of ||T1+T2||^2 <= ||3/2(|T1|^2+|T2|^2) + Re(T1*T2)||",
       {{"T1", CM{{-2, 1}, {0, -2}}}, {"T2", CM{{-2, -1}, {0, 2}}}},
       {{"B10.lhs", 16.0, 1e-8}, {"B10.rhs", 16.0, 1e-8}, {"BASE-TRI.rhs", 26.2462, 5e-5}}},
      {"cor-block-two",
       "block bound via Corollary-4 compared with ((||T1|| + ||T2||)/2)^2",
       {{"T1", CM{{-3, 3}, {1, 0}}}, {"T2", CM{{-1, -3}, {1, 3}}}},
       {{"B11.lhs", 12.0635, 5e-5}, {"B11.rhs", 13.1313, 5e-5}, {"BASE-EQ15.rhs", 19.2498, 5e-5}}},
  };
}

/// All registry matrices, named "<example>:<operand>", in registry order.
inline std::vector<NamedMatrix> paper_matrices() {
  std::vector<NamedMatrix> out;
  for (const auto& ex : paper_examples())
    for (const auto& op : ex.operands) out.push_back({ex.id + ":" + op.name, op.matrix});
  return out;
}

inline double compute_quantity(std::string_view quantity, std::span<const ComplexMatrix> operands,
                               const ToleranceConfig& cfg = {}) {
  const auto dot = quantity.find('.');
  if (dot == std::string_view::npos) throw Error("malformed quantity label '" + std::string(quantity) + "'");
  const auto id = parse_bound_id(quantity.substr(0, dot));
  if (!id) throw Error("unknown bound in quantity label '" + std::string(quantity) + "'");
  const auto field = quantity.substr(dot + 1);
  const BoundReport r = evaluate_bound(*id, operands, cfg);
  if (field == "lhs") return r.lhs;
  if (field == "rhs") return r.rhs;
  if (field == "slack") return r.slack;
  constexpr std::string_view prefix = "component.";
  if (field.starts_with(prefix)) {
    const std::string name(field.substr(prefix.size()));
    const auto it = r.components.find(name);
    if (it != r.components.end()) return it->second;
  }
  throw Error("unknown quantity '" + std::string(quantity) + "'");
}

enum class CheckVerdict { Pass, Fail, Flagged };

inline std::string_view to_string(CheckVerdict v) {
  switch (v) {
    case CheckVerdict::Pass: return "pass";
    case CheckVerdict::Fail: return "FAIL";
    case CheckVerdict::Flagged: return "flagged";
  }
  return "?";
}

struct PaperCheckRow {
  std::string example;
  std::string quantity;
  double computed = 0.0;
  double printed = 0.0;
  double delta = 0.0;
  double tolerance = 0.0;
  ExpectationStatus status = ExpectationStatus::Verify;
  CheckVerdict verdict = CheckVerdict::Pass;
  std::string note;
};

struct PaperCheckReport {
  std::vector<PaperCheckRow> rows;

  bool all_verified() const {
    return std::none_of(rows.begin(), rows.end(), [](const auto& r) { return r.verdict == CheckVerdict::Fail; });
  }

  const PaperCheckRow* find(std::string_view example, std::string_view quantity) const {
    for (const auto& r : rows)
      if (r.example == example && r.quantity == quantity) return &r;
    return nullptr;
  }
};

/// Evaluates every registry expectation. Flagged expectations never fail; they
/// record the recomputed value next to the printed one.
inline PaperCheckReport run_paper_checks(const ToleranceConfig& cfg = {}) {
  PaperCheckReport rep;
  for (const auto& ex : paper_examples()) {
    std::vector<ComplexMatrix> ops;
    for (const auto& op : ex.operands) ops.push_back(op.matrix);
    for (const auto& e : ex.expectations) {
      PaperCheckRow row;
      row.example = ex.id;
      row.quantity = e.quantity;
      row.computed = compute_quantity(e.quantity, ops, cfg);
      row.printed = e.printed;
      row.delta = std::abs(row.computed - row.printed);
      row.tolerance = e.tolerance;
      row.status = e.status;
      if (e.status == ExpectationStatus::Verify) {
        row.verdict = row.delta <= e.tolerance ? CheckVerdict::Pass : CheckVerdict::Fail;
      } else {
        row.verdict = CheckVerdict::Flagged;
        row.note = row.delta <= e.tolerance ? "printed value consistent with recomputation"
                                            : "printed " + format_number(e.printed) +
                                                  " inconsistent with recomputed " + format_number(row.computed);
      }
      rep.rows.push_back(std::move(row));
    }
  }
  return rep;
}

inline Table paper_check_table(const PaperCheckReport& rep) {
  Table t{{"example", "quantity", "computed", "printed", "delta", "tolerance", "status", "verdict", "note"}, {}};
  for (const auto& r : rep.rows) {
    t.rows.push_back({r.example, r.quantity, format_number(r.computed), format_number(r.printed),
                      format_number(r.delta), format_number(r.tolerance),
                      r.status == ExpectationStatus::Verify ? "verify" : "recompute-flagged",
                      std::string(to_string(r.verdict)), r.note});
  }
  return t;
}

// ---------------------------------------------------------------------------
// Randomized soundness suite
// ---------------------------------------------------------------------------

struct SuiteConfig {
  std::size_t trials = 1000;
  std::size_t dim_min = 2;
  std::size_t dim_max = 5;
  std::size_t tuple_min = 1;
  std::size_t tuple_max = 5;
  std::uint64_t seed = 42;
  ToleranceConfig tolerances{};
  unsigned threads = 0;  // 0: hardware concurrency

  void validate() const {
    auto in_range = [](std::size_t lo, std::size_t hi) { return lo >= 1 && lo <= hi && hi <= 8; };
    if (!in_range(dim_min, dim_max)) throw Error("dimension range must satisfy 1 <= min <= max <= 8");
    if (!in_range(tuple_min, tuple_max)) throw Error("tuple range must satisfy 1 <= min <= max <= 8");
    tolerances.validate();
  }
};

/// splitmix64 finalizer; trial k of master seed s uses mix(s + (k + 1) * golden).
inline std::uint64_t trial_seed(std::uint64_t master, std::uint64_t trial) {
  std::uint64_t z = master + (trial + 1) * 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

/// The operand tuple of one trial: size and dimension drawn uniformly from the
/// configured ranges, entries standard complex Gaussian.
inline std::vector<ComplexMatrix> random_operands(const SuiteConfig& cfg, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> tuple(cfg.tuple_min, cfg.tuple_max);
  std::uniform_int_distribution<std::size_t> dim(cfg.dim_min, cfg.dim_max);
  std::normal_distribution<double> normal(0.0, std::sqrt(0.5));
  const std::size_t n = tuple(rng);
  const std::size_t d = dim(rng);
  std::vector<ComplexMatrix> ops;
  for (std::size_t k = 0; k < n; ++k) {
    ComplexMatrix m(d, d);
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = 0; j < d; ++j) m(i, j) = Complex(normal(rng), normal(rng));
    ops.push_back(std::move(m));
  }
  return ops;
}

struct NearMiss {
  std::size_t trial;
  std::uint64_t seed;
  double normalized_slack;
};

struct BoundTally {
  std::size_t evaluated = 0;
  std::size_t violations = 0;
  double worst_slack = std::numeric_limits<double>::infinity();  // normalized
  std::vector<NearMiss> near_misses;                              // first kMaxNearMisses by trial
};

struct TrialError {
  std::size_t trial;
  std::uint64_t seed;
  std::string message;
};

struct SuiteReport {
  static constexpr std::size_t kMaxNearMisses = 10;
  static constexpr double kNearMissSlack = 1e-3;

  SuiteConfig config;
  std::map<BoundId, BoundTally> tallies;  // canonical order by bound id
  std::vector<TrialError> errors;

  std::size_t total_violations() const {
    std::size_t v = 0;
    for (const auto& [id, t] : tallies) v += t.violations;
    return v;
  }
  bool clean() const { return total_violations() == 0 && errors.empty(); }
};

namespace detail {

struct TrialOutcome {
  std::vector<BoundReport> reports;
  std::optional<std::string> error;
};

inline TrialOutcome run_trial(const SuiteConfig& cfg, std::uint64_t seed) {
  TrialOutcome out;
  try {
    const auto ops = random_operands(cfg, seed);
    out.reports = compare_all(ops, cfg.tolerances);
  } catch (const std::exception& e) {
    out.error = e.what();
  }
  return out;
}

}  // namespace detail

/// Runs every applicable catalog bound on `trials` random operand tuples.
/// Trials may run on several threads; the report depends only on the config.
inline SuiteReport run_random_suite(const SuiteConfig& cfg) {
  cfg.validate();
  SuiteReport rep;
  rep.config = cfg;
  for (const auto& f : kBoundCatalog) rep.tallies[f.id];
  if (cfg.trials == 0) return rep;

  std::vector<detail::TrialOutcome> outcomes(cfg.trials);
  unsigned workers = cfg.threads != 0 ? cfg.threads : std::max(1u, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, cfg.trials));
  auto work = [&](unsigned w) {
    for (std::size_t k = w; k < cfg.trials; k += workers) outcomes[k] = detail::run_trial(cfg, trial_seed(cfg.seed, k));
  };
  if (workers <= 1) {
    work(0);
  } else {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work, w);
  }

  for (std::size_t k = 0; k < cfg.trials; ++k) {
    const auto& o = outcomes[k];
    const std::uint64_t seed = trial_seed(cfg.seed, k);
    if (o.error) {
      rep.errors.push_back({k, seed, *o.error});
      continue;
    }
    for (const auto& r : o.reports) {
      auto& t = rep.tallies[r.bound];
      const double ns = r.normalized_slack();
      ++t.evaluated;
      if (!r.holds) ++t.violations;
      t.worst_slack = std::min(t.worst_slack, ns);
      if (ns < SuiteReport::kNearMissSlack && t.near_misses.size() < SuiteReport::kMaxNearMisses) {
        t.near_misses.push_back({k, seed, ns});
      }
    }
  }
  return rep;
}

inline Table suite_table(const SuiteReport& rep) {
  Table t{{"bound_id", "evaluated", "violations", "worst_slack", "near_misses"}, {}};
  for (const auto& [id, tally] : rep.tallies) {
    t.rows.push_back({std::string(to_string(id)), std::to_string(tally.evaluated), std::to_string(tally.violations),
                      tally.evaluated ? format_number(tally.worst_slack) : "n/a",
                      std::to_string(tally.near_misses.size())});
  }
  return t;
}

/// Table plus the near-miss log and any per-trial errors.
inline std::string render_suite(const SuiteReport& rep, ReportFormat fmt) {
  std::string out = suite_table(rep).render(fmt);
  Table misses{{"bound_id", "trial", "seed", "normalized_slack"}, {}};
  for (const auto& [id, tally] : rep.tallies) {
    for (const auto& m : tally.near_misses) {
      misses.rows.push_back({std::string(to_string(id)), std::to_string(m.trial), std::to_string(m.seed),
                             format_number(m.normalized_slack)});
    }
  }
  if (!misses.rows.empty()) out += "\n" + misses.render(fmt);
  if (!rep.errors.empty()) {
    Table errs{{"trial", "seed", "error"}, {}};
    for (const auto& e : rep.errors) errs.rows.push_back({std::to_string(e.trial), std::to_string(e.seed), e.message});
    out += "\n" + errs.render(fmt);
  }
  return out;
}

}  // namespace opineq
