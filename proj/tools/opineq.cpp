// SPDX-License-Identifier: Apache-2.0
// Command-line front end: certified radii, bound evaluation and the verification suites.

#include <cstdlib>
#include <exception>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "opineq/opineq.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kFailed = 1;
constexpr int kUsage = 2;

struct Range {
  std::size_t lo = 0;
  std::size_t hi = 0;
};

Range parse_range(const std::string& text, const char* what) {
  const auto dash = text.find('-');
  try {
    std::size_t used = 0;
    if (dash == std::string::npos) {
      const auto v = std::stoul(text, &used);
      if (used != text.size()) throw std::invalid_argument(text);
      return {v, v};
    }
    const std::string a = text.substr(0, dash);
    const std::string b = text.substr(dash + 1);
    Range r{std::stoul(a, &used), 0};
    if (used != a.size()) throw std::invalid_argument(text);
    r.hi = std::stoul(b, &used);
    if (used != b.size()) throw std::invalid_argument(text);
    return r;
  } catch (const std::logic_error&) {
    throw opineq::Error(std::string("--") + what + " expects N or A-B, got '" + text + "'");
  }
}

void emit(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text;
  } else {
    opineq::write_text(out_path, text);
  }
}

std::vector<opineq::ComplexMatrix> pick(const std::vector<opineq::NamedMatrix>& mats,
                                        const std::vector<std::string>& names) {
  std::vector<opineq::ComplexMatrix> ops;
  for (const auto& n : names) ops.push_back(opineq::find_matrix(mats, n));
  return ops;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Operator norm, numerical radius and inequality toolkit"};
  app.require_subcommand(1);
  app.fallthrough();

  opineq::ToleranceConfig tol;
  std::string format = "csv";
  std::string out_path;
  app.add_option("--tol-radius", tol.radius_tol, "relative width target for certified radii")->capture_default_str();
  app.add_option("--tol-slack", tol.slack_tol, "normalized slack tolerance for verdicts")->capture_default_str();
  app.add_option("--format", format, "report format")->check(CLI::IsMember({"csv", "md"}))->capture_default_str();
  app.add_option("--out", out_path, "write the report to this path instead of stdout");

  std::string file;
  std::string name;
  auto* radius = app.add_subcommand("radius", "certified numerical radius of one matrix");
  radius->add_option("file", file, "matrix file")->required();
  radius->add_option("name", name, "matrix name")->required();

  std::string bound_name;
  std::vector<std::string> names;
  auto* eval = app.add_subcommand("eval", "evaluate one bound on named operands");
  eval->add_option("bound", bound_name, "bound id, e.g. B5 or BASE-TRI")->required();
  eval->add_option("file", file, "matrix file")->required();
  eval->add_option("names", names, "operand names")->required();

  auto* compare = app.add_subcommand("compare", "evaluate every applicable bound, tightest first");
  compare->add_option("file", file, "matrix file")->required();
  compare->add_option("names", names, "operand names")->required();

  app.add_subcommand("paper-check", "reproduce the registry examples");

  opineq::SuiteConfig suite;
  std::string dims = "2-5";
  std::string tuple = "1-5";
  auto* random = app.add_subcommand("random-suite", "randomized soundness sweep over the catalog");
  random->add_option("--trials", suite.trials)->capture_default_str();
  random->add_option("--seed", suite.seed)->envname("OPINEQ_SEED")->capture_default_str();
  random->add_option("--dims", dims, "dimension range A-B")->capture_default_str();
  random->add_option("--tuple", tuple, "tuple size range A-B")->capture_default_str();
  random->add_option("--threads", suite.threads, "worker threads, 0 for all cores")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  const auto fmt = format == "md" ? opineq::ReportFormat::Markdown : opineq::ReportFormat::Csv;
  try {
    tol.validate();
    if (*radius) {
      const auto mats = opineq::load_matrices(file);
      const auto est = opineq::numerical_radius(opineq::find_matrix(mats, name), tol);
      emit(opineq::radius_table(name, est).render(fmt), out_path);
      return est.converged ? kOk : kFailed;
    }
    if (*eval || *compare) {
      const auto id = opineq::parse_bound_id(bound_name);
      if (*eval && !id) {
        std::cerr << "unknown bound id '" << bound_name << "'\n";
        return kUsage;
      }
      const auto mats = opineq::load_matrices(file);
      const auto ops = pick(mats, names);
      std::vector<opineq::BoundReport> reports;
      if (*eval) {
        if (*id == opineq::BoundId::B12) {
          reports = opineq::singular_value_bounds(ops, tol);
        } else {
          reports.push_back(opineq::evaluate_bound(*id, ops, tol));
        }
      } else {
        reports = opineq::compare_all(ops, tol);
      }
      emit(opineq::bound_table(reports).render(fmt), out_path);
      for (const auto& r : reports)
        if (!r.holds) return kFailed;
      return kOk;
    }
    if (app.got_subcommand("paper-check")) {
      const auto rep = opineq::run_paper_checks(tol);
      emit(opineq::paper_check_table(rep).render(fmt), out_path);
      return rep.all_verified() ? kOk : kFailed;
    }
    if (*random) {
      const Range d = parse_range(dims, "dims");
      const Range t = parse_range(tuple, "tuple");
      suite.dim_min = d.lo;
      suite.dim_max = d.hi;
      suite.tuple_min = t.lo;
      suite.tuple_max = t.hi;
      suite.tolerances = tol;
      const auto rep = opineq::run_random_suite(suite);
      emit(opineq::render_suite(rep, fmt), out_path);
      return rep.clean() ? kOk : kFailed;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  }
  return kUsage;
}
