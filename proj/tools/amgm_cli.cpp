// amgm: certified bounds for the arithmetic-geometric mean gap.
//
// Subcommands: bounds, holder, sharpness, verify. Reports are JSON envelopes
// on stdout (or --out); diagnostics go to stderr. Exit codes: 0 ok, 1 parse
// or flag failure, 2 violated precondition, 3 internal invariant violation.

#include <unistd.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <iterator>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include <amgm/amgm.hpp>
#include <amgm/io.hpp>

namespace {

std::string read_input(const std::string& path) {
  if (path == "-") {
    std::ostringstream buf;
    buf << std::cin.rdbuf();
    return buf.str();
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) throw amgm::io::ParseError("cannot open input file '" + path + "'");
  return std::string(std::istreambuf_iterator<char>(in),
                     std::istreambuf_iterator<char>());
}

amgm::io::FileFormat pick_format(const std::string& flag,
                                 const std::string& path) {
  if (flag == "json") return amgm::io::FileFormat::Json;
  if (flag == "csv") return amgm::io::FileFormat::Csv;
  // auto: by extension, default JSON
  if (path.size() >= 4 && path.substr(path.size() - 4) == ".csv")
    return amgm::io::FileFormat::Csv;
  return amgm::io::FileFormat::Json;
}

void emit(const std::string& payload, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << payload;
    return;
  }
  std::ofstream out(out_path, std::ios::binary);
  if (!out)
    throw amgm::io::ParseError("cannot open output file '" + out_path + "'");
  out << payload;
}

struct BoundsOptions {
  std::string input = "-";
  std::string method = "theorem";
  std::string format = "auto";
  std::string out;
};

int run_bounds(const BoundsOptions& opt) {
  const auto text = read_input(opt.input);
  const auto problem =
      amgm::io::parse_problem(text, pick_format(opt.format, opt.input));
  const auto& x = problem.data;
  const auto& a = problem.weights;
  const amgm::WeightVector<double> b =
      problem.second_weights
          ? *problem.second_weights
          : amgm::WeightVector<double>::uniform(x.size());

  amgm::BoundReport<double> report;
  if (opt.method == "theorem") {
    report = amgm::theorem_bounds(x, a);
  } else if (opt.method == "cartwright-field") {
    report = amgm::cartwright_field_bounds(x, a);
  } else if (opt.method == "weight-change") {
    report = amgm::weight_change_gap_bounds(x, a, b);
  } else if (opt.method == "variance-comparison") {
    report = amgm::variance_comparison(x, a, b);
  } else if (opt.method == "cross-weight") {
    report = amgm::cross_weight_bounds(x, a, b);
  } else {  // refined-young
    if (x.size() != 2)
      throw amgm::DomainError("refined-young needs exactly 2 data entries");
    report = amgm::refined_young_bounds_oriented(x[0], x[1], a[0]);
  }

  amgm::io::ReportEnvelope env{
      "bounds", amgm::io::content_digest(amgm::io::canonical_input(problem)),
      report};
  emit(amgm::io::serialize(env), opt.out);
  return 0;
}

struct HolderOptions {
  std::string input = "-";
  std::string out;
};

int run_holder(const HolderOptions& opt) {
  const auto text = read_input(opt.input);
  const auto set = amgm::io::parse_function_set_json(text);
  amgm::io::ReportEnvelope env{
      "holder", amgm::io::content_digest(amgm::io::canonical_input(set)),
      amgm::holder_refinement(set)};
  emit(amgm::io::serialize(env), opt.out);
  return 0;
}

struct SharpnessOptions {
  std::size_t n = 0;
  std::vector<double> weights;
  std::string direction = "max";
  std::uint64_t seed = 0;
  int starts = 32;
  int max_iters = 2000;
  double step_tol = 1e-10;
  std::string out;
};

int run_sharpness(const SharpnessOptions& opt) {
  amgm::WeightVector<double> weights =
      opt.weights.empty()
          ? amgm::WeightVector<double>::uniform(opt.n)
          : amgm::WeightVector<double>::normalized(opt.weights);
  amgm::SearchConfig<double> cfg{std::move(weights)};
  cfg.n_starts = opt.starts;
  cfg.max_iters = opt.max_iters;
  cfg.step_tolerance = opt.step_tol;
  cfg.direction = opt.direction == "min" ? amgm::RatioDirection::Minimize
                                         : amgm::RatioDirection::Maximize;
  cfg.seed = opt.seed;

  amgm::io::ReportEnvelope env{
      "sharpness", amgm::io::content_digest(amgm::io::canonical_input(cfg)),
      amgm::search_extremal(cfg)};
  emit(amgm::io::serialize(env), opt.out);
  return 0;
}

struct VerifyOptions {
  std::string input = "-";
  std::string format = "auto";
  std::string out;
};

class CheckPrinter {
 public:
  explicit CheckPrinter(std::ostream& os, bool color)
      : os_(os), color_(color) {}

  void pass(const std::string& name) { line("PASS", "\x1b[32m", name, ""); }
  void skip(const std::string& name, const std::string& why) {
    line("SKIP", "", name, why);
  }
  void fail(const std::string& name, const std::string& why) {
    failed_ = true;
    line("FAIL", "\x1b[31m", name, why);
  }
  bool all_passed() const { return !failed_; }

  // Runs `check` and records its verdict; any library error counts as FAIL.
  template <typename Fn>
  void run(const std::string& name, Fn&& check) {
    try {
      if (check()) {
        pass(name);
      } else {
        fail(name, "inequality violated");
      }
    } catch (const amgm::Error& e) {
      fail(name, e.what());
    }
  }

 private:
  void line(const char* verdict, const char* color, const std::string& name,
            const std::string& why) {
    if (color_ && color[0] != '\0') {
      os_ << color << verdict << "\x1b[0m";
    } else {
      os_ << verdict;
    }
    os_ << "  " << name;
    if (!why.empty()) os_ << " (" << why << ")";
    os_ << "\n";
  }

  std::ostream& os_;
  bool color_;
  bool failed_ = false;
};

bool report_consistent(const amgm::BoundReport<double>& r) {
  const double tol = amgm::kSandwichRelTol * std::max(1.0, r.gap);
  return r.lower - r.gap <= tol && r.gap - r.upper <= tol;
}

int run_verify(const VerifyOptions& opt) {
  const auto text = read_input(opt.input);
  const auto problem =
      amgm::io::parse_problem(text, pick_format(opt.format, opt.input));
  const auto& x = problem.data;
  const auto& a = problem.weights;
  const amgm::WeightVector<double> b =
      problem.second_weights
          ? *problem.second_weights
          : amgm::WeightVector<double>::uniform(x.size());

  std::ostringstream buf;
  const bool to_stdout = opt.out.empty();
  const bool color = to_stdout && isatty(fileno(stdout)) != 0 &&
                     std::getenv("NO_COLOR") == nullptr;
  CheckPrinter checks(buf, color);

  checks.run("am-gm-gap-nonnegative", [&] {
    const double mean = amgm::weighted_mean(x, a);
    return amgm::amgm_gap(x, a) >= -1e-12 * std::max(1.0, mean);
  });
  checks.run("theorem-sandwich",
             [&] { return report_consistent(amgm::theorem_bounds(x, a)); });
  if (x.min() == 0.0) {
    checks.run("zero-coordinate-gap-identity", [&] {
      return amgm::amgm_gap(x, a) == amgm::weighted_mean(x, a);
    });
    checks.skip("cartwright-field-sandwich", "X_min = 0");
  } else {
    checks.skip("zero-coordinate-gap-identity", "X_min > 0");
    checks.run("cartwright-field-sandwich", [&] {
      return report_consistent(amgm::cartwright_field_bounds(x, a));
    });
  }
  checks.run("weight-change-sandwich", [&] {
    return report_consistent(amgm::weight_change_gap_bounds(x, a, b));
  });
  checks.run("variance-comparison-sandwich", [&] {
    return report_consistent(amgm::variance_comparison(x, a, b));
  });
  checks.run("cross-weight-sandwich", [&] {
    return report_consistent(amgm::cross_weight_bounds(x, a, b));
  });
  if (x.size() == 2) {
    checks.run("n2-identity", [&] {
      const auto id = amgm::n2_identity_check(x[0], x[1]);
      return std::abs(id.lhs - id.rhs) <= 1e-14 * std::max(1.0, id.lhs);
    });
  } else {
    checks.skip("n2-identity", "n > 2");
  }
  checks.run("report-homogeneity", [&] {
    std::vector<double> scaled(x.values().begin(), x.values().end());
    for (auto& v : scaled) v *= 2.0;
    const auto r1 = amgm::theorem_bounds(x, a);
    const auto r2 =
        amgm::theorem_bounds(amgm::DataVector<double>(std::move(scaled)), a);
    const double tol = 1e-10;
    auto close = [&](double two_r1, double r2v) {
      return std::abs(two_r1 - r2v) <=
             tol * std::max({1.0, std::abs(two_r1), std::abs(r2v)});
    };
    return close(2 * r1.gap, r2.gap) && close(2 * r1.lower, r2.lower) &&
           close(2 * r1.upper, r2.upper);
  });

  emit(buf.str(), opt.out);
  return checks.all_passed() ? 0 : 3;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"certified bounds for the arithmetic-geometric mean gap"};
  app.set_version_flag("--version", std::string(amgm::kVersion));
  app.require_subcommand(1);

  BoundsOptions bounds_opt;
  auto* bounds = app.add_subcommand(
      "bounds", "two-sided gap estimates from a data/weights file");
  bounds->add_option("input", bounds_opt.input,
                     "problem file (JSON or CSV), '-' for stdin");
  bounds
      ->add_option("--method", bounds_opt.method,
                   "bound family to evaluate")
      ->check(CLI::IsMember({"theorem", "cartwright-field", "weight-change",
                             "variance-comparison", "cross-weight",
                             "refined-young"}));
  bounds->add_option("--format", bounds_opt.format, "input format")
      ->check(CLI::IsMember({"auto", "json", "csv"}));
  bounds->add_option("--out", bounds_opt.out, "write the report here");

  HolderOptions holder_opt;
  auto* holder = app.add_subcommand(
      "holder", "refined Hoelder certificate for a sampled function set");
  holder->add_option("input", holder_opt.input,
                     "function-set JSON file, '-' for stdin");
  holder->add_option("--out", holder_opt.out, "write the report here");

  SharpnessOptions sharp_opt;
  auto* sharpness = app.add_subcommand(
      "sharpness", "search the simplex for extremal gap/variance ratios");
  sharpness->add_option("--n", sharp_opt.n, "dimension (equal weights)")
      ->check(CLI::Range(std::size_t{2}, std::size_t{4096}));
  sharpness->add_option("--weights", sharp_opt.weights,
                        "explicit weights (rescaled to sum to 1)")
      ->delimiter(',');
  sharpness
      ->add_option("--direction", sharp_opt.direction, "ratio direction")
      ->check(CLI::IsMember({"max", "min"}));
  sharpness->add_option("--seed", sharp_opt.seed, "PRNG seed");
  sharpness->add_option("--starts", sharp_opt.starts, "number of starts")
      ->check(CLI::PositiveNumber);
  sharpness->add_option("--max-iters", sharp_opt.max_iters,
                        "sweep budget per start")
      ->check(CLI::PositiveNumber);
  sharpness->add_option("--step-tol", sharp_opt.step_tol,
                        "line-search convergence tolerance")
      ->check(CLI::PositiveNumber);
  sharpness->add_option("--out", sharp_opt.out, "write the report here");

  VerifyOptions verify_opt;
  auto* verify = app.add_subcommand(
      "verify", "check every applicable inequality on user data");
  verify->add_option("input", verify_opt.input,
                     "problem file (JSON or CSV), '-' for stdin");
  verify->add_option("--format", verify_opt.format, "input format")
      ->check(CLI::IsMember({"auto", "json", "csv"}));
  verify->add_option("--out", verify_opt.out, "write the text report here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (bounds->parsed()) return run_bounds(bounds_opt);
    if (holder->parsed()) return run_holder(holder_opt);
    if (sharpness->parsed()) {
      if (sharp_opt.n == 0 && sharp_opt.weights.empty()) {
        std::cerr << "sharpness needs --n or --weights\n";
        return 1;
      }
      if (sharp_opt.n != 0 && !sharp_opt.weights.empty()) {
        std::cerr << "pass either --n or --weights, not both\n";
        return 1;
      }
      return run_sharpness(sharp_opt);
    }
    if (verify->parsed()) return run_verify(verify_opt);
  } catch (const amgm::io::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const amgm::InternalError& e) {
    std::cerr << "internal invariant violation: " << e.what() << "\n";
    return 3;
  } catch (const amgm::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
