#pragma once

// Ingestion and machine-readable report emission for the CLI. Everything
// here works on doubles; reals are serialized with nlohmann::json's
// shortest round-trip representation, so emit -> parse -> emit is
// byte-identical.

#include <cstdint>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <json.hpp>

#include "amgm/bounds.hpp"
#include "amgm/errors.hpp"
#include "amgm/holder.hpp"
#include "amgm/sharpness.hpp"
#include "amgm/version.hpp"

namespace amgm::io {

using nlohmann::json;

/// The input could not be read as the expected shape at all (bad JSON, bad
/// CSV header, wrong types). Distinct from value-level violations, which
/// surface as the library's own domain/precondition errors.
class ParseError : public Error {
 public:
  using Error::Error;
};

enum class FileFormat { Json, Csv };

/// A parsed problem: data plus weights (equal weights when absent) and an
/// optional second weight vector for the cross-weight methods.
struct ProblemFile {
  FileFormat format;
  DataVector<double> data;
  WeightVector<double> weights;
  std::optional<WeightVector<double>> second_weights;
};

namespace detail {

inline double require_finite_number(const json& j, const char* where) {
  if (!j.is_number())
    throw ParseError(std::string(where) + " entries must be numbers");
  const double v = j.get<double>();
  if (!std::isfinite(v))
    throw ParseError(std::string(where) + " entries must be finite");
  return v;
}

inline std::vector<double> number_array(const json& j, const char* where) {
  if (!j.is_array())
    throw ParseError(std::string(where) + " must be an array of numbers");
  std::vector<double> out;
  out.reserve(j.size());
  for (const auto& e : j) out.push_back(require_finite_number(e, where));
  return out;
}

inline std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, sep)) out.push_back(field);
  return out;
}

inline std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

inline double parse_number(const std::string& field, const char* where) {
  const std::string t = trim(field);
  if (t.empty()) throw ParseError(std::string(where) + ": empty numeric field");
  std::size_t used = 0;
  double v = 0;
  try {
    v = std::stod(t, &used);
  } catch (const std::exception&) {
    throw ParseError(std::string(where) + ": cannot parse '" + t +
                     "' as a number");
  }
  if (used != t.size())
    throw ParseError(std::string(where) + ": trailing characters in '" + t +
                     "'");
  if (!std::isfinite(v))
    throw ParseError(std::string(where) + ": values must be finite");
  return v;
}

}  // namespace detail

/// JSON problem schema: {"data": [...], "weights": [...]?, "weights_b": [...]?}.
inline ProblemFile parse_problem_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ParseError(std::string("invalid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ParseError("problem file must be a JSON object");
  if (!j.contains("data")) throw ParseError("problem file needs a 'data' array");

  DataVector<double> data(detail::number_array(j.at("data"), "data"));
  WeightVector<double> weights =
      j.contains("weights")
          ? WeightVector<double>(detail::number_array(j.at("weights"), "weights"))
          : WeightVector<double>::uniform(data.size());
  std::optional<WeightVector<double>> second;
  if (j.contains("weights_b"))
    second = WeightVector<double>(
        detail::number_array(j.at("weights_b"), "weights_b"));
  return ProblemFile{FileFormat::Json, std::move(data), std::move(weights),
                     std::move(second)};
}

/// CSV problem schema: header "x", "x,alpha" or "x,alpha,beta", one row per
/// index.
inline ProblemFile parse_problem_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw ParseError("empty CSV input");

  auto header = detail::split(detail::trim(line), ',');
  for (auto& h : header) h = detail::trim(h);
  std::size_t columns = 0;
  if (header == std::vector<std::string>{"x"}) {
    columns = 1;
  } else if (header == std::vector<std::string>{"x", "alpha"}) {
    columns = 2;
  } else if (header == std::vector<std::string>{"x", "alpha", "beta"}) {
    columns = 3;
  } else {
    throw ParseError("CSV header must be 'x', 'x,alpha' or 'x,alpha,beta'");
  }

  std::vector<double> xs, alphas, betas;
  while (std::getline(in, line)) {
    const std::string t = detail::trim(line);
    if (t.empty()) continue;
    const auto fields = detail::split(t, ',');
    if (fields.size() != columns)
      throw ParseError("CSV row has " + std::to_string(fields.size()) +
                       " fields, expected " + std::to_string(columns));
    xs.push_back(detail::parse_number(fields[0], "x"));
    if (columns >= 2) alphas.push_back(detail::parse_number(fields[1], "alpha"));
    if (columns >= 3) betas.push_back(detail::parse_number(fields[2], "beta"));
  }

  DataVector<double> data(std::move(xs));
  WeightVector<double> weights =
      columns >= 2 ? WeightVector<double>(std::move(alphas))
                   : WeightVector<double>::uniform(data.size());
  std::optional<WeightVector<double>> second;
  if (columns >= 3) second = WeightVector<double>(std::move(betas));
  return ProblemFile{FileFormat::Csv, std::move(data), std::move(weights),
                     std::move(second)};
}

inline ProblemFile parse_problem(const std::string& text, FileFormat format) {
  return format == FileFormat::Csv ? parse_problem_csv(text)
                                   : parse_problem_json(text);
}

/// Function-set schema:
/// {"masses": [...], "functions": [[...], ...], "exponents": [...]}.
inline SampledFunctionSet<double> parse_function_set_json(
    const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ParseError(std::string("invalid JSON: ") + e.what());
  }
  if (!j.is_object())
    throw ParseError("function-set file must be a JSON object");
  for (const char* key : {"masses", "functions", "exponents"})
    if (!j.contains(key))
      throw ParseError(std::string("function-set file needs '") + key + "'");

  auto masses = detail::number_array(j.at("masses"), "masses");
  auto exponents = detail::number_array(j.at("exponents"), "exponents");
  if (!j.at("functions").is_array())
    throw ParseError("'functions' must be an array of arrays");
  std::vector<std::vector<double>> functions;
  for (const auto& f : j.at("functions"))
    functions.push_back(detail::number_array(f, "functions"));
  return SampledFunctionSet<double>(std::move(masses), std::move(functions),
                                    std::move(exponents));
}

// ---- digests ----

inline std::uint64_t fnv1a64(std::string_view s) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

inline std::string hex64(std::uint64_t v) {
  static const char* digits = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i) {
    out[static_cast<std::size_t>(i)] = digits[v & 0xf];
    v >>= 4;
  }
  return out;
}

/// Content hash of a canonical JSON form of the parsed input.
inline std::string content_digest(const json& canonical) {
  return hex64(fnv1a64(canonical.dump()));
}

inline json canonical_input(const ProblemFile& p) {
  json j;
  j["data"] = std::vector<double>(p.data.values().begin(), p.data.values().end());
  j["weights"] = std::vector<double>(p.weights.values().begin(),
                                     p.weights.values().end());
  if (p.second_weights)
    j["weights_b"] = std::vector<double>(p.second_weights->values().begin(),
                                         p.second_weights->values().end());
  return j;
}

inline json canonical_input(const SampledFunctionSet<double>& s) {
  json j;
  j["masses"] = std::vector<double>(s.masses().begin(), s.masses().end());
  json fs = json::array();
  for (std::size_t i = 0; i < s.function_count(); ++i)
    fs.push_back(
        std::vector<double>(s.function(i).begin(), s.function(i).end()));
  j["functions"] = fs;
  j["exponents"] =
      std::vector<double>(s.exponents().begin(), s.exponents().end());
  return j;
}

inline json canonical_input(const SearchConfig<double>& cfg) {
  json j;
  j["weights"] = std::vector<double>(cfg.weights.values().begin(),
                                     cfg.weights.values().end());
  j["n_starts"] = cfg.n_starts;
  j["max_iters"] = cfg.max_iters;
  j["step_tolerance"] = cfg.step_tolerance;
  j["direction"] =
      cfg.direction == RatioDirection::Maximize ? "max" : "min";
  j["seed"] = cfg.seed;
  return j;
}

// ---- report serialization ----

inline json to_json(const BoundReport<double>& r) {
  json j;
  j["type"] = "bound_report";
  j["method"] = std::string(to_string(r.method));
  j["gap"] = r.gap;
  j["lower"] = r.lower;
  j["upper"] = r.upper;
  j["slack_lower"] = r.slack_lower;
  j["slack_upper"] = r.slack_upper;
  j["tight_lower"] = r.tight_lower;
  j["tight_upper"] = r.tight_upper;
  return j;
}

inline json to_json(const HolderReport<double>& r) {
  json j;
  j["type"] = "holder_report";
  j["product_norm"] = r.product_norm;
  j["norms"] = r.norms;
  j["mazur_distance"] = r.mazur_distance;
  j["lower"] = r.lower;
  j["upper"] = r.upper;
  j["classical_upper"] = r.classical_upper;
  j["vacuous_lower"] = r.vacuous_lower;
  return j;
}

inline json to_json(const SearchResult<double>& r) {
  json j;
  j["type"] = "search_result";
  j["best_ratio"] = r.best_ratio;
  j["argpoint"] = std::vector<double>(r.argpoint.values().begin(),
                                      r.argpoint.values().end());
  j["target"] = r.target;
  j["relative_gap_to_target"] = r.relative_gap_to_target;
  j["n_evaluations"] = r.n_evaluations;
  return j;
}

using Report =
    std::variant<BoundReport<double>, HolderReport<double>, SearchResult<double>>;

struct ReportEnvelope {
  std::string command;
  std::string inputs_digest;
  Report report;
  std::string tool_version{kVersion};
};

inline json to_json(const ReportEnvelope& e) {
  json j;
  j["command"] = e.command;
  j["inputs_digest"] = e.inputs_digest;
  j["report"] = std::visit([](const auto& r) { return to_json(r); }, e.report);
  j["tool_version"] = e.tool_version;
  return j;
}

inline std::string serialize(const ReportEnvelope& e) {
  return to_json(e).dump(2) + "\n";
}

namespace detail {

template <typename T>
T field(const json& j, const char* key) {
  if (!j.contains(key))
    throw ParseError(std::string("report is missing '") + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    throw ParseError(std::string("report field '") + key +
                     "' has the wrong type");
  }
}

}  // namespace detail

inline BoundReport<double> bound_report_from_json(const json& j) {
  const auto method =
      method_from_string(detail::field<std::string>(j, "method"));
  if (!method) throw ParseError("unknown bound method in report");
  BoundReport<double> r;
  r.method = *method;
  r.gap = detail::field<double>(j, "gap");
  r.lower = detail::field<double>(j, "lower");
  r.upper = detail::field<double>(j, "upper");
  r.slack_lower = detail::field<double>(j, "slack_lower");
  r.slack_upper = detail::field<double>(j, "slack_upper");
  r.tight_lower = detail::field<bool>(j, "tight_lower");
  r.tight_upper = detail::field<bool>(j, "tight_upper");
  return r;
}

inline HolderReport<double> holder_report_from_json(const json& j) {
  HolderReport<double> r;
  r.product_norm = detail::field<double>(j, "product_norm");
  r.norms = detail::field<std::vector<double>>(j, "norms");
  r.mazur_distance = detail::field<double>(j, "mazur_distance");
  r.lower = detail::field<double>(j, "lower");
  r.upper = detail::field<double>(j, "upper");
  r.classical_upper = detail::field<double>(j, "classical_upper");
  r.vacuous_lower = detail::field<bool>(j, "vacuous_lower");
  return r;
}

inline SearchResult<double> search_result_from_json(const json& j) {
  return SearchResult<double>{
      detail::field<double>(j, "best_ratio"),
      DataVector<double>(detail::field<std::vector<double>>(j, "argpoint")),
      detail::field<double>(j, "target"),
      detail::field<double>(j, "relative_gap_to_target"),
      detail::field<long>(j, "n_evaluations")};
}

inline ReportEnvelope parse_envelope(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ParseError(std::string("invalid JSON: ") + e.what());
  }
  ReportEnvelope e{detail::field<std::string>(j, "command"),
                   detail::field<std::string>(j, "inputs_digest"),
                   BoundReport<double>{},
                   detail::field<std::string>(j, "tool_version")};
  if (!j.contains("report") || !j.at("report").is_object())
    throw ParseError("envelope needs a 'report' object");
  const json& r = j.at("report");
  const auto type = detail::field<std::string>(r, "type");
  if (type == "bound_report") {
    e.report = bound_report_from_json(r);
  } else if (type == "holder_report") {
    e.report = holder_report_from_json(r);
  } else if (type == "search_result") {
    e.report = search_result_from_json(r);
  } else {
    throw ParseError("unknown report type '" + type + "'");
  }
  return e;
}

}  // namespace amgm::io
