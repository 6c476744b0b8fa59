#include <catch2/catch_amalgamated.hpp>

#include <string>
#include <vector>

#include <amgm/io.hpp>

using amgm::io::FileFormat;
using amgm::io::ParseError;
using Catch::Matchers::WithinRel;

TEST_CASE("json problem parsing", "[io]") {
  const auto p = amgm::io::parse_problem_json(
      R"({"data": [1, 0, 2.5], "weights": [0.2, 0.3, 0.5]})");
  CHECK(p.data.size() == 3);
  CHECK(p.data[2] == 2.5);
  CHECK(p.weights[1] == 0.3);
  CHECK_FALSE(p.second_weights.has_value());

  SECTION("weights default to equal") {
    const auto q = amgm::io::parse_problem_json(R"({"data": [1, 2, 3, 4]})");
    CHECK(q.weights.size() == 4);
    CHECK(q.weights[0] == 0.25);
  }
  SECTION("second weights") {
    const auto q = amgm::io::parse_problem_json(
        R"({"data": [1, 2], "weights": [0.25, 0.75], "weights_b": [0.5, 0.5]})");
    REQUIRE(q.second_weights.has_value());
    CHECK((*q.second_weights)[0] == 0.5);
  }
  SECTION("structural failures are parse errors") {
    CHECK_THROWS_AS(amgm::io::parse_problem_json("not json"), ParseError);
    CHECK_THROWS_AS(amgm::io::parse_problem_json("[1,2]"), ParseError);
    CHECK_THROWS_AS(amgm::io::parse_problem_json(R"({"weights": [1]})"), ParseError);
    CHECK_THROWS_AS(amgm::io::parse_problem_json(R"({"data": "no"})"), ParseError);
    CHECK_THROWS_AS(amgm::io::parse_problem_json(R"({"data": [1, "x"]})"),
                    ParseError);
    CHECK_THROWS_AS(amgm::io::parse_problem_json(R"({"data": [1, 1e999]})"),
                    ParseError);
  }
  SECTION("value-level failures keep their library error types") {
    CHECK_THROWS_AS(amgm::io::parse_problem_json(R"({"data": [1, -2]})"),
                    amgm::DomainError);
    CHECK_THROWS_AS(
        amgm::io::parse_problem_json(R"({"data": [1, 2], "weights": [0.5, 0.4]})"),
        amgm::DomainError);
  }
}

TEST_CASE("csv problem parsing", "[io]") {
  const auto p = amgm::io::parse_problem_csv("x,alpha\n1,0.25\n0,0.75\n");
  CHECK(p.data.size() == 2);
  CHECK(p.data[0] == 1.0);
  CHECK(p.weights[1] == 0.75);

  const auto q = amgm::io::parse_problem_csv("x\n4\n9\n");
  CHECK(q.weights[0] == 0.5);

  const auto r =
      amgm::io::parse_problem_csv("x,alpha,beta\n1,0.25,0.5\n0,0.75,0.5\n");
  REQUIRE(r.second_weights.has_value());
  CHECK((*r.second_weights)[1] == 0.5);

  CHECK_THROWS_AS(amgm::io::parse_problem_csv(""), ParseError);
  CHECK_THROWS_AS(amgm::io::parse_problem_csv("a,b\n1,2\n"), ParseError);
  CHECK_THROWS_AS(amgm::io::parse_problem_csv("x\n1,2\n"), ParseError);
  CHECK_THROWS_AS(amgm::io::parse_problem_csv("x\n1\nfoo\n"), ParseError);
  // same content through either format hashes identically
  const auto digest_csv =
      amgm::io::content_digest(amgm::io::canonical_input(p));
  const auto from_json = amgm::io::parse_problem_json(
      R"({"data": [1, 0], "weights": [0.25, 0.75]})");
  const auto digest_json =
      amgm::io::content_digest(amgm::io::canonical_input(from_json));
  CHECK(digest_csv == digest_json);
}

TEST_CASE("function set parsing", "[io]") {
  const std::string good = R"({
    "masses": [0.5, 0.5],
    "functions": [[1, 2], [2, 1]],
    "exponents": [2, 2]
  })";
  const auto s = amgm::io::parse_function_set_json(good);
  CHECK(s.function_count() == 2);
  CHECK(s.point_count() == 2);

  CHECK_THROWS_AS(amgm::io::parse_function_set_json("{}"), ParseError);
  CHECK_THROWS_AS(
      amgm::io::parse_function_set_json(
          R"({"masses": [1, 1], "functions": "x", "exponents": [2, 2]})"),
      ParseError);
  // malformed exponents: 1/2 + 1/3 != 1
  CHECK_THROWS_AS(
      amgm::io::parse_function_set_json(
          R"({"masses": [0.5, 0.5], "functions": [[1, 2], [2, 1]], "exponents": [2, 3]})"),
      amgm::DomainError);
}

TEST_CASE("digest is stable and content sensitive", "[io]") {
  const auto p1 = amgm::io::parse_problem_json(R"({"data": [1, 2]})");
  const auto p2 = amgm::io::parse_problem_json(R"({"data": [1, 2]})");
  const auto p3 = amgm::io::parse_problem_json(R"({"data": [1, 3]})");
  const auto d1 = amgm::io::content_digest(amgm::io::canonical_input(p1));
  const auto d2 = amgm::io::content_digest(amgm::io::canonical_input(p2));
  const auto d3 = amgm::io::content_digest(amgm::io::canonical_input(p3));
  CHECK(d1 == d2);
  CHECK(d1 != d3);
  CHECK(d1.size() == 16);
}

TEST_CASE("envelopes round trip byte-identically", "[io]") {
  SECTION("bound report") {
    const auto r = amgm::theorem_bounds(
        amgm::DataVector<double>(std::vector<double>{1, 0, 0.3333333333333333}),
        amgm::WeightVector<double>::uniform(3));
    amgm::io::ReportEnvelope env{"bounds", "00ff00ff00ff00ff", r};
    const auto text = amgm::io::serialize(env);
    const auto back = amgm::io::parse_envelope(text);
    CHECK(amgm::io::serialize(back) == text);
    const auto& rr = std::get<amgm::BoundReport<double>>(back.report);
    CHECK(rr.gap == r.gap);
    CHECK(rr.lower == r.lower);
    CHECK(rr.upper == r.upper);
    CHECK(rr.slack_lower == r.slack_lower);
    CHECK(rr.method == r.method);
  }
  SECTION("holder report") {
    const amgm::SampledFunctionSet<double> s({0.5, 0.5}, {{1, 2}, {2, 1}}, {2, 2});
    amgm::io::ReportEnvelope env{"holder", "0123456789abcdef",
                                 amgm::holder_refinement(s)};
    const auto text = amgm::io::serialize(env);
    const auto back = amgm::io::parse_envelope(text);
    CHECK(amgm::io::serialize(back) == text);
    const auto& rr = std::get<amgm::HolderReport<double>>(back.report);
    CHECK(rr.norms.size() == 2);
  }
  SECTION("search result") {
    amgm::SearchConfig<double> cfg{amgm::WeightVector<double>::uniform(3)};
    cfg.n_starts = 4;
    cfg.seed = 3;
    amgm::io::ReportEnvelope env{"sharpness", "deadbeefdeadbeef",
                                 amgm::search_extremal(cfg)};
    const auto text = amgm::io::serialize(env);
    const auto back = amgm::io::parse_envelope(text);
    CHECK(amgm::io::serialize(back) == text);
    const auto& rr = std::get<amgm::SearchResult<double>>(back.report);
    CHECK(rr.argpoint.size() == 3);
  }
  SECTION("doubles survive the round trip bit-exactly") {
    amgm::BoundReport<double> r{};
    r.gap = 0.1 + 0.2;  // not representable decimally
    r.lower = 1e-308;
    r.upper = 12345.678901234567;
    r.slack_lower = r.gap - r.lower;
    r.slack_upper = r.upper - r.gap;
    r.method = amgm::Method::Theorem;
    amgm::io::ReportEnvelope env{"bounds", "0", r};
    const auto back = amgm::io::parse_envelope(amgm::io::serialize(env));
    const auto& rr = std::get<amgm::BoundReport<double>>(back.report);
    CHECK(rr.gap == r.gap);
    CHECK(rr.lower == r.lower);
    CHECK(rr.upper == r.upper);
  }
  SECTION("malformed envelopes are parse errors") {
    CHECK_THROWS_AS(amgm::io::parse_envelope("{}"), ParseError);
    CHECK_THROWS_AS(amgm::io::parse_envelope(
                        R"({"command":"x","inputs_digest":"0","tool_version":"0",
                            "report":{"type":"mystery"}})"),
                    ParseError);
  }
}
