#include <doctest.h>

#include <random>
#include <sstream>

#include "sigmoment/demo.hpp"
#include "sigmoment/json_io.hpp"

using namespace sigmoment;
using io::Json;

TEST_CASE("supports survive a JSON round trip") {
  auto all = fixtures::round_trip_supports();
  all.push_back(fixtures::unit_strip());
  all.push_back(fixtures::sampled_without_escapes());
  all.push_back(SupportSpec::rays(2, {{{0, 0}, {1, 0}}, {{1, 1}, {0, -1}}}));
  all.push_back(SupportSpec::box({{0, 1}, {Rational(-1, 2), 3}}));
  for (const auto& k : all) {
    const Json j = io::write_support(k);
    const auto back = io::read_support(io::parse_text(j.dump()));
    CHECK(io::write_support(back) == j);
    CHECK(back.class_name() == k.class_name());
    for (const auto& p : sample_up_to(k, 20)) CHECK(contains(back, p));
  }
}

TEST_CASE("moments and measures survive a JSON round trip") {
  std::mt19937_64 rng(12);
  for (const auto& k : fixtures::round_trip_supports()) {
    const auto mu = fixtures::random_measure(k, 6, rng);
    const auto back = io::read_measure(io::parse_text(io::write_measure(mu).dump()));
    CHECK(back.atoms().size() == mu.atoms().size());
    CHECK(back.points() == mu.points());
    CHECK(back.weights() == mu.weights());
    const auto s = moments_of(mu, 3);
    CHECK(io::read_moments(io::parse_text(io::write_moments(s).dump(2))) == s);
  }
}

TEST_CASE("values") {
  CHECK(io::read_value(Json("3/9"), "/v") == Rational(1, 3));
  CHECK(io::read_value(Json(7), "/v") == 7);
  CHECK(io::read_value(Json(0.5), "/v") == Rational(1, 2));
  CHECK(io::write_value(Rational(-2, 4)) == Json("-1/2"));
  CHECK_THROWS_AS(io::read_value(Json(true), "/v"), io::SchemaError);
}

TEST_CASE("parse errors carry line and column") {
  const std::string text = "{\n  \"dimension\": 1,\n  \"entries\": [\n";
  try {
    io::parse_text(text, "bad.json");
    FAIL("expected ParseError");
  } catch (const io::ParseError& e) {
    CHECK(e.line() == 4);
    CHECK(e.column() == 1);
    CHECK(std::string(e.what()).rfind("bad.json:4:1:", 0) == 0);
  }
  try {
    io::parse_text("{\"a\": 1,, }");
    FAIL("expected ParseError");
  } catch (const io::ParseError& e) {
    CHECK(e.line() == 1);
    CHECK(e.column() == 9);
  }
}

TEST_CASE("schema errors") {
  CHECK_THROWS_AS(io::read_support(io::parse_text(R"({"class": "Torus", "dimension": 2})")),
                  io::SchemaError);
  CHECK_THROWS_AS(io::read_moments(io::parse_text(
                      R"({"dimension": 1, "max_degree": 1, "entries": [{"alpha": [0], "value": 1}]})")),
                  io::SchemaError);
  CHECK_THROWS_AS(io::read_moments(io::parse_text(
                      R"({"dimension": 1, "max_degree": 0,
                          "entries": [{"alpha": [0], "value": 1}, {"alpha": [0], "value": 2}]})")),
                  io::SchemaError);
  CHECK_THROWS_AS(io::read_measure(io::parse_text(R"({"dimension": 2, "atoms": [{"point": [1], "weight": 1}]})")),
                  Error);
}

TEST_CASE("report writers") {
  const auto r = classify(fixtures::unit_strip(), 4);
  const Json j = io::write_analysis_report(r);
  CHECK(j["verdict"] == "NotRepresentable");
  std::ostringstream csv;
  io::write_growth_csv(csv, *r.witness_growth);
  CHECK(csv.str().rfind("stage,radius,max_ratio\n", 0) == 0);
  CHECK(io::write_analysis_report(r).dump() == j.dump());
}
