#include <doctest.h>

#include <cmath>
#include <set>

#include "sigmoment/demo.hpp"
#include "sigmoment/support.hpp"

using namespace sigmoment;

namespace {

double radius(const Point<Rational>& p) {
  double s = 0.0;
  for (const auto& v : p) s += v.get_d() * v.get_d();
  return std::sqrt(s);
}

std::vector<SupportSpec> catalog() {
  auto all = fixtures::round_trip_supports();
  all.push_back(fixtures::unit_strip());
  all.push_back(SupportSpec::box({{0, 1}}));
  all.push_back(SupportSpec::rays(2, {{{0, 0}, {1, 0}}, {{0, 0}, {0, 1}}}));
  all.push_back(fixtures::sampled_without_escapes());
  all.push_back(SupportSpec::full_space(3));
  all.push_back(SupportSpec::orthant(3));
  return all;
}

}  // namespace

TEST_CASE("contains") {
  CHECK(contains(SupportSpec::full_space(2), Point<Rational>{Rational(7, 2), -1}));
  CHECK_FALSE(contains(SupportSpec::orthant(2), Point<Rational>{1, Rational(-1, 10)}));
  CHECK_FALSE(contains(SupportSpec::orthant(2), Point<double>{1.0, -0.1}));
  CHECK(contains(fixtures::unit_strip(), Point<Rational>{Rational(1, 2), 100}));
  CHECK_FALSE(contains(fixtures::unit_strip(), Point<Rational>{2, 0}));
  CHECK(contains(fixtures::square_sequence(), Point<Rational>{49}));
  CHECK_FALSE(contains(fixtures::square_sequence(), Point<Rational>{50}));
  CHECK(contains(fixtures::integer_grid(5), Point<Rational>{5, 1}));
  CHECK_FALSE(contains(fixtures::integer_grid(5), Point<Rational>{6, 1}));
  CHECK_THROWS_AS(contains(SupportSpec::full_space(2), Point<Rational>{1}), DimensionMismatch);
}

TEST_CASE("sample examples") {
  const auto prefix = sample(fixtures::square_sequence(), 4, SampleStrategy::Prefix);
  CHECK(prefix == std::vector<Point<Rational>>{{1}, {4}, {9}, {16}});

  const auto grid = sample(fixtures::integer_grid(5), 25, SampleStrategy::Grid);
  std::set<std::pair<int, int>> seen;
  for (const auto& p : grid) seen.insert({static_cast<int>(p[0].get_d()), static_cast<int>(p[1].get_d())});
  CHECK(seen.size() == 25);
  CHECK(seen.begin()->first == 1);
  CHECK(seen.rbegin()->first == 5);
  CHECK_THROWS_AS(sample(fixtures::integer_grid(5), 26), SamplingError);
  CHECK(sample_up_to(fixtures::integer_grid(5), 26).size() == 25);

  const auto radial = sample(SupportSpec::full_space(2), 100, SampleStrategy::Radial);
  REQUIRE(radial.size() == 100);
  double lo = HUGE_VAL, hi = 0.0;
  for (const auto& p : radial) {
    const double r = radius(p);
    if (r > 0) lo = std::min(lo, r);
    hi = std::max(hi, r);
  }
  CHECK(hi >= 10 * lo);
}

TEST_CASE("every sampled point lies in K") {
  for (const auto& k : catalog()) {
    for (auto strategy : {SampleStrategy::Grid, SampleStrategy::Radial}) {
      const auto pts = sample_up_to(k, 60, strategy, 7);
      CHECK(!pts.empty());
      std::set<std::vector<std::string>> distinct;
      for (const auto& p : pts) {
        CHECK_MESSAGE(contains(k, p), k.class_name());
        std::vector<std::string> key;
        for (const auto& v : p) key.push_back(format_rational(v));
        distinct.insert(key);
      }
      CHECK(distinct.size() == pts.size());
    }
  }
}

TEST_CASE("sampling is deterministic in the seed") {
  const auto k = SupportSpec::orthant(2);
  CHECK(sample(k, 50, SampleStrategy::Radial, 3) == sample(k, 50, SampleStrategy::Radial, 3));
  const auto g = fixtures::integer_grid(5);
  CHECK(sample(g, 10, SampleStrategy::Radial, 1) != sample(g, 10, SampleStrategy::Radial, 2));
}

TEST_CASE("escape sequences") {
  const auto plane = escape_sequences(SupportSpec::full_space(2), 0, 3, 6);
  REQUIRE(plane.status == EscapeQuery::Status::Available);
  CHECK(plane.infinite_bases);
  std::set<std::string> bases;
  for (const auto& s : plane.sequences) {
    CHECK(s.length() == 6);
    CHECK(escapes_to_infinity(s.values));
    bases.insert(format_rational(s.base[0]));
    for (std::size_t i = 0; i < s.length(); ++i) CHECK(contains(SupportSpec::full_space(2), s.point(i)));
  }
  CHECK(bases.size() == 3);

  const auto strip = escape_sequences(fixtures::unit_strip(), 0, 3, 6);
  CHECK(strip.status == EscapeQuery::Status::None);
  CHECK(strip.sequences.empty());

  const auto grid = SupportSpec::grid({NodeSequence::power(1, 0, 1), NodeSequence::power(1, 0, 2)});
  const auto cols = escape_sequences(grid, 1, 4, 5);
  REQUIRE(cols.status == EscapeQuery::Status::Available);
  CHECK(cols.infinite_bases);
  for (const auto& s : cols.sequences) {
    CHECK(s.axis == 1);
    CHECK(s.values.front() == 1);
    CHECK(s.values[1] == 4);
    for (std::size_t i = 0; i < s.length(); ++i) CHECK(contains(grid, s.point(i)));
  }

  CHECK(escape_sequences(fixtures::sampled_without_escapes(), 0, 2, 4).status ==
        EscapeQuery::Status::Unknown);
}

TEST_CASE("escape growth test on value lists") {
  CHECK(escapes_to_infinity({1, 2, 3, 4, 5}));
  CHECK_FALSE(escapes_to_infinity({1, 2, 2, 5}));
  CHECK_FALSE(escapes_to_infinity({1, 2, 3}));
}

TEST_CASE("boundedness") {
  CHECK(boundedness(fixtures::unit_strip()).bounded_axis == std::size_t{0});
  CHECK(boundedness(SupportSpec::box({{0, 1}})).bounded == BoundednessInfo::Answer::Yes);
  CHECK(boundedness(SupportSpec::full_space(2)).bounded == BoundednessInfo::Answer::No);
  CHECK(boundedness(fixtures::square_sequence()).bounded == BoundednessInfo::Answer::No);
}

TEST_CASE("node sequences") {
  const auto sq = NodeSequence::power(1, 0, 2);
  CHECK(sq.value(3) == 16);
  CHECK_FALSE(sq.available());
  const auto lst = NodeSequence::list({1, 2, 3});
  CHECK(lst.available() == std::size_t{3});
  CHECK_THROWS_AS(lst.value(3), SamplingError);
  CHECK(lst.magnitude_bound() == Rational(3));
}

TEST_CASE("cone coordinates") {
  const auto k = SupportSpec::cone({1, -1}, {{1, 1}, {-1, 2}});
  const Point<Rational> x{1 + 2 * 1 - 1 * 3, -1 + 2 * 1 + 3 * 2};
  CHECK(k.cone_coordinates(x) == Point<Rational>{2, 3});
  CHECK(contains(k, x));
  CHECK_FALSE(contains(k, Point<Rational>{1, -2}));
  CHECK_THROWS(SupportSpec::cone({0, 0}, {{1, 1}, {2, 2}}));
}
