#include <doctest.h>

#include "oracles.hpp"
#include "sigmoment/demo.hpp"

using namespace sigmoment;

namespace {

using Verdict = AnalysisReport::Verdict;

std::vector<Point<Rational>> on_axis(std::size_t count) {
  std::vector<Point<Rational>> pts;
  for (std::size_t t = 1; t <= count; ++t) pts.push_back({Rational(t), 0});
  return pts;
}

// Is `p` a nonzero rational multiple of `q`?
bool proportional(const Polynomial<Rational>& p, const Polynomial<Rational>& q) {
  if (p.is_zero() || q.terms().size() != p.terms().size()) return false;
  const auto& [alpha, c] = *q.terms().begin();
  const Rational f = p.coefficient(alpha) / c;
  return f != 0 && p == q.scaled(f);
}

}  // namespace

TEST_CASE("density rank on a coordinate line") {
  const auto m = zariski_density_check(on_axis(10), 2, 1);
  CHECK(m.rank == 2);
  CHECK_FALSE(m.full_rank());
  REQUIRE(m.exact_certificate);
  CHECK(proportional(*m.exact_certificate, Polynomial<Rational>::coordinate(2, 1)));

  const auto f = zariski_density_check(on_axis(10), 2, 1, NumericMode::Float);
  CHECK(f.rank == 2);
  REQUIRE(f.float_certificate);
}

TEST_CASE("density rank with distinct nodes in one variable") {
  const std::vector<Point<Rational>> pts{{-2}, {0}, {1}, {3}, {7}};
  CHECK(zariski_density_check(pts, 1, 2).rank == 3);
  CHECK(zariski_density_check(SupportSpec::full_space(1), 2, 5).full_rank());
}

TEST_CASE("density on the cross matches the null space oracle") {
  const auto pts = fixtures::cross_samples(10);
  REQUIRE(pts.size() == 20);
  const auto m = zariski_density_check(pts, 2, 2);
  CHECK(m.rank == 5);
  REQUIRE(m.exact_certificate);

  // Independent null space of the 20 x 6 evaluation matrix.
  const auto alphas = oracle::monomials(2, 2);
  oracle::Mat v;
  for (const auto& p : pts) {
    oracle::Vec row;
    for (const auto& a : alphas) row.push_back(oracle::monomial_at(p, a));
    v.push_back(row);
  }
  const auto ns = oracle::null_space(v);
  REQUIRE(ns.size() == 1);
  Polynomial<Rational> expected(2);
  for (std::size_t k = 0; k < alphas.size(); ++k)
    if (ns[0][k] != 0) expected = expected + Polynomial<Rational>::monomial(MultiIndex(alphas[k]), ns[0][k]);
  CHECK(proportional(*m.exact_certificate, expected));
  const auto x1x2 = Polynomial<Rational>::coordinate(2, 0) * Polynomial<Rational>::coordinate(2, 1);
  CHECK(proportional(*m.exact_certificate, x1x2));
}

TEST_CASE("certificates vanish on every sample and respect the degree") {
  const std::vector<std::vector<Point<Rational>>> sets{
      on_axis(12), fixtures::cross_samples(8),
      {{1, 1}, {2, 4}, {3, 9}, {4, 16}, {-1, 1}, {5, 25}, {6, 36}, {7, 49}}};
  for (const auto& pts : sets) {
    for (unsigned n = 1; n <= 4; ++n) {
      const auto m = zariski_density_check(pts, 2, n);
      if (m.full_rank()) continue;
      REQUIRE(m.exact_certificate);
      CHECK(m.exact_certificate->degree() <= static_cast<int>(n));
      for (const auto& p : pts) CHECK(eval_poly(*m.exact_certificate, p) == 0);
    }
  }
}

TEST_CASE("density rank is monotone in the sample set") {
  const auto k = SupportSpec::orthant(2);
  std::size_t previous = 0;
  for (std::size_t count = 1; count <= 15; ++count) {
    const auto r = zariski_density_check(k, 3, count).rank;
    CHECK(r >= previous);
    previous = r;
  }
  CHECK(previous == 10);
}

TEST_CASE("growth test examples") {
  const auto x = Polynomial<double>::coordinate(1, 0);
  CHECK(growth_test(x, 0, SupportSpec::full_space(1)).verdict ==
        GrowthReport::Verdict::UnboundedWitnessed);

  for (unsigned m = 1; m <= 10; ++m) {
    const auto g = growth_test(Polynomial<double>::coordinate(2, 0).pow(m), 0, fixtures::unit_strip());
    CHECK(g.verdict == GrowthReport::Verdict::BoundedWitnessed);
    CHECK(g.lambda <= 1.0 + 1e-12);
    CHECK(g.samples_used >= 10000);
  }

  const auto w = growth_test(Polynomial<double>::growth_weight(2, 1), 1, SupportSpec::full_space(2));
  CHECK(w.verdict == GrowthReport::Verdict::BoundedWitnessed);
  CHECK(w.lambda == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("growth on the squares follows the degree law") {
  const auto k = fixtures::square_sequence();
  for (unsigned n = 0; n <= 3; ++n) {
    const auto odd = growth_test(Polynomial<double>::coordinate(1, 0).pow(2 * n + 1), n, k);
    CHECK(odd.verdict == GrowthReport::Verdict::UnboundedWitnessed);
    const auto even = growth_test(Polynomial<double>::coordinate(1, 0).pow(2 * n), n, k);
    CHECK(even.verdict != GrowthReport::Verdict::UnboundedWitnessed);
  }
}

TEST_CASE("growth space dimension") {
  const auto sq = nn_dimension(fixtures::square_sequence(), 2);
  CHECK(sq.kind == NnDimension::Kind::Finite);
  CHECK(sq.exact == std::size_t{5});
  for (unsigned n = 0; n <= 3; ++n) CHECK(nn_dimension(fixtures::square_sequence(), n).exact == 2 * n + 1);

  const auto grid = SupportSpec::grid({NodeSequence::power(1, 0, 1), NodeSequence::power(1, 0, 1)});
  for (unsigned m = 0; m <= 2; ++m) {
    const auto g = nn_dimension(grid, m);
    CHECK(g.kind == NnDimension::Kind::Finite);
    CHECK(g.upper_bound <= (2 * m + 1) * (2 * m + 1));
  }

  const auto strip = nn_dimension(fixtures::unit_strip(), 0);
  CHECK(strip.kind == NnDimension::Kind::Infinite);
  REQUIRE(strip.witness_generator);
  CHECK(*strip.witness_generator == Polynomial<Rational>::coordinate(2, 0));
}

TEST_CASE("condition (*)") {
  CHECK(condition_star_check(SupportSpec::orthant(2), 4).kind == ConditionStar::Kind::Holds);
  CHECK(condition_star_check(SupportSpec::full_space(3), 2).kind == ConditionStar::Kind::Holds);
  const auto strip = condition_star_check(fixtures::unit_strip(), 4);
  CHECK(strip.kind == ConditionStar::Kind::Fails);
  CHECK(strip.failing_axis == std::size_t{0});
  const auto grid = SupportSpec::grid({NodeSequence::power(1, 0, 1), NodeSequence::power(1, 0, 2)});
  CHECK(condition_star_check(grid, 4).kind == ConditionStar::Kind::Holds);
  const auto cone = condition_star_check(SupportSpec::cone({1, -1}, {{1, 1}, {-1, 2}}), 3);
  CHECK(cone.kind == ConditionStar::Kind::Holds);
  CHECK(cone.frame == "cone");
  CHECK(condition_star_check(fixtures::sampled_without_escapes(), 3).kind == ConditionStar::Kind::Unknown);
}

TEST_CASE("classifier table") {
  for (const auto& c : fixtures::classifier_table()) {
    const auto r = classify(c.support, 4);
    CHECK_MESSAGE(r.verdict == c.expected, c.name);
  }
}

TEST_CASE("strip witness is x1 and stays bounded") {
  const auto r = classify(fixtures::unit_strip(), 6);
  REQUIRE(r.verdict == Verdict::NotRepresentable);
  REQUIRE(r.witness);
  CHECK(*r.witness == Polynomial<Rational>::coordinate(2, 0));
  REQUIRE(r.witness_growth);
  CHECK(r.witness_growth->verdict == GrowthReport::Verdict::BoundedWitnessed);
  for (const auto& dr : r.ranks) CHECK(dr.rank == dr.required);
}

TEST_CASE("classify reports a vanishing certificate for a non-dense set") {
  const auto k = SupportSpec::sampled(2, fixtures::cross_samples(10));
  const auto r = classify(k, 3);
  CHECK(r.verdict == Verdict::NotRepresentable);
  CHECK(r.witness_kind == AnalysisReport::WitnessKind::NullCertificate);
  REQUIRE(r.witness);
  for (const auto& p : fixtures::cross_samples(10)) CHECK(eval_poly(*r.witness, p) == 0);
}

TEST_CASE("certified flag and bounded sets in one variable") {
  CHECK(classify(SupportSpec::box({{0, 1}}), 4).verdict == Verdict::NotRepresentable);
  CHECK(classify(fixtures::square_sequence(), 4).verdict == Verdict::Representable);
  SupportSpec certified(2, fixtures::sampled_without_escapes().shape(), true);
  CHECK(classify(certified, 3).verdict == Verdict::Representable);
}
