#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "sigmoment/moments.hpp"

using namespace sigmoment;

namespace {

std::vector<std::vector<unsigned>> exponents(const std::vector<MultiIndex>& basis) {
  std::vector<std::vector<unsigned>> out;
  for (const auto& a : basis) out.push_back(a.exponents());
  return out;
}

Polynomial<Rational> x(std::size_t d, std::size_t axis) { return Polynomial<Rational>::coordinate(d, axis); }

}  // namespace

TEST_CASE("basis order") {
  CHECK(exponents(enumerate_basis(1, 2)) == std::vector<std::vector<unsigned>>{{0}, {1}, {2}});
  CHECK(exponents(enumerate_basis(2, 1)) == std::vector<std::vector<unsigned>>{{0, 0}, {1, 0}, {0, 1}});
  CHECK(exponents(enumerate_basis(2, 2)) ==
        std::vector<std::vector<unsigned>>{{0, 0}, {1, 0}, {0, 1}, {2, 0}, {1, 1}, {0, 2}});
  CHECK(enumerate_basis(3, 4).size() == 35);
}

TEST_CASE("basis matches the enumeration oracle") {
  for (std::size_t d = 1; d <= 4; ++d) {
    for (unsigned n = 0; n <= 8; ++n) {
      const auto basis = enumerate_basis(d, n);
      CHECK(basis.size() == binomial(n + d, d));
      CHECK(basis.size() == basis_size(d, n));
      CHECK(exponents(basis) == oracle::monomials(d, n));
    }
  }
}

TEST_CASE("basis index lookup") {
  const auto basis = enumerate_basis(3, 3);
  BasisIndex idx(basis);
  for (std::size_t i = 0; i < basis.size(); ++i) CHECK(idx.find(basis[i]) == i);
  CHECK(idx.find(MultiIndex({4, 0, 0})) == idx.size());
}

TEST_CASE("eval_poly") {
  const auto one = Polynomial<Rational>::constant(1, 1);
  CHECK(eval_poly(one + x(1, 0) * x(1, 0), Point<Rational>{3}) == 10);
  CHECK(eval_poly(x(2, 0) * x(2, 1), Point<Rational>{2, -5}) == -10);
  CHECK(eval_poly(Polynomial<Rational>::growth_weight(2, 2), Point<Rational>{1, 1}) == 9);
  CHECK(eval_poly(convert<double>(x(2, 0) * x(2, 1)), Point<double>{2.0, -5.0}) == -10.0);
}

TEST_CASE("polynomial arithmetic and printing") {
  const auto p = x(2, 0) * x(2, 1);
  CHECK(p.degree() == 2);
  CHECK(p.degree_in(0) == 1);
  CHECK((p - p).is_zero());
  CHECK((p - p).degree() == Polynomial<Rational>::kZeroDegree);
  CHECK(p.to_string() == "x1*x2");
  const auto q = x(2, 1) - (x(2, 0) * x(2, 0)).scaled(3);
  CHECK(q.to_string() == "x2 - 3*x1^2");
  CHECK(x(1, 0).pow(3).coefficient(MultiIndex({3})) == 1);
}

TEST_CASE("integrate") {
  SignedAtomicMeasure<Rational> origin(1, {{{0}, 1}});
  const auto p = Polynomial<Rational>::constant(1, 7) + x(1, 0).pow(2);
  CHECK(integrate(origin, p) == 7);

  SignedAtomicMeasure<Rational> mu(1, {{{1}, 1}, {{2}, -1}});
  CHECK(integrate(mu, x(1, 0)) == -1);
}

TEST_CASE("moments_of") {
  CHECK(moments_of(SignedAtomicMeasure<Rational>(2), 3) == MomentSequence<Rational>::zeros(2, 3));
  CHECK(moments_of(SignedAtomicMeasure<Rational>(1, {{{0}, 1}}), 3).values() ==
        std::vector<Rational>{1, 0, 0, 0});
  CHECK(moments_of(SignedAtomicMeasure<Rational>(1, {{{1}, 1}, {{-1}, 1}}), 2).values() ==
        std::vector<Rational>{2, 0, 2});
}

TEST_CASE("moments_of agrees with direct rational integration") {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<int> coord(-6, 6);
  std::uniform_int_distribution<int> weight(-9, 9);
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t d = 1 + trial % 3;
    const unsigned n = 1 + trial % 5;
    std::vector<Atom<Rational>> atoms;
    std::vector<std::vector<Rational>> pts;
    oracle::Vec w;
    for (int a = 0; a < 5; ++a) {
      Point<Rational> p;
      for (std::size_t j = 0; j < d; ++j) p.push_back(Rational(coord(rng), 1 + a));
      const Rational wt(weight(rng), 2);
      atoms.push_back({p, wt});
      pts.push_back(p);
      w.push_back(wt);
    }
    SignedAtomicMeasure<Rational> mu(d, atoms);
    CHECK(moments_of(mu, n).values() == oracle::integrate(pts, w, oracle::monomials(d, n)));
  }
}

TEST_CASE("integration is linear in the measure") {
  const auto p = x(2, 0).pow(2) * x(2, 1) - x(2, 1) + Polynomial<Rational>::constant(2, 3);
  SignedAtomicMeasure<Rational> a(2, {{{1, 2}, 3}, {{-1, 0}, Rational(1, 2)}});
  SignedAtomicMeasure<Rational> b(2, {{{4, -3}, -2}});
  std::vector<Atom<Rational>> both = a.atoms();
  for (auto at : b.atoms()) {
    at.weight *= 5;
    both.push_back(at);
  }
  CHECK(integrate(SignedAtomicMeasure<Rational>(2, both), p) == integrate(a, p) + 5 * integrate(b, p));
}

TEST_CASE("measure merges repeated points and drops zeros") {
  SignedAtomicMeasure<Rational> mu(1, {{{1}, 2}, {{3}, 0}, {{1}, -1}, {{5}, 4}});
  REQUIRE(mu.size() == 2);
  CHECK(mu.atoms()[0].point == Point<Rational>{1});
  CHECK(mu.atoms()[0].weight == 1);
  CHECK(mu.total_variation() == 5);
  CHECK(mu.total_mass() == 5);
}

TEST_CASE("moment sequence access and truncation") {
  const auto s = moments_of(SignedAtomicMeasure<Rational>(2, {{{2, 3}, 1}}), 3);
  CHECK(s.at(MultiIndex({1, 1})) == 6);
  CHECK(s.truncated(1).values() == std::vector<Rational>{1, 2, 3});
  CHECK_THROWS_AS(MomentSequence<Rational>(2, 1, {1, 2}), Error);
}

TEST_CASE("rational parsing") {
  CHECK(parse_rational("3/6") == Rational(1, 2));
  CHECK(parse_rational("-1e-3") == Rational(-1, 1000));
  CHECK(parse_rational("0.25") == Rational(1, 4));
  CHECK(format_rational(Rational(-4, 6)) == "-2/3");
  CHECK(format_rational(Rational(5)) == "5/1");
  CHECK_THROWS(parse_rational("1/0"));
  CHECK_THROWS(parse_rational("abc"));
}
