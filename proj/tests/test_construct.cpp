#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "sigmoment/demo.hpp"

using namespace sigmoment;

namespace {

MomentSequence<Rational> seq1(std::vector<Rational> v) {
  const unsigned n = static_cast<unsigned>(v.size() - 1);
  return MomentSequence<Rational>(1, n, std::move(v));
}

oracle::Mat vandermonde(const std::vector<Rational>& nodes, unsigned n) {
  oracle::Mat a(n + 1, oracle::Vec(nodes.size()));
  for (unsigned k = 0; k <= n; ++k)
    for (std::size_t i = 0; i < nodes.size(); ++i) a[k][i] = oracle::power(nodes[i], k);
  return a;
}

std::vector<Rational> range(int lo, int hi) {
  std::vector<Rational> v;
  for (int k = lo; k <= hi; ++k) v.push_back(k);
  return v;
}

}  // namespace

TEST_CASE("three node Vandermonde solve") {
  // Frozen from oracle::solve_square on [[1,1,1],[1,2,3],[1,4,9]] x = (1,0,0).
  const std::vector<Rational> frozen{3, -3, 1};
  const auto r = polya_construct_1d(seq1({1, 0, 0}), std::vector<Rational>{1, 2, 3});
  CHECK(r.measure.weights() == frozen);
  CHECK(r.measure.points() == std::vector<Point<Rational>>{{1}, {2}, {3}});
  CHECK(*oracle::solve_square(vandermonde({1, 2, 3}, 2), {1, 0, 0}) == frozen);
}

TEST_CASE("point mass on a provided node") {
  const auto delta = moments_of(SignedAtomicMeasure<Rational>(1, {{{4}, 1}}), 3);
  const auto r = polya_construct_1d(delta, std::vector<Rational>{4, 5, 6, 7});
  REQUIRE(r.measure.size() == 1);
  CHECK(r.measure.atoms()[0].point == Point<Rational>{4});
  CHECK(r.measure.atoms()[0].weight == 1);
}

TEST_CASE("zero target gives the empty measure") {
  CHECK(polya_construct_1d(seq1({0, 0, 0}), std::vector<Rational>{1, 5, 9}).measure.empty());
  MatchProblem<Rational> p{MomentSequence<Rational>::zeros(2, 4), fixtures::integer_grid(5)};
  const auto r = construct_signed_measure(p);
  CHECK(r.measure.empty());
  CHECK(r.total_variation == 0);
}

TEST_CASE("repeated nodes are reported with their positions") {
  try {
    polya_construct_1d(seq1({1, 2, 3}), std::vector<Rational>{1, 4, 1});
    FAIL("expected SingularSystemError");
  } catch (const SingularSystemError& e) {
    CHECK(e.pair() == std::pair<std::size_t, std::size_t>{0, 2});
  }
  CHECK_THROWS_AS(polya_construct_1d(seq1({1, 2, 3}), std::vector<Rational>{1, 4}), Error);
}

TEST_CASE("node sequence prefix and float mode") {
  const auto target = seq1({2, -1, 5, 0});
  const auto exact = polya_construct_1d(target, NodeSequence::power(1, 0, 2));
  CHECK(moments_of(exact.measure, 3) == target);
  const auto fl = polya_construct_1d(convert<double>(target), NodeSequence::power(1, 0, 2));
  const auto rep = verify_measure(fl.measure, convert<double>(target), fixtures::square_sequence());
  CHECK(rep.max_rel_residual <= kFloatResidualTolerance);
}

TEST_CASE("Polya construction matches the Vandermonde oracle on random targets") {
  std::mt19937_64 rng(21);
  std::uniform_int_distribution<int> v(-10, 10);
  const auto nodes = fixtures::square_nodes(7);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<Rational> s(7);
    for (auto& x : s) x = v(rng);
    const auto r = polya_construct_1d(seq1(s), nodes);
    const auto w = *oracle::solve_square(vandermonde(nodes, 6), s);
    std::vector<std::vector<Rational>> pts;
    for (const auto& x : r.measure.points()) pts.push_back(x);
    CHECK(oracle::integrate(pts, r.measure.weights(), oracle::monomials(1, 6)) == s);
    oracle::Vec nonzero;
    for (const auto& x : w)
      if (x != 0) nonzero.push_back(x);
    CHECK(r.measure.weights() == nonzero);
  }
}

TEST_CASE("grid construction in both modes") {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::uniform_int_distribution<int> iv(-10, 10);
  for (int trial = 0; trial < 5; ++trial) {
    std::vector<double> fv(15);
    for (auto& x : fv) x = u(rng);
    MatchProblem<double> fp{MomentSequence<double>(2, 4, fv), fixtures::integer_grid(5)};
    const auto fr = construct_signed_measure(fp);
    CHECK(fr.diagnostics.rank == 15);
    CHECK(verify_match(fr, fp).max_rel_residual <= kFloatResidualTolerance);

    std::vector<Rational> qv(15);
    for (auto& x : qv) x = iv(rng);
    MatchProblem<Rational> qp{MomentSequence<Rational>(2, 4, qv), fixtures::integer_grid(5)};
    const auto qr = construct_signed_measure(qp);
    CHECK(verify_match(qr, qp).exact_zero);
    for (const auto& r : qr.residuals) CHECK(r == 0);
  }
}

TEST_CASE("minimum total variation on a 5 x 5 grid") {
  const auto delta = moments_of(SignedAtomicMeasure<Rational>(2, {{{1, 1}, 1}}), 2);
  MatchProblem<Rational> p{delta, fixtures::integer_grid(5), 25, Objective::MinTotalVariation};
  const auto r = construct_signed_measure(p);
  CHECK(r.total_variation == 1);
  REQUIRE(r.measure.size() == 1);
  CHECK(r.measure.atoms()[0].point == Point<Rational>{1, 1});

  p.objective = Objective::AnySolution;
  p.node_budget.reset();
  CHECK(construct_signed_measure(p).total_variation >= 1);
}

TEST_CASE("minimum total variation on ten integer nodes") {
  const auto nodes = SupportSpec::sequence_1d(NodeSequence::list(range(1, 10)));
  MatchProblem<Rational> p{seq1({0, 1}), nodes, 10, Objective::MinTotalVariation};
  const auto r = construct_signed_measure(p);
  const auto best = oracle::min_total_variation(vandermonde(range(1, 10), 1), {0, 1});
  REQUIRE(best);
  // The LP optimum is 2/9: weights -1/9 at 1 and 1/9 at 10.
  CHECK(best->total_variation == Rational(2, 9));
  CHECK(r.total_variation == best->total_variation);
  CHECK(moments_of(r.measure, 1) == p.target);
}

TEST_CASE("minimum total variation never exceeds any solution") {
  std::mt19937_64 rng(8);
  std::uniform_int_distribution<int> iv(-5, 5);
  const auto nodes = SupportSpec::grid({NodeSequence::list(range(-3, 4))});
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<Rational> s(3);
    for (auto& x : s) x = iv(rng);
    MatchProblem<Rational> any{seq1(s), nodes, 8, Objective::AnySolution};
    MatchProblem<Rational> tv = any;
    tv.objective = Objective::MinTotalVariation;
    const auto a = construct_signed_measure(any);
    const auto t = construct_signed_measure(tv);
    CHECK(t.total_variation <= a.total_variation);
    const auto best = oracle::min_total_variation(vandermonde(range(-3, 4), 2), s);
    CHECK(t.total_variation == best->total_variation);
    CHECK(verify_match(t, tv).exact_zero);
  }
}

TEST_CASE("rank deficient supports raise with a certificate") {
  const auto k = SupportSpec::rays(2, {{{0, 0}, {1, 0}}});
  const auto target = moments_of(SignedAtomicMeasure<Rational>(2, {{{1, 0}, 1}}), 2);
  try {
    construct_signed_measure(MatchProblem<Rational>{target, k});
    FAIL("expected RankDeficientError");
  } catch (const RankDeficientError& e) {
    CHECK(e.rank() < e.required());
    REQUIRE(e.exact_certificate());
    for (const auto& p : sample(k, 10)) CHECK(eval_poly(*e.exact_certificate(), p) == 0);
  }
}

TEST_CASE("Jordan decomposition") {
  SignedAtomicMeasure<Rational> mu(1, {{{1}, 2}, {{2}, -3}});
  const auto [plus, minus] = jordan_decompose(mu);
  CHECK(plus.atoms().size() == 1);
  CHECK(plus.atoms()[0].weight == 2);
  CHECK(minus.atoms()[0].point == Point<Rational>{2});
  CHECK(minus.atoms()[0].weight == 3);

  const auto [e1, e2] = jordan_decompose(SignedAtomicMeasure<Rational>(2));
  CHECK(e1.empty());
  CHECK(e2.empty());

  SignedAtomicMeasure<Rational> pos(2, {{{0, 1}, 1}, {{3, 1}, Rational(1, 2)}});
  const auto [p2, m2] = jordan_decompose(pos);
  CHECK(p2.atoms().size() == 2);
  CHECK(m2.empty());

  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    const auto m = fixtures::random_measure(fixtures::integer_grid(5), 8, rng);
    const auto [a, b] = jordan_decompose(m);
    CHECK(a.total_variation() + b.total_variation() == m.total_variation());
    CHECK(a.total_mass() - b.total_mass() == m.total_mass());
    const auto ma = moments_of(a, 2).values();
    const auto mb = moments_of(b, 2).values();
    const auto mm = moments_of(m, 2).values();
    for (std::size_t i = 0; i < mm.size(); ++i) CHECK(ma[i] - mb[i] == mm[i]);
  }
}

TEST_CASE("verification flags corrupted weights and stray atoms") {
  const auto delta = moments_of(SignedAtomicMeasure<Rational>(2, {{{1, 1}, 1}}), 2);
  MatchProblem<Rational> p{delta, fixtures::integer_grid(5)};
  auto r = construct_signed_measure(p);
  CHECK(verify_match(r, p).exact_zero);
  CHECK(verify_match(r, p).max_abs_residual == 0.0);

  auto atoms = r.measure.atoms();
  atoms[0].weight += Rational(1, 1000);
  const auto bad = verify_measure(SignedAtomicMeasure<Rational>(2, atoms), delta, p.support);
  CHECK_FALSE(bad.exact_zero);
  CHECK(bad.max_abs_residual > 0);
  CHECK_FALSE(bad.contract_met);

  const auto outside =
      verify_measure(SignedAtomicMeasure<Rational>(2, {{{9, 9}, 1}}), delta, p.support);
  CHECK(outside.atoms_outside == std::vector<std::size_t>{0});
  CHECK_FALSE(outside.contract_met);
}

TEST_CASE("exact residuals vanish on full-rank supports up to three variables") {
  std::mt19937_64 rng(17);
  std::uniform_int_distribution<int> iv(-10, 10);
  const std::vector<SupportSpec> supports{SupportSpec::full_space(1), SupportSpec::orthant(2),
                                          fixtures::integer_grid(5), SupportSpec::full_space(3)};
  for (const auto& k : supports) {
    const unsigned top = k.dimension() == 3 ? 3 : 6;
    for (unsigned n = 1; n <= top; ++n) {
      if (k.dimension() == 2 && k.class_name() == "Grid" && n > 4) break;
      std::vector<Rational> s(basis_size(k.dimension(), n));
      for (auto& x : s) x = iv(rng);
      MatchProblem<Rational> p{MomentSequence<Rational>(k.dimension(), n, s), k};
      const auto r = construct_signed_measure(p);
      CHECK_MESSAGE(verify_match(r, p).exact_zero, k.class_name() << " N=" << n);
    }
  }
}

TEST_CASE("round trip on catalog supports") {
  std::mt19937_64 rng(99);
  for (const auto& k : fixtures::round_trip_supports()) {
    for (int trial = 0; trial < 3; ++trial) {
      const auto mu = fixtures::random_measure(k, 8, rng);
      const unsigned n = 1 + trial;
      const auto s = moments_of(mu, n);
      MatchProblem<Rational> p{s, k};
      CHECK(moments_of(construct_signed_measure(p).measure, n) == s);
      MatchProblem<double> fp{convert<double>(s), k};
      CHECK(verify_match(construct_signed_measure(fp), fp).max_rel_residual <= kFloatResidualTolerance);
    }
  }
}
