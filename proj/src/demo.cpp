#include "sigmoment/demo.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <random>
#include <sstream>

namespace sigmoment::fixtures {

std::vector<Rational> square_nodes(std::size_t count) {
  std::vector<Rational> v;
  for (std::size_t k = 1; k <= count; ++k) v.emplace_back(static_cast<long>(k * k));
  return v;
}

SupportSpec integer_grid(std::size_t n, std::size_t dimension) {
  std::vector<Rational> values;
  for (std::size_t k = 1; k <= n; ++k) values.emplace_back(static_cast<long>(k));
  return SupportSpec::grid(std::vector<NodeSequence>(dimension, NodeSequence::list(values)));
}

SupportSpec unit_strip() { return SupportSpec::strip({Interval{0, 1}, std::nullopt}); }

std::vector<Point<Rational>> cross_samples(std::size_t per_axis) {
  std::vector<Point<Rational>> pts;
  for (std::size_t k = 1; k <= per_axis; ++k) {
    const Rational v(static_cast<long>(k));
    pts.push_back({v, 0});
    pts.push_back({0, v});
  }
  return pts;
}

SupportSpec square_sequence() { return SupportSpec::sequence_1d(NodeSequence::power(1, 0, 2)); }

SupportSpec sampled_without_escapes() {
  // (k, k^3 mod 29 - 14) has no low-degree algebraic relation among 40 points.
  std::vector<Point<Rational>> pts;
  for (long k = 1; k <= 40; ++k) pts.push_back({Rational(k), Rational((k * k * k) % 29 - 14)});
  return SupportSpec::sampled(2, std::move(pts));
}

std::vector<ClassifierCase> classifier_table() {
  using V = AnalysisReport::Verdict;
  return {
      {"BoundedBox [0,1]", SupportSpec::box({Interval{0, 1}}), V::NotRepresentable},
      {"PointSequence1D k^2", square_sequence(), V::Representable},
      {"FullSpace d=2", SupportSpec::full_space(2), V::Representable},
      {"Orthant d=2", SupportSpec::orthant(2), V::Representable},
      {"Strip [0,1] x R", unit_strip(), V::NotRepresentable},
      {"SampledSet without escapes", sampled_without_escapes(), V::Unknown},
  };
}

std::vector<SupportSpec> round_trip_supports() {
  return {
      SupportSpec::full_space(1),
      SupportSpec::full_space(2),
      SupportSpec::orthant(2),
      integer_grid(5),
      square_sequence(),
      unit_strip(),
      SupportSpec::box({Interval{0, 1}, Interval{-1, 1}}),
      SupportSpec::cone({1, -1}, {{1, 1}, {-1, 2}}),
      SupportSpec::grid({NodeSequence::power(1, 0, 2), NodeSequence::power(1, 0, 1)}),
  };
}

template <typename Rng>
SignedAtomicMeasure<Rational> random_measure(const SupportSpec& k, std::size_t max_atoms, Rng& rng) {
  auto pool = sample_up_to(k, 3 * max_atoms, SampleStrategy::Radial, rng());
  std::shuffle(pool.begin(), pool.end(), rng);
  std::uniform_int_distribution<std::size_t> count(1, std::min(max_atoms, pool.size()));
  std::uniform_int_distribution<long> weight(1, 5);
  std::bernoulli_distribution negative(0.5);
  std::vector<Atom<Rational>> atoms;
  const std::size_t n = count(rng);
  for (std::size_t i = 0; i < n; ++i) {
    const long w = weight(rng);
    atoms.push_back({pool[i], Rational(negative(rng) ? -w : w)});
  }
  return SignedAtomicMeasure<Rational>(k.dimension(), std::move(atoms));
}

template SignedAtomicMeasure<Rational> random_measure(const SupportSpec&, std::size_t,
                                                      std::mt19937_64&);

}  // namespace sigmoment::fixtures

namespace sigmoment::demo {

namespace {

using Clock = std::chrono::steady_clock;

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(3);
  os << v;
  return os.str();
}

Outcome polya(std::uint64_t seed) {
  Outcome o{1, "polya", true, {}, 0.0};
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<long> value(-10, 10);
  const auto nodes = fixtures::square_nodes(11);
  std::size_t exact = 0;
  for (int run = 0; run < 100; ++run) {
    std::vector<Rational> s;
    for (int k = 0; k <= 10; ++k) s.emplace_back(value(rng));
    const MomentSequence<Rational> target(1, 10, s);
    const auto r = polya_construct_1d(target, nodes);
    const auto rep = verify_measure(r.measure, target, fixtures::square_sequence());
    if (rep.exact_zero && rep.contract_met) ++exact;
  }
  o.passed = exact == 100;
  o.detail = std::to_string(exact) + "/100 targets matched exactly on nodes k^2, k=1..11";
  return o;
}

Outcome grid(std::uint64_t seed) {
  Outcome o{2, "grid", true, {}, 0.0};
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> value(-10.0, 10.0);
  const auto k = fixtures::integer_grid(5);
  double worst = 0.0;
  std::size_t exact = 0;
  std::size_t full_rank = 0;
  for (int run = 0; run < 20; ++run) {
    std::vector<double> s(15);
    for (auto& v : s) v = value(rng);
    const MatchProblem<double> fp{MomentSequence<double>(2, 4, s), k, 25, Objective::AnySolution, seed};
    const auto fr = construct_signed_measure(fp);
    worst = std::max(worst, verify_match(fr, fp).max_rel_residual);
    const MatchProblem<Rational> ep{convert<Rational>(fp.target), k, 25, Objective::AnySolution, seed};
    const auto er = construct_signed_measure(ep);
    if (verify_match(er, ep).exact_zero) ++exact;
    if (fr.diagnostics.rank == 15 && er.diagnostics.rank == 15) ++full_rank;
  }
  o.passed = worst <= kFloatResidualTolerance && exact == 20 && full_rank == 20;
  o.detail = "float max rel residual " + fmt(worst) + ", exact " + std::to_string(exact) +
             "/20, rank 15 in " + std::to_string(full_rank) + "/20";
  return o;
}

Outcome strip(std::uint64_t) {
  Outcome o{3, "strip", true, {}, 0.0};
  const auto k = fixtures::unit_strip();
  const auto rep = classify(k);
  const auto x1 = Polynomial<Rational>::coordinate(2, 0);
  const bool verdict_ok = rep.verdict == AnalysisReport::Verdict::NotRepresentable &&
                          rep.witness && *rep.witness == x1;
  std::size_t bounded = 0;
  double worst_lambda = 0.0;
  std::size_t min_samples = SIZE_MAX;
  for (unsigned m = 1; m <= 10; ++m) {
    const auto g = growth_test(convert<double>(x1).pow(m), 0, k);
    worst_lambda = std::max(worst_lambda, g.lambda);
    min_samples = std::min(min_samples, g.samples_used);
    if (g.verdict == GrowthReport::Verdict::BoundedWitnessed && g.lambda <= 1.0 + 1e-12 &&
        g.samples_used >= 10000)
      ++bounded;
  }
  o.passed = verdict_ok && bounded == 10;
  o.detail = std::string("classify ") + to_string(rep.verdict) + " witness " +
             (rep.witness ? rep.witness->to_string() : "none") + "; bounded " +
             std::to_string(bounded) + "/10, max lambda " + fmt(worst_lambda) + ", samples " +
             std::to_string(min_samples);
  return o;
}

Outcome density(std::uint64_t) {
  Outcome o{4, "density", true, {}, 0.0};
  const auto pts = fixtures::cross_samples(10);
  const auto e = zariski_density_check(pts, 2, 2);
  bool vanishes = e.exact_certificate.has_value();
  bool proportional = false;
  if (e.exact_certificate) {
    for (const auto& p : pts) vanishes = vanishes && sgn(eval_poly(*e.exact_certificate, p)) == 0;
    const auto& terms = e.exact_certificate->terms();
    proportional = terms.size() == 1 && terms.begin()->first == MultiIndex({1, 1});
  }
  o.passed = e.rank == 5 && vanishes && proportional;
  o.detail = "rank " + std::to_string(e.rank) + "/6, certificate " +
             (e.exact_certificate ? e.exact_certificate->to_string() : "none");
  return o;
}

Outcome growth(std::uint64_t) {
  Outcome o{5, "growth", true, {}, 0.0};
  const auto k = fixtures::square_sequence();
  std::ostringstream detail;
  for (unsigned n = 0; n <= 3; ++n) {
    const auto nn = nn_dimension(k, n);
    const auto odd = growth_test(Polynomial<double>::monomial(MultiIndex({2 * n + 1}), 1.0), n, k);
    const auto even = growth_test(Polynomial<double>::monomial(MultiIndex({2 * n}), 1.0), n, k);
    const bool ok = nn.kind == NnDimension::Kind::Finite && nn.exact == 2 * n + 1 &&
                    odd.verdict == GrowthReport::Verdict::UnboundedWitnessed &&
                    even.verdict != GrowthReport::Verdict::UnboundedWitnessed;
    o.passed = o.passed && ok;
    detail << (n ? "; " : "") << "n=" << n << " dim " << (nn.exact ? std::to_string(*nn.exact) : "?")
           << " x^" << 2 * n + 1 << ' ' << to_string(odd.verdict) << " x^" << 2 * n << ' '
           << to_string(even.verdict);
  }
  o.detail = detail.str();
  return o;
}

Outcome classify_table(std::uint64_t) {
  Outcome o{6, "classify", true, {}, 0.0};
  std::size_t matched = 0;
  std::string misses;
  const auto table = fixtures::classifier_table();
  for (const auto& c : table) {
    const auto rep = classify(c.support);
    if (rep.verdict == c.expected) {
      ++matched;
    } else {
      misses += " " + c.name + " -> " + to_string(rep.verdict);
    }
  }
  o.passed = matched == table.size();
  o.detail = std::to_string(matched) + "/" + std::to_string(table.size()) + " fixtures match" + misses;
  return o;
}

Outcome tv(std::uint64_t seed) {
  Outcome o{7, "tv", true, {}, 0.0};
  std::vector<Rational> ten;
  for (long k = 1; k <= 10; ++k) ten.emplace_back(k);
  const MatchProblem<Rational> line{MomentSequence<Rational>(1, 1, {0, 1}),
                                    SupportSpec::grid({NodeSequence::list(ten)}), 10,
                                    Objective::MinTotalVariation, seed};
  const auto a = construct_signed_measure(line);
  const SignedAtomicMeasure<Rational> delta(2, {{{1, 1}, 1}});
  const MatchProblem<Rational> grid{moments_of(delta, 2), fixtures::integer_grid(5), 25,
                                    Objective::MinTotalVariation, seed};
  const auto b = construct_signed_measure(grid);
  const bool first = a.total_variation == 2;
  const bool second = b.total_variation == 1 && b.measure.size() == 1 &&
                      b.measure.atoms()[0].point == Point<Rational>{1, 1};
  o.passed = first && second;
  o.detail = "nodes {1..10}, target (0,1): TV " + format_rational(a.total_variation) +
             " (expected 2); delta at (1,1) on 5x5 grid: TV " + format_rational(b.total_variation) +
             " with " + std::to_string(b.measure.size()) + " atom(s)";
  return o;
}

Outcome roundtrip(std::uint64_t seed) {
  Outcome o{8, "roundtrip", true, {}, 0.0};
  std::mt19937_64 rng(seed);
  const auto supports = fixtures::round_trip_supports();
  std::uniform_int_distribution<unsigned> degree(1, 4);
  std::size_t ok = 0;
  double worst = 0.0;
  for (int run = 0; run < 200; ++run) {
    const auto& k = supports[static_cast<std::size_t>(run) % supports.size()];
    const auto mu = fixtures::random_measure(k, 8, rng);
    const unsigned n = degree(rng);
    const auto s = moments_of(mu, n);
    if (run % 2 == 0) {
      const MatchProblem<Rational> p{s, k, std::nullopt, Objective::AnySolution, seed};
      const auto r = construct_signed_measure(p);
      if (moments_of(r.measure, n) == s) ++ok;
    } else {
      const MatchProblem<double> p{convert<double>(s), k, std::nullopt, Objective::AnySolution, seed};
      const auto r = construct_signed_measure(p);
      const auto rep = verify_match(r, p);
      worst = std::max(worst, rep.max_rel_residual);
      if (rep.max_rel_residual <= kFloatResidualTolerance) ++ok;
    }
  }
  o.passed = ok == 200;
  o.detail = std::to_string(ok) + "/200 reproduced, worst float rel residual " + fmt(worst);
  return o;
}

}  // namespace

const std::vector<std::string>& names() {
  static const std::vector<std::string> n{"polya",    "grid",     "strip", "density",
                                          "growth",   "classify", "tv",    "roundtrip"};
  return n;
}

bool known(const std::string& name) {
  const auto& n = names();
  return std::find(n.begin(), n.end(), name) != n.end();
}

Outcome run(const std::string& name, std::uint64_t seed) {
  const auto start = Clock::now();
  Outcome o;
  try {
    if (name == "polya") o = polya(seed);
    else if (name == "grid") o = grid(seed);
    else if (name == "strip") o = strip(seed);
    else if (name == "density") o = density(seed);
    else if (name == "growth") o = growth(seed);
    else if (name == "classify") o = classify_table(seed);
    else if (name == "tv") o = tv(seed);
    else if (name == "roundtrip") o = roundtrip(seed);
    else throw Error("unknown demo '" + name + "'");
  } catch (const Error& e) {
    if (!known(name)) throw;
    o.criterion = static_cast<int>(std::find(names().begin(), names().end(), name) - names().begin()) + 1;
    o.name = name;
    o.passed = false;
    o.detail = std::string("error: ") + e.what();
  }
  o.seconds = std::chrono::duration<double>(Clock::now() - start).count();
  return o;
}

}  // namespace sigmoment::demo
