#include "sigmoment/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "sigmoment/linalg.hpp"

namespace sigmoment {

const char* to_string(GrowthReport::Verdict v) {
  switch (v) {
    case GrowthReport::Verdict::BoundedWitnessed: return "BoundedWitnessed";
    case GrowthReport::Verdict::UnboundedWitnessed: return "UnboundedWitnessed";
    case GrowthReport::Verdict::Inconclusive: return "Inconclusive";
  }
  return "?";
}

const char* to_string(NnDimension::Kind k) {
  switch (k) {
    case NnDimension::Kind::Finite: return "Finite";
    case NnDimension::Kind::Infinite: return "Infinite";
    case NnDimension::Kind::Unknown: return "Unknown";
  }
  return "?";
}

const char* to_string(ConditionStar::Kind k) {
  switch (k) {
    case ConditionStar::Kind::Holds: return "Holds";
    case ConditionStar::Kind::Fails: return "Fails";
    case ConditionStar::Kind::Unknown: return "Unknown";
  }
  return "?";
}

const char* to_string(AnalysisReport::Verdict v) {
  switch (v) {
    case AnalysisReport::Verdict::Representable: return "Representable";
    case AnalysisReport::Verdict::NotRepresentable: return "NotRepresentable";
    case AnalysisReport::Verdict::Unknown: return "Unknown";
  }
  return "?";
}

const char* to_string(AnalysisReport::WitnessKind w) {
  switch (w) {
    case AnalysisReport::WitnessKind::None: return "none";
    case AnalysisReport::WitnessKind::NullCertificate: return "null_certificate";
    case AnalysisReport::WitnessKind::BoundedPolynomial: return "bounded_polynomial";
    case AnalysisReport::WitnessKind::VanishingFamily: return "vanishing_family";
  }
  return "?";
}

// ------------------------------------------------------------ density check

namespace {

// Integer primitive form with a positive coefficient on the highest monomial.
Polynomial<Rational> primitive(std::size_t d, const std::vector<MultiIndex>& basis,
                               const std::vector<Rational>& coeffs) {
  mpz_class den_lcm = 1;
  mpz_class num_gcd = 0;
  for (const auto& c : coeffs) {
    if (sgn(c) == 0) continue;
    mpz_lcm(den_lcm.get_mpz_t(), den_lcm.get_mpz_t(), c.get_den_mpz_t());
    mpz_gcd(num_gcd.get_mpz_t(), num_gcd.get_mpz_t(), c.get_num_mpz_t());
  }
  Rational factor = num_gcd == 0 ? Rational(1) : Rational(den_lcm, num_gcd);
  factor.canonicalize();
  for (std::size_t k = coeffs.size(); k-- > 0;) {
    if (sgn(coeffs[k]) != 0) {
      if (sgn(coeffs[k]) < 0) factor = -factor;
      break;
    }
  }
  typename Polynomial<Rational>::Terms terms;
  for (std::size_t k = 0; k < coeffs.size(); ++k) {
    if (sgn(coeffs[k]) == 0) continue;
    Rational c = coeffs[k] * factor;
    c.canonicalize();
    terms.emplace(basis[k], c);
  }
  return Polynomial<Rational>(d, std::move(terms));
}

Polynomial<double> normalized_float(std::size_t d, const std::vector<MultiIndex>& basis,
                                    std::vector<double> coeffs) {
  double big = 0.0;
  for (double c : coeffs) big = std::max(big, std::fabs(c));
  if (big == 0.0) return Polynomial<double>(d);
  double sign = 1.0;
  for (std::size_t k = coeffs.size(); k-- > 0;) {
    if (std::fabs(coeffs[k]) > 1e-12 * big) {
      sign = coeffs[k] < 0 ? -1.0 : 1.0;
      break;
    }
  }
  typename Polynomial<double>::Terms terms;
  for (std::size_t k = 0; k < coeffs.size(); ++k) {
    if (std::fabs(coeffs[k]) <= 1e-12 * big) continue;
    terms.emplace(basis[k], sign * coeffs[k] / big);
  }
  return Polynomial<double>(d, std::move(terms));
}

// Rank of every column prefix of V in one elimination: pivots are chosen
// column by column, so the rank of the first c columns is the number of
// pivot columns below c.
std::vector<std::size_t> exact_prefix_ranks(const Matrix<Rational>& v,
                                            const std::vector<std::size_t>& prefixes) {
  const auto ech = linalg::bareiss_echelon(v);
  std::vector<std::size_t> out;
  for (std::size_t c : prefixes) {
    out.push_back(static_cast<std::size_t>(
        std::count_if(ech.pivot_columns.begin(), ech.pivot_columns.end(),
                      [c](std::size_t p) { return p < c; })));
  }
  return out;
}

Matrix<double> column_prefix(const Matrix<double>& v, std::size_t cols) {
  Matrix<double> out(v.rows(), cols);
  for (std::size_t i = 0; i < v.rows(); ++i)
    for (std::size_t j = 0; j < cols; ++j) out(i, j) = v(i, j);
  return out;
}

// Columns scaled to unit 2-norm; returns the scale factors.
std::vector<double> normalize_columns(Matrix<double>& v) {
  std::vector<double> norms(v.cols(), 0.0);
  for (std::size_t j = 0; j < v.cols(); ++j) {
    double s = 0.0;
    for (std::size_t i = 0; i < v.rows(); ++i) s += v(i, j) * v(i, j);
    norms[j] = s > 0.0 ? std::sqrt(s) : 1.0;
    for (std::size_t i = 0; i < v.rows(); ++i) v(i, j) /= norms[j];
  }
  return norms;
}

}  // namespace

EvaluationMatrix zariski_density_check(const std::vector<Point<Rational>>& points,
                                       std::size_t dimension, unsigned degree,
                                       NumericMode mode) {
  for (const auto& p : points)
    if (p.size() != dimension) throw DimensionMismatch(dimension, p.size());
  EvaluationMatrix e;
  e.mode = mode;
  e.degree = degree;
  e.points = points;
  e.basis = enumerate_basis(dimension, degree);
  if (mode == NumericMode::Exact) {
    const auto v = kernels::evaluation_matrix(points, e.basis);
    const auto kernel = linalg::exact_kernel(v);
    e.rank = e.basis.size() - kernel.size();
    // The first free column gives a certificate of least possible degree.
    if (!kernel.empty()) e.exact_certificate = primitive(dimension, e.basis, kernel.front());
  } else {
    std::vector<Point<double>> fp;
    for (const auto& p : points) fp.push_back(point_cast<double>(p));
    auto v = kernels::evaluation_matrix(fp, e.basis);
    const auto norms = normalize_columns(v);
    const auto svd = linalg::float_rank(v, kFloatRankCutoff);
    e.rank = svd.rank;
    e.singular_values = svd.singular_values;
    if (e.rank < e.basis.size()) {
      std::vector<double> c = svd.weakest_direction;
      for (std::size_t j = 0; j < c.size(); ++j) c[j] /= norms[j];
      e.float_certificate = normalized_float(dimension, e.basis, std::move(c));
    }
  }
  return e;
}

EvaluationMatrix zariski_density_check(const SupportSpec& k, unsigned degree,
                                       std::size_t sample_count, NumericMode mode) {
  return zariski_density_check(sample(k, sample_count), k.dimension(), degree, mode);
}

// -------------------------------------------------------------- growth test

namespace {

std::vector<std::vector<Point<double>>> growth_stages(const SupportSpec& k,
                                                      const GrowthOptions& opt) {
  std::vector<std::vector<Point<double>>> stages;
  for (std::size_t axis = 0; axis < k.dimension(); ++axis) {
    const auto q = escape_sequences(k, axis, opt.bases_per_axis, opt.stages, EscapeRate::Geometric);
    if (q.status != EscapeQuery::Status::Available) continue;
    for (const auto& seq : q.sequences) {
      if (!escapes_to_infinity(seq.values)) continue;
      if (stages.size() < seq.length()) stages.resize(seq.length());
      for (std::size_t s = 0; s < seq.length(); ++s)
        stages[s].push_back(point_cast<double>(seq.point(s)));
    }
  }
  return stages;
}

double norm2(const Point<double>& x) {
  double s = 0.0;
  for (double v : x) s += v * v;
  return std::sqrt(s);
}

}  // namespace

GrowthReport growth_test(const Polynomial<double>& p, unsigned n, const SupportSpec& k,
                         const GrowthOptions& options) {
  if (p.dimension() != k.dimension())
    throw DimensionMismatch(k.dimension(), p.dimension());
  if (options.stages < 4) throw Error("growth test needs at least 4 stages");
  GrowthReport r;
  r.polynomial = p;
  r.weight_exponent = n;

  auto stages = growth_stages(k, options);
  bool bounded_support = false;
  if (stages.empty()) {
    if (boundedness(k).bounded != BoundednessInfo::Answer::Yes) {
      r.reason = "no escape sequences are available for this support";
      return r;
    }
    bounded_support = true;
    const std::size_t per_stage = std::max<std::size_t>(1, options.bases_per_axis);
    const auto pts = sample_up_to(k, options.stages * per_stage);
    for (std::size_t i = 0; i < pts.size(); ++i) {
      if (i % per_stage == 0) stages.emplace_back();
      stages.back().push_back(point_cast<double>(pts[i]));
    }
  }

  for (const auto& stage : stages) {
    const auto ratios = kernels::growth_ratios(p, n, stage);
    GrowthStage g;
    for (std::size_t i = 0; i < stage.size(); ++i) {
      g.radius = std::max(g.radius, norm2(stage[i]));
      g.max_ratio = std::max(g.max_ratio, ratios[i]);
    }
    r.samples_used += stage.size();
    r.lambda = std::max(r.lambda, g.max_ratio);
    r.trace.push_back(g);
  }

  if (bounded_support) {
    r.verdict = GrowthReport::Verdict::BoundedWitnessed;
    r.reason = "support is bounded; observed supremum over " + std::to_string(r.samples_used) +
               " samples";
    return r;
  }

  const std::size_t s = r.trace.size();
  const std::size_t q0 = (3 * s) / 4;
  const auto& first = r.trace[q0];
  const auto& last = r.trace.back();
  double first_positive = 0.0;
  for (const auto& g : r.trace) {
    if (g.max_ratio > 0.0) {
      first_positive = g.max_ratio;
      break;
    }
  }
  bool increasing = true;
  for (std::size_t i = q0 + 1; i < s; ++i)
    if (!(r.trace[i].max_ratio > r.trace[i - 1].max_ratio)) increasing = false;

  if (first.max_ratio > 0.0 && last.max_ratio > 0.0 && last.radius > first.radius) {
    r.tail_slope =
        std::log(last.max_ratio / first.max_ratio) / std::log(last.radius / first.radius);
  } else if (first.max_ratio == 0.0 && last.max_ratio > 0.0) {
    r.tail_slope = std::numeric_limits<double>::infinity();
  } else {
    r.tail_slope = 0.0;
  }

  if (last.max_ratio > kBlowUpThreshold && first_positive > 0.0 &&
      last.max_ratio > kBlowUpThreshold * first_positive && increasing) {
    r.verdict = GrowthReport::Verdict::UnboundedWitnessed;
    r.reason = "ratio grows from " + std::to_string(first_positive) + " to " +
               std::to_string(last.max_ratio) + " and increases over the last quarter";
  } else if (r.tail_slope <= kBoundedSlope) {
    r.verdict = GrowthReport::Verdict::BoundedWitnessed;
    r.reason = "ratio trace flat over the last quarter (log-log slope " +
               std::to_string(r.tail_slope) + ")";
  } else {
    r.verdict = GrowthReport::Verdict::Inconclusive;
    r.reason = "ratio trace neither flat nor clearly blowing up (log-log slope " +
               std::to_string(r.tail_slope) + ")";
  }
  return r;
}

// --------------------------------------------------------- condition (*)

namespace {

std::size_t distinct_bases(const EscapeQuery& q, std::vector<Point<Rational>>* out) {
  std::set<std::vector<Rational>> seen;
  for (const auto& seq : q.sequences) {
    if (!escapes_to_infinity(seq.values)) continue;
    if (seen.insert(seq.base).second && out) out->push_back(seq.base);
  }
  return seen.size();
}

ConditionStar standard_frame(const SupportSpec& k, unsigned degree) {
  ConditionStar cs;
  const std::size_t d = k.dimension();
  const std::size_t needed = d == 2 ? 8 : basis_size(d - 1, 2 * degree);
  bool unknown = false;
  for (std::size_t axis = 0; axis < d; ++axis) {
    AxisEvidence ev;
    ev.axis = axis;
    ev.required_rank = d == 2 ? 0 : needed;
    const auto q = escape_sequences(k, axis, needed, 16, EscapeRate::Linear);
    ev.status = q.status;
    ev.infinite_bases = q.infinite_bases;
    ev.note = q.reason;
    if (q.status == EscapeQuery::Status::Unknown) {
      unknown = true;
      cs.axes.push_back(ev);
      continue;
    }
    std::vector<Point<Rational>> bases;
    ev.bases = q.status == EscapeQuery::Status::Available ? distinct_bases(q, &bases) : 0;
    if (ev.bases == 0) {
      ev.status = EscapeQuery::Status::None;
      if (ev.note.empty()) ev.note = "no escaping sequence along this axis";
    } else if (d == 2) {
      ev.holds = ev.infinite_bases;
      if (!ev.holds) ev.note = "only finitely many base points escape along this axis";
    } else if (bases.size() < needed) {
      ev.note = "only " + std::to_string(bases.size()) + " base points escape along this axis";
    } else {
      const auto v = kernels::evaluation_matrix(bases, enumerate_basis(d - 1, 2 * degree));
      ev.base_rank = linalg::exact_rank(v);
      ev.holds = *ev.base_rank == needed;
      ev.note = ev.holds ? "base points are dense up to degree " + std::to_string(2 * degree)
                         : "base points lie on an algebraic set of degree <= " +
                               std::to_string(2 * degree);
    }
    if (!ev.holds && !cs.failing_axis) cs.failing_axis = axis;
    cs.axes.push_back(ev);
  }
  if (cs.failing_axis) {
    cs.kind = ConditionStar::Kind::Fails;
    cs.reason = "escape family along x" + std::to_string(*cs.failing_axis + 1) +
                " is not Zariski dense";
  } else if (unknown) {
    cs.kind = ConditionStar::Kind::Unknown;
    cs.reason = "escape families are not known for every axis";
  } else {
    cs.kind = ConditionStar::Kind::Holds;
    cs.reason = "every axis has a Zariski dense family of escaping base points";
  }
  return cs;
}

}  // namespace

ConditionStar condition_star_check(const SupportSpec& k, unsigned up_to_degree) {
  if (k.dimension() == 1) {
    ConditionStar cs;
    cs.reason = "condition (*) concerns d >= 2; use boundedness for d = 1";
    return cs;
  }
  auto cs = standard_frame(k, up_to_degree);
  if (cs.kind != ConditionStar::Kind::Holds && std::holds_alternative<AffineCone>(k.shape())) {
    // An affine bijection maps the cone onto the orthant and preserves both
    // degrees and the conclusion, so the check may run in cone coordinates.
    auto frame = standard_frame(SupportSpec::orthant(k.dimension()), up_to_degree);
    if (frame.kind == ConditionStar::Kind::Holds) {
      frame.frame = "cone";
      frame.reason += " (in cone coordinates)";
      return frame;
    }
  }
  return cs;
}

// ------------------------------------------------------------ N_n dimension

namespace {

Polynomial<Rational> vanishing_product(const UnionOfRays& u, std::size_t d) {
  auto q = Polynomial<Rational>::constant(d, Rational(1));
  for (const auto& ray : u.rays) {
    std::size_t i0 = 0;
    while (sgn(ray.direction[i0]) == 0) ++i0;
    const std::size_t i1 = i0 == 0 ? 1 : 0;
    // l(x) = v_{i0} (x_{i1} - o_{i1}) - v_{i1} (x_{i0} - o_{i0}) vanishes on the ray.
    auto shifted = [&](std::size_t i) {
      return Polynomial<Rational>::coordinate(d, i) -
             Polynomial<Rational>::constant(d, ray.origin[i]);
    };
    auto l = shifted(i1).scaled(ray.direction[i0]) - shifted(i0).scaled(ray.direction[i1]);
    q = q * l;
  }
  return q;
}

}  // namespace

NnDimension nn_dimension(const SupportSpec& k, unsigned n) {
  NnDimension r;
  const std::size_t d = k.dimension();
  const auto info = boundedness(k);

  if (d == 1) {
    if (info.bounded == BoundednessInfo::Answer::No) {
      r.kind = NnDimension::Kind::Finite;
      r.lower_bound = r.upper_bound = 2 * n + 1;
      r.exact = 2 * n + 1;
      r.basis_description = "1, x, ..., x^" + std::to_string(2 * n);
      r.reason = "K is unbounded, so |p| <= C (1 + x^2)^n forces deg p <= 2n";
    } else if (info.bounded == BoundednessInfo::Answer::Yes) {
      r.kind = NnDimension::Kind::Infinite;
      r.witness_generator = Polynomial<Rational>::coordinate(1, 0);
      r.reason = "K is bounded, so every power x^m is bounded on K";
    } else {
      r.reason = "boundedness of K is undetermined";
    }
    return r;
  }

  if (info.bounded_axis) {
    r.kind = NnDimension::Kind::Infinite;
    r.witness_generator = Polynomial<Rational>::coordinate(d, *info.bounded_axis);
    r.reason = "x" + std::to_string(*info.bounded_axis + 1) +
               " is bounded on K, so all its powers are";
    return r;
  }
  if (const auto* u = std::get_if<UnionOfRays>(&k.shape())) {
    r.kind = NnDimension::Kind::Infinite;
    r.witness_generator = vanishing_product(*u, d);
    r.witness_is_power_family = false;
    r.reason = "the product of linear forms vanishing on each ray kills K, so q * x1^m lies in N_0";
    return r;
  }

  const auto cs = condition_star_check(k, n);
  if (cs.kind == ConditionStar::Kind::Holds) {
    r.kind = NnDimension::Kind::Finite;
    r.lower_bound = basis_size(d, 2 * n);
    r.upper_bound = 1;
    for (std::size_t j = 0; j < d; ++j) r.upper_bound *= 2 * n + 1;
    const bool exact_known = std::holds_alternative<FullSpace>(k.shape()) ||
                             std::holds_alternative<Orthant>(k.shape()) ||
                             std::holds_alternative<AffineCone>(k.shape());
    if (exact_known) {
      r.exact = r.lower_bound;
      r.upper_bound = r.lower_bound;
      r.basis_description = "monomials of total degree <= " + std::to_string(2 * n);
    } else {
      r.basis_description = "contained in monomials of degree <= " + std::to_string(2 * n) +
                            " in each variable";
    }
    r.reason = "condition (*) holds: " + cs.reason;
    return r;
  }
  r.reason = "condition (*) " + std::string(to_string(cs.kind)) + ": " + cs.reason;
  return r;
}

// ----------------------------------------------------------------- classify

AnalysisReport classify(const SupportSpec& k, unsigned up_to_degree, NumericMode mode) {
  using V = AnalysisReport::Verdict;
  using W = AnalysisReport::WitnessKind;
  AnalysisReport rep;
  rep.degree_checked = up_to_degree;
  rep.mode = mode;
  const std::size_t d = k.dimension();

  // (a) Zariski density, degree by degree.
  const auto pts = sample_up_to(k, 2 * basis_size(d, up_to_degree));
  rep.density_samples = pts.size();
  std::vector<std::size_t> prefixes;
  for (unsigned deg = 0; deg <= up_to_degree; ++deg) prefixes.push_back(basis_size(d, deg));
  std::vector<std::size_t> ranks;
  const auto basis = enumerate_basis(d, up_to_degree);
  if (mode == NumericMode::Exact) {
    ranks = exact_prefix_ranks(kernels::evaluation_matrix(pts, basis), prefixes);
  } else {
    std::vector<Point<double>> fp;
    for (const auto& p : pts) fp.push_back(point_cast<double>(p));
    const auto v = kernels::evaluation_matrix(fp, basis);
    for (std::size_t c : prefixes) {
      auto sub = column_prefix(v, c);
      normalize_columns(sub);
      ranks.push_back(pts.empty() ? 0 : linalg::float_rank(sub, kFloatRankCutoff).rank);
    }
  }
  for (unsigned deg = 1; deg <= up_to_degree; ++deg) {
    rep.ranks.push_back({deg, ranks[deg], prefixes[deg]});
    if (ranks[deg] < prefixes[deg]) {
      const auto e = zariski_density_check(pts, d, deg, mode);
      rep.verdict = V::NotRepresentable;
      rep.witness_kind = W::NullCertificate;
      rep.witness = e.exact_certificate;
      rep.float_witness = e.float_certificate;
      rep.witness_family = "vanishes on K; L(p^2) = 0 is impossible for a positive part";
      rep.notes.push_back("evaluation matrix at degree " + std::to_string(deg) + " has rank " +
                          std::to_string(ranks[deg]) + " < " + std::to_string(prefixes[deg]) +
                          " on " + std::to_string(pts.size()) + " samples");
      return rep;
    }
  }
  rep.notes.push_back("evaluation matrix has full rank up to degree " +
                      std::to_string(up_to_degree));

  // (b) One dimension: representable exactly when K is unbounded.
  if (d == 1) {
    const auto info = boundedness(k);
    if (info.bounded == BoundednessInfo::Answer::No) {
      rep.verdict = V::Representable;
      rep.sufficient_condition = "d=1 unbounded";
      rep.nn0 = nn_dimension(k, 0);
    } else if (info.bounded == BoundednessInfo::Answer::Yes) {
      rep.verdict = V::NotRepresentable;
      rep.witness_kind = W::BoundedPolynomial;
      rep.witness = Polynomial<Rational>::coordinate(1, 0);
      rep.witness_family = "x^m, m >= 0";
      rep.nn0 = nn_dimension(k, 0);
      rep.witness_growth = growth_test(Polynomial<double>::coordinate(1, 0), 0, k);
    } else {
      rep.notes.push_back("boundedness of K could not be decided");
    }
    return rep;
  }

  // (c) Sufficient conditions in d >= 2.
  if (k.certified_representable()) {
    rep.verdict = V::Representable;
    rep.sufficient_condition = "user-certified";
    return rep;
  }
  rep.condition_star = condition_star_check(k, up_to_degree);
  if (rep.condition_star->kind == ConditionStar::Kind::Holds) {
    rep.verdict = V::Representable;
    rep.sufficient_condition = "condition (*)";
    return rep;
  }

  // (d) Infinite-dimensional N_0 rules representability out.
  rep.nn0 = nn_dimension(k, 0);
  if (rep.nn0->kind == NnDimension::Kind::Infinite && rep.nn0->witness_generator) {
    rep.verdict = V::NotRepresentable;
    rep.witness = rep.nn0->witness_generator;
    if (rep.nn0->witness_is_power_family) {
      rep.witness_kind = W::BoundedPolynomial;
      rep.witness_family = "(" + rep.witness->to_string() + ")^m, m >= 0";
    } else {
      rep.witness_kind = W::VanishingFamily;
      rep.witness_family = "(" + rep.witness->to_string() + ") * x1^m, m >= 0";
    }
    rep.witness_growth = growth_test(convert<double>(*rep.witness), 0, k);
    return rep;
  }

  rep.notes.push_back("no sufficient condition or obstruction could be established");
  return rep;
}

}  // namespace sigmoment
