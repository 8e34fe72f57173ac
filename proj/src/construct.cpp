#include "sigmoment/construct.hpp"

#include <algorithm>
#include <cmath>

#include "sigmoment/analysis.hpp"
#include "sigmoment/kernels.hpp"
#include "sigmoment/linalg.hpp"

namespace sigmoment {

const char* to_string(Objective o) {
  return o == Objective::AnySolution ? "any" : "min-tv";
}

Objective parse_objective(std::string_view text) {
  if (text == "any") return Objective::AnySolution;
  if (text == "min-tv") return Objective::MinTotalVariation;
  throw Error("unknown objective '" + std::string(text) + "' (expected any or min-tv)");
}

RankDeficientError::RankDeficientError(std::string message, std::size_t rank, std::size_t required,
                                       std::optional<Polynomial<Rational>> exact_certificate,
                                       std::optional<Polynomial<double>> float_certificate)
    : Error(std::move(message)),
      rank_(rank),
      required_(required),
      exact_(std::move(exact_certificate)),
      float_(std::move(float_certificate)) {}

SingularSystemError::SingularSystemError(std::size_t first, std::size_t second)
    : Error("nodes " + std::to_string(first) + " and " + std::to_string(second) +
            " coincide; the Vandermonde system is singular"),
      first_(first),
      second_(second) {}

namespace {

template <typename T>
bool all_zero(const std::vector<T>& v) {
  return std::all_of(v.begin(), v.end(), [](const T& x) { return ScalarTraits<T>::is_zero(x); });
}

// ---------------------------------------------------------------- scaling

// Affine map y = (x - center) / half_width taking the bounding box of the
// nodes onto [-1, 1]^d.
struct NodeScaling {
  std::vector<Rational> center;
  std::vector<Rational> half_width;

  static NodeScaling fit(const std::vector<Point<Rational>>& nodes, std::size_t d) {
    NodeScaling s;
    for (std::size_t j = 0; j < d; ++j) {
      Rational lo = nodes.front()[j];
      Rational hi = lo;
      for (const auto& x : nodes) {
        lo = std::min(lo, x[j]);
        hi = std::max(hi, x[j]);
      }
      Rational c = (lo + hi) / 2;
      Rational h = (hi - lo) / 2;
      c.canonicalize();
      h.canonicalize();
      if (sgn(h) == 0) h = 1;
      s.center.push_back(c);
      s.half_width.push_back(h);
    }
    return s;
  }

  Point<double> apply(const Point<Rational>& x) const {
    Point<double> y;
    for (std::size_t j = 0; j < x.size(); ++j) {
      Rational v = (x[j] - center[j]) / half_width[j];
      y.push_back(v.get_d());
    }
    return y;
  }

  // Moments of the pushed-forward measure:
  // s'_a = sum_{b <= a} prod_j C(a_j, b_j) (-c_j)^(a_j - b_j) / h_j^a_j  s_b
  std::vector<long double> transform(const std::vector<MultiIndex>& basis,
                                     const std::vector<long double>& s) const {
    const BasisIndex index(basis);
    std::vector<long double> out(basis.size(), 0.0L);
    for (std::size_t k = 0; k < basis.size(); ++k) {
      const auto& a = basis[k];
      // Enumerate every b <= a componentwise.
      std::vector<unsigned> b(a.dimension(), 0);
      for (;;) {
        Rational coef = 1;
        for (std::size_t j = 0; j < a.dimension(); ++j) {
          coef *= Rational(static_cast<unsigned long>(binomial(a[j], b[j])));
          coef *= ipow(Rational(-center[j]), a[j] - b[j]);
          coef /= ipow(half_width[j], a[j]);
        }
        out[k] += static_cast<long double>(coef.get_d()) * s[index.find(MultiIndex(b))];
        std::size_t j = 0;
        while (j < b.size() && b[j] == a[j]) b[j++] = 0;
        if (j == b.size()) break;
        ++b[j];
      }
    }
    return out;
  }
};

// rows = basis, cols = nodes: A(k, i) = x_i^alpha_k
template <typename T>
Matrix<T> moment_matrix(const std::vector<Point<T>>& nodes, const std::vector<MultiIndex>& basis) {
  return kernels::evaluation_matrix(nodes, basis).transposed();
}

std::vector<long double> extended_residual(const std::vector<Point<Rational>>& nodes,
                                           const std::vector<MultiIndex>& basis,
                                           const std::vector<long double>& target,
                                           const std::vector<double>& weights) {
  std::vector<long double> r(target);
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (weights[i] == 0.0) continue;
    std::vector<long double> x;
    for (const auto& v : nodes[i]) x.push_back(static_cast<long double>(v.get_d()));
    for (std::size_t k = 0; k < basis.size(); ++k) {
      long double m = 1.0L;
      for (std::size_t j = 0; j < x.size(); ++j)
        for (unsigned e = 0; e < basis[k][j]; ++e) m *= x[j];
      r[k] -= static_cast<long double>(weights[i]) * m;
    }
  }
  return r;
}

std::vector<double> to_double(const std::vector<long double>& v) {
  return std::vector<double>(v.begin(), v.end());
}

// Least-norm weights on the scaled nodes with two rounds of refinement
// against the residual in the original coordinates. `active` restricts the
// correction to a subset of nodes (all when empty).
void refine(const std::vector<Point<Rational>>& nodes, const std::vector<MultiIndex>& basis,
            const NodeScaling& scaling, const Matrix<double>& scaled,
            const std::vector<long double>& target, std::vector<double>& w,
            const std::vector<std::size_t>& active) {
  for (int round = 0; round < 2; ++round) {
    const auto r = extended_residual(nodes, basis, target, w);
    const auto rs = to_double(scaling.transform(basis, r));
    if (active.empty()) {
      const auto delta = linalg::least_norm_solve(scaled, rs);
      for (std::size_t i = 0; i < w.size(); ++i) w[i] += delta[i];
    } else {
      Matrix<double> sub(scaled.rows(), active.size());
      for (std::size_t k = 0; k < scaled.rows(); ++k)
        for (std::size_t i = 0; i < active.size(); ++i) sub(k, i) = scaled(k, active[i]);
      const auto delta = linalg::least_norm_solve(sub, rs);
      for (std::size_t i = 0; i < active.size(); ++i) w[active[i]] += delta[i];
    }
  }
}

struct FloatSystem {
  NodeScaling scaling;
  Matrix<double> scaled;  // basis x nodes in scaled coordinates
  std::vector<long double> target;
  std::vector<double> scaled_target;
};

template <typename T>
FloatSystem float_system(const std::vector<Point<Rational>>& nodes,
                         const std::vector<MultiIndex>& basis, const std::vector<T>& s,
                         std::size_t d) {
  FloatSystem f;
  f.scaling = NodeScaling::fit(nodes, d);
  std::vector<Point<double>> y;
  for (const auto& x : nodes) y.push_back(f.scaling.apply(x));
  f.scaled = moment_matrix(y, basis);
  for (const auto& v : s) f.target.push_back(static_cast<long double>(scalar_cast<double>(v)));
  f.scaled_target = to_double(f.scaling.transform(basis, f.target));
  return f;
}

// ------------------------------------------------------------- assembling

template <typename T>
MatchResult<T> assemble(const std::vector<Point<Rational>>& nodes, const std::vector<T>& weights,
                        const MomentSequence<T>& target, MatchDiagnostics diag) {
  const std::size_t d = target.dimension();
  std::vector<Atom<T>> atoms;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (ScalarTraits<T>::is_zero(weights[i])) continue;
    atoms.push_back({point_cast<T>(nodes[i]), weights[i]});
  }
  MatchResult<T> r{SignedAtomicMeasure<T>(d, std::move(atoms)), {}, {}, diag};
  const auto m = moments_of(r.measure, target.max_degree());
  double smax = 0.0;
  for (std::size_t k = 0; k < target.size(); ++k) {
    T diff = target[k] - m[k];
    r.residuals.push_back(diff);
    r.diagnostics.max_abs_residual =
        std::max(r.diagnostics.max_abs_residual, std::fabs(scalar_cast<double>(diff)));
    smax = std::max(smax, std::fabs(scalar_cast<double>(target[k])));
  }
  r.diagnostics.max_rel_residual =
      smax > 0.0 ? r.diagnostics.max_abs_residual / smax : r.diagnostics.max_abs_residual;
  r.total_variation = r.measure.total_variation();
  if constexpr (ScalarTraits<T>::exact) {
    r.diagnostics.contract_met = all_zero(r.residuals);
  } else {
    r.diagnostics.contract_met = r.diagnostics.max_rel_residual <= kFloatResidualTolerance;
  }
  return r;
}

double scaled_condition(const Matrix<double>& scaled) {
  return linalg::condition_estimate(linalg::float_rank(scaled, kFloatRankCutoff));
}

// ---------------------------------------------------------------- solvers

template <typename T>
std::vector<T> any_solution(const std::vector<Point<Rational>>& nodes,
                            const std::vector<MultiIndex>& basis, const MomentSequence<T>& target,
                            MatchDiagnostics& diag) {
  const FloatSystem fs = float_system(nodes, basis, target.values(), target.dimension());
  diag.condition = scaled_condition(fs.scaled);
  if constexpr (ScalarTraits<T>::exact) {
    diag.solver = "exact elimination";
    auto w = linalg::exact_solve(moment_matrix(nodes, basis), target.values());
    if (!w) throw Error("internal: full-rank system reported inconsistent");
    return *w;
  } else {
    diag.solver = "least-norm (scaled nodes, refined)";
    auto w = linalg::least_norm_solve(fs.scaled, fs.scaled_target);
    refine(nodes, basis, fs.scaling, fs.scaled, fs.target, w, {});
    return w;
  }
}

template <typename T>
std::vector<T> min_total_variation(const std::vector<Point<Rational>>& nodes,
                                   const std::vector<MultiIndex>& basis,
                                   const MomentSequence<T>& target, MatchDiagnostics& diag) {
  const std::size_t n = nodes.size();
  const std::size_t m = basis.size();
  const FloatSystem fs = float_system(nodes, basis, target.values(), target.dimension());
  diag.condition = scaled_condition(fs.scaled);

  const bool exact_lp = ScalarTraits<T>::exact || 2 * n <= kExactLpVariableLimit;
  if (exact_lp) {
    diag.solver = "exact simplex";
    const auto v = moment_matrix(nodes, basis);
    Matrix<Rational> a(m, 2 * n);
    for (std::size_t k = 0; k < m; ++k)
      for (std::size_t i = 0; i < n; ++i) {
        a(k, i) = v(k, i);
        a(k, n + i) = -v(k, i);
      }
    std::vector<Rational> b;
    for (const auto& s : target.values()) b.push_back(scalar_cast<Rational>(s));
    const std::vector<Rational> c(2 * n, Rational(1));
    const auto res = lp::minimize(a, b, c);
    diag.lp_iterations = res.iterations;
    if (res.status != lp::Status::Optimal)
      throw Error(std::string("internal: LP on a full-rank system returned ") +
                  lp::to_string(res.status));
    std::vector<T> w;
    for (std::size_t i = 0; i < n; ++i) {
      Rational wi = res.x[i] - res.x[n + i];
      w.push_back(scalar_cast<T>(wi));
    }
    if constexpr (!ScalarTraits<T>::exact) {
      std::vector<std::size_t> active;
      for (std::size_t i = 0; i < n; ++i)
        if (w[i] != 0.0) active.push_back(i);
      if (!active.empty()) refine(nodes, basis, fs.scaling, fs.scaled, fs.target, w, active);
    }
    return w;
  } else {
    diag.solver = "float simplex (scaled nodes)";
    Matrix<double> a(m, 2 * n);
    for (std::size_t k = 0; k < m; ++k)
      for (std::size_t i = 0; i < n; ++i) {
        a(k, i) = fs.scaled(k, i);
        a(k, n + i) = -fs.scaled(k, i);
      }
    const std::vector<double> c(2 * n, 1.0);
    const auto res = lp::minimize(a, fs.scaled_target, c, kFloatLpTolerance);
    diag.lp_iterations = res.iterations;
    if (res.status != lp::Status::Optimal)
      throw Error(std::string("internal: LP on a full-rank system returned ") +
                  lp::to_string(res.status));
    std::vector<double> w(n);
    std::vector<std::size_t> active;
    for (std::size_t i = 0; i < n; ++i) {
      w[i] = res.x[i] - res.x[n + i];
      if (w[i] != 0.0) active.push_back(i);
    }
    if (!active.empty()) refine(nodes, basis, fs.scaling, fs.scaled, fs.target, w, active);
    if constexpr (ScalarTraits<T>::exact) {
      throw Error("internal: exact mode never takes the float simplex");
    } else {
      return w;
    }
  }
}

// Rank of the node set against the basis: exact elimination in exact mode,
// SVD of the scaled matrix in float mode.
template <typename T>
std::size_t node_rank(const std::vector<Point<Rational>>& nodes,
                      const std::vector<MultiIndex>& basis, std::size_t d) {
  if (nodes.empty()) return 0;
  if constexpr (ScalarTraits<T>::exact) {
    return linalg::exact_rank(kernels::evaluation_matrix(nodes, basis));
  } else {
    const auto scaling = NodeScaling::fit(nodes, d);
    std::vector<Point<double>> y;
    for (const auto& x : nodes) y.push_back(scaling.apply(x));
    return linalg::float_rank(kernels::evaluation_matrix(y, basis), kFloatRankCutoff).rank;
  }
}

}  // namespace

// -------------------------------------------------------------------- API

template <typename T>
MatchResult<T> polya_construct_1d(const MomentSequence<T>& target, const std::vector<T>& nodes) {
  if (target.dimension() != 1) throw DimensionMismatch(1, target.dimension());
  const std::size_t count = target.max_degree() + 1;
  if (nodes.size() < count)
    throw Error("need " + std::to_string(count) + " nodes for degree " +
                std::to_string(target.max_degree()) + ", got " + std::to_string(nodes.size()));
  std::vector<Point<Rational>> used;
  for (std::size_t i = 0; i < count; ++i) {
    Point<Rational> x{scalar_cast<Rational>(nodes[i])};
    for (std::size_t j = 0; j < i; ++j)
      if (used[j] == x) throw SingularSystemError(j, i);
    used.push_back(std::move(x));
  }

  MatchDiagnostics diag;
  diag.mode = ScalarTraits<T>::exact ? NumericMode::Exact : NumericMode::Float;
  diag.degree = target.max_degree();
  diag.nodes = count;
  diag.required_rank = count;
  diag.rank = count;  // distinct nodes give an invertible Vandermonde matrix
  diag.attempts = 1;
  diag.sampling = "prefix";
  if (all_zero(target.values())) {
    diag.solver = "none (zero target)";
    return assemble(used, std::vector<T>(count, ScalarTraits<T>::zero()), target, diag);
  }
  const auto basis = target.basis();
  return assemble(used, any_solution(used, basis, target, diag), target, diag);
}

template <typename T>
MatchResult<T> polya_construct_1d(const MomentSequence<T>& target, const NodeSequence& nodes) {
  const std::size_t count = target.max_degree() + 1;
  const std::size_t avail = nodes.available().value_or(count);
  std::vector<T> values;
  for (std::size_t k = 0; k < std::min(count, avail); ++k)
    values.push_back(scalar_cast<T>(nodes.value(k)));
  return polya_construct_1d(target, values);
}

template <typename T>
MatchResult<T> construct_signed_measure(const MatchProblem<T>& problem) {
  const auto& target = problem.target;
  const std::size_t d = target.dimension();
  if (problem.support.dimension() != d) throw DimensionMismatch(d, problem.support.dimension());
  const auto& basis = target.basis();
  const std::size_t m = basis.size();
  const std::size_t budget =
      problem.node_budget.value_or(problem.objective == Objective::AnySolution ? m : 2 * m);
  if (budget < m)
    throw Error("node budget " + std::to_string(budget) + " is below the " + std::to_string(m) +
                " moments to match");

  MatchDiagnostics diag;
  diag.mode = ScalarTraits<T>::exact ? NumericMode::Exact : NumericMode::Float;
  diag.degree = target.max_degree();
  diag.objective = problem.objective;
  diag.required_rank = m;

  if (all_zero(target.values())) {
    diag.solver = "none (zero target)";
    diag.contract_met = true;
    MatchResult<T> r{SignedAtomicMeasure<T>(d), std::vector<T>(m, ScalarTraits<T>::zero()),
                     ScalarTraits<T>::zero(), diag};
    return r;
  }

  std::vector<Point<Rational>> nodes;
  for (std::size_t attempt = 0; attempt <= kResampleBudget; ++attempt) {
    const auto strategy = attempt == 0 ? SampleStrategy::Grid : SampleStrategy::Radial;
    nodes = sample_up_to(problem.support, budget, strategy, problem.seed + attempt);
    diag.attempts = attempt + 1;
    diag.sampling = attempt == 0 ? "grid" : "radial";
    diag.nodes = nodes.size();
    diag.rank = node_rank<T>(nodes, basis, d);
    if (diag.rank == m) break;
  }
  if (diag.rank < m) {
    const auto e = zariski_density_check(nodes, d, target.max_degree(), diag.mode);
    throw RankDeficientError("sample nodes reach rank " + std::to_string(diag.rank) + " < " +
                                 std::to_string(m) + " after " + std::to_string(diag.attempts) +
                                 " attempts",
                             diag.rank, m, e.exact_certificate, e.float_certificate);
  }
  for (const auto& x : nodes)
    if (!contains(problem.support, x)) throw Error("internal: sampled node outside the support");

  const auto weights = problem.objective == Objective::AnySolution
                           ? any_solution(nodes, basis, target, diag)
                           : min_total_variation(nodes, basis, target, diag);
  auto r = assemble(nodes, weights, target, diag);
  for (const auto& a : r.measure.atoms())
    if (!contains(problem.support, a.point)) throw Error("internal: atom outside the support");
  return r;
}

template <typename T>
std::pair<SignedAtomicMeasure<T>, SignedAtomicMeasure<T>> jordan_decompose(
    const SignedAtomicMeasure<T>& mu) {
  std::vector<Atom<T>> pos;
  std::vector<Atom<T>> neg;
  for (const auto& a : mu.atoms()) {
    if (a.weight > ScalarTraits<T>::zero()) pos.push_back(a);
    else neg.push_back({a.point, T(-a.weight)});
  }
  return {SignedAtomicMeasure<T>(mu.dimension(), std::move(pos)),
          SignedAtomicMeasure<T>(mu.dimension(), std::move(neg))};
}

template <typename T>
MatchReport verify_measure(const SignedAtomicMeasure<T>& mu, const MomentSequence<T>& target,
                           const SupportSpec& support) {
  if (mu.dimension() != target.dimension()) throw DimensionMismatch(target.dimension(), mu.dimension());
  MatchReport rep;
  const auto& basis = target.basis();
  using Acc = std::conditional_t<ScalarTraits<T>::exact, Rational, long double>;
  std::vector<Acc> sums(basis.size(), Acc(0));
  const auto& atoms = mu.atoms();
  for (std::size_t i = atoms.size(); i-- > 0;) {
    const auto& a = atoms[i];
    for (std::size_t k = 0; k < basis.size(); ++k) {
      Acc term = Acc(1);
      for (std::size_t j = 0; j < a.point.size(); ++j)
        for (unsigned e = 0; e < basis[k][j]; ++e) term *= Acc(a.point[j]);
      sums[k] += Acc(a.weight) * term;
    }
    if (!contains(support, a.point)) rep.atoms_outside.push_back(i);
  }
  std::reverse(rep.atoms_outside.begin(), rep.atoms_outside.end());
  rep.exact_zero = true;
  double smax = 0.0;
  for (std::size_t k = 0; k < basis.size(); ++k) {
    double diff;
    if constexpr (ScalarTraits<T>::exact) {
      Rational r = target[k] - sums[k];
      if (sgn(r) != 0) rep.exact_zero = false;
      diff = std::fabs(r.get_d());
      smax = std::max(smax, std::fabs(target[k].get_d()));
    } else {
      const long double r = static_cast<long double>(target[k]) - sums[k];
      if (r != 0.0L) rep.exact_zero = false;
      diff = static_cast<double>(std::fabs(r));
      smax = std::max(smax, std::fabs(target[k]));
    }
    rep.max_abs_residual = std::max(rep.max_abs_residual, diff);
  }
  rep.max_rel_residual = smax > 0.0 ? rep.max_abs_residual / smax : rep.max_abs_residual;
  const bool residual_ok = ScalarTraits<T>::exact ? rep.exact_zero
                                                  : rep.max_rel_residual <= kFloatResidualTolerance;
  rep.contract_met = residual_ok && rep.atoms_outside.empty();
  return rep;
}

#define SIGMOMENT_INSTANTIATE(T)                                                              \
  template MatchResult<T> polya_construct_1d(const MomentSequence<T>&, const std::vector<T>&); \
  template MatchResult<T> polya_construct_1d(const MomentSequence<T>&, const NodeSequence&);   \
  template MatchResult<T> construct_signed_measure(const MatchProblem<T>&);                    \
  template std::pair<SignedAtomicMeasure<T>, SignedAtomicMeasure<T>> jordan_decompose(         \
      const SignedAtomicMeasure<T>&);                                                          \
  template MatchReport verify_measure(const SignedAtomicMeasure<T>&, const MomentSequence<T>&, \
                                      const SupportSpec&);

SIGMOMENT_INSTANTIATE(Rational)
SIGMOMENT_INSTANTIATE(double)

#undef SIGMOMENT_INSTANTIATE

}  // namespace sigmoment
