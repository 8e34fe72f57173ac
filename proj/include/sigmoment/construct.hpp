#pragma once

// Building signed atomic measures on K that match a truncated moment
// sequence: square Vandermonde solves on prescribed 1-d nodes, and
// rank-checked solves (any solution, or least total variation through an LP)
// over sample points of a general support.

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "sigmoment/moments.hpp"
#include "sigmoment/simplex.hpp"
#include "sigmoment/support.hpp"

namespace sigmoment {

enum class Objective { AnySolution, MinTotalVariation };

const char* to_string(Objective o);
// "any" or "min-tv".
Objective parse_objective(std::string_view text);

// Relative residual bound for float results; exact results must match exactly.
inline constexpr double kFloatResidualTolerance = 1e-9;
// Resamples after the first node set turns out rank deficient.
inline constexpr std::size_t kResampleBudget = 3;
// LPs with at most this many variables are solved in exact arithmetic.
inline constexpr std::size_t kExactLpVariableLimit = 200;
inline constexpr double kFloatLpTolerance = 1e-8;

template <typename T>
struct MatchProblem {
  MomentSequence<T> target;
  SupportSpec support;
  // Defaults to C(N+d, d) for AnySolution and twice that for MinTotalVariation.
  std::optional<std::size_t> node_budget;
  Objective objective = Objective::AnySolution;
  std::uint64_t seed = kDefaultSeed;
};

struct MatchDiagnostics {
  NumericMode mode = NumericMode::Exact;
  Objective objective = Objective::AnySolution;
  unsigned degree = 0;
  std::size_t nodes = 0;  // candidate nodes offered to the solver
  std::size_t rank = 0;
  std::size_t required_rank = 0;
  double condition = 0.0;  // of the scaled evaluation matrix
  std::size_t attempts = 0;
  std::string sampling;  // "grid" or "radial"
  std::string solver;
  std::size_t lp_iterations = 0;
  double max_abs_residual = 0.0;
  double max_rel_residual = 0.0;
  bool contract_met = false;
};

template <typename T>
struct MatchResult {
  SignedAtomicMeasure<T> measure;
  std::vector<T> residuals;  // target - moments, basis order
  T total_variation{};
  MatchDiagnostics diagnostics;
};

// The sample nodes could not reach full column rank. The certificate is a
// nonzero polynomial of degree <= N vanishing on the last node set.
class RankDeficientError : public Error {
 public:
  RankDeficientError(std::string message, std::size_t rank, std::size_t required,
                     std::optional<Polynomial<Rational>> exact_certificate,
                     std::optional<Polynomial<double>> float_certificate);
  std::size_t rank() const { return rank_; }
  std::size_t required() const { return required_; }
  const std::optional<Polynomial<Rational>>& exact_certificate() const { return exact_; }
  const std::optional<Polynomial<double>>& float_certificate() const { return float_; }

 private:
  std::size_t rank_;
  std::size_t required_;
  std::optional<Polynomial<Rational>> exact_;
  std::optional<Polynomial<double>> float_;
};

// Two nodes of a square Vandermonde system coincide (indices into the node list).
class SingularSystemError : public Error {
 public:
  SingularSystemError(std::size_t first, std::size_t second);
  std::pair<std::size_t, std::size_t> pair() const { return {first_, second_}; }

 private:
  std::size_t first_;
  std::size_t second_;
};

// Weights on the first N+1 entries of `nodes` whose moments 0..N equal the
// target. Needs at least N+1 nodes.
template <typename T>
MatchResult<T> polya_construct_1d(const MomentSequence<T>& target, const std::vector<T>& nodes);

// Same, with the nodes taken from the prefix of a one-dimensional node set.
template <typename T>
MatchResult<T> polya_construct_1d(const MomentSequence<T>& target, const NodeSequence& nodes);

template <typename T>
MatchResult<T> construct_signed_measure(const MatchProblem<T>& problem);

template <typename T>
std::pair<SignedAtomicMeasure<T>, SignedAtomicMeasure<T>> jordan_decompose(
    const SignedAtomicMeasure<T>& mu);

struct MatchReport {
  double max_abs_residual = 0.0;
  double max_rel_residual = 0.0;
  bool exact_zero = false;  // exact mode: every residual is exactly 0
  std::vector<std::size_t> atoms_outside;
  bool contract_met = false;
};

// Recomputes the moments of `mu` along an independent path (reverse atom
// order, extended precision for floats) and compares with the target.
template <typename T>
MatchReport verify_measure(const SignedAtomicMeasure<T>& mu, const MomentSequence<T>& target,
                           const SupportSpec& support);

template <typename T>
MatchReport verify_match(const MatchResult<T>& result, const MatchProblem<T>& problem) {
  return verify_measure(result.measure, problem.target, problem.support);
}

}  // namespace sigmoment
