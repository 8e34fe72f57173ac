#pragma once

// Classification of supports: every linear functional on R[x_1..x_d] is
// integration against a signed measure supported in K exactly when K is
// Zariski dense and each growth space
//   N_n(K) = { p : |p(x)| <= lambda_p (1 + |x|^2)^n on K }
// is finite-dimensional. This module turns that criterion into finite checks:
// evaluation-matrix rank tests for density, escape-sequence growth traces for
// N_n(K), and the "unbounded in all directions" condition.

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "sigmoment/kernels.hpp"
#include "sigmoment/support.hpp"

namespace sigmoment {

inline constexpr unsigned kDefaultDegree = 6;
inline constexpr double kFloatRankCutoff = 1e-10;
inline constexpr double kBlowUpThreshold = 1e3;
// Log-log slope of the ratio trace below which growth counts as bounded.
inline constexpr double kBoundedSlope = 0.05;

// Evaluation matrix of sample points against the degree <= N basis, with the
// rank and (when rank deficient) a polynomial vanishing on every sample.
struct EvaluationMatrix {
  NumericMode mode = NumericMode::Exact;
  unsigned degree = 0;
  std::vector<Point<Rational>> points;
  std::vector<MultiIndex> basis;
  std::size_t rank = 0;
  std::optional<Polynomial<Rational>> exact_certificate;
  std::optional<Polynomial<double>> float_certificate;
  std::vector<double> singular_values;  // float mode only

  bool full_rank() const { return rank == basis.size(); }
  bool dense_up_to_degree() const { return full_rank(); }
};

// `points` are given explicitly (for SampledSet fixtures and tests).
EvaluationMatrix zariski_density_check(const std::vector<Point<Rational>>& points,
                                       std::size_t dimension, unsigned degree,
                                       NumericMode mode = NumericMode::Exact);

// Samples `sample_count` points of K (grid order) and runs the rank test.
EvaluationMatrix zariski_density_check(const SupportSpec& k, unsigned degree,
                                       std::size_t sample_count,
                                       NumericMode mode = NumericMode::Exact);

struct GrowthOptions {
  std::size_t stages = 256;
  std::size_t bases_per_axis = 20;
};

struct GrowthStage {
  double radius = 0.0;     // largest |x| among the stage's points
  double max_ratio = 0.0;  // max |p(x)| / (1 + |x|^2)^n over the stage
};

struct GrowthReport {
  enum class Verdict { BoundedWitnessed, UnboundedWitnessed, Inconclusive };
  Polynomial<double> polynomial{1};
  unsigned weight_exponent = 0;
  std::size_t samples_used = 0;
  std::vector<GrowthStage> trace;
  Verdict verdict = Verdict::Inconclusive;
  double lambda = 0.0;  // largest observed ratio
  double tail_slope = 0.0;
  std::string reason;
};

const char* to_string(GrowthReport::Verdict v);

// Observed-supremum surrogate for lambda_p over an escape schedule. The
// verdict is evidence from finitely many samples, not a proof.
GrowthReport growth_test(const Polynomial<double>& p, unsigned n, const SupportSpec& k,
                         const GrowthOptions& options = {});

struct NnDimension {
  enum class Kind { Finite, Infinite, Unknown };
  Kind kind = Kind::Unknown;
  std::size_t lower_bound = 0;
  std::size_t upper_bound = 0;
  std::optional<std::size_t> exact;
  std::string basis_description;
  // Infinite: every member of {generator * x_1^m} (or {generator^m}) lies in N_0(K).
  std::optional<Polynomial<Rational>> witness_generator;
  bool witness_is_power_family = true;
  std::string reason;
};

const char* to_string(NnDimension::Kind k);

NnDimension nn_dimension(const SupportSpec& k, unsigned n);

struct AxisEvidence {
  std::size_t axis = 0;
  EscapeQuery::Status status = EscapeQuery::Status::Unknown;
  std::size_t bases = 0;
  bool infinite_bases = false;
  std::optional<std::size_t> base_rank;  // d >= 3: rank of the base evaluation matrix
  std::size_t required_rank = 0;
  bool holds = false;
  std::string note;
};

struct ConditionStar {
  enum class Kind { Holds, Fails, Unknown };
  Kind kind = Kind::Unknown;
  std::optional<std::size_t> failing_axis;
  std::vector<AxisEvidence> axes;
  std::string frame = "standard";  // or "cone" for AffineCone
  std::string reason;
};

const char* to_string(ConditionStar::Kind k);

ConditionStar condition_star_check(const SupportSpec& k, unsigned up_to_degree);

struct DegreeRank {
  unsigned degree = 0;
  std::size_t rank = 0;
  std::size_t required = 0;  // C(degree + d, d)
};

struct AnalysisReport {
  enum class Verdict { Representable, NotRepresentable, Unknown };
  enum class WitnessKind { None, NullCertificate, BoundedPolynomial, VanishingFamily };

  Verdict verdict = Verdict::Unknown;
  unsigned degree_checked = 0;
  NumericMode mode = NumericMode::Exact;
  std::string sufficient_condition;  // "d=1 unbounded" | "condition (*)" | "user-certified"
  WitnessKind witness_kind = WitnessKind::None;
  std::optional<Polynomial<Rational>> witness;
  std::optional<Polynomial<double>> float_witness;
  std::string witness_family;
  std::vector<DegreeRank> ranks;
  std::size_t density_samples = 0;
  std::optional<ConditionStar> condition_star;
  std::optional<NnDimension> nn0;
  std::optional<GrowthReport> witness_growth;
  std::vector<std::string> notes;
};

const char* to_string(AnalysisReport::Verdict v);
const char* to_string(AnalysisReport::WitnessKind w);

AnalysisReport classify(const SupportSpec& k, unsigned up_to_degree = kDefaultDegree,
                        NumericMode mode = NumericMode::Exact);

}  // namespace sigmoment
