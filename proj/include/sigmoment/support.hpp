#pragma once

// Closed supports K in R^d: a small catalog of structured sets with exact
// membership, deterministic samplers, and escape sequences (points of K that
// run off to infinity along one coordinate axis with the other coordinates
// held at a base point).

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "sigmoment/moments.hpp"

namespace sigmoment {

class SamplingError : public Error {
 public:
  using Error::Error;
};

inline constexpr double kMembershipSlack = 1e-12;
// |x_last| / |x_first| must reach this factor for a prefix to count as escaping.
inline constexpr double kEscapeGrowthFactor = 4.0;

struct Interval {
  Rational lo;
  Rational hi;
  bool degenerate() const { return lo == hi; }
};

// A one-dimensional node set: either an explicit list (optionally declared to
// be the prefix of an unbounded sequence) or the closed-form sequence
// offset + scale * k^exponent, k = 1, 2, ...
class NodeSequence {
 public:
  static NodeSequence list(std::vector<Rational> values, bool unbounded = false);
  static NodeSequence power(Rational scale, Rational offset, unsigned exponent);

  bool is_power() const { return kind_ == Kind::Power; }
  // The set has no finite bound (closed form, or declared for a list).
  bool unbounded() const { return kind_ == Kind::Power || declared_unbounded_; }
  // Infinitely many distinct values are known to exist.
  bool infinite() const { return unbounded(); }
  // Values that can actually be produced; nullopt means unlimited.
  std::optional<std::size_t> available() const;
  // k-th value, k >= 0. Throws SamplingError past the end of a list.
  Rational value(std::size_t k) const;

  bool contains(const Rational& x) const;
  bool contains(double x, double slack) const;

  const std::vector<Rational>& values() const { return values_; }
  const Rational& scale() const { return scale_; }
  const Rational& offset() const { return offset_; }
  unsigned exponent() const { return exponent_; }

  // Largest |value| ever taken; nullopt when unbounded.
  std::optional<Rational> magnitude_bound() const;

 private:
  enum class Kind { List, Power };
  Kind kind_ = Kind::List;
  std::vector<Rational> values_;
  bool declared_unbounded_ = false;
  Rational scale_{1};
  Rational offset_{0};
  unsigned exponent_ = 1;
};

struct FullSpace {};
struct Orthant {};  // [0, inf)^d
struct Grid {
  std::vector<NodeSequence> axes;
};
struct Ray {
  Point<Rational> origin;
  Point<Rational> direction;
};
struct UnionOfRays {
  std::vector<Ray> rays;
};
// vertex + cone(generators); exactly d linearly independent generators.
struct AffineCone {
  Point<Rational> vertex;
  std::vector<Point<Rational>> generators;
};
// Each coordinate is either confined to an interval or free.
struct Strip {
  std::vector<std::optional<Interval>> coordinates;
};
struct BoundedBox {
  std::vector<Interval> intervals;
};
struct PointSequence1D {
  NodeSequence sequence;
};
// Escape family for one axis of a SampledSet: values on `axis`, and a
// product of node sets for the remaining coordinates (in increasing
// coordinate order).
struct EscapeGenerator {
  std::size_t axis = 0;
  std::vector<NodeSequence> bases;
  NodeSequence values;
};
struct SampledSet {
  std::vector<Point<Rational>> points;
  std::vector<EscapeGenerator> escapes;
};

using SupportClass = std::variant<FullSpace, Orthant, Grid, UnionOfRays, AffineCone, Strip,
                                  BoundedBox, PointSequence1D, SampledSet>;

// One factor of a product-shaped support.
struct CoordinateSet {
  enum class Kind { Line, HalfLine, Interval, Sequence };
  Kind kind = Kind::Line;
  Rational lo{0};  // HalfLine start, Interval lower end
  Rational hi{0};  // Interval upper end
  std::optional<NodeSequence> sequence;

  bool unbounded() const;
  bool infinite() const;
  // Deterministic stream of distinct members; nullopt once exhausted.
  std::optional<Rational> stream(std::size_t k) const;
  bool contains(const Rational& x) const;
  bool contains(double x, double slack) const;
};

class SupportSpec {
 public:
  SupportSpec(std::size_t dimension, SupportClass shape, bool certified_representable = false);

  static SupportSpec full_space(std::size_t dimension);
  static SupportSpec orthant(std::size_t dimension);
  static SupportSpec grid(std::vector<NodeSequence> axes);
  static SupportSpec strip(std::vector<std::optional<Interval>> coordinates);
  static SupportSpec box(std::vector<Interval> intervals);
  static SupportSpec sequence_1d(NodeSequence sequence);
  static SupportSpec rays(std::size_t dimension, std::vector<Ray> rays);
  static SupportSpec cone(Point<Rational> vertex, std::vector<Point<Rational>> generators);
  static SupportSpec sampled(std::size_t dimension, std::vector<Point<Rational>> points,
                             std::vector<EscapeGenerator> escapes = {});

  std::size_t dimension() const { return dimension_; }
  const SupportClass& shape() const { return shape_; }
  std::string class_name() const;
  bool certified_representable() const { return certified_; }

  // Factors when K is a Cartesian product of one-dimensional sets.
  std::optional<std::vector<CoordinateSet>> product_factors() const;

  // Cone coordinates c = G^{-1}(x - vertex) for an AffineCone.
  Point<Rational> cone_coordinates(const Point<Rational>& x) const;

 private:
  void validate() const;

  std::size_t dimension_;
  SupportClass shape_;
  bool certified_ = false;
  // Inverse generator matrix (row-major d x d) for AffineCone.
  std::vector<Rational> cone_inverse_;
};

bool contains(const SupportSpec& k, const Point<Rational>& x);
bool contains(const SupportSpec& k, const Point<double>& x);

enum class SampleStrategy { Grid, Radial, Prefix };

SampleStrategy parse_strategy(std::string_view text);

inline constexpr std::uint64_t kDefaultSeed = 0x5EED2024ULL;

// n distinct points of K, deterministic in (K, n, strategy, seed).
//  Grid:   product-shaped sets enumerate coordinate streams in graded order
//          (the first C(N+d, d) points are unisolvent for degree N); other
//          classes walk their own lattice.
//  Radial: round k holds 2d points at radius 2^(k/4) with directions from
//          a golden-ratio sequence; discrete classes use a seeded shuffle.
//  Prefix: list order for explicit sequences and sampled sets.
std::vector<Point<Rational>> sample(const SupportSpec& k, std::size_t n,
                                    SampleStrategy strategy = SampleStrategy::Grid,
                                    std::uint64_t seed = kDefaultSeed);

// As many points as K offers up to n (grid order); never throws for finite K.
std::vector<Point<Rational>> sample_up_to(const SupportSpec& k, std::size_t n,
                                          SampleStrategy strategy = SampleStrategy::Grid,
                                          std::uint64_t seed = kDefaultSeed);

template <typename T>
std::vector<Point<T>> sample_as(const SupportSpec& k, std::size_t n,
                                SampleStrategy strategy = SampleStrategy::Grid,
                                std::uint64_t seed = kDefaultSeed) {
  std::vector<Point<T>> out;
  for (auto& p : sample(k, n, strategy, seed)) out.push_back(point_cast<T>(p));
  return out;
}

// Escape values grow linearly (1, 2, 3, ...) or geometrically (2^(k/8)).
enum class EscapeRate { Linear, Geometric };

struct EscapeSequence {
  std::size_t axis = 0;
  std::vector<Rational> base;    // d - 1 coordinates, axis removed
  std::vector<Rational> values;  // escaping coordinate, |values| strictly increasing

  Point<Rational> point(std::size_t n) const;
  std::size_t length() const { return values.size(); }
};

struct EscapeQuery {
  enum class Status { Available, None, Unknown };
  Status status = Status::Unknown;
  std::vector<EscapeSequence> sequences;
  // The base family M_j is infinite (each base factor is an infinite set).
  bool infinite_bases = false;
  std::string reason;
};

// Up to `bases` escape sequences of `length` points along `axis`. Both signs
// are produced as separate sequences where the axis is free in both
// directions (they share a base point), so the result can hold up to
// 2 * bases sequences.
EscapeQuery escape_sequences(const SupportSpec& k, std::size_t axis, std::size_t bases,
                             std::size_t length, EscapeRate rate = EscapeRate::Linear);

// |x_n| strictly increasing and |x_last| >= factor * |x_first| (first nonzero).
bool escapes_to_infinity(const std::vector<Rational>& values,
                         double factor = kEscapeGrowthFactor);

// Bounded: some coordinate cannot escape (Yes with that axis), unbounded:
// the set is unbounded (No), or undetermined.
struct BoundednessInfo {
  enum class Answer { Yes, No, Unknown };
  Answer bounded = Answer::Unknown;
  std::optional<std::size_t> bounded_axis;
};
// Whole-set boundedness and the first coordinate that is bounded on K.
BoundednessInfo boundedness(const SupportSpec& k);

}  // namespace sigmoment
