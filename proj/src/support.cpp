#include "sigmoment/support.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <set>

#include "sigmoment/kernels.hpp"
#include "sigmoment/linalg.hpp"

namespace sigmoment {

// -------------------------------------------------------------- NodeSequence

NodeSequence NodeSequence::list(std::vector<Rational> values, bool unbounded) {
  NodeSequence s;
  s.kind_ = Kind::List;
  for (auto& v : values) v.canonicalize();
  std::set<Rational> distinct(values.begin(), values.end());
  if (distinct.size() != values.size()) throw Error("node list contains repeated values");
  if (values.empty()) throw Error("node list is empty");
  if (unbounded && !escapes_to_infinity(values))
    throw Error("node list declared unbounded must have strictly increasing |values| growing by "
                "a factor >= 4 over the prefix");
  s.values_ = std::move(values);
  s.declared_unbounded_ = unbounded;
  return s;
}

NodeSequence NodeSequence::power(Rational scale, Rational offset, unsigned exponent) {
  if (sgn(scale) == 0) throw Error("power sequence needs a nonzero scale");
  if (exponent == 0) throw Error("power sequence needs exponent >= 1");
  if (sgn(scale) * sgn(offset) < 0)
    throw Error("power sequence needs offset of the same sign as scale (|values| increasing)");
  NodeSequence s;
  s.kind_ = Kind::Power;
  s.scale_ = std::move(scale);
  s.offset_ = std::move(offset);
  s.exponent_ = exponent;
  return s;
}

std::optional<std::size_t> NodeSequence::available() const {
  if (kind_ == Kind::Power) return std::nullopt;
  return values_.size();
}

Rational NodeSequence::value(std::size_t k) const {
  if (kind_ == Kind::List) {
    if (k >= values_.size())
      throw SamplingError("node list has only " + std::to_string(values_.size()) + " values");
    return values_[k];
  }
  Rational v = offset_ + scale_ * ipow(Rational(static_cast<long>(k + 1)), exponent_);
  v.canonicalize();
  return v;
}

bool NodeSequence::contains(const Rational& x) const {
  if (kind_ == Kind::List) return std::find(values_.begin(), values_.end(), x) != values_.end();
  Rational t = (x - offset_) / scale_;
  t.canonicalize();
  if (t.get_den() != 1 || sgn(t) <= 0) return false;
  mpz_class root;
  const int exact = mpz_root(root.get_mpz_t(), t.get_num_mpz_t(), exponent_);
  return exact != 0 && root >= 1;
}

bool NodeSequence::contains(double x, double slack) const {
  if (std::isfinite(x) && contains(Rational(x))) return true;
  if (kind_ == Kind::List) {
    return std::any_of(values_.begin(), values_.end(),
                       [&](const Rational& v) { return std::fabs(v.get_d() - x) <= slack; });
  }
  const double t = (x - offset_.get_d()) / scale_.get_d();
  if (!(t > 0.0)) return false;
  const double k = std::round(std::pow(t, 1.0 / exponent_));
  for (double cand = std::max(1.0, k - 1.0); cand <= k + 1.0; cand += 1.0) {
    const double v = offset_.get_d() + scale_.get_d() * std::pow(cand, exponent_);
    if (std::fabs(v - x) <= slack) return true;
  }
  return false;
}

std::optional<Rational> NodeSequence::magnitude_bound() const {
  if (unbounded()) return std::nullopt;
  Rational m = 0;
  for (const auto& v : values_) m = std::max<Rational>(m, abs(v));
  return m;
}

bool escapes_to_infinity(const std::vector<Rational>& values, double factor) {
  if (values.size() < 2) return false;
  for (std::size_t i = 1; i < values.size(); ++i)
    if (abs(values[i]) <= abs(values[i - 1])) return false;
  auto first = std::find_if(values.begin(), values.end(),
                            [](const Rational& v) { return sgn(v) != 0; });
  if (first == values.end()) return false;
  return abs(values.back()) >= Rational(factor) * abs(*first);
}

// ------------------------------------------------------------- CoordinateSet

namespace {

// Van der Corput radical inverse in base 2 of m >= 1: 1/2, 1/4, 3/4, 1/8, ...
Rational radical_inverse(std::size_t m) {
  mpz_class num = 0;
  mpz_class den = 1;
  while (m != 0) {
    num = num * 2 + static_cast<unsigned long>(m & 1U);
    den *= 2;
    m >>= 1U;
  }
  Rational r(num, den);
  r.canonicalize();
  return r;
}

// 0, 1, -1, 2, -2, ...
Rational signed_integer(std::size_t k) {
  const long half = static_cast<long>((k + 1) / 2);
  return Rational(k % 2 == 1 ? half : -half);
}

}  // namespace

bool CoordinateSet::unbounded() const {
  switch (kind) {
    case Kind::Line:
    case Kind::HalfLine: return true;
    case Kind::Interval: return false;
    case Kind::Sequence: return sequence->unbounded();
  }
  return false;
}

bool CoordinateSet::infinite() const {
  switch (kind) {
    case Kind::Line:
    case Kind::HalfLine: return true;
    case Kind::Interval: return lo != hi;
    case Kind::Sequence: return sequence->infinite();
  }
  return false;
}

std::optional<Rational> CoordinateSet::stream(std::size_t k) const {
  switch (kind) {
    case Kind::Line: return signed_integer(k);
    case Kind::HalfLine: return Rational(lo + static_cast<long>(k));
    case Kind::Interval: {
      if (lo == hi) return k == 0 ? std::optional<Rational>(lo) : std::nullopt;
      if (k == 0) return lo;
      if (k == 1) return hi;
      Rational v = lo + (hi - lo) * radical_inverse(k - 1);
      v.canonicalize();
      return v;
    }
    case Kind::Sequence: {
      auto avail = sequence->available();
      if (avail && k >= *avail) return std::nullopt;
      return sequence->value(k);
    }
  }
  return std::nullopt;
}

bool CoordinateSet::contains(const Rational& x) const {
  switch (kind) {
    case Kind::Line: return true;
    case Kind::HalfLine: return x >= lo;
    case Kind::Interval: return x >= lo && x <= hi;
    case Kind::Sequence: return sequence->contains(x);
  }
  return false;
}

bool CoordinateSet::contains(double x, double slack) const {
  if (!std::isfinite(x)) return false;
  switch (kind) {
    case Kind::Line: return true;
    case Kind::HalfLine: return x >= lo.get_d() - slack;
    case Kind::Interval: return x >= lo.get_d() - slack && x <= hi.get_d() + slack;
    case Kind::Sequence: return sequence->contains(x, slack);
  }
  return false;
}

// --------------------------------------------------------------- SupportSpec

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

void check_point(const Point<Rational>& p, std::size_t d, const char* what) {
  if (p.size() != d) throw Error(std::string(what) + " has wrong dimension");
}

}  // namespace

SupportSpec::SupportSpec(std::size_t dimension, SupportClass shape, bool certified_representable)
    : dimension_(dimension), shape_(std::move(shape)), certified_(certified_representable) {
  if (dimension_ == 0) throw Error("support dimension must be >= 1");
  validate();
  if (const auto* cone = std::get_if<AffineCone>(&shape_)) {
    Matrix<Rational> g(dimension_, dimension_);
    for (std::size_t i = 0; i < dimension_; ++i)
      for (std::size_t j = 0; j < dimension_; ++j) g(j, i) = cone->generators[i][j];
    cone_inverse_.assign(dimension_ * dimension_, Rational(0));
    for (std::size_t col = 0; col < dimension_; ++col) {
      std::vector<Rational> e(dimension_, Rational(0));
      e[col] = 1;
      auto x = linalg::exact_solve(g, e);
      if (!x) throw Error("cone generators are linearly dependent");
      for (std::size_t row = 0; row < dimension_; ++row)
        cone_inverse_[row * dimension_ + col] = (*x)[row];
    }
  }
}

void SupportSpec::validate() const {
  const std::size_t d = dimension_;
  std::visit(
      Overloaded{
          [](const FullSpace&) {},
          [](const Orthant&) {},
          [d](const Grid& g) {
            if (g.axes.size() != d) throw Error("grid needs one node sequence per axis");
            for (const auto& axis : g.axes) {
              if (axis.is_power()) {
                if (sgn(axis.scale()) < 0) throw Error("grid axis sequences must be increasing");
                continue;
              }
              const auto& v = axis.values();
              for (std::size_t i = 1; i < v.size(); ++i)
                if (v[i] <= v[i - 1]) throw Error("grid axis lists must be strictly increasing");
            }
          },
          [d](const UnionOfRays& u) {
            if (u.rays.empty()) throw Error("union of rays needs at least one ray");
            for (const auto& r : u.rays) {
              check_point(r.origin, d, "ray origin");
              check_point(r.direction, d, "ray direction");
              if (std::all_of(r.direction.begin(), r.direction.end(),
                              [](const Rational& v) { return sgn(v) == 0; }))
                throw Error("ray direction must be nonzero");
            }
          },
          [d](const AffineCone& c) {
            check_point(c.vertex, d, "cone vertex");
            if (c.generators.size() != d)
              throw Error("affine cone needs exactly d generators");
            for (const auto& g : c.generators) check_point(g, d, "cone generator");
          },
          [d](const Strip& s) {
            if (s.coordinates.size() != d) throw Error("strip needs one entry per coordinate");
            for (const auto& c : s.coordinates)
              if (c && c->lo > c->hi) throw Error("strip interval has lo > hi");
          },
          [d](const BoundedBox& b) {
            if (b.intervals.size() != d) throw Error("box needs one interval per coordinate");
            for (const auto& c : b.intervals)
              if (c.lo > c.hi) throw Error("box interval has lo > hi");
          },
          [d](const PointSequence1D& p) {
            if (d != 1) throw Error("PointSequence1D requires dimension 1");
            if (!p.sequence.is_power()) {
              const auto& v = p.sequence.values();
              for (std::size_t i = 1; i < v.size(); ++i)
                if (abs(v[i]) <= abs(v[i - 1]))
                  throw Error("PointSequence1D needs strictly increasing |values|");
            }
          },
          [d](const SampledSet& s) {
            for (const auto& p : s.points) check_point(p, d, "sampled point");
            for (const auto& g : s.escapes) {
              if (g.axis >= d) throw Error("escape generator axis out of range");
              if (g.bases.size() + 1 != d)
                throw Error("escape generator needs d-1 base node sets");
              if (!g.values.unbounded())
                throw Error("escape generator values must be unbounded");
            }
          },
      },
      shape_);
}

SupportSpec SupportSpec::full_space(std::size_t dimension) { return {dimension, FullSpace{}}; }
SupportSpec SupportSpec::orthant(std::size_t dimension) { return {dimension, Orthant{}}; }
SupportSpec SupportSpec::grid(std::vector<NodeSequence> axes) {
  const std::size_t d = axes.size();
  return {d, Grid{std::move(axes)}};
}
SupportSpec SupportSpec::strip(std::vector<std::optional<Interval>> coordinates) {
  const std::size_t d = coordinates.size();
  return {d, Strip{std::move(coordinates)}};
}
SupportSpec SupportSpec::box(std::vector<Interval> intervals) {
  const std::size_t d = intervals.size();
  return {d, BoundedBox{std::move(intervals)}};
}
SupportSpec SupportSpec::sequence_1d(NodeSequence sequence) {
  return {1, PointSequence1D{std::move(sequence)}};
}
SupportSpec SupportSpec::rays(std::size_t dimension, std::vector<Ray> rays) {
  return {dimension, UnionOfRays{std::move(rays)}};
}
SupportSpec SupportSpec::cone(Point<Rational> vertex, std::vector<Point<Rational>> generators) {
  const std::size_t d = vertex.size();
  return {d, AffineCone{std::move(vertex), std::move(generators)}};
}
SupportSpec SupportSpec::sampled(std::size_t dimension, std::vector<Point<Rational>> points,
                                 std::vector<EscapeGenerator> escapes) {
  return {dimension, SampledSet{std::move(points), std::move(escapes)}};
}

std::string SupportSpec::class_name() const {
  return std::visit(Overloaded{
                        [](const FullSpace&) { return "FullSpace"; },
                        [](const Orthant&) { return "Orthant"; },
                        [](const Grid&) { return "Grid"; },
                        [](const UnionOfRays&) { return "UnionOfRays"; },
                        [](const AffineCone&) { return "AffineCone"; },
                        [](const Strip&) { return "Strip"; },
                        [](const BoundedBox&) { return "BoundedBox"; },
                        [](const PointSequence1D&) { return "PointSequence1D"; },
                        [](const SampledSet&) { return "SampledSet"; },
                    },
                    shape_);
}

std::optional<std::vector<CoordinateSet>> SupportSpec::product_factors() const {
  using Kind = CoordinateSet::Kind;
  std::vector<CoordinateSet> f;
  auto line = [] { return CoordinateSet{Kind::Line, 0, 0, std::nullopt}; };
  auto interval = [](const Interval& i) { return CoordinateSet{Kind::Interval, i.lo, i.hi, std::nullopt}; };
  auto seq = [](const NodeSequence& s) { return CoordinateSet{Kind::Sequence, 0, 0, s}; };
  if (std::holds_alternative<FullSpace>(shape_)) {
    f.assign(dimension_, line());
  } else if (std::holds_alternative<Orthant>(shape_)) {
    f.assign(dimension_, CoordinateSet{Kind::HalfLine, 0, 0, std::nullopt});
  } else if (const auto* g = std::get_if<Grid>(&shape_)) {
    for (const auto& a : g->axes) f.push_back(seq(a));
  } else if (const auto* s = std::get_if<Strip>(&shape_)) {
    for (const auto& c : s->coordinates) f.push_back(c ? interval(*c) : line());
  } else if (const auto* b = std::get_if<BoundedBox>(&shape_)) {
    for (const auto& c : b->intervals) f.push_back(interval(c));
  } else if (const auto* p = std::get_if<PointSequence1D>(&shape_)) {
    f.push_back(seq(p->sequence));
  } else {
    return std::nullopt;
  }
  return f;
}

Point<Rational> SupportSpec::cone_coordinates(const Point<Rational>& x) const {
  if (cone_inverse_.empty()) throw Error("cone coordinates requested for a non-cone support");
  const auto& cone = std::get<AffineCone>(shape_);
  Point<Rational> c(dimension_, Rational(0));
  for (std::size_t i = 0; i < dimension_; ++i) {
    for (std::size_t j = 0; j < dimension_; ++j)
      c[i] += cone_inverse_[i * dimension_ + j] * (x[j] - cone.vertex[j]);
    c[i].canonicalize();
  }
  return c;
}

// ----------------------------------------------------------------- membership

namespace {

bool on_ray(const Ray& r, const Point<Rational>& x) {
  std::optional<Rational> t;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (sgn(r.direction[i]) == 0) {
      if (x[i] != r.origin[i]) return false;
      continue;
    }
    Rational ti = (x[i] - r.origin[i]) / r.direction[i];
    ti.canonicalize();
    if (t && *t != ti) return false;
    t = ti;
  }
  return t && sgn(*t) >= 0;
}

bool on_ray(const Ray& r, const Point<double>& x, double slack) {
  double dd = 0.0;
  double dot = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double di = r.direction[i].get_d();
    dd += di * di;
    dot += (x[i] - r.origin[i].get_d()) * di;
  }
  const double t = std::max(0.0, dot / dd);
  if (dot / dd < -slack) return false;
  for (std::size_t i = 0; i < x.size(); ++i)
    if (std::fabs(x[i] - (r.origin[i].get_d() + t * r.direction[i].get_d())) > slack) return false;
  return true;
}

template <typename T>
Point<T> without_axis(const Point<T>& x, std::size_t axis) {
  Point<T> y;
  for (std::size_t i = 0; i < x.size(); ++i)
    if (i != axis) y.push_back(x[i]);
  return y;
}

bool on_generator(const EscapeGenerator& g, const Point<Rational>& x) {
  if (!g.values.contains(x[g.axis])) return false;
  const auto base = without_axis(x, g.axis);
  for (std::size_t i = 0; i < base.size(); ++i)
    if (!g.bases[i].contains(base[i])) return false;
  return true;
}

bool on_generator(const EscapeGenerator& g, const Point<double>& x, double slack) {
  if (!g.values.contains(x[g.axis], slack)) return false;
  const auto base = without_axis(x, g.axis);
  for (std::size_t i = 0; i < base.size(); ++i)
    if (!g.bases[i].contains(base[i], slack)) return false;
  return true;
}

}  // namespace

bool contains(const SupportSpec& k, const Point<Rational>& x) {
  if (x.size() != k.dimension()) throw DimensionMismatch(k.dimension(), x.size());
  if (auto factors = k.product_factors()) {
    for (std::size_t j = 0; j < x.size(); ++j)
      if (!(*factors)[j].contains(x[j])) return false;
    return true;
  }
  const auto& shape = k.shape();
  if (const auto* u = std::get_if<UnionOfRays>(&shape)) {
    return std::any_of(u->rays.begin(), u->rays.end(), [&](const Ray& r) { return on_ray(r, x); });
  }
  if (std::holds_alternative<AffineCone>(shape)) {
    const auto c = k.cone_coordinates(x);
    return std::all_of(c.begin(), c.end(), [](const Rational& v) { return sgn(v) >= 0; });
  }
  const auto& s = std::get<SampledSet>(shape);
  if (std::find(s.points.begin(), s.points.end(), x) != s.points.end()) return true;
  return std::any_of(s.escapes.begin(), s.escapes.end(),
                     [&](const EscapeGenerator& g) { return on_generator(g, x); });
}

bool contains(const SupportSpec& k, const Point<double>& x) {
  if (x.size() != k.dimension()) throw DimensionMismatch(k.dimension(), x.size());
  for (double v : x)
    if (!std::isfinite(v)) return false;
  if (contains(k, point_cast<Rational>(x))) return true;
  const double slack = kMembershipSlack;
  if (auto factors = k.product_factors()) {
    for (std::size_t j = 0; j < x.size(); ++j)
      if (!(*factors)[j].contains(x[j], slack)) return false;
    return true;
  }
  const auto& shape = k.shape();
  if (const auto* u = std::get_if<UnionOfRays>(&shape)) {
    return std::any_of(u->rays.begin(), u->rays.end(),
                       [&](const Ray& r) { return on_ray(r, x, slack); });
  }
  if (std::holds_alternative<AffineCone>(shape)) {
    // The double point is converted exactly, then mapped through the exact inverse.
    Point<Rational> exact(x.size());
    for (std::size_t j = 0; j < x.size(); ++j) exact[j] = Rational(x[j]);
    const auto c = k.cone_coordinates(exact);
    return std::all_of(c.begin(), c.end(), [&](const Rational& v) { return v.get_d() >= -slack; });
  }
  const auto& s = std::get<SampledSet>(shape);
  for (const auto& p : s.points) {
    bool close = true;
    for (std::size_t j = 0; j < x.size() && close; ++j)
      close = std::fabs(p[j].get_d() - x[j]) <= slack;
    if (close) return true;
  }
  return std::any_of(s.escapes.begin(), s.escapes.end(),
                     [&](const EscapeGenerator& g) { return on_generator(g, x, slack); });
}

// ------------------------------------------------------------------- sampling

SampleStrategy parse_strategy(std::string_view text) {
  if (text == "grid") return SampleStrategy::Grid;
  if (text == "radial") return SampleStrategy::Radial;
  if (text == "prefix") return SampleStrategy::Prefix;
  throw Error("unknown sampling strategy '" + std::string(text) + "'");
}

namespace {

class PointCollector {
 public:
  explicit PointCollector(std::size_t target) : target_(target) {}
  bool add(Point<Rational> p) {
    if (full()) return false;
    if (seen_.insert(p).second) points_.push_back(std::move(p));
    return true;
  }
  bool full() const { return points_.size() >= target_; }
  std::vector<Point<Rational>> take() { return std::move(points_); }
  std::size_t size() const { return points_.size(); }

 private:
  std::size_t target_;
  std::set<Point<Rational>> seen_;
  std::vector<Point<Rational>> points_;
};

std::optional<std::size_t> finite_size(const CoordinateSet& f) {
  if (f.kind == CoordinateSet::Kind::Interval) {
    if (f.lo == f.hi) return 1;
    return std::nullopt;
  }
  if (f.kind == CoordinateSet::Kind::Sequence) return f.sequence->available();
  return std::nullopt;
}

// Graded enumeration of the product of coordinate streams.
void product_points(const std::vector<CoordinateSet>& factors, PointCollector& out) {
  const std::size_t d = factors.size();
  std::optional<std::size_t> max_degree = 0;
  for (const auto& f : factors) {
    auto n = finite_size(f);
    if (!n) {
      max_degree.reset();
      break;
    }
    *max_degree += *n - 1;
  }
  for (unsigned degree = 0; !out.full(); ++degree) {
    if (max_degree && degree > *max_degree) break;
    for (const auto& beta : exact_degree(d, degree)) {
      Point<Rational> p;
      p.reserve(d);
      for (std::size_t j = 0; j < d; ++j) {
        auto v = factors[j].stream(beta[j]);
        if (!v) break;
        p.push_back(std::move(*v));
      }
      if (p.size() == d) out.add(std::move(p));
      if (out.full()) return;
    }
  }
}

void ray_points(const UnionOfRays& u, PointCollector& out) {
  for (long t = 0; !out.full(); ++t) {
    for (const auto& r : u.rays) {
      Point<Rational> p(r.origin.size());
      for (std::size_t i = 0; i < p.size(); ++i) p[i] = r.origin[i] + r.direction[i] * t;
      out.add(std::move(p));
      if (out.full()) return;
    }
  }
}

void cone_points(const AffineCone& c, PointCollector& out) {
  const std::size_t d = c.vertex.size();
  for (unsigned degree = 0; !out.full(); ++degree) {
    for (const auto& beta : exact_degree(d, degree)) {
      Point<Rational> p = c.vertex;
      for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j) p[j] += c.generators[i][j] * static_cast<long>(beta[i]);
      out.add(std::move(p));
      if (out.full()) return;
    }
  }
}

void generator_points(const SampledSet& s, std::size_t d, PointCollector& out) {
  if (s.escapes.empty()) return;
  // Graded walk over (base indices, value index) for each generator.
  for (unsigned degree = 0; !out.full(); ++degree) {
    bool produced = false;
    for (const auto& g : s.escapes) {
      for (const auto& beta : exact_degree(d, degree)) {
        Point<Rational> p(d);
        bool ok = true;
        std::size_t b = 0;
        for (std::size_t j = 0; j < d && ok; ++j) {
          const NodeSequence& seq = j == g.axis ? g.values : g.bases[b++];
          const std::size_t idx = j == g.axis ? beta[d - 1] : beta[b - 1];
          auto avail = seq.available();
          if (avail && idx >= *avail) {
            ok = false;
          } else {
            p[j] = seq.value(idx);
          }
        }
        if (!ok) continue;
        produced = true;
        out.add(std::move(p));
        if (out.full()) return;
      }
    }
    // Generators always have unbounded values, so some index keeps producing.
    if (!produced && degree > 64) return;
  }
}

void grid_order(const SupportSpec& k, PointCollector& out) {
  if (auto factors = k.product_factors()) {
    product_points(*factors, out);
    return;
  }
  const auto& shape = k.shape();
  if (const auto* u = std::get_if<UnionOfRays>(&shape)) {
    ray_points(*u, out);
  } else if (const auto* c = std::get_if<AffineCone>(&shape)) {
    cone_points(*c, out);
  } else {
    const auto& s = std::get<SampledSet>(shape);
    for (const auto& p : s.points) {
      out.add(p);
      if (out.full()) return;
    }
    generator_points(s, k.dimension(), out);
  }
}

// Golden-ratio (Kronecker) sequence in [0,1)^d: frac(shift + i * alpha_j).
std::vector<double> kronecker(std::size_t i, std::size_t d, double shift) {
  // alpha_j = g^-(j+1) with g the unique positive root of x^(d+1) = x + 1.
  double g = 2.0;
  for (int it = 0; it < 64; ++it) g = std::pow(1.0 + g, 1.0 / static_cast<double>(d + 1));
  std::vector<double> u(d);
  for (std::size_t j = 0; j < d; ++j) {
    const double alpha = std::pow(1.0 / g, static_cast<double>(j + 1));
    double v = shift + static_cast<double>(i) * alpha;
    u[j] = v - std::floor(v);
  }
  return u;
}

std::vector<double> unit_direction(std::size_t i, std::size_t d, double shift) {
  if (d == 1) return {i % 2 == 0 ? 1.0 : -1.0};
  if (d == 2) {
    const double theta = 2.0 * M_PI * kronecker(i, 1, shift)[0];
    return {std::cos(theta), std::sin(theta)};
  }
  for (std::size_t attempt = 0;; ++attempt) {
    auto u = kronecker(i + attempt * 7919, d, shift);
    double norm = 0.0;
    for (auto& v : u) {
      v = 2.0 * v - 1.0;
      norm += v * v;
    }
    norm = std::sqrt(norm);
    if (norm > 1e-3) {
      for (auto& v : u) v /= norm;
      return u;
    }
  }
}

double seed_shift(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

double radius(std::size_t round) { return std::exp2(static_cast<double>(round) / 4.0); }

Point<Rational> to_rational(const std::vector<double>& v) {
  Point<Rational> p;
  p.reserve(v.size());
  for (double x : v) p.emplace_back(x);
  return p;
}

void radial_continuous(const SupportSpec& k, std::uint64_t seed, PointCollector& out) {
  const std::size_t d = k.dimension();
  const std::size_t per_round = 2 * d;
  const double shift = seed_shift(seed);
  const auto& shape = k.shape();
  for (std::size_t i = 0; !out.full(); ++i) {
    const double r = radius(i / per_round);
    std::vector<double> x(d);
    if (std::holds_alternative<FullSpace>(shape) || std::holds_alternative<Orthant>(shape)) {
      auto u = unit_direction(i, d, shift);
      for (std::size_t j = 0; j < d; ++j)
        x[j] = r * (std::holds_alternative<Orthant>(shape) ? std::fabs(u[j]) : u[j]);
    } else if (const auto* s = std::get_if<Strip>(&shape)) {
      std::vector<std::size_t> free_axes;
      for (std::size_t j = 0; j < d; ++j)
        if (!s->coordinates[j]) free_axes.push_back(j);
      const auto q = kronecker(i, d, shift);
      for (std::size_t j = 0; j < d; ++j) {
        if (const auto& iv = s->coordinates[j])
          x[j] = iv->lo.get_d() + (iv->hi.get_d() - iv->lo.get_d()) * q[j];
      }
      if (!free_axes.empty()) {
        auto u = unit_direction(i, free_axes.size(), shift);
        for (std::size_t f = 0; f < free_axes.size(); ++f) x[free_axes[f]] = r * u[f];
      }
    } else if (const auto* b = std::get_if<BoundedBox>(&shape)) {
      const auto q = kronecker(i, d, shift);
      for (std::size_t j = 0; j < d; ++j)
        x[j] = b->intervals[j].lo.get_d() +
               (b->intervals[j].hi.get_d() - b->intervals[j].lo.get_d()) * q[j];
    } else {
      const auto& c = std::get<AffineCone>(shape);
      auto q = kronecker(i, d, shift);
      double total = 0.0;
      for (double v : q) total += v;
      if (total <= 0.0) total = 1.0;
      for (std::size_t j = 0; j < d; ++j) {
        x[j] = c.vertex[j].get_d();
        for (std::size_t g = 0; g < d; ++g) x[j] += r * (q[g] / total) * c.generators[g][j].get_d();
      }
    }
    Point<Rational> p = to_rational(x);
    if (contains(k, p)) out.add(std::move(p));
    if (i > 64 * (out.size() + 16)) break;
  }
}

void radial_discrete(const SupportSpec& k, std::size_t n, std::uint64_t seed, PointCollector& out) {
  PointCollector pool(std::max<std::size_t>(4 * n, n + 16));
  grid_order(k, pool);
  auto points = pool.take();
  std::mt19937_64 rng(seed);
  for (std::size_t i = points.size(); i > 1; --i) {
    const std::size_t j = static_cast<std::size_t>(rng() % i);
    std::swap(points[i - 1], points[j]);
  }
  for (auto& p : points) {
    out.add(std::move(p));
    if (out.full()) return;
  }
}

bool is_discrete(const SupportSpec& k) {
  const auto& s = k.shape();
  return std::holds_alternative<Grid>(s) || std::holds_alternative<PointSequence1D>(s) ||
         std::holds_alternative<UnionOfRays>(s) || std::holds_alternative<SampledSet>(s);
}

}  // namespace

std::vector<Point<Rational>> sample_up_to(const SupportSpec& k, std::size_t n,
                                          SampleStrategy strategy, std::uint64_t seed) {
  PointCollector out(n);
  if (strategy == SampleStrategy::Radial) {
    if (is_discrete(k)) {
      radial_discrete(k, n, seed, out);
    } else {
      radial_continuous(k, seed, out);
    }
  } else {
    grid_order(k, out);
  }
  return out.take();
}

std::vector<Point<Rational>> sample(const SupportSpec& k, std::size_t n, SampleStrategy strategy,
                                    std::uint64_t seed) {
  if (n == 0) throw SamplingError("sample count must be >= 1");
  auto points = sample_up_to(k, n, strategy, seed);
  if (points.size() < n)
    throw SamplingError(k.class_name() + " cannot produce " + std::to_string(n) +
                        " distinct points (got " + std::to_string(points.size()) + ")");
  return points;
}


// ---------------------------------------------------------- escape sequences

Point<Rational> EscapeSequence::point(std::size_t n) const {
  Point<Rational> p;
  p.reserve(base.size() + 1);
  for (std::size_t i = 0, b = 0; i <= base.size(); ++i) p.push_back(i == axis ? values.at(n) : base[b++]);
  return p;
}

namespace {

std::vector<Rational> schedule(std::size_t length, EscapeRate rate) {
  std::vector<Rational> r;
  r.reserve(length);
  for (std::size_t k = 1; k <= length; ++k) {
    if (rate == EscapeRate::Linear) {
      r.emplace_back(static_cast<long>(k));
    } else {
      r.emplace_back(std::exp2(static_cast<double>(k - 1) / 8.0));
    }
  }
  return r;
}

// First `count` base points from the product of `factors`, graded order.
std::vector<Point<Rational>> product_bases(const std::vector<CoordinateSet>& factors,
                                           std::size_t count) {
  if (factors.empty()) return {Point<Rational>{}};
  PointCollector c(count);
  product_points(factors, c);
  return c.take();
}

std::vector<CoordinateSet> sequence_factors(const std::vector<NodeSequence>& seqs) {
  std::vector<CoordinateSet> f;
  for (const auto& s : seqs) f.push_back({CoordinateSet::Kind::Sequence, 0, 0, s});
  return f;
}

std::vector<Rational> sequence_values(const NodeSequence& s, std::size_t length) {
  std::vector<Rational> v;
  const std::size_t n = s.available() ? std::min(length, *s.available()) : length;
  for (std::size_t k = 0; k < n; ++k) v.push_back(s.value(k));
  return v;
}

EscapeQuery product_escapes(const std::vector<CoordinateSet>& factors, std::size_t axis,
                            std::size_t bases, std::size_t length, EscapeRate rate) {
  EscapeQuery q;
  const CoordinateSet& f = factors[axis];
  if (!f.unbounded()) {
    q.status = EscapeQuery::Status::None;
    q.reason = "coordinate x" + std::to_string(axis + 1) + " is bounded on K";
    return q;
  }
  std::vector<CoordinateSet> others;
  for (std::size_t j = 0; j < factors.size(); ++j)
    if (j != axis) others.push_back(factors[j]);
  q.infinite_bases = std::all_of(others.begin(), others.end(),
                                 [](const CoordinateSet& c) { return c.infinite(); });
  std::vector<std::vector<Rational>> directions;
  const auto r = schedule(length, rate);
  switch (f.kind) {
    case CoordinateSet::Kind::Line: {
      std::vector<Rational> neg;
      for (const auto& v : r) neg.emplace_back(-v);
      directions = {r, neg};
      break;
    }
    case CoordinateSet::Kind::HalfLine: {
      std::vector<Rational> pos;
      for (const auto& v : r) pos.push_back(f.lo + v);
      // Keep |x_n| increasing when the half-line starts below zero.
      while (!pos.empty() && sgn(pos.front()) <= 0) pos.erase(pos.begin());
      directions = {pos};
      break;
    }
    case CoordinateSet::Kind::Sequence:
      directions = {sequence_values(*f.sequence, length)};
      break;
    case CoordinateSet::Kind::Interval:
      break;
  }
  for (const auto& base : product_bases(others, bases)) {
    for (const auto& values : directions) q.sequences.push_back({axis, base, values});
  }
  q.status = EscapeQuery::Status::Available;
  return q;
}

EscapeQuery ray_escapes(const UnionOfRays& u, std::size_t axis, std::size_t bases,
                        std::size_t length, EscapeRate rate) {
  EscapeQuery q;
  const auto r = schedule(length, rate);
  std::set<Point<Rational>> used_bases;
  for (const auto& ray : u.rays) {
    bool axial = sgn(ray.direction[axis]) != 0;
    for (std::size_t i = 0; i < ray.direction.size() && axial; ++i)
      if (i != axis && sgn(ray.direction[i]) != 0) axial = false;
    if (!axial) continue;
    auto base = without_axis(ray.origin, axis);
    if (!used_bases.count(base) && used_bases.size() >= bases) continue;
    used_bases.insert(base);
    std::vector<Rational> values;
    for (const auto& t : r) values.push_back(ray.origin[axis] + t * ray.direction[axis]);
    while (values.size() > 1 && abs(values[1]) <= abs(values[0])) values.erase(values.begin());
    q.sequences.push_back({axis, std::move(base), std::move(values)});
  }
  if (q.sequences.empty()) {
    q.status = EscapeQuery::Status::None;
    q.reason = "no ray runs parallel to x" + std::to_string(axis + 1);
  } else {
    q.status = EscapeQuery::Status::Available;
    q.reason = "finitely many base points (one per axial ray)";
  }
  return q;
}

EscapeQuery cone_escapes(const SupportSpec& k, const AffineCone& c, std::size_t axis,
                         std::size_t bases, std::size_t length, EscapeRate rate) {
  EscapeQuery q;
  const std::size_t d = k.dimension();
  Point<Rational> e(d, Rational(0));
  e[axis] = 1;
  Point<Rational> origin_shift = c.vertex;  // G^{-1} e_j = coords(v + e_j)
  for (std::size_t j = 0; j < d; ++j) origin_shift[j] += e[j];
  const auto a = k.cone_coordinates(origin_shift);
  int sign = 0;
  if (std::all_of(a.begin(), a.end(), [](const Rational& v) { return sgn(v) > 0; })) sign = 1;
  if (std::all_of(a.begin(), a.end(), [](const Rational& v) { return sgn(v) < 0; })) sign = -1;
  if (sign == 0) {
    q.status = EscapeQuery::Status::None;
    q.reason = "neither +x" + std::to_string(axis + 1) + " nor -x" + std::to_string(axis + 1) +
               " is interior to the recession cone";
    return q;
  }
  q.infinite_bases = true;
  const auto r = schedule(length, rate);
  std::vector<CoordinateSet> lines(d - 1, CoordinateSet{CoordinateSet::Kind::Line, 0, 0, std::nullopt});
  for (const auto& base : product_bases(lines, bases)) {
    Point<Rational> y0;
    for (std::size_t i = 0, b = 0; i < d; ++i) y0.push_back(i == axis ? Rational(0) : base[b++]);
    const auto c0 = k.cone_coordinates(y0);
    // c0 + t * a >= 0 componentwise.
    Rational start = 0;
    for (std::size_t i = 0; i < d; ++i) {
      Rational bound = -c0[i] / a[i];
      if (sign > 0) start = std::max(start, bound);
      else start = std::min(start, bound);
    }
    std::vector<Rational> values;
    for (const auto& t : r) values.push_back(start + t * sign);
    q.sequences.push_back({axis, base, std::move(values)});
  }
  q.status = EscapeQuery::Status::Available;
  return q;
}

EscapeQuery sampled_escapes(const SampledSet& s, std::size_t axis, std::size_t bases,
                            std::size_t length) {
  EscapeQuery q;
  for (const auto& g : s.escapes) {
    if (g.axis != axis) continue;
    const auto factors = sequence_factors(g.bases);
    q.infinite_bases = q.infinite_bases ||
                       std::all_of(factors.begin(), factors.end(),
                                   [](const CoordinateSet& c) { return c.infinite(); });
    const auto values = sequence_values(g.values, length);
    for (const auto& base : product_bases(factors, bases)) q.sequences.push_back({axis, base, values});
  }
  if (q.sequences.empty()) {
    q.status = EscapeQuery::Status::Unknown;
    q.reason = "sampled set has no escape generator for x" + std::to_string(axis + 1);
  } else {
    q.status = EscapeQuery::Status::Available;
  }
  return q;
}

}  // namespace

EscapeQuery escape_sequences(const SupportSpec& k, std::size_t axis, std::size_t bases,
                             std::size_t length, EscapeRate rate) {
  if (axis >= k.dimension()) throw Error("escape axis out of range");
  if (bases == 0) bases = 1;
  EscapeQuery q;
  if (auto factors = k.product_factors()) {
    q = product_escapes(*factors, axis, bases, length, rate);
  } else if (const auto* u = std::get_if<UnionOfRays>(&k.shape())) {
    q = ray_escapes(*u, axis, bases, length, rate);
  } else if (const auto* c = std::get_if<AffineCone>(&k.shape())) {
    q = cone_escapes(k, *c, axis, bases, length, rate);
  } else {
    q = sampled_escapes(std::get<SampledSet>(k.shape()), axis, bases, length);
  }
  for (const auto& seq : q.sequences)
    for (std::size_t n = 0; n < seq.length(); ++n)
      if (!contains(k, seq.point(n)))
        throw Error("internal: escape point outside " + k.class_name());
  return q;
}

BoundednessInfo boundedness(const SupportSpec& k) {
  using Answer = BoundednessInfo::Answer;
  BoundednessInfo info;
  if (auto factors = k.product_factors()) {
    bool all_bounded = true;
    for (std::size_t j = 0; j < factors->size(); ++j) {
      if (!(*factors)[j].unbounded()) {
        if (!info.bounded_axis) info.bounded_axis = j;
      } else {
        all_bounded = false;
      }
    }
    info.bounded = all_bounded ? Answer::Yes : Answer::No;
    return info;
  }
  const auto& shape = k.shape();
  if (const auto* u = std::get_if<UnionOfRays>(&shape)) {
    info.bounded = Answer::No;
    for (std::size_t j = 0; j < k.dimension(); ++j) {
      const bool flat = std::all_of(u->rays.begin(), u->rays.end(),
                                    [j](const Ray& r) { return sgn(r.direction[j]) == 0; });
      if (flat) {
        info.bounded_axis = j;
        break;
      }
    }
    return info;
  }
  if (std::holds_alternative<AffineCone>(shape)) {
    info.bounded = Answer::No;
    return info;
  }
  const auto& s = std::get<SampledSet>(shape);
  if (!s.escapes.empty()) info.bounded = Answer::No;
  return info;
}

}  // namespace sigmoment
