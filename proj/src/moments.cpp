#include "sigmoment/moments.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

#include "sigmoment/kernels.hpp"

namespace sigmoment {

MultiIndex::MultiIndex(std::vector<unsigned> exponents) : exponents_(std::move(exponents)) {
  if (exponents_.empty()) throw Error("multi-index must have dimension >= 1");
  degree_ = std::accumulate(exponents_.begin(), exponents_.end(), 0U);
}

MultiIndex MultiIndex::zero(std::size_t dimension) {
  return MultiIndex(std::vector<unsigned>(dimension, 0));
}

MultiIndex MultiIndex::unit(std::size_t dimension, std::size_t axis, unsigned power) {
  std::vector<unsigned> e(dimension, 0);
  e.at(axis) = power;
  return MultiIndex(std::move(e));
}

MultiIndex MultiIndex::operator+(const MultiIndex& other) const {
  if (other.dimension() != dimension()) throw DimensionMismatch(dimension(), other.dimension());
  std::vector<unsigned> e(exponents_);
  for (std::size_t j = 0; j < e.size(); ++j) e[j] += other.exponents_[j];
  return MultiIndex(std::move(e));
}

std::string MultiIndex::to_string() const {
  std::ostringstream os;
  os << '[';
  for (std::size_t j = 0; j < exponents_.size(); ++j) os << (j ? "," : "") << exponents_[j];
  os << ']';
  return os.str();
}

bool GradedLex::operator()(const MultiIndex& a, const MultiIndex& b) const {
  if (a.total_degree() != b.total_degree()) return a.total_degree() < b.total_degree();
  return a.exponents() > b.exponents();
}

namespace {

// Appends all exponent vectors of the given total degree, largest leading
// exponent first.
void append_degree(std::size_t dimension, unsigned degree, std::vector<unsigned>& prefix,
                   std::vector<MultiIndex>& out) {
  if (prefix.size() + 1 == dimension) {
    prefix.push_back(degree);
    out.emplace_back(prefix);
    prefix.pop_back();
    return;
  }
  for (unsigned e = degree + 1; e-- > 0;) {
    prefix.push_back(e);
    append_degree(dimension, degree - e, prefix, out);
    prefix.pop_back();
  }
}

}  // namespace

std::vector<MultiIndex> enumerate_basis(std::size_t dimension, unsigned max_degree) {
  if (dimension == 0) throw Error("dimension must be >= 1");
  std::vector<MultiIndex> out;
  out.reserve(basis_size(dimension, max_degree));
  std::vector<unsigned> prefix;
  for (unsigned degree = 0; degree <= max_degree; ++degree)
    append_degree(dimension, degree, prefix, out);
  return out;
}

std::vector<MultiIndex> exact_degree(std::size_t dimension, unsigned degree) {
  if (dimension == 0) throw Error("dimension must be >= 1");
  std::vector<MultiIndex> out;
  std::vector<unsigned> prefix;
  append_degree(dimension, degree, prefix, out);
  return out;
}

std::size_t basis_size(std::size_t dimension, unsigned max_degree) {
  return binomial(max_degree + dimension, dimension);
}

BasisIndex::BasisIndex(const std::vector<MultiIndex>& basis) {
  for (std::size_t i = 0; i < basis.size(); ++i) positions_.emplace(basis[i], i);
}

std::size_t BasisIndex::find(const MultiIndex& alpha) const {
  auto it = positions_.find(alpha);
  return it == positions_.end() ? positions_.size() : it->second;
}

// ---------------------------------------------------------------- Polynomial

template <typename T>
Polynomial<T>::Polynomial(std::size_t dimension, Terms terms) : dimension_(dimension) {
  for (auto& [alpha, c] : terms) add_term(alpha, c);
}

template <typename T>
void Polynomial<T>::add_term(const MultiIndex& alpha, const T& coefficient) {
  if (alpha.dimension() != dimension_) throw DimensionMismatch(dimension_, alpha.dimension());
  if (ScalarTraits<T>::is_zero(coefficient)) return;
  auto [it, inserted] = terms_.emplace(alpha, coefficient);
  if (!inserted) {
    it->second += coefficient;
    if (ScalarTraits<T>::is_zero(it->second)) terms_.erase(it);
  }
}

template <typename T>
Polynomial<T> Polynomial<T>::constant(std::size_t dimension, const T& value) {
  return monomial(MultiIndex::zero(dimension), value);
}

template <typename T>
Polynomial<T> Polynomial<T>::monomial(const MultiIndex& alpha, const T& coefficient) {
  Polynomial p(alpha.dimension());
  p.add_term(alpha, coefficient);
  return p;
}

template <typename T>
Polynomial<T> Polynomial<T>::coordinate(std::size_t dimension, std::size_t axis) {
  return monomial(MultiIndex::unit(dimension, axis), ScalarTraits<T>::one());
}

template <typename T>
Polynomial<T> Polynomial<T>::growth_weight(std::size_t dimension, unsigned n) {
  Polynomial base = constant(dimension, ScalarTraits<T>::one());
  for (std::size_t j = 0; j < dimension; ++j)
    base.add_term(MultiIndex::unit(dimension, j, 2), ScalarTraits<T>::one());
  return base.pow(n);
}

template <typename T>
int Polynomial<T>::degree() const {
  if (terms_.empty()) return kZeroDegree;
  // Graded order keeps the highest total degree last.
  return static_cast<int>(terms_.rbegin()->first.total_degree());
}

template <typename T>
int Polynomial<T>::degree_in(std::size_t axis) const {
  int best = kZeroDegree;
  for (const auto& [alpha, c] : terms_) best = std::max(best, static_cast<int>(alpha[axis]));
  return best;
}

template <typename T>
T Polynomial<T>::coefficient(const MultiIndex& alpha) const {
  auto it = terms_.find(alpha);
  return it == terms_.end() ? ScalarTraits<T>::zero() : it->second;
}

template <typename T>
Polynomial<T> Polynomial<T>::operator+(const Polynomial& other) const {
  if (other.dimension_ != dimension_) throw DimensionMismatch(dimension_, other.dimension_);
  Polynomial out(*this);
  for (const auto& [alpha, c] : other.terms_) out.add_term(alpha, c);
  return out;
}

template <typename T>
Polynomial<T> Polynomial<T>::operator-(const Polynomial& other) const {
  return *this + other.scaled(T(-1));
}

template <typename T>
Polynomial<T> Polynomial<T>::operator*(const Polynomial& other) const {
  if (other.dimension_ != dimension_) throw DimensionMismatch(dimension_, other.dimension_);
  Polynomial out(dimension_);
  for (const auto& [a, ca] : terms_)
    for (const auto& [b, cb] : other.terms_) out.add_term(a + b, T(ca * cb));
  return out;
}

template <typename T>
Polynomial<T> Polynomial<T>::scaled(const T& factor) const {
  Polynomial out(dimension_);
  for (const auto& [alpha, c] : terms_) out.add_term(alpha, T(c * factor));
  return out;
}

template <typename T>
Polynomial<T> Polynomial<T>::pow(unsigned exponent) const {
  Polynomial result = constant(dimension_, ScalarTraits<T>::one());
  for (unsigned i = 0; i < exponent; ++i) result = result * *this;
  return result;
}

namespace {

std::string scalar_text(const Rational& v) {
  return v.get_den() == 1 ? v.get_num().get_str() : format_rational(v);
}
std::string scalar_text(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

}  // namespace

template <typename T>
std::string Polynomial<T>::to_string() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [alpha, c] : terms_) {
    const bool negative = c < ScalarTraits<T>::zero();
    const T magnitude = ScalarTraits<T>::abs(c);
    if (first) {
      if (negative) os << '-';
    } else {
      os << (negative ? " - " : " + ");
    }
    first = false;
    std::string factors;
    for (std::size_t j = 0; j < alpha.dimension(); ++j) {
      if (alpha[j] == 0) continue;
      if (!factors.empty()) factors += '*';
      factors += "x" + std::to_string(j + 1);
      if (alpha[j] > 1) factors += '^' + std::to_string(alpha[j]);
    }
    if (factors.empty()) {
      os << scalar_text(magnitude);
    } else if (magnitude == ScalarTraits<T>::one()) {
      os << factors;
    } else {
      os << scalar_text(magnitude) << '*' << factors;
    }
  }
  return os.str();
}

// ------------------------------------------------------------ MomentSequence

template <typename T>
MomentSequence<T>::MomentSequence(std::size_t dimension, unsigned max_degree,
                                  std::vector<T> values)
    : dimension_(dimension),
      max_degree_(max_degree),
      basis_(enumerate_basis(dimension, max_degree)),
      values_(std::move(values)) {
  if (values_.size() != basis_.size())
    throw Error("moment sequence needs " + std::to_string(basis_.size()) + " values, got " +
                std::to_string(values_.size()));
}

template <typename T>
MomentSequence<T> MomentSequence<T>::zeros(std::size_t dimension, unsigned max_degree) {
  return MomentSequence(dimension, max_degree,
                        std::vector<T>(basis_size(dimension, max_degree), ScalarTraits<T>::zero()));
}

template <typename T>
const T& MomentSequence<T>::at(const MultiIndex& alpha) const {
  if (alpha.dimension() != dimension_) throw DimensionMismatch(dimension_, alpha.dimension());
  if (alpha.total_degree() > max_degree_)
    throw Error("moment " + alpha.to_string() + " exceeds max degree");
  // Graded-lex position: everything of lower degree comes first.
  std::size_t offset = alpha.total_degree() == 0 ? 0 : basis_size(dimension_, alpha.total_degree() - 1);
  auto first = basis_.begin() + static_cast<std::ptrdiff_t>(offset);
  auto last = basis_.begin() +
              static_cast<std::ptrdiff_t>(basis_size(dimension_, alpha.total_degree()));
  auto it = std::lower_bound(first, last, alpha, GradedLex{});
  return values_[static_cast<std::size_t>(it - basis_.begin())];
}

template <typename T>
MomentSequence<T> MomentSequence<T>::truncated(unsigned degree) const {
  if (degree > max_degree_) throw Error("cannot truncate to a higher degree");
  std::vector<T> v(values_.begin(),
                   values_.begin() + static_cast<std::ptrdiff_t>(basis_size(dimension_, degree)));
  return MomentSequence(dimension_, degree, std::move(v));
}

// -------------------------------------------------------- SignedAtomicMeasure

template <typename T>
SignedAtomicMeasure<T>::SignedAtomicMeasure(std::size_t dimension, std::vector<Atom<T>> atoms)
    : dimension_(dimension) {
  std::map<Point<T>, std::size_t> seen;
  std::vector<Atom<T>> merged;
  for (auto& a : atoms) {
    if (a.point.size() != dimension_) throw DimensionMismatch(dimension_, a.point.size());
    auto [it, inserted] = seen.emplace(a.point, merged.size());
    if (inserted) {
      merged.push_back(std::move(a));
    } else {
      merged[it->second].weight += a.weight;
    }
  }
  for (auto& a : merged)
    if (!ScalarTraits<T>::is_zero(a.weight)) atoms_.push_back(std::move(a));
}

template <typename T>
T SignedAtomicMeasure<T>::total_variation() const {
  T tv = ScalarTraits<T>::zero();
  for (const auto& a : atoms_) tv += ScalarTraits<T>::abs(a.weight);
  return tv;
}

template <typename T>
T SignedAtomicMeasure<T>::total_mass() const {
  T m = ScalarTraits<T>::zero();
  for (const auto& a : atoms_) m += a.weight;
  return m;
}

template <typename T>
std::vector<Point<T>> SignedAtomicMeasure<T>::points() const {
  std::vector<Point<T>> out;
  out.reserve(atoms_.size());
  for (const auto& a : atoms_) out.push_back(a.point);
  return out;
}

template <typename T>
std::vector<T> SignedAtomicMeasure<T>::weights() const {
  std::vector<T> out;
  out.reserve(atoms_.size());
  for (const auto& a : atoms_) out.push_back(a.weight);
  return out;
}

// ---------------------------------------------------------------- operations

template <typename T>
T eval_poly(const Polynomial<T>& p, std::span<const T> x) {
  if (x.size() != p.dimension()) throw DimensionMismatch(p.dimension(), x.size());
  T sum = ScalarTraits<T>::zero();
  for (const auto& [alpha, c] : p.terms()) {
    T term = c;
    for (std::size_t j = 0; j < x.size(); ++j)
      if (alpha[j] != 0) term *= ipow(x[j], alpha[j]);
    sum += term;
  }
  return sum;
}

template <typename T>
T integrate(const SignedAtomicMeasure<T>& mu, const Polynomial<T>& p) {
  if (mu.dimension() != p.dimension()) throw DimensionMismatch(mu.dimension(), p.dimension());
  T sum = ScalarTraits<T>::zero();
  for (const auto& a : mu.atoms()) sum += a.weight * eval_poly(p, a.point);
  return sum;
}

template <typename T>
MomentSequence<T> moments_of(const SignedAtomicMeasure<T>& mu, unsigned max_degree) {
  auto basis = enumerate_basis(mu.dimension(), max_degree);
  auto values = kernels::weighted_moments(mu.points(), mu.weights(), basis);
  return MomentSequence<T>(mu.dimension(), max_degree, std::move(values));
}

template class Polynomial<Rational>;
template class Polynomial<double>;
template class MomentSequence<Rational>;
template class MomentSequence<double>;
template class SignedAtomicMeasure<Rational>;
template class SignedAtomicMeasure<double>;

template Rational eval_poly(const Polynomial<Rational>&, std::span<const Rational>);
template double eval_poly(const Polynomial<double>&, std::span<const double>);
template Rational integrate(const SignedAtomicMeasure<Rational>&, const Polynomial<Rational>&);
template double integrate(const SignedAtomicMeasure<double>&, const Polynomial<double>&);
template MomentSequence<Rational> moments_of(const SignedAtomicMeasure<Rational>&, unsigned);
template MomentSequence<double> moments_of(const SignedAtomicMeasure<double>&, unsigned);

}  // namespace sigmoment
