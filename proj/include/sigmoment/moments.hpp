#pragma once

// Multi-index bookkeeping: monomial bases, sparse polynomials, truncated moment
// sequences and finitely supported signed measures.

#include <compare>
#include <cstdint>
#include <limits>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "sigmoment/scalar.hpp"

namespace sigmoment {

class MultiIndex {
 public:
  MultiIndex() = default;
  explicit MultiIndex(std::vector<unsigned> exponents);
  static MultiIndex zero(std::size_t dimension);
  static MultiIndex unit(std::size_t dimension, std::size_t axis, unsigned power = 1);

  std::size_t dimension() const { return exponents_.size(); }
  unsigned total_degree() const { return degree_; }
  unsigned operator[](std::size_t j) const { return exponents_[j]; }
  const std::vector<unsigned>& exponents() const { return exponents_; }

  MultiIndex operator+(const MultiIndex& other) const;

  bool operator==(const MultiIndex& other) const = default;

  std::string to_string() const;

 private:
  std::vector<unsigned> exponents_;
  unsigned degree_ = 0;
};

// Graded lexicographic order: lower total degree first; within a degree the
// exponent vectors compare lexicographically with larger leading exponents
// first, so for d = 2: 1, x1, x2, x1^2, x1 x2, x2^2, ...
struct GradedLex {
  bool operator()(const MultiIndex& a, const MultiIndex& b) const;
};

// All multi-indices with |alpha| <= max_degree in graded lexicographic order.
// Length is C(max_degree + dimension, dimension).
std::vector<MultiIndex> enumerate_basis(std::size_t dimension, unsigned max_degree);

// Multi-indices of total degree exactly `degree`, in the same order.
std::vector<MultiIndex> exact_degree(std::size_t dimension, unsigned degree);

// Number of monomials of total degree <= max_degree in `dimension` variables.
std::size_t basis_size(std::size_t dimension, unsigned max_degree);

// Position lookup for a graded-lex basis.
class BasisIndex {
 public:
  explicit BasisIndex(const std::vector<MultiIndex>& basis);
  // Returns size() when alpha is not in the basis.
  std::size_t find(const MultiIndex& alpha) const;
  std::size_t size() const { return positions_.size(); }

 private:
  std::map<MultiIndex, std::size_t, GradedLex> positions_;
};

template <typename T>
class Polynomial {
 public:
  using Terms = std::map<MultiIndex, T, GradedLex>;
  static constexpr int kZeroDegree = std::numeric_limits<int>::min();

  explicit Polynomial(std::size_t dimension) : dimension_(dimension) {}
  Polynomial(std::size_t dimension, Terms terms);

  static Polynomial constant(std::size_t dimension, const T& value);
  static Polynomial monomial(const MultiIndex& alpha, const T& coefficient);
  static Polynomial coordinate(std::size_t dimension, std::size_t axis);
  // (1 + x_1^2 + ... + x_d^2)^n
  static Polynomial growth_weight(std::size_t dimension, unsigned n);

  std::size_t dimension() const { return dimension_; }
  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  int degree() const;
  // Degree in the single variable x_axis (kZeroDegree for the zero polynomial).
  int degree_in(std::size_t axis) const;
  T coefficient(const MultiIndex& alpha) const;

  Polynomial operator+(const Polynomial& other) const;
  Polynomial operator-(const Polynomial& other) const;
  Polynomial operator*(const Polynomial& other) const;
  Polynomial scaled(const T& factor) const;
  Polynomial pow(unsigned exponent) const;

  bool operator==(const Polynomial& other) const {
    return dimension_ == other.dimension_ && terms_ == other.terms_;
  }

  std::string to_string() const;

 private:
  void add_term(const MultiIndex& alpha, const T& coefficient);

  std::size_t dimension_;
  Terms terms_;
};

template <typename T>
class MomentSequence {
 public:
  // Values are given in enumerate_basis(dimension, max_degree) order.
  MomentSequence(std::size_t dimension, unsigned max_degree, std::vector<T> values);
  static MomentSequence zeros(std::size_t dimension, unsigned max_degree);

  std::size_t dimension() const { return dimension_; }
  unsigned max_degree() const { return max_degree_; }
  const std::vector<MultiIndex>& basis() const { return basis_; }
  const std::vector<T>& values() const { return values_; }
  std::size_t size() const { return values_.size(); }

  const T& at(const MultiIndex& alpha) const;
  const T& operator[](std::size_t i) const { return values_[i]; }

  // Same sequence truncated to a lower degree.
  MomentSequence truncated(unsigned degree) const;

  bool operator==(const MomentSequence& other) const {
    return dimension_ == other.dimension_ && max_degree_ == other.max_degree_ &&
           values_ == other.values_;
  }

 private:
  std::size_t dimension_;
  unsigned max_degree_;
  std::vector<MultiIndex> basis_;
  std::vector<T> values_;
};

template <typename T>
struct Atom {
  Point<T> point;
  T weight;
};

// Finitely supported signed measure sum_i w_i delta_{x_i}. Atoms are kept in
// insertion order; repeated points are merged and zero weights dropped.
template <typename T>
class SignedAtomicMeasure {
 public:
  explicit SignedAtomicMeasure(std::size_t dimension) : dimension_(dimension) {}
  SignedAtomicMeasure(std::size_t dimension, std::vector<Atom<T>> atoms);

  std::size_t dimension() const { return dimension_; }
  const std::vector<Atom<T>>& atoms() const { return atoms_; }
  std::size_t size() const { return atoms_.size(); }
  bool empty() const { return atoms_.empty(); }

  T total_variation() const;
  T total_mass() const;

  std::vector<Point<T>> points() const;
  std::vector<T> weights() const;

 private:
  std::size_t dimension_;
  std::vector<Atom<T>> atoms_;
};

template <typename T>
T eval_poly(const Polynomial<T>& p, std::span<const T> x);

template <typename T>
T eval_poly(const Polynomial<T>& p, const Point<T>& x) {
  return eval_poly(p, std::span<const T>(x));
}

template <typename T>
T integrate(const SignedAtomicMeasure<T>& mu, const Polynomial<T>& p);

template <typename T>
MomentSequence<T> moments_of(const SignedAtomicMeasure<T>& mu, unsigned max_degree);

template <typename To, typename From>
MomentSequence<To> convert(const MomentSequence<From>& s) {
  std::vector<To> values;
  values.reserve(s.size());
  for (const auto& v : s.values()) values.push_back(scalar_cast<To>(v));
  return MomentSequence<To>(s.dimension(), s.max_degree(), std::move(values));
}

template <typename To, typename From>
SignedAtomicMeasure<To> convert(const SignedAtomicMeasure<From>& mu) {
  std::vector<Atom<To>> atoms;
  atoms.reserve(mu.size());
  for (const auto& a : mu.atoms()) {
    atoms.push_back({point_cast<To>(a.point), scalar_cast<To>(a.weight)});
  }
  return SignedAtomicMeasure<To>(mu.dimension(), std::move(atoms));
}

template <typename To, typename From>
Polynomial<To> convert(const Polynomial<From>& p) {
  typename Polynomial<To>::Terms terms;
  for (const auto& [alpha, c] : p.terms()) terms.emplace(alpha, scalar_cast<To>(c));
  return Polynomial<To>(p.dimension(), std::move(terms));
}

extern template class Polynomial<Rational>;
extern template class Polynomial<double>;
extern template class MomentSequence<Rational>;
extern template class MomentSequence<double>;
extern template class SignedAtomicMeasure<Rational>;
extern template class SignedAtomicMeasure<double>;

}  // namespace sigmoment
