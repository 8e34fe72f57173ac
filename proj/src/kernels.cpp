#include "sigmoment/kernels.hpp"

#include <cmath>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace sigmoment::kernels {

namespace {

unsigned max_degree_of(const std::vector<MultiIndex>& basis) {
  unsigned m = 0;
  for (const auto& alpha : basis)
    for (unsigned e : alpha.exponents()) m = std::max(m, e);
  return m;
}

// powers[j][e] = x_j^e for e <= max_exponent
template <typename T>
std::vector<std::vector<T>> power_table(const Point<T>& x, unsigned max_exponent) {
  std::vector<std::vector<T>> powers(x.size());
  for (std::size_t j = 0; j < x.size(); ++j) {
    auto& row = powers[j];
    row.reserve(max_exponent + 1);
    row.push_back(ScalarTraits<T>::one());
    for (unsigned e = 1; e <= max_exponent; ++e) row.push_back(T(row.back() * x[j]));
  }
  return powers;
}

template <typename T>
T monomial_value(const std::vector<std::vector<T>>& powers, const MultiIndex& alpha) {
  T v = powers[0][alpha[0]];
  for (std::size_t j = 1; j < powers.size(); ++j)
    if (alpha[j] != 0) v *= powers[j][alpha[j]];
  return v;
}

template <typename T>
void check_dimensions(const std::vector<Point<T>>& points, const std::vector<MultiIndex>& basis) {
  if (basis.empty()) return;
  const std::size_t d = basis.front().dimension();
  for (const auto& p : points)
    if (p.size() != d) throw DimensionMismatch(d, p.size());
}

template <typename T>
void fill_row(Matrix<T>& v, std::size_t i, const Point<T>& x,
              const std::vector<MultiIndex>& basis, unsigned max_exponent) {
  const auto powers = power_table(x, max_exponent);
  for (std::size_t k = 0; k < basis.size(); ++k) v(i, k) = monomial_value(powers, basis[k]);
}

template <typename T>
T moment_entry(const std::vector<std::vector<std::vector<T>>>& tables,
               const std::vector<T>& weights, const MultiIndex& alpha) {
  T sum = ScalarTraits<T>::zero();
  for (std::size_t i = 0; i < weights.size(); ++i)
    sum += weights[i] * monomial_value(tables[i], alpha);
  return sum;
}

void check_dimensions(const std::vector<Point<double>>& points, const Polynomial<double>& p) {
  for (const auto& x : points)
    if (x.size() != p.dimension()) throw DimensionMismatch(p.dimension(), x.size());
}

double weight_value(const Point<double>& x, unsigned n) {
  double s = 1.0;
  for (double v : x) s += v * v;
  return ipow(s, n);
}

}  // namespace

template <typename T>
Matrix<T> evaluation_matrix(const std::vector<Point<T>>& points,
                            const std::vector<MultiIndex>& basis) {
  check_dimensions(points, basis);
  Matrix<T> v(points.size(), basis.size());
  if (basis.empty()) return v;
  const unsigned max_exponent = max_degree_of(basis);
  const auto rows = static_cast<std::ptrdiff_t>(points.size());
#pragma omp parallel for schedule(dynamic, 4)
  for (std::ptrdiff_t i = 0; i < rows; ++i) {
    fill_row(v, static_cast<std::size_t>(i), points[static_cast<std::size_t>(i)], basis,
             max_exponent);
  }
  return v;
}

template <typename T>
std::vector<T> weighted_moments(const std::vector<Point<T>>& points,
                                const std::vector<T>& weights,
                                const std::vector<MultiIndex>& basis) {
  if (points.size() != weights.size()) throw DimensionMismatch(points.size(), weights.size());
  check_dimensions(points, basis);
  std::vector<T> out(basis.size(), ScalarTraits<T>::zero());
  if (points.empty() || basis.empty()) return out;
  const unsigned max_exponent = max_degree_of(basis);
  std::vector<std::vector<std::vector<T>>> tables(points.size());
  const auto atoms = static_cast<std::ptrdiff_t>(points.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < atoms; ++i) {
    const auto u = static_cast<std::size_t>(i);
    tables[u] = power_table(points[u], max_exponent);
  }
  const auto cols = static_cast<std::ptrdiff_t>(basis.size());
#pragma omp parallel for schedule(dynamic, 2)
  for (std::ptrdiff_t k = 0; k < cols; ++k) {
    const auto u = static_cast<std::size_t>(k);
    out[u] = moment_entry(tables, weights, basis[u]);
  }
  return out;
}

std::vector<double> growth_ratios(const Polynomial<double>& p, unsigned n,
                                  const std::vector<Point<double>>& points) {
  check_dimensions(points, p);
  std::vector<double> out(points.size(), 0.0);
  const auto count = static_cast<std::ptrdiff_t>(points.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < count; ++i) {
    const auto& x = points[static_cast<std::size_t>(i)];
    out[static_cast<std::size_t>(i)] = std::fabs(eval_poly(p, x)) / weight_value(x, n);
  }
  return out;
}

namespace serial {

template <typename T>
Matrix<T> evaluation_matrix(const std::vector<Point<T>>& points,
                            const std::vector<MultiIndex>& basis) {
  check_dimensions(points, basis);
  Matrix<T> v(points.size(), basis.size());
  if (basis.empty()) return v;
  const unsigned max_exponent = max_degree_of(basis);
  for (std::size_t i = 0; i < points.size(); ++i) fill_row(v, i, points[i], basis, max_exponent);
  return v;
}

template <typename T>
std::vector<T> weighted_moments(const std::vector<Point<T>>& points,
                                const std::vector<T>& weights,
                                const std::vector<MultiIndex>& basis) {
  if (points.size() != weights.size()) throw DimensionMismatch(points.size(), weights.size());
  check_dimensions(points, basis);
  std::vector<T> out(basis.size(), ScalarTraits<T>::zero());
  if (points.empty() || basis.empty()) return out;
  const unsigned max_exponent = max_degree_of(basis);
  std::vector<std::vector<std::vector<T>>> tables;
  tables.reserve(points.size());
  for (const auto& x : points) tables.push_back(power_table(x, max_exponent));
  for (std::size_t k = 0; k < basis.size(); ++k) out[k] = moment_entry(tables, weights, basis[k]);
  return out;
}

std::vector<double> growth_ratios(const Polynomial<double>& p, unsigned n,
                                  const std::vector<Point<double>>& points) {
  check_dimensions(points, p);
  std::vector<double> out;
  out.reserve(points.size());
  for (const auto& x : points) out.push_back(std::fabs(eval_poly(p, x)) / weight_value(x, n));
  return out;
}

template Matrix<Rational> evaluation_matrix(const std::vector<Point<Rational>>&,
                                            const std::vector<MultiIndex>&);
template Matrix<double> evaluation_matrix(const std::vector<Point<double>>&,
                                          const std::vector<MultiIndex>&);
template std::vector<Rational> weighted_moments(const std::vector<Point<Rational>>&,
                                                const std::vector<Rational>&,
                                                const std::vector<MultiIndex>&);
template std::vector<double> weighted_moments(const std::vector<Point<double>>&,
                                              const std::vector<double>&,
                                              const std::vector<MultiIndex>&);

}  // namespace serial

int max_threads() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

template Matrix<Rational> evaluation_matrix(const std::vector<Point<Rational>>&,
                                            const std::vector<MultiIndex>&);
template Matrix<double> evaluation_matrix(const std::vector<Point<double>>&,
                                          const std::vector<MultiIndex>&);
template std::vector<Rational> weighted_moments(const std::vector<Point<Rational>>&,
                                                const std::vector<Rational>&,
                                                const std::vector<MultiIndex>&);
template std::vector<double> weighted_moments(const std::vector<Point<double>>&,
                                              const std::vector<double>&,
                                              const std::vector<MultiIndex>&);

}  // namespace sigmoment::kernels
