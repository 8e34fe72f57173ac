#include "sigmoment/linalg.hpp"

#include <Eigen/Dense>
#include <limits>

namespace sigmoment::linalg {

namespace {

Matrix<mpz_class> clear_denominators(const Matrix<Rational>& a) {
  Matrix<mpz_class> out(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    mpz_class scale = 1;
    for (std::size_t j = 0; j < a.cols(); ++j) {
      Rational v = a(i, j);
      v.canonicalize();
      mpz_lcm(scale.get_mpz_t(), scale.get_mpz_t(), v.get_den_mpz_t());
    }
    for (std::size_t j = 0; j < a.cols(); ++j) {
      Rational v = a(i, j) * scale;
      v.canonicalize();
      out(i, j) = v.get_num();
    }
  }
  return out;
}

void swap_rows(Matrix<mpz_class>& m, std::size_t r1, std::size_t r2) {
  if (r1 == r2) return;
  for (std::size_t j = 0; j < m.cols(); ++j) swap(m(r1, j), m(r2, j));
}

// Back substitution on the echelon rows, with every column outside `pivots`
// fixed by `free_values` (indexed by column).
std::vector<Rational> back_substitute(const EchelonForm& e, std::size_t unknowns,
                                      std::vector<Rational> x, std::size_t rhs_column,
                                      bool use_rhs) {
  for (std::size_t r = e.rank; r-- > 0;) {
    const std::size_t p = e.pivot_columns[r];
    Rational acc = use_rhs ? Rational(e.reduced(r, rhs_column)) : Rational(0);
    for (std::size_t j = p + 1; j < unknowns; ++j) {
      if (e.reduced(r, j) != 0) acc -= Rational(e.reduced(r, j)) * x[j];
    }
    x[p] = acc / Rational(e.reduced(r, p));
    x[p].canonicalize();
  }
  return x;
}

}  // namespace

EchelonForm bareiss_echelon(const Matrix<Rational>& a, std::size_t augmented) {
  EchelonForm e;
  e.reduced = clear_denominators(a);
  e.augmented_columns = augmented;
  auto& m = e.reduced;
  const std::size_t rows = m.rows();
  const std::size_t pivot_limit = m.cols() - augmented;
  mpz_class previous = 1;
  std::size_t r = 0;
  for (std::size_t c = 0; c < pivot_limit && r < rows; ++c) {
    // Smallest nonzero entry keeps intermediate growth down; ties go to the first row.
    std::size_t best = rows;
    for (std::size_t i = r; i < rows; ++i) {
      if (m(i, c) == 0) continue;
      if (best == rows || mpz_sizeinbase(m(i, c).get_mpz_t(), 2) <
                              mpz_sizeinbase(m(best, c).get_mpz_t(), 2))
        best = i;
    }
    if (best == rows) continue;
    swap_rows(m, r, best);
    const mpz_class pivot = m(r, c);
    for (std::size_t i = r + 1; i < rows; ++i) {
      const mpz_class factor = m(i, c);
      for (std::size_t j = c + 1; j < m.cols(); ++j) {
        mpz_class v = pivot * m(i, j) - factor * m(r, j);
        mpz_divexact(v.get_mpz_t(), v.get_mpz_t(), previous.get_mpz_t());
        m(i, j) = std::move(v);
      }
      m(i, c) = 0;
    }
    previous = pivot;
    e.pivot_columns.push_back(c);
    ++r;
  }
  e.rank = r;
  return e;
}

std::size_t exact_rank(const Matrix<Rational>& a) { return bareiss_echelon(a).rank; }

std::vector<std::vector<Rational>> exact_kernel(const Matrix<Rational>& a) {
  const EchelonForm e = bareiss_echelon(a);
  std::vector<bool> is_pivot(a.cols(), false);
  for (std::size_t p : e.pivot_columns) is_pivot[p] = true;
  std::vector<std::vector<Rational>> basis;
  for (std::size_t f = 0; f < a.cols(); ++f) {
    if (is_pivot[f]) continue;
    std::vector<Rational> x(a.cols(), Rational(0));
    x[f] = 1;
    basis.push_back(back_substitute(e, a.cols(), std::move(x), 0, false));
  }
  return basis;
}

std::optional<std::vector<Rational>> exact_solve(const Matrix<Rational>& a,
                                                 const std::vector<Rational>& b) {
  if (b.size() != a.rows()) throw DimensionMismatch(a.rows(), b.size());
  Matrix<Rational> aug(a.rows(), a.cols() + 1);
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) aug(i, j) = a(i, j);
    aug(i, a.cols()) = b[i];
  }
  const EchelonForm e = bareiss_echelon(aug, 1);
  for (std::size_t i = e.rank; i < a.rows(); ++i)
    if (e.reduced(i, a.cols()) != 0) return std::nullopt;
  std::vector<Rational> x(a.cols(), Rational(0));
  return back_substitute(e, a.cols(), std::move(x), a.cols(), true);
}

namespace {

Eigen::MatrixXd to_eigen(const Matrix<double>& a) {
  Eigen::MatrixXd m(static_cast<Eigen::Index>(a.rows()), static_cast<Eigen::Index>(a.cols()));
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j)
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = a(i, j);
  return m;
}

}  // namespace

SvdRank float_rank(const Matrix<double>& a, double rel_cutoff) {
  SvdRank out;
  if (a.cols() == 0 || a.rows() == 0) {
    if (a.cols() > 0) out.weakest_direction.assign(a.cols(), 0.0), out.weakest_direction[0] = 1.0;
    return out;
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(to_eigen(a), Eigen::ComputeFullV);
  const auto& s = svd.singularValues();
  out.singular_values.assign(s.data(), s.data() + s.size());
  const double cutoff = rel_cutoff * (s.size() > 0 ? s(0) : 0.0);
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if (s(i) > cutoff) ++out.rank;
  const Eigen::MatrixXd& v = svd.matrixV();
  const Eigen::Index last = v.cols() - 1;
  out.weakest_direction.resize(static_cast<std::size_t>(v.rows()));
  for (Eigen::Index i = 0; i < v.rows(); ++i)
    out.weakest_direction[static_cast<std::size_t>(i)] = v(i, last);
  return out;
}

std::vector<double> least_norm_solve(const Matrix<double>& a, const std::vector<double>& b) {
  if (b.size() != a.rows()) throw DimensionMismatch(a.rows(), b.size());
  Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(to_eigen(a));
  Eigen::VectorXd rhs = Eigen::Map<const Eigen::VectorXd>(b.data(), static_cast<Eigen::Index>(b.size()));
  Eigen::VectorXd x = cod.solve(rhs);
  return std::vector<double>(x.data(), x.data() + x.size());
}

double condition_estimate(const SvdRank& svd) {
  if (svd.rank == 0) return std::numeric_limits<double>::infinity();
  return svd.singular_values.front() / svd.singular_values[svd.rank - 1];
}

}  // namespace sigmoment::linalg
