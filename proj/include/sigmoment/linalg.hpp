#pragma once

// Linear algebra back ends. Exact: fraction-free (Bareiss) elimination over
// the integers after clearing row denominators. Float: SVD-based rank and
// minimum-norm solves through Eigen.

#include <optional>
#include <vector>

#include "sigmoment/kernels.hpp"

namespace sigmoment::linalg {

// Row echelon form of [A | b] computed fraction-free. Entries of `reduced`
// are integer minors of the denominator-cleared input.
struct EchelonForm {
  Matrix<mpz_class> reduced;
  std::vector<std::size_t> pivot_columns;  // one per nonzero row, increasing
  std::size_t rank = 0;
  std::size_t augmented_columns = 0;       // trailing columns that belong to b
};

// `augmented` trailing columns are excluded from pivot selection.
EchelonForm bareiss_echelon(const Matrix<Rational>& a, std::size_t augmented = 0);

std::size_t exact_rank(const Matrix<Rational>& a);

// Basis of {x : A x = 0}, one vector per free column, each with its free
// coordinate set to 1.
std::vector<std::vector<Rational>> exact_kernel(const Matrix<Rational>& a);

// A particular solution of A x = b with all free variables set to zero, or
// nullopt when the system is inconsistent.
std::optional<std::vector<Rational>> exact_solve(const Matrix<Rational>& a,
                                                 const std::vector<Rational>& b);

struct SvdRank {
  std::size_t rank = 0;
  std::vector<double> singular_values;  // descending
  // Right singular vector of the smallest singular value (unit norm); empty
  // when the matrix has no columns.
  std::vector<double> weakest_direction;
};

// Numerical rank with cutoff rel_cutoff * sigma_max.
SvdRank float_rank(const Matrix<double>& a, double rel_cutoff = 1e-10);

// Minimum 2-norm solution of A x = b (A may be wide).
std::vector<double> least_norm_solve(const Matrix<double>& a, const std::vector<double>& b);

// 2-norm condition estimate sigma_max / sigma_min over the nonzero singular values.
double condition_estimate(const SvdRank& svd);

}  // namespace sigmoment::linalg
