#pragma once

// Two-phase revised simplex for   min c^T x  s.t.  A x = b, x >= 0.
//
// The basis inverse is stored explicitly and updated by a rank-one pivot each
// iteration. Entering and leaving variables follow Bland's rule (smallest
// eligible index), which rules out cycling and makes the returned vertex a
// deterministic function of the input. With T = Rational every comparison is
// exact and `tolerance` is ignored.

#include <string>
#include <vector>

#include "sigmoment/kernels.hpp"

namespace sigmoment::lp {

enum class Status { Optimal, Infeasible, Unbounded, IterationLimit };

inline const char* to_string(Status s) {
  switch (s) {
    case Status::Optimal: return "optimal";
    case Status::Infeasible: return "infeasible";
    case Status::Unbounded: return "unbounded";
    case Status::IterationLimit: return "iteration-limit";
  }
  return "unknown";
}

template <typename T>
struct Result {
  Status status = Status::Infeasible;
  std::vector<T> x;
  T objective{};
  std::vector<std::size_t> basis;  // basic column per row; >= n marks an artificial
  std::size_t iterations = 0;
};

template <typename T>
class RevisedSimplex {
 public:
  RevisedSimplex(const Matrix<T>& a, std::vector<T> b, std::vector<T> c, double tolerance = 1e-8)
      : a_(a), b_(std::move(b)), c_(std::move(c)), tol_(tolerance) {
    if (b_.size() != a_.rows()) throw DimensionMismatch(a_.rows(), b_.size());
    if (c_.size() != a_.cols()) throw DimensionMismatch(a_.cols(), c_.size());
    m_ = a_.rows();
    n_ = a_.cols();
  }

  Result<T> solve(std::size_t max_iterations = 100000) {
    Result<T> result;
    // Rows with negative right-hand side are negated so the artificial
    // basis starts feasible.
    sign_.assign(m_, 1);
    for (std::size_t i = 0; i < m_; ++i)
      if (negative(b_[i])) sign_[i] = -1;

    basis_.resize(m_);
    binv_ = Matrix<T>(m_, m_);
    xb_.resize(m_);
    for (std::size_t i = 0; i < m_; ++i) {
      basis_[i] = n_ + i;
      binv_(i, i) = ScalarTraits<T>::one();
      xb_[i] = sign_[i] > 0 ? b_[i] : T(-b_[i]);
    }

    // Phase 1: minimise the sum of artificials.
    std::vector<T> phase1(n_ + m_, ScalarTraits<T>::zero());
    for (std::size_t i = 0; i < m_; ++i) phase1[n_ + i] = ScalarTraits<T>::one();
    Status s = iterate(phase1, true, max_iterations, result.iterations);
    if (s == Status::IterationLimit) {
      result.status = s;
      return result;
    }
    T infeasibility = ScalarTraits<T>::zero();
    for (std::size_t i = 0; i < m_; ++i)
      if (basis_[i] >= n_) infeasibility += xb_[i];
    if (positive(infeasibility)) {
      result.status = Status::Infeasible;
      return result;
    }
    drive_out_artificials();

    // Phase 2 on the original costs; artificials may no longer enter.
    std::vector<T> phase2(n_ + m_, ScalarTraits<T>::zero());
    for (std::size_t j = 0; j < n_; ++j) phase2[j] = c_[j];
    s = iterate(phase2, false, max_iterations, result.iterations);
    result.status = s;
    if (s != Status::Optimal) return result;

    result.x.assign(n_, ScalarTraits<T>::zero());
    for (std::size_t i = 0; i < m_; ++i)
      if (basis_[i] < n_) result.x[basis_[i]] = xb_[i];
    result.objective = ScalarTraits<T>::zero();
    for (std::size_t j = 0; j < n_; ++j) result.objective += c_[j] * result.x[j];
    result.basis = basis_;
    return result;
  }

 private:
  bool positive(const T& v) const {
    if constexpr (ScalarTraits<T>::exact) return sgn(v) > 0;
    else return v > tol_;
  }
  bool negative(const T& v) const {
    if constexpr (ScalarTraits<T>::exact) return sgn(v) < 0;
    else return v < -tol_;
  }

  // Column j of the sign-adjusted [A | I].
  T column_entry(std::size_t i, std::size_t j) const {
    if (j >= n_) return j - n_ == i ? ScalarTraits<T>::one() : ScalarTraits<T>::zero();
    return sign_[i] > 0 ? a_(i, j) : T(-a_(i, j));
  }

  std::vector<T> ftran(std::size_t j) const {
    std::vector<T> u(m_, ScalarTraits<T>::zero());
    if (j >= n_) {
      for (std::size_t i = 0; i < m_; ++i) u[i] = binv_(i, j - n_);
      return u;
    }
    for (std::size_t k = 0; k < m_; ++k) {
      const T ak = column_entry(k, j);
      if (ScalarTraits<T>::is_zero(ak)) continue;
      for (std::size_t i = 0; i < m_; ++i) u[i] += binv_(i, k) * ak;
    }
    return u;
  }

  void pivot(std::size_t row, std::size_t entering, const std::vector<T>& u) {
    const T piv = u[row];
    for (std::size_t k = 0; k < m_; ++k) binv_(row, k) /= piv;
    xb_[row] /= piv;
    for (std::size_t i = 0; i < m_; ++i) {
      if (i == row || ScalarTraits<T>::is_zero(u[i])) continue;
      const T f = u[i];
      for (std::size_t k = 0; k < m_; ++k) binv_(i, k) -= f * binv_(row, k);
      xb_[i] -= f * xb_[row];
    }
    basis_[row] = entering;
  }

  Status iterate(const std::vector<T>& cost, bool allow_artificial, std::size_t max_iterations,
                 std::size_t& iterations) {
    std::vector<bool> in_basis(n_ + m_, false);
    for (;;) {
      if (iterations >= max_iterations) return Status::IterationLimit;
      std::fill(in_basis.begin(), in_basis.end(), false);
      for (std::size_t b : basis_) in_basis[b] = true;

      // Duals y^T = c_B^T B^{-1}.
      std::vector<T> y(m_, ScalarTraits<T>::zero());
      for (std::size_t i = 0; i < m_; ++i) {
        const T& cb = cost[basis_[i]];
        if (ScalarTraits<T>::is_zero(cb)) continue;
        for (std::size_t k = 0; k < m_; ++k) y[k] += cb * binv_(i, k);
      }

      // Bland: first column with negative reduced cost.
      const std::size_t limit = allow_artificial ? n_ + m_ : n_;
      std::size_t entering = limit;
      for (std::size_t j = 0; j < limit; ++j) {
        if (in_basis[j]) continue;
        T reduced = cost[j];
        for (std::size_t k = 0; k < m_; ++k) {
          const T ak = column_entry(k, j);
          if (!ScalarTraits<T>::is_zero(ak)) reduced -= y[k] * ak;
        }
        if (negative(reduced)) {
          entering = j;
          break;
        }
      }
      if (entering == limit) return Status::Optimal;

      const std::vector<T> u = ftran(entering);
      std::size_t leaving = m_;
      T best_ratio{};
      for (std::size_t i = 0; i < m_; ++i) {
        if (!positive(u[i])) continue;
        T ratio = xb_[i] / u[i];
        bool better = leaving == m_;
        if (!better) {
          if constexpr (ScalarTraits<T>::exact) {
            better = ratio < best_ratio || (ratio == best_ratio && basis_[i] < basis_[leaving]);
          } else {
            better = ratio < best_ratio - tol_ ||
                     (ratio <= best_ratio + tol_ && basis_[i] < basis_[leaving]);
          }
        }
        if (better) {
          leaving = i;
          best_ratio = ratio;
        }
      }
      if (leaving == m_) return Status::Unbounded;
      pivot(leaving, entering, u);
      if constexpr (!ScalarTraits<T>::exact) {
        for (auto& v : xb_)
          if (v < 0.0 && v > -tol_) v = 0.0;
      }
      ++iterations;
    }
  }

  // Replace zero-valued basic artificials by structural columns where
  // possible; rows where that fails are redundant and keep their artificial
  // at zero.
  void drive_out_artificials() {
    for (std::size_t row = 0; row < m_; ++row) {
      if (basis_[row] < n_) continue;
      std::vector<bool> in_basis(n_, false);
      for (std::size_t b : basis_)
        if (b < n_) in_basis[b] = true;
      for (std::size_t j = 0; j < n_; ++j) {
        if (in_basis[j]) continue;
        const std::vector<T> u = ftran(j);
        const bool usable = ScalarTraits<T>::exact ? !ScalarTraits<T>::is_zero(u[row])
                                                   : ScalarTraits<T>::abs(u[row]) > tol_;
        if (usable) {
          pivot(row, j, u);
          break;
        }
      }
    }
  }

  const Matrix<T>& a_;
  std::vector<T> b_;
  std::vector<T> c_;
  double tol_;
  std::size_t m_ = 0;
  std::size_t n_ = 0;
  std::vector<int> sign_;
  std::vector<std::size_t> basis_;
  Matrix<T> binv_;
  std::vector<T> xb_;
};

template <typename T>
Result<T> minimize(const Matrix<T>& a, const std::vector<T>& b, const std::vector<T>& c,
                   double tolerance = 1e-8) {
  return RevisedSimplex<T>(a, b, c, tolerance).solve();
}

}  // namespace sigmoment::lp
