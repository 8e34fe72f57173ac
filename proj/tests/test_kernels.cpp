#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "sigmoment/linalg.hpp"
#include "sigmoment/simplex.hpp"

using namespace sigmoment;

namespace {

template <typename T>
std::vector<Point<T>> random_points(std::size_t n, std::size_t d, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> num(-40, 40);
  std::vector<Point<T>> pts(n);
  for (auto& p : pts)
    for (std::size_t j = 0; j < d; ++j) p.push_back(scalar_cast<T>(Rational(num(rng), 8)));
  return pts;
}

Matrix<Rational> to_matrix(const oracle::Mat& a) {
  Matrix<Rational> m(a.size(), a[0].size());
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < a[0].size(); ++j) m(i, j) = a[i][j];
  return m;
}

oracle::Mat random_int_matrix(std::size_t rows, std::size_t cols, std::size_t rank, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> e(-4, 4);
  oracle::Mat l(rows, oracle::Vec(rank)), r(rank, oracle::Vec(cols));
  for (auto& row : l)
    for (auto& v : row) v = e(rng);
  for (auto& row : r)
    for (auto& v : row) v = e(rng);
  oracle::Mat a(rows, oracle::Vec(cols, 0));
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j)
      for (std::size_t k = 0; k < rank; ++k) a[i][j] += l[i][k] * r[k][j];
  return a;
}

}  // namespace

TEST_CASE("parallel and serial kernels agree bit for bit") {
  const auto basis = enumerate_basis(3, 5);
  const auto pd = random_points<double>(500, 3, 1);
  const auto pq = random_points<Rational>(60, 3, 2);

  CHECK(kernels::evaluation_matrix(pd, basis) == kernels::serial::evaluation_matrix(pd, basis));
  CHECK(kernels::evaluation_matrix(pq, basis) == kernels::serial::evaluation_matrix(pq, basis));

  std::vector<double> wd(pd.size());
  for (std::size_t i = 0; i < wd.size(); ++i) wd[i] = (i % 7 == 0 ? -1.0 : 1.0) / (1.0 + i);
  CHECK(kernels::weighted_moments(pd, wd, basis) == kernels::serial::weighted_moments(pd, wd, basis));
  std::vector<Rational> wq(pq.size());
  for (std::size_t i = 0; i < wq.size(); ++i) wq[i] = Rational(static_cast<long>(i) - 30, 7);
  CHECK(kernels::weighted_moments(pq, wq, basis) == kernels::serial::weighted_moments(pq, wq, basis));

  const auto p = Polynomial<double>::coordinate(3, 0).pow(3) - Polynomial<double>::coordinate(3, 2);
  CHECK(kernels::growth_ratios(p, 1, pd) == kernels::serial::growth_ratios(p, 1, pd));
  CHECK(kernels::max_threads() >= 1);
}

TEST_CASE("evaluation matrix entries") {
  const auto basis = enumerate_basis(2, 2);
  const auto v = kernels::evaluation_matrix(std::vector<Point<Rational>>{{2, 3}}, basis);
  CHECK(v.row(0)[0] == 1);
  CHECK(v.row(0)[4] == 6);
  CHECK(v.row(0)[5] == 9);
}

TEST_CASE("exact rank and kernel match Gauss-Jordan") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t rows = 2 + trial % 6, cols = 2 + (trial * 7) % 6;
    const std::size_t r = 1 + trial % std::min(rows, cols);
    const auto a = random_int_matrix(rows, cols, r, rng);
    const auto m = to_matrix(a);
    CHECK(linalg::exact_rank(m) == oracle::rank(a));
    const auto ker = linalg::exact_kernel(m);
    CHECK(ker.size() == oracle::null_space(a).size());
    for (const auto& v : ker) {
      for (std::size_t i = 0; i < rows; ++i) {
        Rational s = 0;
        for (std::size_t j = 0; j < cols; ++j) s += a[i][j] * v[j];
        CHECK(s == 0);
      }
    }
  }
}

TEST_CASE("exact solve") {
  const oracle::Mat a{{1, 1, 1}, {1, 2, 3}, {1, 4, 9}};
  const oracle::Vec b{1, 0, 0};
  const auto x = linalg::exact_solve(to_matrix(a), b);
  REQUIRE(x);
  CHECK(*x == *oracle::solve_square(a, b));
  const oracle::Mat sing{{1, 2}, {2, 4}};
  CHECK_FALSE(linalg::exact_solve(to_matrix(sing), {1, 0}));
}

TEST_CASE("float rank and least-norm solve") {
  Matrix<double> a(3, 4);
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 4; ++j) a(i, j) = static_cast<double>((i + 1) * (j + 1));
  CHECK(linalg::float_rank(a).rank == 1);
  Matrix<double> b(2, 3);
  b(0, 0) = 1;
  b(1, 1) = 1;
  const auto x = linalg::least_norm_solve(b, {2.0, -1.0});
  CHECK(x[0] == doctest::Approx(2.0));
  CHECK(x[1] == doctest::Approx(-1.0));
  CHECK(x[2] == doctest::Approx(0.0));
}

TEST_CASE("exact simplex matches the vertex enumeration oracle") {
  std::mt19937_64 rng(9);
  std::uniform_int_distribution<int> node(-6, 12);
  for (int trial = 0; trial < 15; ++trial) {
    const unsigned n = 1 + trial % 3;
    std::vector<Rational> xs;
    while (xs.size() < 7) {
      Rational v(node(rng), 2);
      if (std::find(xs.begin(), xs.end(), v) == xs.end()) xs.push_back(v);
    }
    oracle::Mat a(n + 1, oracle::Vec(xs.size()));
    for (unsigned k = 0; k <= n; ++k)
      for (std::size_t i = 0; i < xs.size(); ++i) a[k][i] = oracle::power(xs[i], k);
    oracle::Vec b(n + 1);
    for (auto& v : b) v = node(rng);
    const auto best = oracle::min_total_variation(a, b);
    REQUIRE(best);
    // w = u - v with u, v >= 0
    oracle::Mat split = a;
    for (auto& row : split) {
      const std::size_t m = row.size();
      for (std::size_t i = 0; i < m; ++i) row.push_back(-row[i]);
    }
    const auto lp = lp::minimize(to_matrix(split), b, std::vector<Rational>(2 * xs.size(), 1));
    REQUIRE(lp.status == lp::Status::Optimal);
    CHECK(lp.objective == best->total_variation);
  }
}
