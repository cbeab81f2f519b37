#include <doctest.h>

#include <cmath>
#include <limits>
#include <vector>

#include "oracles.hpp"
#include "uclust/error.hpp"
#include "uclust/kernel.hpp"

using namespace uclust;

TEST_CASE("averaged squared euclidean kernel values") {
  const auto k = KernelSpec::squared_euclidean();
  std::vector<double> a{0, 0}, b{2, 0};
  CHECK(evaluate_kernel(k, a, b) == 2.0);
  std::vector<double> x{3.7, -1.2, 0};
  CHECK(evaluate_kernel(k, x, x) == 0.0);
  std::vector<double> p{1, 2, 3}, q{4, 0, 3};
  CHECK(evaluate_kernel(k, p, q) == doctest::Approx(13.0 / 3.0).epsilon(1e-15));
}

TEST_CASE("absolute and user kernels") {
  std::vector<double> p{1, 2, 3}, q{4, 0, 3};
  CHECK(evaluate_kernel(KernelSpec::absolute(), p, q) == doctest::Approx(5.0 / 3.0));
  auto cube = KernelSpec::user("cube", [](double u, double v) { return std::abs(u - v) * (u - v) * (u - v); });
  CHECK(evaluate_kernel(cube, p, q) == doctest::Approx((27.0 + 8.0) / 3.0));
  CHECK(KernelSpec::from_name("absolute").kind == KernelKind::AveragedAbsolute);
  CHECK_THROWS_AS(KernelSpec::from_name("cosine"), ValidationError);
}

TEST_CASE("kernel argument errors") {
  const auto k = KernelSpec::squared_euclidean();
  std::vector<double> a{1, 2}, b{1, 2, 3};
  CHECK_THROWS_AS(evaluate_kernel(k, a, b), DimensionError);
  std::vector<double> c{1, std::numeric_limits<double>::quiet_NaN()};
  CHECK_THROWS_AS(evaluate_kernel(k, a, c), DomainError);
}

TEST_CASE("kernel matrix on small data") {
  DataMatrix two(2, 1, {0, 2});
  auto k2 = build_kernel_matrix(two, KernelSpec::squared_euclidean());
  CHECK(k2(0, 0) == 0.0);
  CHECK(k2(0, 1) == 4.0);
  CHECK(k2(1, 0) == 4.0);

  DataMatrix three(3, 2, {0, 0, 2, 0, 0, 2});
  auto k3 = build_kernel_matrix(three, KernelSpec::squared_euclidean());
  CHECK(k3(0, 1) == 2.0);
  CHECK(k3(0, 2) == 2.0);
  CHECK(k3(1, 2) == 4.0);
  CHECK(k3.dimension() == 2);
}

TEST_CASE("data matrix validation") {
  CHECK_THROWS_AS(DataMatrix(1, 2, {1, 2}), TooSmallError);
  CHECK_THROWS_AS(DataMatrix(2, 2, {1, 2, 3}), DimensionError);
  CHECK_THROWS_AS(DataMatrix(2, 1, {1, INFINITY}), DomainError);
  CHECK_THROWS_AS(DataMatrix(2, 1, {1, 2}, {"a", "a"}), ValidationError);
  DataMatrix d(2, 1, {1, 2});
  CHECK(d.labels().size() == 2);
  CHECK(d.labels()[0] != d.labels()[1]);
}

TEST_CASE("kernel matrix rejects asymmetric input") {
  CHECK_THROWS_AS(KernelMatrix(2, {0, 1, 2, 0}), DomainError);
  CHECK_THROWS_AS(KernelMatrix(2, {0, 1, 1}), DimensionError);
}

TEST_CASE("submatrix keeps the selected entries") {
  gen::Engine e(3);
  auto d = gen::normal_data(e, 6, 7);
  auto k = build_kernel_matrix(d, KernelSpec::squared_euclidean());
  std::vector<std::size_t> m{1, 3, 4};
  auto s = k.submatrix(m);
  REQUIRE(s.size() == 3);
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) CHECK(s(i, j) == k(m[i], m[j]));
}

TEST_CASE("kernel matrix matches pairwise oracle") {
  gen::Engine e(11);
  for (int rep = 0; rep < 20; ++rep) {
    auto d = gen::normal_data(e, 2 + rep % 7, 1 + rep * 13);
    auto k = build_kernel_matrix(d, KernelSpec::squared_euclidean());
    for (std::size_t i = 0; i < d.rows(); ++i)
      for (std::size_t j = 0; j < d.rows(); ++j)
        CHECK(k(i, j) == doctest::Approx(i == j ? 0.0 : oracle::phi(d, i, j)).epsilon(1e-12));
  }
}
