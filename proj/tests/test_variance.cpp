#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "oracles.hpp"
#include "uclust/error.hpp"
#include "uclust/variance.hpp"

using namespace uclust;

namespace {

// k-th smallest pairwise difference by listing all pairs.
double kth_pair_diff(std::vector<double> x, std::size_t k) {
  std::vector<double> d;
  for (std::size_t i = 0; i < x.size(); ++i)
    for (std::size_t j = i + 1; j < x.size(); ++j) d.push_back(std::abs(x[i] - x[j]));
  std::sort(d.begin(), d.end());
  return d[k - 1];
}

constexpr double kQnFactor = 2.219144465985076;  // 1 / (sqrt(2) * Phi^-1(5/8))

}  // namespace

TEST_CASE("variance coefficient values") {
  CHECK(variance_coefficient(4, 2) == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
  CHECK(variance_coefficient(6, 3) == doctest::Approx(0.1).epsilon(1e-14));
  CHECK(variance_coefficient(6, 2) == variance_coefficient(6, 4));
  for (std::size_t n = 4; n <= 40; ++n)
    for (std::size_t j = 2; j <= n - 2; ++j)
      CHECK(variance_coefficient(n, j) ==
            doctest::Approx(oracle::coefficient(double(n), double(j))).epsilon(1e-13));
  CHECK_THROWS_AS(variance_coefficient(6, 1), DomainError);
  CHECK_THROWS_AS(variance_coefficient(6, 5), DomainError);
}

TEST_CASE("smile shape of the coefficient") {
  for (std::size_t n = 6; n <= 60; ++n) {
    CHECK(variance_coefficient(n, 2) > variance_coefficient(n, n / 2));
    for (std::size_t j = 2; j < n / 2; ++j)
      CHECK(variance_coefficient(n, j) > variance_coefficient(n, j + 1));
  }
}

TEST_CASE("robust scale on simple inputs") {
  std::vector<double> c(20, 3.5);
  CHECK(robust_scale(c) == 0.0);
  std::vector<double> few(9, 1.0);
  CHECK_THROWS_AS(robust_scale(few), InsufficientSampleError);

  std::mt19937_64 e(1);
  std::normal_distribution<double> z;
  for (std::size_t m : {10, 11, 37, 200}) {
    std::vector<double> x(m);
    for (auto& v : x) v = z(e);
    const std::size_t k = (m / 2 + 1) * (m / 2) / 2;
    const double d = kQnFactor * kth_pair_diff(x, k);
    CHECK(robust_scale(x) == doctest::Approx(d * d).epsilon(1e-14));
  }
}

TEST_CASE("robust scale is consistent for normal draws") {
  std::mt19937_64 e(2);
  std::normal_distribution<double> z;
  std::vector<double> x(10000);
  for (auto& v : x) v = z(e);
  CHECK(std::abs(robust_scale(x) - 1.0) < 0.05);
}

TEST_CASE("robust scale resists an outlier") {
  std::mt19937_64 e(3);
  std::normal_distribution<double> z;
  std::vector<double> x(1000);
  for (auto& v : x) v = z(e);
  const double clean = robust_scale(x);
  x[17] = 1e6;
  CHECK(std::abs(robust_scale(x) - clean) < 0.1 * clean);
}

TEST_CASE("grouped robust scale ignores within-atom pairs") {
  // Ten distinct atoms drawn twice each: ties carry no spread.
  std::vector<double> x;
  std::vector<std::size_t> g;
  for (std::size_t a = 0; a < 10; ++a)
    for (int r = 0; r < 2; ++r) {
      x.push_back(static_cast<double>(a));
      g.push_back(a);
    }
  CHECK(robust_scale_grouped(x, g) > 0.0);
  std::vector<std::size_t> distinct(20);
  for (std::size_t i = 0; i < 20; ++i) distinct[i] = i;
  std::vector<double> y(x);
  CHECK(robust_scale_grouped(y, distinct) == robust_scale(y));
  std::vector<std::size_t> wrong(3, 0);
  CHECK_THROWS_AS(robust_scale_grouped(x, wrong), DimensionError);
}

TEST_CASE("Monte Carlo variance contracts") {
  gen::Engine e(4);
  auto d = gen::normal_data(e, 10, 50);
  auto k = build_kernel_matrix(d, KernelSpec::squared_euclidean());
  const auto a = estimate_variance_mc(k, 5, 500, 7, false);
  const auto b = estimate_variance_mc(k, 5, 500, 7, false);
  CHECK(a.draws == b.draws);
  CHECK(a.variance == b.variance);
  CHECK(a.variance > 0.0);
  CHECK(a.draws.size() == 500);
  CHECK_THROWS_AS(estimate_variance_mc(k, 5, 99, 7, false), ConfigurationError);

  KernelMatrix flat(6, std::vector<double>{0, 1, 1, 1, 1, 1, 1, 0, 1, 1, 1, 1, 1, 1, 0, 1, 1, 1,
                                           1, 1, 1, 0, 1, 1, 1, 1, 1, 1, 0, 1, 1, 1, 1, 1, 1, 0});
  const auto z = estimate_variance_mc(flat, 3, 200, 1, false);
  CHECK(z.variance == 0.0);
  CHECK(z.degenerate);
}

TEST_CASE("Monte Carlo draws have mean zero") {
  gen::Engine e(8);
  auto d = gen::normal_data(e, 12, 60);
  auto k = build_kernel_matrix(d, KernelSpec::squared_euclidean());
  for (std::size_t n1 : {1, 3, 6}) {
    const auto est = estimate_variance_mc(k, n1, 4000, 2, false);
    double mean = 0.0;
    for (double v : est.draws) mean += v;
    mean /= static_cast<double>(est.draws.size());
    CHECK(std::abs(mean) < 4.0 * std::sqrt(est.variance / 4000.0));
  }
}

TEST_CASE("variance table layout") {
  gen::Engine e(5);
  auto d = gen::normal_data(e, 12, 100);
  auto k = build_kernel_matrix(d, KernelSpec::squared_euclidean());
  VarianceOptions o;
  o.seed = 3;
  const auto t = build_variance_table(k, o);
  CHECK(t.by_size.size() == 6);
  CHECK(t.method_by_size.at(1) == VarianceMethod::Robust);
  CHECK(t.method_by_size.at(6) == VarianceMethod::MonteCarlo);
  for (std::size_t j = 2; j < 6; ++j) {
    CHECK(t.method_by_size.at(j) == VarianceMethod::Scaled);
    CHECK(t.at(j) / t.at(6) ==
          doctest::Approx(variance_coefficient(12, j) / variance_coefficient(12, 6)).epsilon(1e-14));
  }
  CHECK(t.at(10) == t.at(2));
  CHECK_THROWS_AS(t.at(0), ConfigurationError);

  const auto again = build_variance_table(k, o);
  CHECK(again.by_size == t.by_size);

  auto small = build_kernel_matrix(gen::normal_data(e, 5, 30), KernelSpec::squared_euclidean());
  const auto ts = build_variance_table(small, o);
  CHECK(ts.method_by_size.at(2) == VarianceMethod::Robust);
}

TEST_CASE("empirical variance ratios follow the coefficient") {
  gen::Engine e(6);
  auto d = gen::normal_data(e, 12, 500);
  auto k = build_kernel_matrix(d, KernelSpec::squared_euclidean());
  std::vector<double> v(7);
  for (std::size_t j = 2; j <= 6; ++j) v[j] = estimate_variance_mc(k, j, 2000, 11, false).variance;
  for (std::size_t i = 2; i <= 6; ++i)
    for (std::size_t j = 2; j <= 6; ++j) {
      const double want = variance_coefficient(12, j) / variance_coefficient(12, i);
      CHECK(std::abs(v[j] / v[i] - want) <= 0.3 * want);
    }
}

TEST_CASE("robust estimate is smaller under strong separation") {
  gen::Engine e(7);
  auto d = gen::normal_data(e, 12, 200, 3.0, {0, 1, 2, 3, 4, 5});
  auto k = build_kernel_matrix(d, KernelSpec::squared_euclidean());
  const auto robust = estimate_variance_mc(k, 6, 2000, 5, true);
  const auto plain = estimate_variance_mc(k, 6, 2000, 5, false);
  CHECK(robust.variance < plain.variance);
}
