#include <doctest.h>

#include <boost/math/special_functions/erf.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>
#include <cmath>
#include <limits>
#include <numbers>

#include "oracles.hpp"
#include "uclust/error.hpp"
#include "uclust/normal.hpp"
#include "uclust/partition_opt.hpp"
#include "uclust/sigtest.hpp"

using namespace uclust;
using Big = boost::multiprecision::cpp_bin_float_50;

namespace {

Big big_max_pvalue(double z, Big m) {
  const Big cdf = 1 - boost::math::erfc(Big(z) / boost::multiprecision::sqrt(Big(2))) / 2;
  return 1 - boost::multiprecision::pow(cdf, m);
}

// Constants evaluated in extended precision, straight from the formula.
std::pair<long double, long double> gumbel_oracle(long double m) {
  const long double lm = std::log(m);
  const long double r = std::sqrt(2.0L * lm);
  const long double l2 = std::log(2.0L), l43 = std::log(4.0L / 3.0L);
  const long double a = std::log(4.0L * l2 * l2 / (l43 * l43)) / (2.0L * r);
  const long double b = r - (std::log(lm) + std::log(4.0L * std::numbers::pi_v<long double> * l2 * l2)) /
                                (2.0L * r);
  return {a, b};
}

}  // namespace

TEST_CASE("number of implicit tests") {
  CHECK(*n_star(10, true).exact == 511);
  CHECK(*n_star(5, true).exact == 15);
  CHECK(*n_star(10, false).exact == 501);
  const auto big = n_star(100, true);
  CHECK_FALSE(big.exact);
  CHECK(big.log_value == doctest::Approx(99 * std::log(2.0)).epsilon(1e-15));
  CHECK_THROWS_AS(n_star(2, true), DomainError);
}

TEST_CASE("max test p-value against high precision") {
  const double p = max_test_pvalue(4.0, 511.0);
  const double want = static_cast<double>(big_max_pvalue(4.0, 511));
  CHECK(std::abs(p - want) < 1e-9);
  CHECK(std::abs(p - 0.0160) < 1e-3);
  for (double z : {0.5, 2.0, 3.3, 5.0, 6.5, 8.0}) {
    const Big m = boost::multiprecision::pow(Big(2), 29) - 1;
    const double w = static_cast<double>(big_max_pvalue(z, m));
    CHECK(max_test_pvalue(z, n_star(30, true)) == doctest::Approx(w).epsilon(1e-9));
  }
}

TEST_CASE("max test p-value limits") {
  const double inf = std::numeric_limits<double>::infinity();
  CHECK(max_test_pvalue(inf, 511.0) == 0.0);
  CHECK(max_test_pvalue(-inf, 511.0) == 1.0);
  CHECK(max_test_pvalue(40.0, 511.0) < 1e-300);
  CHECK(max_test_pvalue(-40.0, 511.0) == 1.0);
  CHECK(max_test_pvalue(1.6449, 1.0) == doctest::Approx(0.05).epsilon(1e-4));
  CHECK_THROWS_AS(max_test_pvalue(1.0, 0.5), DomainError);
}

TEST_CASE("Gumbel constants") {
  const auto g = gumbel_params(511);
  const auto [a, b] = gumbel_oracle(511);
  CHECK(std::abs(g.a_m - static_cast<double>(a)) < 1e-12);
  CHECK(std::abs(g.b_m - static_cast<double>(b)) < 1e-12);
  CHECK(std::abs(g.a_m - 0.4453) < 1e-3);
  CHECK(std::abs(g.b_m - 3.0180) < 1e-3);
  CHECK(gumbel_params(1e6).b_m > g.b_m);
  const auto two = gumbel_params(2);
  CHECK(std::isfinite(two.a_m));
  CHECK(two.a_m > 0.0);
  CHECK_THROWS_AS(gumbel_params(1.5), DomainError);
}

TEST_CASE("Gumbel p-values") {
  const auto g = gumbel_params(511);
  CHECK(gumbel_pvalue(g.b_m, g) == doctest::Approx(1.0 - std::exp(-1.0)).epsilon(1e-14));
  CHECK(gumbel_pvalue(std::numeric_limits<double>::infinity(), g) == 0.0);
  CHECK(gumbel_pvalue(1e6, g) == 0.0);
}

TEST_CASE("Gumbel correction is conservative for large counts") {
  const double m = std::ldexp(1.0, 29) - 1.0;
  const auto g = gumbel_params(m);
  for (double z = g.b_m - 1.0; z <= g.b_m + 4.0; z += 0.01)
    CHECK(gumbel_pvalue(z, g) >= max_test_pvalue(z, m) - 0.02);
}

TEST_CASE("p-values decrease in z") {
  for (auto method : {PValueMethod::Single, PValueMethod::ExactMax, PValueMethod::Gumbel})
    for (std::size_t n : {5, 10, 30, 100}) {
      double prev = 1.0;
      for (double z = -5.0; z <= 12.0; z += 0.05) {
        const double p = corrected_pvalue(z, n, method);
        CHECK(p <= prev);
        CHECK(p >= 0.0);
        prev = p;
      }
    }
  CHECK(corrected_pvalue(0.0, 40, PValueMethod::ExactMax) == doctest::Approx(1.0));
}

TEST_CASE("normal helpers") {
  CHECK(normal_cdf(0.0) == 0.5);
  CHECK(normal_quantile(0.625) == doctest::Approx(0.31863936396437514).epsilon(1e-13));
  for (double p : {1e-12, 0.001, 0.3, 0.5, 0.9, 0.999999})
    CHECK(normal_cdf(normal_quantile(p)) == doctest::Approx(p).epsilon(1e-12));
  CHECK(log_normal_sf(40.0) == doctest::Approx(std::log(boost::math::erfc(40.0L / std::sqrt(2.0L)) / 2)).epsilon(1e-12));
}

TEST_CASE("method selection") {
  CHECK(resolve_method(Multiplicity::Auto, 29, 30) == PValueMethod::ExactMax);
  CHECK(resolve_method(Multiplicity::Auto, 30, 30) == PValueMethod::Gumbel);
  CHECK(resolve_method(Multiplicity::Max, 100, 30) == PValueMethod::ExactMax);
  CHECK(resolve_method(Multiplicity::Single, 100, 30) == PValueMethod::Single);
}

TEST_CASE("homogeneity test on constant data") {
  DataMatrix d(6, 3, std::vector<double>(18, 2.5));
  auto k = build_kernel_matrix(d, KernelSpec::squared_euclidean());
  const auto r = homogeneity_test(k, 0.05, TestConfig{});
  CHECK(r.p_value == 1.0);
  CHECK_FALSE(r.reject);
  REQUIRE_FALSE(r.warnings.empty());
  bool degenerate = false;
  for (const auto& w : r.warnings) degenerate |= w.find("degenerate") != std::string::npos;
  CHECK(degenerate);
}

TEST_CASE("homogeneity test errors and warnings") {
  gen::Engine e(3);
  auto k = build_kernel_matrix(gen::normal_data(e, 8, 10), KernelSpec::squared_euclidean());
  CHECK_THROWS_AS(homogeneity_test(k, 0.0, TestConfig{}), DomainError);
  CHECK_THROWS_AS(homogeneity_test(k, 1.5, TestConfig{}), DomainError);
  const auto r = homogeneity_test(k, 0.05, TestConfig{});
  bool few = false;
  for (const auto& w : r.warnings) few |= w.find("few features") != std::string::npos;
  CHECK(few);
}

TEST_CASE("homogeneity statistic equals the exhaustive maximum") {
  gen::Engine e(21);
  for (int rep = 0; rep < 30; ++rep) {
    const std::size_t n = 5 + rep % 4;
    auto d = gen::normal_data(e, n, rep % 2 ? 500 : 10, rep % 3 ? 0.0 : 1.0, {0, 1});
    auto k = build_kernel_matrix(d, KernelSpec::squared_euclidean());
    TestConfig cfg;
    cfg.seed = static_cast<std::uint64_t>(rep);
    const auto table = build_variance_table(k, cfg.variance_options());
    const auto r = homogeneity_test(k, table, 0.05, cfg);
    double best = -1e300;
    for (const auto& g : oracle::all_splits(n)) {
      const double z = oracle::bn(d, g) / std::sqrt(table.at(oracle::min_size(g)));
      best = std::max(best, z);
    }
    CHECK(r.statistic == doctest::Approx(best).epsilon(1e-9));
    CHECK(r.p_value == doctest::Approx(corrected_pvalue(r.statistic, n, r.method)));
  }
}

TEST_CASE("u_test on a fixed partition") {
  gen::Engine e(4);
  auto d = gen::normal_data(e, 10, 300, 2.0, {0, 1, 2, 3, 4});
  auto k = build_kernel_matrix(d, KernelSpec::squared_euclidean());
  const auto table = build_variance_table(k, VarianceOptions{});
  const auto p = oracle::to_partition({1, 1, 1, 1, 1, 2, 2, 2, 2, 2});
  const auto single = u_test(p, k, table, 0.05, Multiplicity::Single);
  const auto max = u_test(p, k, table, 0.05, Multiplicity::Max);
  CHECK(single.method == PValueMethod::Single);
  CHECK(max.method == PValueMethod::ExactMax);
  CHECK(single.statistic == max.statistic);
  CHECK(single.p_value <= max.p_value);
  CHECK(max.reject);
  CHECK(*max.n_star.exact == 511);
}
