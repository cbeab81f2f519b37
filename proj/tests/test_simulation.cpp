#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "uclust/error.hpp"
#include "uclust/simulation.hpp"

using namespace uclust;

namespace {

double rms_distance(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(s / static_cast<double>(a.size()));
}

ClusterLabeling labeling(std::vector<int> l) {
  ClusterLabeling c;
  c.labels = std::move(l);
  return c;
}

}  // namespace

TEST_CASE("equidistant means") {
  for (std::size_t L : {2, 7, 2500}) {
    const auto sc = SimScenario::clusters(3, 4, L, MeanLayout::Equidistant, 0.4, 1, 1);
    const auto mu = cluster_means(sc);
    CHECK(rms_distance(mu[0], mu[1]) == doctest::Approx(0.4).epsilon(1e-12));
    CHECK(rms_distance(mu[0], mu[2]) == doctest::Approx(0.4).epsilon(1e-12));
    CHECK(rms_distance(mu[1], mu[2]) == doctest::Approx(0.4).epsilon(1e-12));
  }
  const auto seven = cluster_means(SimScenario::clusters(7, 2, 100, MeanLayout::Equidistant, 0.4, 1, 1));
  for (std::size_t g = 0; g < 7; ++g)
    for (std::size_t h = g + 1; h < 7; ++h)
      CHECK(std::abs(rms_distance(seven[g], seven[h]) - 0.4) < 1e-12);
  CHECK_THROWS_AS(cluster_means(SimScenario::clusters(7, 2, 5, MeanLayout::Equidistant, 0.4, 1, 1)),
                  ValidationError);
}

TEST_CASE("inline means") {
  const auto mu = cluster_means(SimScenario::clusters(3, 4, 50, MeanLayout::Inline, 0.2, 1, 1));
  CHECK(rms_distance(mu[0], mu[1]) == doctest::Approx(0.2).epsilon(1e-12));
  CHECK(rms_distance(mu[1], mu[2]) == doctest::Approx(0.2).epsilon(1e-12));
  CHECK(rms_distance(mu[0], mu[2]) == doctest::Approx(0.4).epsilon(1e-12));
}

TEST_CASE("two-group means") {
  const auto mu = cluster_means(SimScenario::two_group(10, 20, 0.0, 1, 1));
  CHECK(mu[0] == mu[1]);
  const auto shifted = cluster_means(SimScenario::two_group(10, 20, 0.5, 1, 1));
  for (double v : shifted[1]) CHECK(v == 0.5);
}

TEST_CASE("scenario validation") {
  auto s = SimScenario::two_group(10, 20, 0.5, 1, 1);
  s.group_sizes = {4, 5};
  CHECK_THROWS_AS(s.validate(), ValidationError);
  s = SimScenario::two_group(10, 20, -0.5, 1, 1);
  CHECK_THROWS_AS(s.validate(), ValidationError);
  s = SimScenario::two_group(10, 20, 0.5, 0, 1);
  CHECK_THROWS_AS(s.validate(), ValidationError);
  CHECK(mean_layout_from_string("inline") == MeanLayout::Inline);
  CHECK(noise_law_from_string("gamma") == NoiseLaw::Gamma);
}

TEST_CASE("generation is reproducible per replication") {
  const auto sc = SimScenario::two_group(8, 30, 0.5, 3, 77);
  CHECK(generate(sc, 1).values() == generate(sc, 1).values());
  CHECK(generate(sc, 1).values() != generate(sc, 2).values());
  const auto d = generate(sc, 0);
  CHECK(d.rows() == 8);
  CHECK(d.cols() == 30);
}

TEST_CASE("noise laws are standardized") {
  for (auto law : {NoiseLaw::Normal, NoiseLaw::ChiSquared, NoiseLaw::Gamma}) {
    auto sc = SimScenario::two_group(2, 100000, 0.0, 1, 5);
    sc.noise = law;
    const auto d = generate(sc, 0);
    double s = 0.0, ss = 0.0;
    for (double v : d.values()) {
      s += v;
      ss += v * v;
    }
    const double m = static_cast<double>(d.values().size());
    const double mean = s / m;
    CHECK(std::abs(mean) < 0.02);
    CHECK(std::abs(ss / m - mean * mean - 1.0) < 0.03);
  }
}

TEST_CASE("adjusted Rand index") {
  CHECK(adjusted_rand_index(labeling({0, 0, 1, 1, 2}), labeling({0, 0, 1, 1, 2})) == 1.0);
  CHECK(adjusted_rand_index(labeling({0, 0, 1, 1, 2}), labeling({5, 5, 3, 3, 9})) == 1.0);
  const double v = adjusted_rand_index(labeling({0, 0, 1, 1}), labeling({0, 1, 0, 1}));
  CHECK(v == doctest::Approx(oracle::ari({0, 0, 1, 1}, {0, 1, 0, 1})).epsilon(1e-14));
  CHECK(v == doctest::Approx(-0.5).epsilon(1e-14));
  CHECK_THROWS_AS(adjusted_rand_index(labeling({0, 1}), labeling({0, 1, 2})), DimensionError);

  std::mt19937_64 e(3);
  for (int rep = 0; rep < 200; ++rep) {
    const std::size_t n = 2 + rep % 30;
    std::uniform_int_distribution<int> la(0, rep % 5), lb(0, 1 + rep % 3);
    std::vector<int> a(n), b(n);
    for (auto& x : a) x = la(e);
    for (auto& x : b) x = lb(e);
    const double got = adjusted_rand_index(labeling(a), labeling(b));
    CHECK(got == doctest::Approx(oracle::ari(a, b)).epsilon(1e-12));
    CHECK(got <= 1.0 + 1e-15);
  }
}

TEST_CASE("binomial standard error") {
  CHECK(binomial_se(0.5, 100) == doctest::Approx(0.05));
  CHECK(binomial_se(0.0, 100) == 0.0);
  CHECK_THROWS_AS(binomial_se(0.5, 0), DomainError);
}

TEST_CASE("homogeneity study records") {
  const auto sc = SimScenario::two_group(10, 200, 0.5, 12, 3);
  StudyOptions o;
  o.threads = 3;
  const auto a = run_homogeneity_study(sc, 0.05, o);
  o.threads = 1;
  const auto b = run_homogeneity_study(sc, 0.05, o);
  REQUIRE(a.per_replication.size() == 12);
  for (std::size_t i = 0; i < 12; ++i) {
    CHECK(a.per_replication[i].statistic == b.per_replication[i].statistic);
    CHECK(a.per_replication[i].p_max == b.per_replication[i].p_max);
    CHECK(a.per_replication[i].reject == b.per_replication[i].reject);
    CHECK(a.per_replication[i].replication == static_cast<int>(i));
  }
  CHECK(*a.rejection_rate_max >= 0.0);
  CHECK(*a.rejection_rate_max <= 1.0);
  CHECK(*a.rejection_rate_gumbel <= *a.rejection_rate_max);
}

TEST_CASE("power grows with the shift") {
  double prev = 0.0;
  for (double m2 : {0.0, 0.25, 0.5}) {
    const auto r = run_homogeneity_study(SimScenario::two_group(10, 500, m2, 60, 9), 0.05);
    const double rate = *r.rejection_rate_max;
    CHECK(rate + 2.0 * binomial_se(rate, 60) >= prev);
    prev = rate;
  }
}

TEST_CASE("hierarchy study on separated clusters") {
  const auto sc = SimScenario::clusters(3, 10, 2500, MeanLayout::Equidistant, 0.6, 4, 5);
  const auto r = run_hierarchy_study(sc, 0.05, 3);
  CHECK(*r.mean_ari > 0.95);
  CHECK(*r.mean_k_hat >= 1.0);
  for (const auto& rec : r.per_replication) CHECK(rec.k_hat);
}
