#include "uclust/sigtest.hpp"

#include <cmath>
#include <numbers>

#include "uclust/error.hpp"
#include "uclust/normal.hpp"
#include "uclust/partition_opt.hpp"
#include "uclust/rng.hpp"

namespace uclust {

double TestCount::value() const {
  if (exact) return static_cast<double>(*exact);
  return std::exp(log_value);
}

TestCount n_star(std::size_t n, bool allow_singletons) {
  if (allow_singletons ? n < 3 : n < 4)
    throw DomainError("too few samples to count two-group partitions");
  TestCount t;
  if (n - 1 < 64) {
    const std::uint64_t full = std::uint64_t{1} << (n - 1);
    const std::uint64_t v = allow_singletons ? full - 1 : full - n - 1;
    t.exact = v;
    t.log_value = std::log(static_cast<double>(v));
  } else {
    // The subtracted terms are below 2^-(n-1) relative to the leading power.
    t.log_value = static_cast<double>(n - 1) * std::numbers::ln2;
  }
  return t;
}

const char* to_string(PValueMethod m) {
  switch (m) {
    case PValueMethod::Single: return "single";
    case PValueMethod::ExactMax: return "exact-max";
    case PValueMethod::Gumbel: return "gumbel";
  }
  return "unknown";
}

namespace {

/// log(-log Phi(z)), finite for all finite z.
double log_neg_log_cdf(double z) {
  if (z < 0.0) return std::log(-log_normal_sf(-z));
  const double q = normal_sf(z);
  if (q > 1e-300) return std::log(-std::log1p(-q));
  return log_normal_sf(z);
}

double max_pvalue_log(double z, double log_m) {
  if (std::isinf(z)) return z > 0 ? 0.0 : 1.0;
  const double t = log_m + log_neg_log_cdf(z);
  return -std::expm1(-std::exp(t));
}

}  // namespace

double max_test_pvalue(double z, const TestCount& m) {
  if (m.value() < 1.0) throw DomainError("number of tests must be >= 1");
  return max_pvalue_log(z, m.log_value);
}

double max_test_pvalue(double z, double m) {
  if (!(m >= 1.0)) throw DomainError("number of tests must be >= 1");
  return max_pvalue_log(z, std::log(m));
}

GumbelParams gumbel_params_log(double log_m) {
  if (!(log_m >= std::numbers::ln2 - 1e-15)) throw DomainError("Gumbel constants need m >= 2");
  const double root = std::sqrt(2.0 * log_m);
  const double ln2sq = std::numbers::ln2 * std::numbers::ln2;
  const double l43 = std::log(4.0 / 3.0);
  GumbelParams g;
  g.log_m = log_m;
  g.a_m = std::log(4.0 * ln2sq / (l43 * l43)) / (2.0 * root);
  g.b_m = root - (std::log(log_m) + std::log(4.0 * std::numbers::pi * ln2sq)) / (2.0 * root);
  return g;
}

GumbelParams gumbel_params(double m) {
  if (!(m >= 2.0)) throw DomainError("Gumbel constants need m >= 2");
  return gumbel_params_log(std::log(m));
}

double gumbel_pvalue(double z, const GumbelParams& g) {
  if (std::isinf(z)) return z > 0 ? 0.0 : 1.0;
  const double y = (z - g.b_m) / g.a_m;
  return -std::expm1(-std::exp(-y));
}

double gumbel_pvalue(double z, double m) { return gumbel_pvalue(z, gumbel_params(m)); }

PValueMethod resolve_method(Multiplicity multiplicity, std::size_t n,
                            std::size_t gumbel_threshold_n) {
  switch (multiplicity) {
    case Multiplicity::Single: return PValueMethod::Single;
    case Multiplicity::Max: return PValueMethod::ExactMax;
    case Multiplicity::Auto:
      return n >= gumbel_threshold_n ? PValueMethod::Gumbel : PValueMethod::ExactMax;
  }
  return PValueMethod::ExactMax;
}

double corrected_pvalue(double z, std::size_t n, PValueMethod method) {
  switch (method) {
    case PValueMethod::Single: return normal_sf(z);
    case PValueMethod::ExactMax: return max_test_pvalue(z, n_star(n, true));
    case PValueMethod::Gumbel: {
      const TestCount m = n_star(n, true);
      // n = 3 gives m = 3 >= 2, so the constants always exist here.
      return gumbel_pvalue(z, gumbel_params_log(m.log_value));
    }
  }
  return 1.0;
}

VarianceOptions TestConfig::variance_options() const {
  VarianceOptions o;
  o.iterations = mc_iterations;
  o.seed = seed;
  o.robust_threshold_n = robust_threshold_n;
  return o;
}

namespace {

void check_alpha(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw DomainError("alpha must lie in (0, 1)");
}

void finish(TestResult& r, std::size_t n) {
  r.n_star = r.method == PValueMethod::Single ? TestCount{0.0, std::uint64_t{1}} : n_star(n, true);
  r.p_value = corrected_pvalue(r.statistic, n, r.method);
  r.reject = r.p_value < r.alpha;
}

}  // namespace

TestResult u_test(const Partition& partition, const KernelMatrix& kernel,
                  const VarianceTable& table, double alpha, Multiplicity multiplicity,
                  std::size_t gumbel_threshold_n) {
  check_alpha(alpha);
  const std::size_t n = kernel.size();
  TestResult r;
  r.alpha = alpha;
  r.best_partition = partition.canonical();
  r.bn = bn(partition, kernel);
  r.bn.variance = table.at(r.bn.n1);
  if (r.bn.variance > 0.0) {
    r.bn.standardized = r.bn.bn / std::sqrt(r.bn.variance);
  } else {
    r.warnings.push_back("degenerate data: zero null variance");
  }
  r.statistic = r.bn.standardized;
  r.method = resolve_method(multiplicity, n, gumbel_threshold_n);
  finish(r, n);
  return r;
}

TestResult homogeneity_test(const KernelMatrix& kernel, double alpha, const TestConfig& config) {
  if (kernel.size() < 3) throw TooSmallError("homogeneity test needs at least 3 samples");
  check_alpha(alpha);
  const VarianceTable table = build_variance_table(kernel, config.variance_options());
  return homogeneity_test(kernel, table, alpha, config);
}

TestResult homogeneity_test(const KernelMatrix& kernel, const VarianceTable& table, double alpha,
                            const TestConfig& config) {
  const std::size_t n = kernel.size();
  if (n < 3) throw TooSmallError("homogeneity test needs at least 3 samples");
  check_alpha(alpha);
  TestResult r;
  r.alpha = alpha;
  r.method = resolve_method(Multiplicity::Auto, n, config.gumbel_threshold_n);
  if (kernel.dimension() > 0 && kernel.dimension() < config.small_l_warning)
    r.warnings.push_back("few features (L = " + std::to_string(kernel.dimension()) +
                         "): normal approximation may be poor");

  if (table.degenerate || kernel.is_constant()) {
    r.warnings.push_back("degenerate data: all pairwise kernel values equal");
    std::vector<std::size_t> g1{0};
    r.best_partition = Partition::from_group1(n, g1);
    r.bn = bn(r.best_partition, kernel);
    r.bn.variance = 0.0;
    r.statistic = 0.0;
    r.n_star = n_star(n, true);
    r.p_value = 1.0;
    r.reject = false;
    return r;
  }

  SearchConfig search = config.search;
  search.seed = derive_seed(config.seed, {0x4f70ULL, config.search.seed});
  auto [partition, result] = optimize_standardized(kernel, table, search);
  r.best_partition = partition;
  r.bn = result;
  r.statistic = result.standardized;
  finish(r, n);
  return r;
}

}  // namespace uclust
