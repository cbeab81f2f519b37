#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "uclust/kernel.hpp"
#include "uclust/ustat.hpp"
#include "uclust/variance.hpp"

namespace uclust {

/// Number of implicit two-group tests. `log_value` is always valid; `exact`
/// is set while the count fits in 64 bits.
struct TestCount {
  double log_value = 0.0;
  std::optional<std::uint64_t> exact;

  double value() const;
};

/// 2^(n-1) - 1 with singleton subgroups, else 2^(n-1) - n - 1.
TestCount n_star(std::size_t n, bool allow_singletons);

enum class PValueMethod { Single, ExactMax, Gumbel };
enum class Multiplicity { Single, Max, Auto };

const char* to_string(PValueMethod m);

/// 1 - Phi(z)^m, evaluated in log space.
double max_test_pvalue(double z, const TestCount& m);
double max_test_pvalue(double z, double m);

struct GumbelParams {
  double a_m = 0.0;
  double b_m = 0.0;
  double log_m = 0.0;
};

/// Normalising constants of the Gumbel limit for the maximum of m standard
/// normals (natural logarithms). m >= 2.
GumbelParams gumbel_params(double m);
GumbelParams gumbel_params_log(double log_m);

/// 1 - exp(-exp(-(z - b_m)/a_m)).
double gumbel_pvalue(double z, double m);
double gumbel_pvalue(double z, const GumbelParams& params);

/// p-value of a standardized statistic z for a sample of size n under the
/// given correction. Auto picks ExactMax below `gumbel_threshold_n`.
double corrected_pvalue(double z, std::size_t n, PValueMethod method);
PValueMethod resolve_method(Multiplicity multiplicity, std::size_t n,
                            std::size_t gumbel_threshold_n);

struct SearchConfig {
  /// 0 selects max(10, n).
  int restarts = 0;
  int max_iterations = 10000;
  std::uint64_t seed = 0;
  /// Restrict the unconstrained search to these subgroup sizes (canonical).
  std::vector<std::size_t> size_set;
  /// Seed each unconstrained search from the leading principal direction.
  bool warm_start = true;

  int effective_restarts(std::size_t n) const;
};

struct TestConfig {
  int mc_iterations = 1000;
  std::uint64_t seed = 0;
  std::size_t robust_threshold_n = 5;
  std::size_t gumbel_threshold_n = 30;
  /// Inputs with fewer features than this get a small-L warning.
  std::size_t small_l_warning = 50;
  SearchConfig search;

  VarianceOptions variance_options() const;
};

struct TestResult {
  double statistic = 0.0;
  TestCount n_star;
  double p_value = 1.0;
  PValueMethod method = PValueMethod::ExactMax;
  double alpha = 0.05;
  bool reject = false;
  Partition best_partition;
  BnResult bn;
  std::vector<std::string> warnings;
};

/// U-test for one given partition with the chosen multiplicity handling.
TestResult u_test(const Partition& partition, const KernelMatrix& kernel,
                  const VarianceTable& table, double alpha, Multiplicity multiplicity,
                  std::size_t gumbel_threshold_n = 30);

/// Max test for homogeneity: maximises standardized Bn over all two-group
/// partitions and tests it with the automatic multiplicity correction.
TestResult homogeneity_test(const KernelMatrix& kernel, double alpha, const TestConfig& config);

/// As above with a prebuilt variance table (reused by the clustering step).
TestResult homogeneity_test(const KernelMatrix& kernel, const VarianceTable& table, double alpha,
                            const TestConfig& config);

}  // namespace uclust
