#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <vector>

#include "uclust/kernel.hpp"

namespace uclust {

enum class VarianceMethod { MonteCarlo, Scaled, Robust };

const char* to_string(VarianceMethod m);

/// Null variance of Bn for every canonical subgroup size 1..floor(n/2).
struct VarianceTable {
  std::size_t n = 0;
  std::map<std::size_t, double> by_size;
  std::map<std::size_t, VarianceMethod> method_by_size;
  int mc_iterations = 0;
  std::uint64_t seed = 0;
  bool degenerate = false;

  /// Variance for a subgroup of size n1 (either orientation). Throws
  /// ConfigurationError when the size has no entry.
  double at(std::size_t n1) const;
};

/// Size-dependent factor C(n, n1) relating Var(Bn) to the common sigma^4
/// for 2 <= n1 <= n-2.
double variance_coefficient(std::size_t n, std::size_t n1);

/// Squared quantile-based scale (Qn type): the k-th smallest pairwise
/// absolute difference, k = C(floor(m/2)+1, 2), times 1/(sqrt(2) Phi^-1(5/8)).
/// Needs at least 10 values.
double robust_scale(std::span<const double> values);

/// Same estimator with pairs inside one tie group excluded. `groups[i]`
/// identifies the atom values[i] was drawn from; repeated draws of one atom
/// carry no spread information.
double robust_scale_grouped(std::span<const double> values,
                            std::span<const std::size_t> groups);

struct VarianceEstimate {
  double variance = 0.0;
  bool degenerate = false;
  /// The Bn draws, in draw order.
  std::vector<double> draws;
};

/// Permutation estimate of Var(Bn) for subgroup size n1: draws `iterations`
/// uniform partitions with replacement and returns the sample variance, or
/// the robust scale when `robust` is set.
VarianceEstimate estimate_variance_mc(const KernelMatrix& kernel, std::size_t n1, int iterations,
                                      std::uint64_t seed, bool robust);

struct VarianceOptions {
  int iterations = 1000;
  std::uint64_t seed = 0;
  /// All runs use the robust estimator when n is at most this.
  std::size_t robust_threshold_n = 5;
};

/// Two Monte Carlo runs (n1 = 1 and n1 = floor(n/2)); the remaining sizes
/// are scaled from the central run by the ratio of coefficients.
VarianceTable build_variance_table(const KernelMatrix& kernel, const VarianceOptions& options);

}  // namespace uclust
