#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "uclust/hierarchy.hpp"
#include "uclust/kernel.hpp"
#include "uclust/sigtest.hpp"

namespace uclust {

enum class MeanLayout { TwoGroupShift, Equidistant, Inline };
enum class NoiseLaw { Normal, ChiSquared, Gamma };

const char* to_string(MeanLayout m);
const char* to_string(NoiseLaw m);
MeanLayout mean_layout_from_string(const std::string& s);
NoiseLaw noise_law_from_string(const std::string& s);

/// Simulation design. Mean separations (`shift`) are root-mean-square
/// per-coordinate distances, ||mu_g - mu_h|| / sqrt(L); for the two-group
/// layout every coordinate of group 2 is shifted by exactly `shift`.
struct SimScenario {
  std::size_t n = 0;
  std::size_t L = 0;
  std::size_t k = 2;
  std::vector<std::size_t> group_sizes;
  MeanLayout mean_layout = MeanLayout::TwoGroupShift;
  double shift = 0.0;
  NoiseLaw noise = NoiseLaw::Normal;
  int replications = 1;
  std::uint64_t seed = 0;

  /// Two equal groups of n/2 (the first gets the extra sample when n is odd).
  static SimScenario two_group(std::size_t n, std::size_t L, double m2, int replications,
                               std::uint64_t seed);
  /// k clusters of n1 samples each.
  static SimScenario clusters(std::size_t k, std::size_t n1, std::size_t L, MeanLayout layout,
                              double d, int replications, std::uint64_t seed);

  /// Throws ValidationError when the invariants do not hold.
  void validate() const;
};

/// Cluster means, k rows by L columns.
std::vector<std::vector<double>> cluster_means(const SimScenario& scenario);

/// Data for one replication; deterministic per (seed, replication).
DataMatrix generate(const SimScenario& scenario, int replication);

/// Group index of every generated row.
ClusterLabeling planted_labels(const SimScenario& scenario);

/// Pair-counting adjusted Rand index.
double adjusted_rand_index(const ClusterLabeling& a, const ClusterLabeling& b);

struct ReplicationRecord {
  int replication = 0;
  double statistic = 0.0;
  double p_max = 1.0;
  double p_gumbel = 1.0;
  bool reject_max = false;
  bool reject_gumbel = false;
  bool reject = false;
  std::optional<double> ari;
  std::optional<int> k_hat;
};

struct SimReport {
  SimScenario scenario;
  double alpha = 0.05;
  std::optional<double> rejection_rate;
  std::optional<double> rejection_rate_max;
  std::optional<double> rejection_rate_gumbel;
  std::optional<double> mean_ari;
  std::optional<double> mean_k_hat;
  std::vector<ReplicationRecord> per_replication;
};

/// Binomial standard error sqrt(p (1 - p) / re).
double binomial_se(double p, int replications);

struct StudyOptions {
  TestConfig test;
  /// Worker threads; 0 uses the hardware concurrency. Results do not depend
  /// on this value.
  unsigned threads = 0;
};

/// Rejection rates of the homogeneity test under both corrections.
SimReport run_homogeneity_study(const SimScenario& scenario, double alpha,
                                const StudyOptions& options = {});

/// Mean ARI against the planted labels and mean number of clusters.
SimReport run_hierarchy_study(const SimScenario& scenario, double alpha, std::size_t tau,
                              const StudyOptions& options = {});

}  // namespace uclust
