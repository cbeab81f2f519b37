#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "uclust/kernel.hpp"
#include "uclust/sigtest.hpp"
#include "uclust/ustat.hpp"

namespace uclust {

enum class Verdict { Homogeneous, Split };

const char* to_string(Verdict v);

struct SizeCandidate {
  std::size_t n1 = 0;
  Partition partition;
  double bn = 0.0;
  double standardized = 0.0;
  double p_value = 1.0;
  bool significant = false;
};

struct UclustResult {
  Verdict verdict = Verdict::Homogeneous;
  std::optional<Partition> partition;
  std::vector<SizeCandidate> per_size_candidates;
  TestResult homogeneity;
  double alpha = 0.05;
  std::vector<std::string> warnings;

  /// The chosen candidate when verdict is Split.
  const SizeCandidate* chosen() const;
};

/// Significance clustering: tests homogeneity and, on rejection, returns the
/// partition with the largest raw Bn among the significant best-per-size
/// partitions.
UclustResult cluster(const KernelMatrix& kernel, double alpha, const TestConfig& config);

}  // namespace uclust
