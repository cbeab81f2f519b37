#pragma once

#include <cstddef>
#include <map>
#include <utility>

#include "uclust/kernel.hpp"
#include "uclust/sigtest.hpp"
#include "uclust/ustat.hpp"
#include "uclust/variance.hpp"

namespace uclust {

struct SizeBest {
  Partition partition;
  double bn = 0.0;
  /// bn / sqrt(Var) for the size; 0 when no variance table was supplied.
  double standardized = 0.0;
};

/// Best partition per canonical subgroup size.
struct SizeBestTable {
  std::map<std::size_t, SizeBest> per_size;

  /// Entry with the largest standardized value (smallest assignment on ties).
  const SizeBest& best_standardized() const;
};

/// Multi-restart steepest ascent over single-element relocations, maximising
/// bn / sqrt(Var(n1)) across all subgroup sizes.
std::pair<Partition, BnResult> optimize_standardized(const KernelMatrix& kernel,
                                                     const VarianceTable& table,
                                                     const SearchConfig& config);

/// Best raw Bn among partitions with a subgroup of exactly `n1` members,
/// 1 <= n1 <= n/2. Size one is enumerated; larger sizes use multi-restart
/// steepest ascent over pairwise swaps.
std::pair<Partition, double> optimize_bn_at_size(const KernelMatrix& kernel, std::size_t n1,
                                                 const SearchConfig& config);

/// Hard cap on the sample size accepted by exhaustive enumeration.
inline constexpr std::size_t kExhaustiveMaxN = 20;

/// Exact per-size optimum by enumerating all 2^(n-1) - 1 partitions.
SizeBestTable exhaustive_best(const KernelMatrix& kernel, const VarianceTable& table,
                              bool standardized);
SizeBestTable exhaustive_best(const KernelMatrix& kernel);

/// Number of partitions visited by the last exhaustive_best call on this
/// thread (diagnostics for tests).
std::size_t last_exhaustive_count();

/// True when no single relocation improves the standardized objective.
bool is_relocation_optimum(const KernelMatrix& kernel, const VarianceTable& table,
                           const Partition& partition);

/// True when no pairwise swap improves Bn at the partition's size.
bool is_swap_optimum(const KernelMatrix& kernel, const Partition& partition);

}  // namespace uclust
