#include "uclust/variance.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>
#include <numeric>
#include <string>

#include "uclust/error.hpp"
#include "uclust/normal.hpp"
#include "uclust/rng.hpp"
#include "uclust/summation.hpp"
#include "uclust/ustat.hpp"

namespace uclust {

const char* to_string(VarianceMethod m) {
  switch (m) {
    case VarianceMethod::MonteCarlo: return "montecarlo";
    case VarianceMethod::Scaled: return "scaled";
    case VarianceMethod::Robust: return "robust";
  }
  return "unknown";
}

double VarianceTable::at(std::size_t n1) const {
  const std::size_t key = std::min(n1, n - n1);
  auto it = by_size.find(key);
  if (it == by_size.end())
    throw ConfigurationError("variance table has no entry for subgroup size " +
                             std::to_string(n1));
  return it->second;
}

double variance_coefficient(std::size_t n, std::size_t n1) {
  if (n < 4 || n1 < 2 || n1 + 2 > n)
    throw DomainError("variance coefficient is defined for 2 <= n1 <= n-2, n >= 4");
  const double nd = static_cast<double>(n);
  const double a = static_cast<double>(n1);
  const double b = static_cast<double>(n - n1);
  const double lead = a * b / (nd * nd * (nd - 1.0) * (nd - 1.0));
  return lead * (2.0 * nd * nd - 6.0 * nd + 4.0) / ((a - 1.0) * (b - 1.0));
}

namespace {

/// Number of pairs i < j in sorted `x` with x[j] - x[i] <= d.
std::uint64_t count_pairs_within(const std::vector<double>& x, double d) {
  std::uint64_t count = 0;
  std::size_t j = 0;
  const std::size_t m = x.size();
  for (std::size_t i = 0; i < m; ++i) {
    if (j < i + 1) j = i + 1;
    while (j < m && x[j] - x[i] <= d) ++j;
    count += j - i - 1;
  }
  return count;
}

/// Smallest pairwise difference d with count_pairs_within(d) >= rank, found
/// by bisection on the bit pattern of non-negative doubles (monotone there).
double kth_pairwise_difference(const std::vector<double>& sorted, std::uint64_t rank) {
  std::uint64_t lo = 0;
  std::uint64_t hi = std::bit_cast<std::uint64_t>(sorted.back() - sorted.front());
  if (count_pairs_within(sorted, 0.0) >= rank) return 0.0;
  while (hi - lo > 1) {
    const std::uint64_t mid = lo + (hi - lo) / 2;
    if (count_pairs_within(sorted, std::bit_cast<double>(mid)) >= rank) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return std::bit_cast<double>(hi);
}

double qn_constant() { return 1.0 / (std::numbers::sqrt2 * normal_quantile(0.625)); }

std::uint64_t choose2(std::uint64_t m) { return m * (m - 1) / 2; }

double scaled_square(double d) {
  const double s = qn_constant() * d;
  return s * s;
}

}  // namespace

double robust_scale(std::span<const double> values) {
  const std::size_t m = values.size();
  if (m < 10) throw InsufficientSampleError("robust scale needs at least 10 values");
  std::vector<double> x(values.begin(), values.end());
  std::sort(x.begin(), x.end());
  const std::uint64_t rank = choose2(m / 2 + 1);
  return scaled_square(kth_pairwise_difference(x, rank));
}

double robust_scale_grouped(std::span<const double> values, std::span<const std::size_t> groups) {
  const std::size_t m = values.size();
  if (m < 10) throw InsufficientSampleError("robust scale needs at least 10 values");
  if (groups.size() != m) throw DimensionError("one group id per value required");

  std::vector<std::size_t> sizes;
  for (auto g : groups) {
    if (g >= sizes.size()) sizes.resize(g + 1, 0);
    ++sizes[g];
  }
  std::uint64_t tied = 0;
  for (auto s : sizes) tied += s > 1 ? choose2(s) : 0;
  const std::uint64_t total = choose2(m);
  const std::uint64_t effective = total - tied;
  if (effective == 0) return 0.0;

  // Same quantile level as the plain estimator, applied to cross-atom pairs.
  const std::uint64_t base = choose2(m / 2 + 1);
  const auto wide = static_cast<unsigned __int128>(effective) * base;
  const auto rank = static_cast<std::uint64_t>((wide + total - 1) / total);

  std::vector<double> x(values.begin(), values.end());
  std::sort(x.begin(), x.end());
  // Tied pairs have difference exactly zero and are counted first.
  return scaled_square(kth_pairwise_difference(x, std::max<std::uint64_t>(rank, 1) + tied));
}

VarianceEstimate estimate_variance_mc(const KernelMatrix& kernel, std::size_t n1, int iterations,
                                      std::uint64_t seed, bool robust) {
  const std::size_t n = kernel.size();
  if (iterations < 100) throw ConfigurationError("Monte Carlo variance needs >= 100 iterations");
  if (n1 < 1 || n1 >= n) throw DomainError("subgroup size out of range");
  n1 = std::min(n1, n - n1);
  if (n1 == 1 ? n < 3 : n < 4) throw UndefinedStatisticError("sample too small for Bn");

  VarianceEstimate est;
  if (kernel.is_constant()) {
    est.degenerate = true;
    return est;
  }

  std::vector<double> row_sum(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    CompensatedSum s;
    for (double v : kernel.row(i)) s += v;
    row_sum[i] = s.value();
  }
  const double total = kernel.total_pair_sum();

  Rng rng = make_stream(seed, {n1});
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  std::map<std::vector<std::size_t>, std::size_t> atom_ids;
  std::vector<std::size_t> atoms;
  std::vector<std::size_t> key(n1);
  est.draws.reserve(static_cast<std::size_t>(iterations));
  if (robust) atoms.reserve(static_cast<std::size_t>(iterations));

  for (int it = 0; it < iterations; ++it) {
    for (std::size_t k = 0; k < n1; ++k) {
      const std::size_t r = k + uniform_below(rng, n - k);
      std::swap(perm[k], perm[r]);
    }
    double within1 = 0.0;
    double rows = 0.0;
    for (std::size_t a = 0; a < n1; ++a) {
      const std::size_t i = perm[a];
      rows += row_sum[i];
      for (std::size_t b = a + 1; b < n1; ++b) within1 += kernel(i, perm[b]);
    }
    GroupSums sums;
    sums.within1 = CompensatedSum(within1);
    sums.between = CompensatedSum(rows - 2.0 * within1);
    sums.within2 = CompensatedSum(total - within1 - (rows - 2.0 * within1));
    est.draws.push_back(bn_from_sums(sums, n1, n - n1));

    if (robust) {
      std::copy(perm.begin(), perm.begin() + static_cast<std::ptrdiff_t>(n1), key.begin());
      std::sort(key.begin(), key.end());
      // Halves are unordered: identify a balanced split by the side holding 0.
      if (2 * n1 == n && key.front() != 0) {
        std::vector<bool> in(n, false);
        for (auto i : key) in[i] = true;
        std::size_t w = 0;
        for (std::size_t i = 0; i < n; ++i)
          if (!in[i]) key[w++] = i;
      }
      auto [pos, inserted] = atom_ids.try_emplace(key, atom_ids.size());
      atoms.push_back(pos->second);
    }
  }

  const double m = static_cast<double>(est.draws.size());
  CompensatedSum mean_acc;
  for (double v : est.draws) mean_acc += v;
  const double mean = mean_acc.value() / m;
  CompensatedSum ss;
  for (double v : est.draws) ss += (v - mean) * (v - mean);
  const double sample_var = ss.value() / (m - 1.0);

  if (robust) {
    est.variance = robust_scale_grouped(est.draws, atoms);
    if (est.variance <= 0.0) est.variance = sample_var;
  } else {
    est.variance = sample_var;
  }
  if (!(est.variance > 0.0)) est.degenerate = true;
  return est;
}

VarianceTable build_variance_table(const KernelMatrix& kernel, const VarianceOptions& options) {
  const std::size_t n = kernel.size();
  if (n < 3) throw TooSmallError("variance table needs at least 3 samples");
  VarianceTable table;
  table.n = n;
  table.mc_iterations = options.iterations;
  table.seed = options.seed;

  const auto singles = estimate_variance_mc(kernel, 1, options.iterations, options.seed, true);
  table.by_size[1] = singles.variance;
  table.method_by_size[1] = VarianceMethod::Robust;
  table.degenerate = singles.degenerate;

  const std::size_t half = n / 2;
  if (half >= 2) {
    const bool robust = n <= options.robust_threshold_n;
    const auto central =
        estimate_variance_mc(kernel, half, options.iterations, options.seed, robust);
    table.by_size[half] = central.variance;
    table.method_by_size[half] = robust ? VarianceMethod::Robust : VarianceMethod::MonteCarlo;
    table.degenerate = table.degenerate || central.degenerate;
    const double anchor = variance_coefficient(n, half);
    for (std::size_t j = 2; j < half; ++j) {
      table.by_size[j] = central.variance * variance_coefficient(n, j) / anchor;
      table.method_by_size[j] = VarianceMethod::Scaled;
    }
  }
  return table;
}

}  // namespace uclust
