#include "uclust/cluster.hpp"

#include <cmath>

#include "uclust/error.hpp"
#include "uclust/partition_opt.hpp"
#include "uclust/rng.hpp"
#include "uclust/variance.hpp"

namespace uclust {

const char* to_string(Verdict v) { return v == Verdict::Split ? "split" : "homogeneous"; }

const SizeCandidate* UclustResult::chosen() const {
  if (verdict != Verdict::Split || !partition) return nullptr;
  for (const auto& c : per_size_candidates)
    if (c.partition == *partition) return &c;
  return nullptr;
}

UclustResult cluster(const KernelMatrix& kernel, double alpha, const TestConfig& config) {
  const std::size_t n = kernel.size();
  if (n < 3) throw TooSmallError("clustering needs at least 3 samples");

  UclustResult out;
  out.alpha = alpha;
  const VarianceTable table = build_variance_table(kernel, config.variance_options());
  out.homogeneity = homogeneity_test(kernel, table, alpha, config);
  out.warnings = out.homogeneity.warnings;
  if (!out.homogeneity.reject) return out;

  const PValueMethod method = out.homogeneity.method;
  SearchConfig search = config.search;
  const Partition& certificate = out.homogeneity.best_partition;
  for (std::size_t n1 = 1; n1 <= n / 2; ++n1) {
    search.seed = derive_seed(config.seed, {0x512eULL, n1, config.search.seed});
    auto [partition, value] = optimize_bn_at_size(kernel, n1, search);
    double raw = bn(partition, kernel).bn;
    // The homogeneity certificate is a valid candidate of its own size.
    if (certificate.n1() == n1) {
      const double cert = bn(certificate, kernel).bn;
      if (cert > raw || (cert == raw && certificate < partition)) {
        partition = certificate;
        raw = cert;
      }
    }
    SizeCandidate c;
    c.n1 = n1;
    c.partition = partition;
    c.bn = raw;
    const double var = table.at(n1);
    c.standardized = var > 0.0 ? raw / std::sqrt(var) : 0.0;
    c.p_value = corrected_pvalue(c.standardized, n, method);
    c.significant = c.p_value < alpha;
    out.per_size_candidates.push_back(std::move(c));
  }

  const SizeCandidate* best = nullptr;
  for (const auto& c : out.per_size_candidates) {
    if (!c.significant) continue;
    if (!best || c.bn > best->bn) best = &c;
  }
  out.verdict = Verdict::Split;
  if (best) {
    out.partition = best->partition;
  } else {
    out.warnings.push_back(
        "homogeneity rejected but no per-size candidate is significant; returning the "
        "standardized maximiser");
    out.partition = certificate;
    SizeCandidate c;
    c.n1 = certificate.n1();
    c.partition = certificate;
    c.bn = out.homogeneity.bn.bn;
    c.standardized = out.homogeneity.statistic;
    c.p_value = out.homogeneity.p_value;
    c.significant = true;
    out.per_size_candidates.push_back(std::move(c));
  }
  return out;
}

}  // namespace uclust
