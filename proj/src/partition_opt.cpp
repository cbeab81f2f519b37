#include "uclust/partition_opt.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <numeric>
#include <vector>

#include "uclust/error.hpp"
#include "uclust/rng.hpp"
#include "uclust/summation.hpp"

namespace uclust {

namespace {

double pairs(std::size_t m) { return 0.5 * static_cast<double>(m) * static_cast<double>(m - 1); }

/// Bn from plain sums; mirrors bn_from_sums without the wrapper types.
double bn_value(double s1, double s2, double s12, std::size_t a, std::size_t b) {
  const double n = static_cast<double>(a + b);
  if (a == 1) return (s12 / static_cast<double>(b) - s2 / pairs(b)) / n;
  if (b == 1) return (s12 / static_cast<double>(a) - s1 / pairs(a)) / n;
  const double coef = static_cast<double>(a) * static_cast<double>(b) / (n * (n - 1.0));
  return coef * (2.0 * s12 / (static_cast<double>(a) * static_cast<double>(b)) - s1 / pairs(a) -
                 s2 / pairs(b));
}

/// Mutable search trajectory: labels plus, for every sample, its kernel sums
/// towards each group. Each move costs O(n).
class SearchState {
 public:
  SearchState(const KernelMatrix& kernel, std::vector<std::uint8_t> in1)
      : k_(kernel), in1_(std::move(in1)), to1_(kernel.size(), 0.0), to2_(kernel.size(), 0.0) {
    const std::size_t n = k_.size();
    for (std::size_t i = 0; i < n; ++i) {
      if (in1_[i]) ++a_;
      const auto row = k_.row(i);
      for (std::size_t j = 0; j < n; ++j) {
        if (j == i) continue;
        (in1_[j] ? to1_[i] : to2_[i]) += row[j];
      }
    }
    for (std::size_t i = 0; i < n; ++i) {
      if (in1_[i]) {
        s1_ += to1_[i];
        s12_ += to2_[i];
      } else {
        s2_ += to2_[i];
      }
    }
    s1_ *= 0.5;
    s2_ *= 0.5;
  }

  std::size_t n() const { return k_.size(); }
  std::size_t a() const { return a_; }
  std::size_t b() const { return n() - a_; }
  bool in1(std::size_t i) const { return in1_[i] != 0; }
  double bn() const { return bn_value(s1_, s2_, s12_, a_, b()); }

  /// Bn after relocating i; the caller guarantees the move is legal.
  double bn_after_move(std::size_t i) const {
    if (in1_[i]) return bn_value(s1_ - to1_[i], s2_ + to2_[i], s12_ - to2_[i] + to1_[i], a_ - 1, b() + 1);
    return bn_value(s1_ + to1_[i], s2_ - to2_[i], s12_ - to1_[i] + to2_[i], a_ + 1, b() - 1);
  }

  void move(std::size_t i) {
    if (in1_[i]) {
      s1_ -= to1_[i];
      s2_ += to2_[i];
      s12_ += to1_[i] - to2_[i];
      --a_;
    } else {
      s1_ += to1_[i];
      s2_ -= to2_[i];
      s12_ += to2_[i] - to1_[i];
      ++a_;
    }
    const bool was1 = in1_[i] != 0;
    in1_[i] = was1 ? 0 : 1;
    const auto row = k_.row(i);
    for (std::size_t j = 0; j < n(); ++j) {
      if (j == i) continue;
      if (was1) {
        to1_[j] -= row[j];
        to2_[j] += row[j];
      } else {
        to2_[j] -= row[j];
        to1_[j] += row[j];
      }
    }
  }

  /// Bn after exchanging i (group 1) with j (group 2).
  double bn_after_swap(std::size_t i, std::size_t j) const {
    const double pij = k_(i, j);
    const double s1 = s1_ - to1_[i] + to1_[j] - pij;
    const double s2 = s2_ - to2_[j] + to2_[i] - pij;
    const double s12 = s12_ + (to1_[i] - to2_[i]) - (to1_[j] - to2_[j]) + 2.0 * pij;
    return bn_value(s1, s2, s12, a_, b());
  }

  void swap(std::size_t i, std::size_t j) {
    move(i);
    move(j);
  }

  Partition partition() const {
    std::vector<std::uint8_t> a(n());
    for (std::size_t i = 0; i < n(); ++i) a[i] = in1_[i] ? 1 : 2;
    return Partition(std::move(a)).canonical();
  }

 private:
  const KernelMatrix& k_;
  std::vector<std::uint8_t> in1_;
  std::vector<double> to1_;
  std::vector<double> to2_;
  double s1_ = 0.0;
  double s2_ = 0.0;
  double s12_ = 0.0;
  std::size_t a_ = 0;
};

bool improves(double candidate, double current) {
  return candidate > current + 1e-13 * std::max(1.0, std::fabs(current));
}

std::vector<std::uint8_t> random_subset(std::size_t n, std::size_t size, Rng& rng) {
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  std::vector<std::uint8_t> in1(n, 0);
  for (std::size_t k = 0; k < size; ++k) {
    const std::size_t r = k + uniform_below(rng, n - k);
    std::swap(perm[k], perm[r]);
    in1[perm[k]] = 1;
  }
  return in1;
}

/// Leading eigenvector of the double-centred kernel, by power iteration.
std::vector<double> principal_direction(const KernelMatrix& kernel, std::uint64_t seed) {
  const std::size_t n = kernel.size();
  std::vector<double> row_mean(n, 0.0);
  double grand = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (double v : kernel.row(i)) row_mean[i] += v;
    grand += row_mean[i];
    row_mean[i] /= static_cast<double>(n);
  }
  grand /= static_cast<double>(n * n);
  auto centred = [&](std::size_t i, std::size_t j) {
    return -0.5 * (kernel(i, j) - row_mean[i] - row_mean[j] + grand);
  };

  Rng rng = make_stream(seed, {0x5eedULL});
  std::vector<double> v(n), w(n);
  for (auto& x : v) x = uniform01(rng) - 0.5;
  for (int it = 0; it < 200; ++it) {
    double norm = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      double acc = 0.0;
      for (std::size_t j = 0; j < n; ++j) acc += centred(i, j) * v[j];
      w[i] = acc;
      norm += acc * acc;
    }
    norm = std::sqrt(norm);
    if (!(norm > 0.0)) break;
    double change = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double next = w[i] / norm;
      change += std::fabs(next - v[i]);
      v[i] = next;
    }
    if (change < 1e-10) break;
  }
  return v;
}

std::vector<std::size_t> order_by(const std::vector<double>& v) {
  std::vector<std::size_t> idx(v.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(), [&](auto x, auto y) { return v[x] < v[y]; });
  return idx;
}

struct Candidate {
  Partition partition;
  double objective = -std::numeric_limits<double>::infinity();
  bool valid = false;
};

void offer(Candidate& best, const Partition& p, double objective) {
  if (!best.valid || objective > best.objective ||
      (objective == best.objective && p < best.partition)) {
    best.partition = p;
    best.objective = objective;
    best.valid = true;
  }
}

bool size_allowed(const SearchConfig& config, std::size_t a, std::size_t b) {
  if (config.size_set.empty()) return true;
  const std::size_t m = std::min(a, b);
  return std::find(config.size_set.begin(), config.size_set.end(), m) != config.size_set.end();
}

double standardize(double bn, double var) { return var > 0.0 ? bn / std::sqrt(var) : 0.0; }

void require_searchable(const KernelMatrix& kernel, std::size_t min_n) {
  if (kernel.size() < min_n)
    throw TooSmallError("partition search needs at least " + std::to_string(min_n) + " samples");
}

}  // namespace

int SearchConfig::effective_restarts(std::size_t n) const {
  if (restarts > 0) return restarts;
  return std::max<int>(10, static_cast<int>(n));
}

const SizeBest& SizeBestTable::best_standardized() const {
  if (per_size.empty()) throw ConfigurationError("empty size table");
  const SizeBest* best = nullptr;
  for (const auto& [size, entry] : per_size) {
    if (!best || entry.standardized > best->standardized ||
        (entry.standardized == best->standardized && entry.partition < best->partition))
      best = &entry;
  }
  return *best;
}

std::pair<Partition, BnResult> optimize_standardized(const KernelMatrix& kernel,
                                                     const VarianceTable& table,
                                                     const SearchConfig& config) {
  const std::size_t n = kernel.size();
  require_searchable(kernel, 3);
  const std::size_t half = n / 2;
  std::vector<std::size_t> sizes = config.size_set;
  if (sizes.empty())
    for (std::size_t s = 1; s <= half; ++s) sizes.push_back(s);
  for (auto s : sizes)
    if (s < 1 || s > half) throw DomainError("size_set entry outside [1, n/2]");

  std::vector<double> inv_sd(half + 1, 0.0);
  for (auto s : sizes) {
    const double v = table.at(s);
    inv_sd[s] = v > 0.0 ? 1.0 / std::sqrt(v) : 0.0;
  }
  auto objective = [&](double bn, std::size_t a, std::size_t b) {
    return bn * inv_sd[std::min(a, b)];
  };

  Candidate best;
  if (table.degenerate || kernel.is_constant()) {
    std::vector<std::size_t> g1{0};
    const Partition p = Partition::from_group1(n, g1);
    BnResult r = bn(p, kernel);
    r.variance = table.at(r.n1);
    r.standardized = 0.0;
    return {p, r};
  }

  Rng rng = make_stream(config.seed, {0x0b1ULL, n});
  std::vector<std::vector<std::uint8_t>> starts;
  if (config.warm_start && n >= 4) {
    const auto v = principal_direction(kernel, config.seed);
    std::vector<std::uint8_t> in1(n, 0);
    std::size_t count = 0;
    for (std::size_t i = 0; i < n; ++i)
      if (v[i] > 0.0) {
        in1[i] = 1;
        ++count;
      }
    if (count > 0 && count < n && size_allowed(config, count, n - count)) starts.push_back(in1);
  }
  if (std::find(sizes.begin(), sizes.end(), 1) != sizes.end()) {
    const auto single = optimize_bn_at_size(kernel, 1, config).first;
    std::vector<std::uint8_t> in1(n, 0);
    for (std::size_t i = 0; i < n; ++i) in1[i] = single.label(i) == 1;
    starts.push_back(in1);
  }
  const int restarts = config.effective_restarts(n);
  for (int r = 0; r < restarts; ++r)
    starts.push_back(random_subset(n, sizes[static_cast<std::size_t>(r) % sizes.size()], rng));

  for (auto& start : starts) {
    SearchState state(kernel, start);
    double current = objective(state.bn(), state.a(), state.b());
    for (int it = 0; it < config.max_iterations; ++it) {
      double best_val = current;
      std::size_t best_i = n;
      for (std::size_t i = 0; i < n; ++i) {
        const bool from1 = state.in1(i);
        const std::size_t a = from1 ? state.a() - 1 : state.a() + 1;
        const std::size_t b = n - a;
        if (a == 0 || b == 0 || !size_allowed(config, a, b)) continue;
        const double val = objective(state.bn_after_move(i), a, b);
        if (improves(val, best_val)) {
          best_val = val;
          best_i = i;
        }
      }
      if (best_i == n) break;
      state.move(best_i);
      current = best_val;
    }
    const Partition p = state.partition();
    const BnResult exact = bn(p, kernel);
    offer(best, p, standardize(exact.bn, table.at(exact.n1)));
  }

  BnResult r = bn(best.partition, kernel);
  r.variance = table.at(r.n1);
  r.standardized = standardize(r.bn, r.variance);
  return {best.partition, r};
}

std::pair<Partition, double> optimize_bn_at_size(const KernelMatrix& kernel, std::size_t n1,
                                                 const SearchConfig& config) {
  const std::size_t n = kernel.size();
  require_searchable(kernel, n1 == 1 ? 3 : 4);
  if (n1 < 1 || n1 > n / 2)
    throw DomainError("subgroup size " + std::to_string(n1) + " outside [1, n/2]");

  Candidate best;
  if (n1 == 1) {
    std::vector<double> row(n, 0.0);
    CompensatedSum total;
    for (std::size_t i = 0; i < n; ++i) {
      CompensatedSum s;
      for (double v : kernel.row(i)) s += v;
      row[i] = s.value();
      total += row[i];
    }
    const double all = 0.5 * total.value();
    for (std::size_t i = 0; i < n; ++i) {
      const double v = bn_value(0.0, all - row[i], row[i], 1, n - 1);
      std::vector<std::size_t> g1{i};
      const Partition p = Partition::from_group1(n, g1);
      offer(best, p, v);
    }
    return {best.partition, bn(best.partition, kernel).bn};
  }

  Rng rng = make_stream(config.seed, {0x5a9ULL, n, n1});
  std::vector<std::vector<std::uint8_t>> starts;
  if (config.warm_start) {
    const auto order = order_by(principal_direction(kernel, config.seed));
    std::vector<std::uint8_t> low(n, 0), high(n, 0);
    for (std::size_t k = 0; k < n1; ++k) {
      low[order[k]] = 1;
      high[order[n - 1 - k]] = 1;
    }
    starts.push_back(low);
    starts.push_back(high);
  }
  const int restarts = config.effective_restarts(n);
  for (int r = 0; r < restarts; ++r) starts.push_back(random_subset(n, n1, rng));

  std::vector<std::size_t> g1, g2;
  for (auto& start : starts) {
    SearchState state(kernel, start);
    double current = state.bn();
    for (int it = 0; it < config.max_iterations; ++it) {
      g1.clear();
      g2.clear();
      for (std::size_t i = 0; i < n; ++i) (state.in1(i) ? g1 : g2).push_back(i);
      double best_val = current;
      std::size_t bi = n, bj = n;
      for (auto i : g1) {
        for (auto j : g2) {
          const double val = state.bn_after_swap(i, j);
          if (improves(val, best_val)) {
            best_val = val;
            bi = i;
            bj = j;
          }
        }
      }
      if (bi == n) break;
      state.swap(bi, bj);
      current = best_val;
    }
    const Partition p = state.partition();
    offer(best, p, bn(p, kernel).bn);
  }
  return {best.partition, best.objective};
}

namespace {
thread_local std::size_t g_last_exhaustive_count = 0;
}

std::size_t last_exhaustive_count() { return g_last_exhaustive_count; }

SizeBestTable exhaustive_best(const KernelMatrix& kernel, const VarianceTable& table,
                              bool standardized) {
  SizeBestTable out = exhaustive_best(kernel);
  if (standardized) {
    for (auto& [size, entry] : out.per_size)
      entry.standardized = standardize(entry.bn, table.at(size));
  }
  return out;
}

SizeBestTable exhaustive_best(const KernelMatrix& kernel) {
  const std::size_t n = kernel.size();
  if (n > kExhaustiveMaxN)
    throw DomainError("exhaustive enumeration refused for n = " + std::to_string(n) +
                      " (cap " + std::to_string(kExhaustiveMaxN) + ")");
  require_searchable(kernel, 3);

  // Group 1 is a non-empty subset of {0..n-2}; sample n-1 stays in group 2,
  // so every unordered partition is visited once. Gray-code order flips one
  // sample per step.
  std::vector<CompensatedSum> to1(n);
  std::vector<double> row(n, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (double v : kernel.row(i)) row[i] += v;
  std::vector<std::uint8_t> in1(n, 0);
  CompensatedSum s1, s2, s12;
  s2 = CompensatedSum(kernel.total_pair_sum());
  std::size_t a = 0;

  struct Best {
    double bn = -std::numeric_limits<double>::infinity();
    std::vector<std::uint8_t> in1;
    bool valid = false;
  };
  std::vector<Best> best(n / 2 + 1);
  const std::uint64_t count = (std::uint64_t{1} << (n - 1)) - 1;
  std::uint64_t gray_prev = 0;
  for (std::uint64_t k = 1; k <= count; ++k) {
    const std::uint64_t gray = k ^ (k >> 1);
    const std::uint64_t diff = gray ^ gray_prev;
    gray_prev = gray;
    const auto e = static_cast<std::size_t>(std::countr_zero(diff));
    const double r1 = to1[e].value();
    const double r2 = row[e] - r1;
    if (in1[e]) {
      s1 -= r1;
      s12 -= r2;
      s12 += r1;
      s2 += r2;
      --a;
    } else {
      s1 += r1;
      s12 -= r1;
      s12 += r2;
      s2 -= r2;
      ++a;
    }
    const double sign = in1[e] ? -1.0 : 1.0;
    in1[e] = in1[e] ? 0 : 1;
    const auto krow = kernel.row(e);
    for (std::size_t j = 0; j < n; ++j) to1[j] += sign * krow[j];

    const std::size_t b = n - a;
    const std::size_t m = std::min(a, b);
    const double v = bn_value(s1.value(), s2.value(), s12.value(), a, b);
    Best& slot = best[m];
    if (!slot.valid || v >= slot.bn) {
      std::vector<std::uint8_t> labels(n);
      for (std::size_t i = 0; i < n; ++i) labels[i] = in1[i] ? 1 : 2;
      auto canon = Partition(labels).canonical().assignment();
      if (!slot.valid || v > slot.bn || canon < slot.in1) {
        slot.bn = v;
        slot.in1 = std::move(canon);
        slot.valid = true;
      }
    }
  }
  g_last_exhaustive_count = static_cast<std::size_t>(count);

  SizeBestTable out;
  for (std::size_t m = 1; m <= n / 2; ++m) {
    if (!best[m].valid) continue;
    SizeBest entry;
    entry.partition = Partition(best[m].in1);
    entry.bn = bn(entry.partition, kernel).bn;
    out.per_size.emplace(m, std::move(entry));
  }
  return out;
}

bool is_relocation_optimum(const KernelMatrix& kernel, const VarianceTable& table,
                           const Partition& partition) {
  const std::size_t n = kernel.size();
  const BnResult here = bn(partition, kernel);
  const double current = standardize(here.bn, table.at(here.n1));
  for (std::size_t i = 0; i < n; ++i) {
    const bool from1 = partition.label(i) == 1;
    if ((from1 && partition.n1() == 1) || (!from1 && partition.n2() == 1)) continue;
    const BnResult next = bn(partition.moved(i), kernel);
    if (improves(standardize(next.bn, table.at(next.n1)), current)) return false;
  }
  return true;
}

bool is_swap_optimum(const KernelMatrix& kernel, const Partition& partition) {
  const double current = bn(partition, kernel).bn;
  for (auto i : partition.members(1)) {
    for (auto j : partition.members(2)) {
      const Partition p = partition.moved(j).moved(i);
      if (improves(bn(p, kernel).bn, current)) return false;
    }
  }
  return true;
}

}  // namespace uclust
