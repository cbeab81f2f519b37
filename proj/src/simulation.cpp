#include "uclust/simulation.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <map>
#include <mutex>
#include <thread>

#include "uclust/error.hpp"
#include "uclust/rng.hpp"

namespace uclust {

const char* to_string(MeanLayout m) {
  switch (m) {
    case MeanLayout::TwoGroupShift: return "two-group-shift";
    case MeanLayout::Equidistant: return "equidistant";
    case MeanLayout::Inline: return "inline";
  }
  return "unknown";
}

const char* to_string(NoiseLaw m) {
  switch (m) {
    case NoiseLaw::Normal: return "normal";
    case NoiseLaw::ChiSquared: return "chi-squared";
    case NoiseLaw::Gamma: return "gamma";
  }
  return "unknown";
}

MeanLayout mean_layout_from_string(const std::string& s) {
  if (s == "two-group-shift") return MeanLayout::TwoGroupShift;
  if (s == "equidistant") return MeanLayout::Equidistant;
  if (s == "inline") return MeanLayout::Inline;
  throw ParseError("unknown mean layout '" + s + "'");
}

NoiseLaw noise_law_from_string(const std::string& s) {
  if (s == "normal") return NoiseLaw::Normal;
  if (s == "chi-squared" || s == "chisq") return NoiseLaw::ChiSquared;
  if (s == "gamma") return NoiseLaw::Gamma;
  throw ParseError("unknown noise law '" + s + "'");
}

SimScenario SimScenario::two_group(std::size_t n, std::size_t L, double m2, int replications,
                                   std::uint64_t seed) {
  SimScenario s;
  s.n = n;
  s.L = L;
  s.k = 2;
  s.group_sizes = {n - n / 2, n / 2};
  s.mean_layout = MeanLayout::TwoGroupShift;
  s.shift = m2;
  s.replications = replications;
  s.seed = seed;
  return s;
}

SimScenario SimScenario::clusters(std::size_t k, std::size_t n1, std::size_t L, MeanLayout layout,
                                  double d, int replications, std::uint64_t seed) {
  SimScenario s;
  s.n = k * n1;
  s.L = L;
  s.k = k;
  s.group_sizes.assign(k, n1);
  s.mean_layout = layout;
  s.shift = d;
  s.replications = replications;
  s.seed = seed;
  return s;
}

void SimScenario::validate() const {
  if (k < 1) throw ValidationError("scenario needs at least one group");
  if (group_sizes.size() != k) throw ValidationError("group_sizes must have k entries");
  std::size_t total = 0;
  for (auto g : group_sizes) {
    if (g == 0) throw ValidationError("group sizes must be positive");
    total += g;
  }
  if (total != n) throw ValidationError("group sizes must sum to n");
  if (n < 2) throw ValidationError("scenario needs n >= 2");
  if (L < 1) throw ValidationError("scenario needs L >= 1");
  if (replications < 1) throw ValidationError("replications must be positive");
  if (!std::isfinite(shift) || shift < 0.0) throw ValidationError("shift must be finite and >= 0");
  if (mean_layout == MeanLayout::TwoGroupShift && k != 2)
    throw ValidationError("two-group-shift layout needs k = 2");
  if (mean_layout == MeanLayout::Equidistant && k > 1 && k - 1 > L)
    throw ValidationError("equidistant layout needs L >= k - 1");
}

std::vector<std::vector<double>> cluster_means(const SimScenario& s) {
  s.validate();
  std::vector<std::vector<double>> mu(s.k, std::vector<double>(s.L, 0.0));
  switch (s.mean_layout) {
    case MeanLayout::TwoGroupShift:
      std::fill(mu[1].begin(), mu[1].end(), s.shift);
      break;
    case MeanLayout::Inline:
      for (std::size_t g = 0; g < s.k; ++g)
        std::fill(mu[g].begin(), mu[g].end(), static_cast<double>(g) * s.shift);
      break;
    case MeanLayout::Equidistant: {
      if (s.k < 2) break;
      const std::size_t dims = s.k - 1;
      // Vertices of a unit-edge regular simplex in Helmert coordinates.
      std::vector<std::vector<double>> v(s.k, std::vector<double>(dims, 0.0));
      for (std::size_t j = 1; j <= dims; ++j) {
        const double norm = std::sqrt(static_cast<double>(j * (j + 1)) * 2.0);
        for (std::size_t g = 0; g < j; ++g) v[g][j - 1] = 1.0 / norm;
        v[j][j - 1] = -static_cast<double>(j) / norm;
      }
      // Spread each simplex axis over its share of the coordinates.
      std::vector<std::size_t> count(dims, 0);
      for (std::size_t l = 0; l < s.L; ++l) ++count[l % dims];
      const double L = static_cast<double>(s.L);
      for (std::size_t g = 0; g < s.k; ++g)
        for (std::size_t l = 0; l < s.L; ++l) {
          const std::size_t j = l % dims;
          mu[g][l] = v[g][j] * s.shift * std::sqrt(L / static_cast<double>(count[j]));
        }
      break;
    }
  }
  return mu;
}

namespace {

// Marsaglia polar method; one cached spare.
class NormalSource {
 public:
  explicit NormalSource(Rng& rng) : rng_(rng) {}

  double operator()() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u, v, s;
    do {
      u = 2.0 * uniform01(rng_) - 1.0;
      v = 2.0 * uniform01(rng_) - 1.0;
      s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    const double f = std::sqrt(-2.0 * std::log(s) / s);
    spare_ = v * f;
    has_spare_ = true;
    return u * f;
  }

 private:
  Rng& rng_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

// Noise draws standardised to mean 0 and variance 1.
double draw_noise(NoiseLaw law, Rng& rng, NormalSource& normal) {
  switch (law) {
    case NoiseLaw::Normal: return normal();
    case NoiseLaw::ChiSquared: {
      const double z = normal();
      return (z * z - 1.0) / std::sqrt(2.0);
    }
    case NoiseLaw::Gamma: {
      // Shape 2, scale 1: sum of two unit exponentials.
      const double e1 = -std::log1p(-uniform01(rng));
      const double e2 = -std::log1p(-uniform01(rng));
      return (e1 + e2 - 2.0) / std::sqrt(2.0);
    }
  }
  return 0.0;
}

template <class F>
void parallel_for(int count, unsigned threads, F&& body) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min<unsigned>(threads, static_cast<unsigned>(std::max(count, 1)));
  if (threads <= 1) {
    for (int i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<int> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < threads; ++t)
    pool.emplace_back([&] {
      for (int i; (i = next.fetch_add(1)) < count;) {
        try {
          body(i);
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
        }
      }
    });
  for (auto& th : pool) th.join();
  if (failure) std::rethrow_exception(failure);
}

TestConfig replication_config(const SimScenario& s, const TestConfig& base, int rep) {
  TestConfig c = base;
  c.seed = derive_seed(base.seed, {s.seed, 0x7e57ULL, static_cast<std::uint64_t>(rep)});
  return c;
}

}  // namespace

DataMatrix generate(const SimScenario& s, int replication) {
  const auto mu = cluster_means(s);
  Rng rng = make_stream(s.seed, {0xda7aULL, static_cast<std::uint64_t>(replication)});
  NormalSource normal(rng);
  std::vector<double> values;
  values.reserve(s.n * s.L);
  for (std::size_t g = 0; g < s.k; ++g)
    for (std::size_t i = 0; i < s.group_sizes[g]; ++i)
      for (std::size_t l = 0; l < s.L; ++l) values.push_back(mu[g][l] + draw_noise(s.noise, rng, normal));
  return DataMatrix(s.n, s.L, std::move(values));
}

ClusterLabeling planted_labels(const SimScenario& s) {
  s.validate();
  ClusterLabeling out;
  for (std::size_t g = 0; g < s.k; ++g)
    out.labels.insert(out.labels.end(), s.group_sizes[g], static_cast<int>(g));
  out.k_hat = static_cast<int>(s.k);
  return out;
}

double adjusted_rand_index(const ClusterLabeling& a, const ClusterLabeling& b) {
  if (a.labels.size() != b.labels.size())
    throw DimensionError("labelings have different lengths");
  const std::size_t n = a.labels.size();
  if (n < 2) return 1.0;
  std::map<std::pair<int, int>, double> cells;
  std::map<int, double> rows, cols;
  for (std::size_t i = 0; i < n; ++i) {
    cells[{a.labels[i], b.labels[i]}] += 1.0;
    rows[a.labels[i]] += 1.0;
    cols[b.labels[i]] += 1.0;
  }
  auto pairs = [](double m) { return m * (m - 1.0) / 2.0; };
  double index = 0.0, sum_a = 0.0, sum_b = 0.0;
  for (const auto& [key, m] : cells) index += pairs(m);
  for (const auto& [key, m] : rows) sum_a += pairs(m);
  for (const auto& [key, m] : cols) sum_b += pairs(m);
  const double expected = sum_a * sum_b / pairs(static_cast<double>(n));
  const double max_index = 0.5 * (sum_a + sum_b);
  // Both labelings trivial (all-one-cluster or all-singletons alike).
  if (max_index == expected) return 1.0;
  return (index - expected) / (max_index - expected);
}

double binomial_se(double p, int replications) {
  if (replications < 1) throw DomainError("replications must be positive");
  return std::sqrt(p * (1.0 - p) / replications);
}

SimReport run_homogeneity_study(const SimScenario& s, double alpha, const StudyOptions& options) {
  s.validate();
  if (!(alpha > 0.0 && alpha < 1.0)) throw DomainError("alpha must lie in (0, 1)");
  SimReport report;
  report.scenario = s;
  report.alpha = alpha;
  report.per_replication.resize(static_cast<std::size_t>(s.replications));

  parallel_for(s.replications, options.threads, [&](int rep) {
    const DataMatrix data = generate(s, rep);
    const KernelMatrix kernel = build_kernel_matrix(data, KernelSpec::squared_euclidean());
    const TestResult t = homogeneity_test(kernel, alpha, replication_config(s, options.test, rep));
    ReplicationRecord r;
    r.replication = rep;
    r.statistic = t.statistic;
    r.p_max = corrected_pvalue(t.statistic, s.n, PValueMethod::ExactMax);
    r.p_gumbel = corrected_pvalue(t.statistic, s.n, PValueMethod::Gumbel);
    r.reject_max = r.p_max < alpha;
    r.reject_gumbel = r.p_gumbel < alpha;
    r.reject = t.reject;
    report.per_replication[static_cast<std::size_t>(rep)] = r;
  });

  double any = 0.0, m = 0.0, g = 0.0;
  for (const auto& r : report.per_replication) {
    any += r.reject;
    m += r.reject_max;
    g += r.reject_gumbel;
  }
  const double re = s.replications;
  report.rejection_rate = any / re;
  report.rejection_rate_max = m / re;
  report.rejection_rate_gumbel = g / re;
  return report;
}

SimReport run_hierarchy_study(const SimScenario& s, double alpha, std::size_t tau,
                              const StudyOptions& options) {
  s.validate();
  SimReport report;
  report.scenario = s;
  report.alpha = alpha;
  report.per_replication.resize(static_cast<std::size_t>(s.replications));
  const ClusterLabeling truth = planted_labels(s);

  parallel_for(s.replications, options.threads, [&](int rep) {
    const DataMatrix data = generate(s, rep);
    const KernelMatrix kernel = build_kernel_matrix(data, KernelSpec::squared_euclidean());
    HierarchyConfig hc;
    hc.alpha = alpha;
    hc.tau = tau;
    hc.test = replication_config(s, options.test, rep);
    const DendrogramNode root = hierarchical_cluster(kernel, hc);
    const ClusterLabeling found = extract_clusters(root);
    ReplicationRecord r;
    r.replication = rep;
    if (root.p_value) {
      r.p_max = *root.p_value;
      r.reject = root.decision == NodeDecision::Split;
    }
    r.ari = adjusted_rand_index(found, truth);
    r.k_hat = found.k_hat;
    report.per_replication[static_cast<std::size_t>(rep)] = r;
  });

  double ari = 0.0, k = 0.0, split = 0.0;
  for (const auto& r : report.per_replication) {
    ari += *r.ari;
    k += *r.k_hat;
    split += r.reject;
  }
  const double re = s.replications;
  report.mean_ari = ari / re;
  report.mean_k_hat = k / re;
  report.rejection_rate = split / re;
  return report;
}

}  // namespace uclust
