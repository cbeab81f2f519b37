// Command-line front end: utest, uclust, uhclust, simulate.

#include <CLI11.hpp>

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>

#include "uclust/cluster.hpp"
#include "uclust/error.hpp"
#include "uclust/hierarchy.hpp"
#include "uclust/io.hpp"
#include "uclust/simulation.hpp"

namespace {

using namespace uclust;

struct Common {
  std::string input;
  std::string output;
  double alpha = 0.05;
  std::uint64_t seed = 0;
  int mc_iterations = 1000;
  std::size_t gumbel_threshold = 30;
  int restarts = 0;
  std::string kernel = "sqeuclidean";
  bool transpose = false;
  bool labels = false;
  std::string header = "auto";
};

void add_common(CLI::App* app, Common& c, bool needs_input) {
  auto* in = app->add_option("--input,-i", c.input, "CSV file, samples in rows");
  if (needs_input) in->required();
  app->add_option("--output,-o", c.output, "Output file");
  app->add_option("--alpha", c.alpha, "Significance level")->check(CLI::Range(0.0, 1.0));
  app->add_option("--seed", c.seed, "Random seed");
  app->add_option("--mc-iterations", c.mc_iterations, "Monte Carlo draws per variance estimate")
      ->check(CLI::PositiveNumber);
  app->add_option("--gumbel-threshold", c.gumbel_threshold,
                  "Smallest n that uses the Gumbel correction");
  app->add_option("--restarts", c.restarts, "Local search restarts (0: max(10, n))")
      ->check(CLI::NonNegativeNumber);
  app->add_option("--kernel", c.kernel, "sqeuclidean or absolute")
      ->check(CLI::IsMember({"sqeuclidean", "absolute"}));
  app->add_flag("--transpose", c.transpose, "Samples are columns");
  app->add_flag("--labels", c.labels, "First column holds sample labels");
  app->add_option("--header", c.header, "auto, yes or no")
      ->check(CLI::IsMember({"auto", "yes", "no"}));
}

TestConfig test_config(const Common& c) {
  TestConfig t;
  t.mc_iterations = c.mc_iterations;
  t.seed = c.seed;
  t.gumbel_threshold_n = c.gumbel_threshold;
  t.search.restarts = c.restarts;
  return t;
}

DataMatrix load(const Common& c) {
  CsvOptions o;
  o.row_labels = c.labels;
  o.transpose = c.transpose;
  o.header = c.header == "yes" ? HeaderMode::Present
             : c.header == "no" ? HeaderMode::Absent
                                : HeaderMode::Auto;
  return read_csv(c.input, o);
}

std::string sizes_line(const std::vector<std::size_t>& sizes) {
  std::string s;
  for (std::size_t i = 0; i < sizes.size(); ++i) s += (i ? " " : "") + std::to_string(sizes[i]);
  return s;
}

void print_warnings(const std::vector<std::string>& w) {
  for (const auto& s : w) std::cout << "warning: " << s << "\n";
}

Partition parse_partition(const std::string& text, std::size_t n) {
  std::vector<std::uint8_t> a;
  std::stringstream ss(text);
  for (std::string tok; std::getline(ss, tok, ',');) {
    if (tok == "1") a.push_back(1);
    else if (tok == "2") a.push_back(2);
    else throw ValidationError("partition entries must be 1 or 2, got '" + tok + "'");
  }
  if (a.size() != n)
    throw ValidationError("partition has " + std::to_string(a.size()) + " entries, data has " +
                          std::to_string(n) + " samples");
  return Partition(std::move(a));
}

int run_utest(const Common& c, const std::string& partition, const std::string& multiplicity) {
  const DataMatrix data = load(c);
  const KernelMatrix k = build_kernel_matrix(data, KernelSpec::from_name(c.kernel));
  const TestConfig cfg = test_config(c);
  TestResult r;
  if (partition.empty()) {
    r = homogeneity_test(k, c.alpha, cfg);
  } else {
    const Multiplicity m = multiplicity == "single" ? Multiplicity::Single
                           : multiplicity == "max"  ? Multiplicity::Max
                                                    : Multiplicity::Auto;
    const VarianceTable table = build_variance_table(k, cfg.variance_options());
    r = u_test(parse_partition(partition, data.rows()), k, table, c.alpha, m,
               cfg.gumbel_threshold_n);
  }
  std::cout << "verdict: " << (r.reject ? "split" : "homogeneous") << "\n"
            << "p-value: " << format_number(r.p_value) << "\n"
            << "statistic: " << format_number(r.statistic) << "\n"
            << "method: " << to_string(r.method) << "\n"
            << "partition sizes: " << sizes_line({r.best_partition.n1(), r.best_partition.n2()})
            << "\n";
  print_warnings(r.warnings);
  if (!c.output.empty()) write_text_file(c.output, test_result_to_json(r, data.labels()).dump(2) + "\n");
  return 0;
}

int run_uclust(const Common& c) {
  const DataMatrix data = load(c);
  const KernelMatrix k = build_kernel_matrix(data, KernelSpec::from_name(c.kernel));
  const UclustResult r = cluster(k, c.alpha, test_config(c));
  std::cout << "verdict: " << to_string(r.verdict) << "\n"
            << "p-value: " << format_number(r.homogeneity.p_value) << "\n";
  if (r.partition) {
    std::cout << "K_hat=2\n"
              << "cluster sizes: " << sizes_line({r.partition->n1(), r.partition->n2()}) << "\n";
  } else {
    std::cout << "K_hat=1\n"
              << "cluster sizes: " << data.rows() << "\n";
  }
  print_warnings(r.warnings);
  if (!c.output.empty())
    write_text_file(c.output, uclust_result_to_json(r, data.labels()).dump(2) + "\n");
  return 0;
}

int run_uhclust(const Common& c, std::size_t tau, const std::string& format) {
  const DendrogramFormat fmt = dendrogram_format_from_string(format);
  const DataMatrix data = load(c);
  const KernelMatrix k = build_kernel_matrix(data, KernelSpec::from_name(c.kernel));
  HierarchyConfig hc;
  hc.alpha = c.alpha;
  hc.tau = tau;
  hc.test = test_config(c);
  const DendrogramNode root = hierarchical_cluster(k, hc);
  const ClusterLabeling lab = extract_clusters(root);
  std::vector<std::size_t> sizes(static_cast<std::size_t>(lab.k_hat), 0);
  for (int l : lab.labels) ++sizes[static_cast<std::size_t>(l)];
  std::cout << "verdict: " << (root.decision == NodeDecision::Split ? "split" : "homogeneous")
            << "\n";
  if (root.p_value) std::cout << "p-value: " << format_number(*root.p_value) << "\n";
  std::cout << "K_hat=" << lab.k_hat << "\n"
            << "cluster sizes: " << sizes_line(sizes) << "\n";
  if (!c.output.empty()) write_dendrogram(root, fmt, c.output, data.labels());
  return 0;
}

StudySpec load_study(const std::string& scenario) {
  const auto names = scenario_preset_names();
  if (std::find(names.begin(), names.end(), scenario) != names.end())
    return scenario_preset(scenario);
  std::string text = scenario;
  if (scenario.empty() || scenario.front() != '{') {
    std::ifstream in(scenario);
    if (!in)
      throw ValidationError("scenario '" + scenario + "' is neither a preset, inline JSON nor a readable file");
    std::ostringstream buf;
    buf << in.rdbuf();
    text = buf.str();
  }
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("scenario is not valid JSON: ") + e.what());
  }
  return study_from_json(j);
}

int run_simulate(const Common& c, const std::string& scenario, int replications,
                 const std::string& records, unsigned threads, bool list) {
  if (list) {
    for (const auto& n : scenario_preset_names()) std::cout << n << "\n";
    return 0;
  }
  if (scenario.empty()) throw ValidationError("--scenario is required");
  StudySpec spec = load_study(scenario);
  if (replications > 0) spec.scenario.replications = replications;
  if (c.seed != 0) spec.scenario.seed = c.seed;
  StudyOptions o;
  o.test.mc_iterations = c.mc_iterations;
  o.test.gumbel_threshold_n = c.gumbel_threshold;
  o.test.search.restarts = c.restarts;
  o.threads = threads;
  const SimReport r = spec.kind == StudySpec::Kind::Homogeneity
                          ? run_homogeneity_study(spec.scenario, spec.alpha, o)
                          : run_hierarchy_study(spec.scenario, spec.alpha, spec.tau, o);
  std::cout << sim_report_table(r, spec);
  if (!c.output.empty()) write_text_file(c.output, sim_report_to_json(r, spec).dump(2) + "\n");
  if (!records.empty()) write_text_file(records, sim_records_csv(r));
  return 0;
}

bool is_validation(const uclust::Error& e) {
  return dynamic_cast<const ValidationError*>(&e) || dynamic_cast<const uclust::ParseError*>(&e) ||
         dynamic_cast<const TooSmallError*>(&e) || dynamic_cast<const DomainError*>(&e) ||
         dynamic_cast<const DimensionError*>(&e) || dynamic_cast<const ConfigurationError*>(&e);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Significance clustering for high-dimension low-sample-size data"};
  app.require_subcommand(1);

  Common c;
  auto* utest = app.add_subcommand("utest", "Homogeneity test, or a test of a given partition");
  add_common(utest, c, true);
  std::string partition, multiplicity = "auto";
  utest->add_option("--partition", partition, "Comma-separated group labels (1 or 2) per sample");
  utest->add_option("--multiplicity", multiplicity, "single, max or auto (with --partition)")
      ->check(CLI::IsMember({"single", "max", "auto"}));

  auto* uclust_cmd = app.add_subcommand("uclust", "Significant two-way partition");
  add_common(uclust_cmd, c, true);

  auto* uhclust = app.add_subcommand("uhclust", "Divisive hierarchical clustering");
  add_common(uhclust, c, true);
  std::size_t tau = 3;
  std::string format = "json";
  uhclust->add_option("--tau", tau, "Smallest group size that is not split further")
      ->check(CLI::Range(std::size_t{2}, std::size_t{1} << 30));
  uhclust->add_option("--format", format, "json, newick or svg")
      ->check(CLI::IsMember({"json", "newick", "svg"}));

  auto* simulate = app.add_subcommand("simulate", "Size, power and ARI studies on synthetic data");
  add_common(simulate, c, false);
  std::string scenario, records;
  int replications = 0;
  unsigned threads = 0;
  bool list = false;
  simulate->add_option("--scenario", scenario, "Preset name, JSON file or inline JSON");
  simulate->add_option("--replications", replications, "Override the replication count")
      ->check(CLI::NonNegativeNumber);
  simulate->add_option("--records", records, "Per-replication CSV output");
  simulate->add_option("--threads", threads, "Worker threads (0: all cores)");
  simulate->add_flag("--list", list, "List presets");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    if (code == 0) return 0;
    const auto subs = app.get_subcommands();
    std::cout << (subs.empty() ? app.help() : subs.front()->help());
    return 1;
  }

  try {
    if (utest->parsed()) return run_utest(c, partition, multiplicity);
    if (uclust_cmd->parsed()) return run_uclust(c);
    if (uhclust->parsed()) return run_uhclust(c, tau, format);
    return run_simulate(c, scenario, replications, records, threads, list);
  } catch (const uclust::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return is_validation(e) ? 1 : 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
