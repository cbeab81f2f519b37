#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "uclust/cluster.hpp"
#include "uclust/hierarchy.hpp"
#include "uclust/kernel.hpp"
#include "uclust/sigtest.hpp"
#include "uclust/simulation.hpp"

namespace uclust {

enum class HeaderMode { Auto, Present, Absent };

struct CsvOptions {
  /// Auto treats the first row as a header when any feature cell in it is
  /// not a number.
  HeaderMode header = HeaderMode::Auto;
  /// First column holds sample labels.
  bool row_labels = false;
  /// Columns are samples. Header names, if any, become the sample labels.
  bool transpose = false;
};

DataMatrix parse_csv(const std::string& text, const CsvOptions& options = {});
DataMatrix read_csv(const std::string& path, const CsvOptions& options = {});

/// Writes the whole file or throws IoError.
void write_text_file(const std::string& path, const std::string& content);

/// %.17g rendering.
std::string format_number(double x);

enum class DendrogramFormat { Json, Newick, Svg };
DendrogramFormat dendrogram_format_from_string(const std::string& s);

nlohmann::json dendrogram_to_json(const DendrogramNode& root,
                                  const std::vector<std::string>& labels = {});
DendrogramNode dendrogram_from_json(const nlohmann::json& j);

/// Leaf groups are written as multifurcations of sample labels. Branch
/// lengths are differences of the monotone height envelope.
std::string dendrogram_to_newick(const DendrogramNode& root,
                                 const std::vector<std::string>& labels);
std::string dendrogram_to_svg(const DendrogramNode& root, const std::vector<std::string>& labels);

std::string render_dendrogram(const DendrogramNode& root, DendrogramFormat format,
                              const std::vector<std::string>& labels);
void write_dendrogram(const DendrogramNode& root, DendrogramFormat format, const std::string& path,
                      const std::vector<std::string>& labels);

nlohmann::json partition_to_json(const Partition& p, const std::vector<std::string>& labels);
nlohmann::json test_result_to_json(const TestResult& r, const std::vector<std::string>& labels);
nlohmann::json uclust_result_to_json(const UclustResult& r, const std::vector<std::string>& labels);

/// Labelled study: which driver runs and its level parameters.
struct StudySpec {
  enum class Kind { Homogeneity, Hierarchy } kind = Kind::Homogeneity;
  SimScenario scenario;
  double alpha = 0.05;
  std::size_t tau = 3;
};

/// Built-in scenarios by name.
std::vector<std::string> scenario_preset_names();
StudySpec scenario_preset(const std::string& name);
StudySpec study_from_json(const nlohmann::json& j);
nlohmann::json study_to_json(const StudySpec& s);

nlohmann::json sim_report_to_json(const SimReport& r, const StudySpec& spec);
/// One line per replication.
std::string sim_records_csv(const SimReport& r);
/// Human-readable summary table.
std::string sim_report_table(const SimReport& r, const StudySpec& spec);

}  // namespace uclust
