#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "uclust/kernel.hpp"
#include "uclust/sigtest.hpp"

namespace uclust {

enum class NodeDecision { Split, Homogeneous, TooSmall };

const char* to_string(NodeDecision d);
NodeDecision node_decision_from_string(const std::string& s);

/// One group in the divisive significance dendrogram.
struct DendrogramNode {
  std::vector<std::size_t> members;
  double alpha_i = 0.0;
  std::optional<double> p_value;
  NodeDecision decision = NodeDecision::TooSmall;
  /// Raw Bn of the split; 0 for leaves.
  double height = 0.0;
  std::vector<DendrogramNode> children;

  bool is_leaf() const { return children.empty(); }
  friend bool operator==(const DendrogramNode&, const DendrogramNode&) = default;
};

struct HierarchyConfig {
  double alpha = 0.05;
  std::size_t tau = 3;
  TestConfig test;
};

/// Level for a group of n_i samples out of n: alpha (n_i - 1) / (n - 1).
double node_alpha(double alpha, std::size_t n_i, std::size_t n);

/// Divisive clustering by recursive significance splits with family-wise
/// error control. Members of the returned tree index rows of `kernel`.
DendrogramNode hierarchical_cluster(const KernelMatrix& kernel, const HierarchyConfig& config);

struct ClusterLabeling {
  std::vector<int> labels;
  int k_hat = 0;
};

/// Leaves become clusters, numbered by their smallest member.
ClusterLabeling extract_clusters(const DendrogramNode& root);

}  // namespace uclust
