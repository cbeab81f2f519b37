#include "uclust/hierarchy.hpp"

#include <algorithm>
#include <string>

#include "uclust/cluster.hpp"
#include "uclust/error.hpp"
#include "uclust/rng.hpp"

namespace uclust {

const char* to_string(NodeDecision d) {
  switch (d) {
    case NodeDecision::Split: return "split";
    case NodeDecision::Homogeneous: return "homogeneous";
    case NodeDecision::TooSmall: return "too-small";
  }
  return "unknown";
}

NodeDecision node_decision_from_string(const std::string& s) {
  if (s == "split") return NodeDecision::Split;
  if (s == "homogeneous") return NodeDecision::Homogeneous;
  if (s == "too-small") return NodeDecision::TooSmall;
  throw ParseError("unknown node decision '" + s + "'");
}

double node_alpha(double alpha, std::size_t n_i, std::size_t n) {
  return alpha * static_cast<double>(n_i - 1) / static_cast<double>(n - 1);
}

namespace {

void grow(DendrogramNode& node, const KernelMatrix& kernel, const HierarchyConfig& config) {
  const std::size_t n = kernel.size();
  const std::size_t n_i = node.members.size();
  node.alpha_i = node_alpha(config.alpha, n_i, n);
  if (n_i <= config.tau) {
    node.decision = NodeDecision::TooSmall;
    return;
  }

  const KernelMatrix sub = kernel.submatrix(node.members);
  TestConfig test = config.test;
  test.seed = derive_seed(config.test.seed, {node.members.front(), n_i});
  const UclustResult res = cluster(sub, node.alpha_i, test);
  node.p_value = res.homogeneity.p_value;
  if (res.verdict != Verdict::Split) {
    node.decision = NodeDecision::Homogeneous;
    return;
  }

  node.decision = NodeDecision::Split;
  const Partition& p = *res.partition;
  node.height = bn(p, sub).bn;

  DendrogramNode a, b;
  for (std::size_t k = 0; k < n_i; ++k)
    (p.label(k) == 1 ? a : b).members.push_back(node.members[k]);
  if (b.members.front() < a.members.front()) std::swap(a, b);
  node.children.push_back(std::move(a));
  node.children.push_back(std::move(b));
  for (auto& child : node.children) grow(child, kernel, config);
}

}  // namespace

DendrogramNode hierarchical_cluster(const KernelMatrix& kernel, const HierarchyConfig& config) {
  if (kernel.size() < 2) throw TooSmallError("hierarchical clustering needs at least 2 samples");
  if (!(config.alpha > 0.0 && config.alpha < 1.0)) throw DomainError("alpha must lie in (0, 1)");
  if (config.tau < 2) throw DomainError("tau must be at least 2");
  DendrogramNode root;
  root.members.resize(kernel.size());
  for (std::size_t i = 0; i < kernel.size(); ++i) root.members[i] = i;
  grow(root, kernel, config);
  return root;
}

ClusterLabeling extract_clusters(const DendrogramNode& root) {
  std::vector<const DendrogramNode*> leaves;
  std::vector<const DendrogramNode*> stack{&root};
  std::size_t n = 0;
  while (!stack.empty()) {
    const DendrogramNode* node = stack.back();
    stack.pop_back();
    if (node->is_leaf()) {
      leaves.push_back(node);
      n += node->members.size();
    } else {
      for (const auto& c : node->children) stack.push_back(&c);
    }
  }
  auto smallest = [](const DendrogramNode* d) {
    return *std::min_element(d->members.begin(), d->members.end());
  };
  std::sort(leaves.begin(), leaves.end(),
            [&](auto x, auto y) { return smallest(x) < smallest(y); });

  ClusterLabeling out;
  out.labels.assign(n, -1);
  for (std::size_t c = 0; c < leaves.size(); ++c)
    for (auto m : leaves[c]->members) {
      if (m >= n) throw DimensionError("dendrogram member index out of range");
      out.labels[m] = static_cast<int>(c);
    }
  out.k_hat = static_cast<int>(leaves.size());
  return out;
}

}  // namespace uclust
