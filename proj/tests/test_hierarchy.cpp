#include <doctest.h>

#include <algorithm>
#include <functional>

#include "oracles.hpp"
#include "uclust/error.hpp"
#include "uclust/hierarchy.hpp"
#include "uclust/simulation.hpp"

using namespace uclust;

namespace {

DendrogramNode leaf(std::vector<std::size_t> m) {
  DendrogramNode n;
  n.members = std::move(m);
  n.decision = NodeDecision::Homogeneous;
  n.p_value = 0.5;
  return n;
}

DendrogramNode join(DendrogramNode a, DendrogramNode b) {
  DendrogramNode n;
  n.members = a.members;
  n.members.insert(n.members.end(), b.members.begin(), b.members.end());
  n.decision = NodeDecision::Split;
  n.p_value = 0.001;
  n.height = 1.0;
  n.children = {std::move(a), std::move(b)};
  return n;
}

void walk(const DendrogramNode& n, const std::function<void(const DendrogramNode&, const DendrogramNode*)>& f,
          const DendrogramNode* parent = nullptr) {
  f(n, parent);
  for (const auto& c : n.children) walk(c, f, &n);
}

}  // namespace

TEST_CASE("node level schedule") {
  CHECK(node_alpha(0.05, 30, 30) == 0.05);
  CHECK(node_alpha(0.05, 50, 100) == doctest::Approx(0.05 * 49.0 / 99.0).epsilon(1e-15));
  CHECK(node_alpha(0.05, 50, 100) == doctest::Approx(0.02475).epsilon(1e-3));
}

TEST_CASE("cluster extraction") {
  const auto root = leaf({0, 1, 2, 3});
  const auto one = extract_clusters(root);
  CHECK(one.k_hat == 1);
  CHECK(one.labels == std::vector<int>{0, 0, 0, 0});

  const auto tree = join(join(leaf({0, 4}), leaf({1, 5})), join(leaf({2}), leaf({3, 6, 7})));
  const auto four = extract_clusters(tree);
  CHECK(four.k_hat == 4);
  CHECK(four.labels == std::vector<int>{0, 1, 2, 3, 0, 1, 3, 3});
}

TEST_CASE("tree invariants on planted clusters") {
  const auto sc = SimScenario::clusters(3, 10, 2500, MeanLayout::Equidistant, 0.6, 1, 7);
  const auto data = generate(sc, 0);
  const auto k = build_kernel_matrix(data, KernelSpec::squared_euclidean());
  HierarchyConfig hc;
  const auto root = hierarchical_cluster(k, hc);
  const auto lab = extract_clusters(root);
  CHECK(lab.k_hat == 3);
  CHECK(adjusted_rand_index(lab, planted_labels(sc)) == 1.0);
  CHECK(root.alpha_i == 0.05);

  std::vector<std::size_t> seen;
  walk(root, [&](const DendrogramNode& n, const DendrogramNode* parent) {
    CHECK(n.alpha_i == node_alpha(0.05, n.members.size(), 30));
    if (parent) CHECK(n.alpha_i < parent->alpha_i);
    if (n.decision == NodeDecision::TooSmall) {
      CHECK(n.members.size() <= hc.tau);
      CHECK_FALSE(n.p_value);
    } else {
      CHECK(n.p_value);
    }
    if (n.is_leaf()) {
      seen.insert(seen.end(), n.members.begin(), n.members.end());
      CHECK(n.decision != NodeDecision::Split);
    } else {
      REQUIRE(n.children.size() == 2);
      CHECK(n.decision == NodeDecision::Split);
      CHECK(*n.p_value < n.alpha_i);
      std::vector<std::size_t> u = n.children[0].members;
      u.insert(u.end(), n.children[1].members.begin(), n.children[1].members.end());
      std::sort(u.begin(), u.end());
      std::vector<std::size_t> m = n.members;
      std::sort(m.begin(), m.end());
      CHECK(u == m);
      CHECK(n.children[0].members.front() < n.children[1].members.front());
    }
  });
  std::sort(seen.begin(), seen.end());
  std::vector<std::size_t> all(30);
  for (std::size_t i = 0; i < 30; ++i) all[i] = i;
  CHECK(seen == all);

  const auto again = hierarchical_cluster(k, hc);
  CHECK(again == root);
}

TEST_CASE("homogeneous data stays in one group") {
  gen::Engine e(2);
  auto d = gen::normal_data(e, 20, 1000);
  const auto root = hierarchical_cluster(build_kernel_matrix(d, KernelSpec::squared_euclidean()),
                                         HierarchyConfig{});
  CHECK(root.decision == NodeDecision::Homogeneous);
  CHECK(root.is_leaf());
  CHECK(extract_clusters(root).k_hat == 1);
}

TEST_CASE("small groups are not tested") {
  gen::Engine e(3);
  auto d = gen::normal_data(e, 3, 10);
  auto k = build_kernel_matrix(d, KernelSpec::squared_euclidean());
  const auto root = hierarchical_cluster(k, HierarchyConfig{});
  CHECK(root.decision == NodeDecision::TooSmall);
  CHECK_FALSE(root.p_value);
  HierarchyConfig bad;
  bad.tau = 1;
  CHECK_THROWS_AS(hierarchical_cluster(k, bad), DomainError);
  bad.tau = 3;
  bad.alpha = 1.0;
  CHECK_THROWS_AS(hierarchical_cluster(k, bad), DomainError);
}

TEST_CASE("decision names round trip") {
  for (auto d : {NodeDecision::Split, NodeDecision::Homogeneous, NodeDecision::TooSmall})
    CHECK(node_decision_from_string(to_string(d)) == d);
}
