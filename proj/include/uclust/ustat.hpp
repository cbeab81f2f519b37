#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "uclust/kernel.hpp"
#include "uclust/summation.hpp"

namespace uclust {

/// Two-group assignment of n samples. Labels are 1 or 2. Canonical form has
/// n1 <= n2, and when n1 == n2 sample 0 carries label 1. Bn is symmetric in
/// the labels so the canonical form loses nothing.
class Partition {
 public:
  Partition() = default;
  /// Throws DomainError on labels outside {1,2} or an empty group.
  explicit Partition(std::vector<std::uint8_t> assignment);

  static Partition from_group1(std::size_t n, std::span<const std::size_t> group1);

  std::size_t size() const { return assignment_.size(); }
  std::size_t n1() const { return n1_; }
  std::size_t n2() const { return assignment_.size() - n1_; }
  std::uint8_t label(std::size_t i) const { return assignment_[i]; }
  const std::vector<std::uint8_t>& assignment() const { return assignment_; }

  std::vector<std::size_t> members(std::uint8_t label) const;

  Partition swapped() const;
  Partition canonical() const;
  bool is_canonical() const;

  /// Moves `element` to the other group. Throws InvalidMoveError if that
  /// would empty its group.
  Partition moved(std::size_t element) const;

  friend bool operator==(const Partition&, const Partition&) = default;
  /// Lexicographic on the assignment vector; used for tie-breaking.
  friend bool operator<(const Partition& a, const Partition& b) {
    return a.assignment_ < b.assignment_;
  }

 private:
  std::vector<std::uint8_t> assignment_;
  std::size_t n1_ = 0;
};

/// Kernel sums over within-group and cross-group unordered pairs.
struct GroupSums {
  CompensatedSum within1;
  CompensatedSum within2;
  CompensatedSum between;
};

GroupSums group_sums(const Partition& partition, const KernelMatrix& kernel);

struct BnResult {
  double bn = 0.0;
  std::size_t n1 = 0;
  double variance = 0.0;
  double standardized = 0.0;
};

/// Mean kernel value inside group `g` (1 or 2) of size n_g.
double u_within(const GroupSums& sums, int g, std::size_t n_g);

/// Mean kernel value across the two groups.
double u_between(const GroupSums& sums, std::size_t n1, std::size_t n2);

/// Bn from precomputed sums, covering the size-one extension. (n1, n2) need
/// not be ordered.
double bn_from_sums(const GroupSums& sums, std::size_t n1, std::size_t n2);

/// Between-group statistic. The returned n1 is the smaller group size.
BnResult bn(const Partition& partition, const KernelMatrix& kernel);

struct Decomposition {
  double un = 0.0;
  double wn = 0.0;
  double bn = 0.0;
};

/// Combined-sample statistic Un with its within part Wn (weighted form) and
/// between part Bn.
Decomposition un_decomposition(const Partition& partition, const KernelMatrix& kernel);

struct MoveResult {
  double new_bn = 0.0;
  GroupSums new_sums;
};

/// Bn after moving `element` to the other group, in O(n) from `sums`.
MoveResult bn_delta_move(const Partition& partition, const GroupSums& sums, std::size_t element,
                         const KernelMatrix& kernel);

}  // namespace uclust
