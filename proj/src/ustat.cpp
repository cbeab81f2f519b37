#include "uclust/ustat.hpp"

#include <algorithm>
#include <string>
#include <utility>

#include "uclust/error.hpp"

namespace uclust {

Partition::Partition(std::vector<std::uint8_t> assignment) : assignment_(std::move(assignment)) {
  for (auto l : assignment_) {
    if (l == 1) {
      ++n1_;
    } else if (l != 2) {
      throw DomainError("partition labels must be 1 or 2");
    }
  }
  if (n1_ == 0 || n1_ == assignment_.size()) throw DomainError("partition has an empty group");
}

Partition Partition::from_group1(std::size_t n, std::span<const std::size_t> group1) {
  std::vector<std::uint8_t> a(n, 2);
  for (auto i : group1) {
    if (i >= n) throw DimensionError("group member index out of range");
    a[i] = 1;
  }
  return Partition(std::move(a));
}

std::vector<std::size_t> Partition::members(std::uint8_t label) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < assignment_.size(); ++i)
    if (assignment_[i] == label) out.push_back(i);
  return out;
}

Partition Partition::swapped() const {
  Partition p = *this;
  for (auto& l : p.assignment_) l = static_cast<std::uint8_t>(3 - l);
  p.n1_ = assignment_.size() - n1_;
  return p;
}

bool Partition::is_canonical() const {
  const std::size_t m = n2();
  if (n1_ < m) return true;
  if (n1_ > m) return false;
  return assignment_.front() == 1;
}

Partition Partition::canonical() const { return is_canonical() ? *this : swapped(); }

Partition Partition::moved(std::size_t element) const {
  if (element >= assignment_.size()) throw DimensionError("element index out of range");
  const bool from1 = assignment_[element] == 1;
  if ((from1 && n1_ == 1) || (!from1 && n2() == 1))
    throw InvalidMoveError("moving element " + std::to_string(element) + " empties its group");
  Partition p = *this;
  p.assignment_[element] = from1 ? 2 : 1;
  p.n1_ = from1 ? n1_ - 1 : n1_ + 1;
  return p;
}

GroupSums group_sums(const Partition& partition, const KernelMatrix& kernel) {
  if (partition.size() != kernel.size())
    throw DimensionError("partition and kernel sizes differ");
  GroupSums s;
  const std::size_t n = kernel.size();
  for (std::size_t i = 0; i < n; ++i) {
    const auto li = partition.label(i);
    for (std::size_t j = i + 1; j < n; ++j) {
      const double v = kernel(i, j);
      if (li != partition.label(j)) {
        s.between += v;
      } else if (li == 1) {
        s.within1 += v;
      } else {
        s.within2 += v;
      }
    }
  }
  return s;
}

namespace {

double pairs(std::size_t m) { return 0.5 * static_cast<double>(m) * static_cast<double>(m - 1); }

}  // namespace

double u_within(const GroupSums& sums, int g, std::size_t n_g) {
  if (g != 1 && g != 2) throw DomainError("group index must be 1 or 2");
  if (n_g < 2)
    throw UndefinedStatisticError("within-group U-statistic needs at least 2 members");
  return (g == 1 ? sums.within1 : sums.within2).value() / pairs(n_g);
}

double u_between(const GroupSums& sums, std::size_t n1, std::size_t n2) {
  if (n1 < 1 || n2 < 1)
    throw UndefinedStatisticError("between-group U-statistic needs non-empty groups");
  return sums.between.value() / (static_cast<double>(n1) * static_cast<double>(n2));
}

double bn_from_sums(const GroupSums& sums, std::size_t n1, std::size_t n2) {
  const std::size_t n = n1 + n2;
  if (n1 < 1 || n2 < 1) throw UndefinedStatisticError("Bn needs two non-empty groups");
  const double nd = static_cast<double>(n);
  if (n1 == 1 || n2 == 1) {
    if (n < 3) throw UndefinedStatisticError("Bn with a singleton group needs n >= 3");
    const int big = n1 == 1 ? 2 : 1;
    const std::size_t n_big = n - 1;
    return (u_between(sums, n1, n2) - u_within(sums, big, n_big)) / nd;
  }
  const double coef =
      static_cast<double>(n1) * static_cast<double>(n2) / (nd * (nd - 1.0));
  return coef * (2.0 * u_between(sums, n1, n2) - u_within(sums, 1, n1) - u_within(sums, 2, n2));
}

BnResult bn(const Partition& partition, const KernelMatrix& kernel) {
  const auto sums = group_sums(partition, kernel);
  BnResult r;
  r.bn = bn_from_sums(sums, partition.n1(), partition.n2());
  r.n1 = std::min(partition.n1(), partition.n2());
  return r;
}

Decomposition un_decomposition(const Partition& partition, const KernelMatrix& kernel) {
  const auto sums = group_sums(partition, kernel);
  const std::size_t n1 = partition.n1();
  const std::size_t n2 = partition.n2();
  const std::size_t n = n1 + n2;
  const double nd = static_cast<double>(n);

  CompensatedSum total = sums.within1;
  total += sums.within2;
  total += sums.between;

  Decomposition d;
  d.un = total.value() / pairs(n);
  d.bn = bn_from_sums(sums, n1, n2);
  if (n1 == 1 || n2 == 1) {
    const int big = n1 == 1 ? 2 : 1;
    d.wn = (nd - 1.0) / nd * u_within(sums, big, n - 1) + u_between(sums, n1, n2) / nd;
  } else {
    d.wn = static_cast<double>(n1) / nd * u_within(sums, 1, n1) +
           static_cast<double>(n2) / nd * u_within(sums, 2, n2);
  }
  return d;
}

MoveResult bn_delta_move(const Partition& partition, const GroupSums& sums, std::size_t element,
                         const KernelMatrix& kernel) {
  if (partition.size() != kernel.size())
    throw DimensionError("partition and kernel sizes differ");
  const Partition next = partition.moved(element);

  double to1 = 0.0;
  double to2 = 0.0;
  const auto row = kernel.row(element);
  for (std::size_t j = 0; j < row.size(); ++j) {
    if (j == element) continue;
    (partition.label(j) == 1 ? to1 : to2) += row[j];
  }

  MoveResult r;
  r.new_sums = sums;
  if (partition.label(element) == 1) {
    r.new_sums.within1 -= to1;
    r.new_sums.between -= to2;
    r.new_sums.between += to1;
    r.new_sums.within2 += to2;
  } else {
    r.new_sums.within2 -= to2;
    r.new_sums.between -= to1;
    r.new_sums.between += to2;
    r.new_sums.within1 += to1;
  }
  r.new_bn = bn_from_sums(r.new_sums, next.n1(), next.n2());
  return r;
}

}  // namespace uclust
