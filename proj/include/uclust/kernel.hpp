#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <vector>

namespace uclust {

/// n samples (rows) by L features (columns), row-major.
class DataMatrix {
 public:
  DataMatrix() = default;

  /// Validates shape, finiteness and label uniqueness. Empty labels are
  /// replaced by "s0", "s1", ...
  DataMatrix(std::size_t rows, std::size_t cols, std::vector<double> values,
             std::vector<std::string> labels = {});

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  std::span<const double> row(std::size_t i) const {
    return {values_.data() + i * cols_, cols_};
  }
  double operator()(std::size_t i, std::size_t j) const {
    return values_[i * cols_ + j];
  }
  const std::vector<double>& values() const { return values_; }
  const std::vector<std::string>& labels() const { return labels_; }

  /// Rows become columns; labels are regenerated.
  DataMatrix transposed() const;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> values_;
  std::vector<std::string> labels_;
};

enum class KernelKind { AveragedSquaredEuclidean, AveragedAbsolute, UserRegistered };

/// A coordinate-decomposable kernel phi(x, y) = (1/L) sum_l phi*(x_l, y_l).
/// For UserRegistered kinds `coordinate` supplies phi*, which must be
/// symmetric in its arguments.
struct KernelSpec {
  KernelKind kind = KernelKind::AveragedSquaredEuclidean;
  std::function<double(double, double)> coordinate;
  std::string name = "sqeuclidean";

  static KernelSpec squared_euclidean();
  static KernelSpec absolute();
  static KernelSpec user(std::string name, std::function<double(double, double)> fn);
  /// "sqeuclidean" or "absolute".
  static KernelSpec from_name(const std::string& name);
};

double evaluate_kernel(const KernelSpec& spec, std::span<const double> x,
                       std::span<const double> y);

/// Symmetric n x n matrix of kernel values with zero diagonal. Immutable
/// after construction and shared read-only by everything downstream.
class KernelMatrix {
 public:
  KernelMatrix() = default;
  /// `values` is row-major n x n; symmetry and a zero diagonal are enforced.
  KernelMatrix(std::size_t n, std::vector<double> values, std::size_t dimension = 0);

  std::size_t size() const { return n_; }
  /// Feature count of the data the matrix was built from (0 if unknown).
  std::size_t dimension() const { return dimension_; }

  double operator()(std::size_t i, std::size_t j) const { return phi_[i * n_ + j]; }
  std::span<const double> row(std::size_t i) const { return {phi_.data() + i * n_, n_}; }

  /// Kernel restricted to `members`, in the given order.
  KernelMatrix submatrix(std::span<const std::size_t> members) const;

  /// Sum of phi over all unordered pairs, compensated.
  double total_pair_sum() const;

  /// True when every off-diagonal entry equals the first one.
  bool is_constant() const;

 private:
  std::size_t n_ = 0;
  std::size_t dimension_ = 0;
  std::vector<double> phi_;
};

KernelMatrix build_kernel_matrix(const DataMatrix& data, const KernelSpec& spec);

}  // namespace uclust
