#include "uclust/kernel.hpp"

#include <cmath>
#include <unordered_set>
#include <utility>

#include "uclust/error.hpp"
#include "uclust/summation.hpp"

namespace uclust {

DataMatrix::DataMatrix(std::size_t rows, std::size_t cols, std::vector<double> values,
                       std::vector<std::string> labels)
    : rows_(rows), cols_(cols), values_(std::move(values)), labels_(std::move(labels)) {
  if (rows_ < 2) throw TooSmallError("data matrix needs at least 2 samples");
  if (cols_ < 1) throw DimensionError("data matrix needs at least 1 feature");
  if (values_.size() != rows_ * cols_) {
    throw DimensionError("data matrix has " + std::to_string(values_.size()) +
                         " values, expected " + std::to_string(rows_ * cols_));
  }
  for (std::size_t i = 0; i < rows_; ++i) {
    for (std::size_t j = 0; j < cols_; ++j) {
      if (!std::isfinite(values_[i * cols_ + j])) {
        throw DomainError("non-finite value at row " + std::to_string(i + 1) + ", column " +
                          std::to_string(j + 1));
      }
    }
  }
  if (labels_.empty()) {
    labels_.reserve(rows_);
    for (std::size_t i = 0; i < rows_; ++i) labels_.push_back("s" + std::to_string(i));
  }
  if (labels_.size() != rows_) throw DimensionError("label count does not match row count");
  std::unordered_set<std::string> seen;
  for (const auto& l : labels_) {
    if (!seen.insert(l).second) throw ValidationError("duplicate sample label '" + l + "'");
  }
}

DataMatrix DataMatrix::transposed() const {
  std::vector<double> t(values_.size());
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) t[j * rows_ + i] = values_[i * cols_ + j];
  return DataMatrix(cols_, rows_, std::move(t));
}

KernelSpec KernelSpec::squared_euclidean() { return KernelSpec{}; }

KernelSpec KernelSpec::absolute() {
  KernelSpec s;
  s.kind = KernelKind::AveragedAbsolute;
  s.name = "absolute";
  return s;
}

KernelSpec KernelSpec::user(std::string name, std::function<double(double, double)> fn) {
  KernelSpec s;
  s.kind = KernelKind::UserRegistered;
  s.coordinate = std::move(fn);
  s.name = std::move(name);
  return s;
}

KernelSpec KernelSpec::from_name(const std::string& name) {
  if (name == "sqeuclidean") return squared_euclidean();
  if (name == "absolute") return absolute();
  throw ValidationError("unknown kernel '" + name + "' (expected sqeuclidean or absolute)");
}

namespace {

template <typename F>
double averaged(std::span<const double> x, std::span<const double> y, F&& coord) {
  double acc = 0.0;
  for (std::size_t l = 0; l < x.size(); ++l) acc += coord(x[l], y[l]);
  return acc / static_cast<double>(x.size());
}

double kernel_unchecked(const KernelSpec& spec, std::span<const double> x,
                        std::span<const double> y) {
  switch (spec.kind) {
    case KernelKind::AveragedSquaredEuclidean:
      return averaged(x, y, [](double a, double b) {
        const double d = a - b;
        return d * d;
      });
    case KernelKind::AveragedAbsolute:
      return averaged(x, y, [](double a, double b) { return std::fabs(a - b); });
    case KernelKind::UserRegistered:
      return averaged(x, y, spec.coordinate);
  }
  return 0.0;
}

}  // namespace

double evaluate_kernel(const KernelSpec& spec, std::span<const double> x,
                       std::span<const double> y) {
  if (x.size() != y.size()) {
    throw DimensionError("kernel arguments have lengths " + std::to_string(x.size()) + " and " +
                         std::to_string(y.size()));
  }
  if (x.empty()) throw DimensionError("kernel arguments must have length >= 1");
  for (std::size_t l = 0; l < x.size(); ++l) {
    if (!std::isfinite(x[l]) || !std::isfinite(y[l]))
      throw DomainError("non-finite kernel argument at coordinate " + std::to_string(l));
  }
  if (spec.kind == KernelKind::UserRegistered && !spec.coordinate)
    throw ConfigurationError("user kernel '" + spec.name + "' has no coordinate function");
  return kernel_unchecked(spec, x, y);
}

KernelMatrix::KernelMatrix(std::size_t n, std::vector<double> values, std::size_t dimension)
    : n_(n), dimension_(dimension), phi_(std::move(values)) {
  if (phi_.size() != n_ * n_) throw DimensionError("kernel matrix must be n x n");
  for (std::size_t i = 0; i < n_; ++i) {
    phi_[i * n_ + i] = 0.0;
    for (std::size_t j = i + 1; j < n_; ++j) {
      const double v = phi_[i * n_ + j];
      if (!std::isfinite(v)) throw DomainError("non-finite kernel entry");
      if (v != phi_[j * n_ + i]) throw DomainError("kernel matrix is not symmetric");
    }
  }
}

KernelMatrix KernelMatrix::submatrix(std::span<const std::size_t> members) const {
  const std::size_t m = members.size();
  std::vector<double> sub(m * m);
  for (std::size_t a = 0; a < m; ++a)
    for (std::size_t b = 0; b < m; ++b) sub[a * m + b] = (*this)(members[a], members[b]);
  KernelMatrix out;
  out.n_ = m;
  out.dimension_ = dimension_;
  out.phi_ = std::move(sub);
  return out;
}

double KernelMatrix::total_pair_sum() const {
  CompensatedSum s;
  for (std::size_t i = 0; i < n_; ++i)
    for (std::size_t j = i + 1; j < n_; ++j) s += phi_[i * n_ + j];
  return s.value();
}

bool KernelMatrix::is_constant() const {
  if (n_ < 2) return true;
  const double first = phi_[1];
  for (std::size_t i = 0; i < n_; ++i)
    for (std::size_t j = i + 1; j < n_; ++j)
      if (phi_[i * n_ + j] != first) return false;
  return true;
}

KernelMatrix build_kernel_matrix(const DataMatrix& data, const KernelSpec& spec) {
  if (spec.kind == KernelKind::UserRegistered && !spec.coordinate)
    throw ConfigurationError("user kernel '" + spec.name + "' has no coordinate function");
  const std::size_t n = data.rows();
  std::vector<double> phi(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double v = kernel_unchecked(spec, data.row(i), data.row(j));
      if (!std::isfinite(v)) throw DomainError("kernel produced a non-finite value");
      phi[i * n + j] = v;
      phi[j * n + i] = v;
    }
  }
  return KernelMatrix(n, std::move(phi), data.cols());
}

}  // namespace uclust
