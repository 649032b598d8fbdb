#include "pnu/model.hpp"

#include <algorithm>
#include <cmath>

#include "pnu/error.hpp"
#include "pnu/kernels.hpp"

namespace pnu {

Basis Basis::gaussian(Matrix centers, double bandwidth) {
  if (centers.rows() == 0) throw ConfigError("gaussian basis needs at least one center");
  if (!(bandwidth > 0.0) || !std::isfinite(bandwidth)) {
    throw ConfigError("gaussian bandwidth must be positive and finite");
  }
  if (!centers.allFinite()) throw InputError("non-finite basis center");
  Basis b;
  b.kind_ = BasisKind::gaussian_kernel;
  b.dim_ = static_cast<std::size_t>(centers.cols());
  b.centers_ = std::move(centers);
  b.bandwidth_ = bandwidth;
  return b;
}

Basis Basis::raw_linear(std::size_t dim) {
  if (dim == 0) throw ConfigError("raw linear basis needs a positive dimension");
  Basis b;
  b.kind_ = BasisKind::raw_linear_with_offset;
  b.dim_ = dim;
  return b;
}

std::size_t Basis::size() const {
  return kind_ == BasisKind::gaussian_kernel ? static_cast<std::size_t>(centers_.rows())
                                             : dim_ + 1;
}

Vector Basis::featurize(std::span<const double> x) const {
  if (x.size() != dim_) {
    throw DimensionError("input has dimension " + std::to_string(x.size()) + ", basis expects " +
                         std::to_string(dim_));
  }
  Vector phi(static_cast<Eigen::Index>(size()));
  if (kind_ == BasisKind::gaussian_kernel) {
    const double scale = 1.0 / (2.0 * bandwidth_ * bandwidth_);
    for (Eigen::Index j = 0; j < centers_.rows(); ++j) {
      double s = 0.0;
      for (std::size_t k = 0; k < dim_; ++k) {
        const double t = x[k] - centers_(j, static_cast<Eigen::Index>(k));
        s += t * t;
      }
      phi(j) = std::exp(-s * scale);
    }
  } else {
    for (std::size_t k = 0; k < dim_; ++k) phi(static_cast<Eigen::Index>(k)) = x[k];
    phi(static_cast<Eigen::Index>(dim_)) = 1.0;
  }
  return phi;
}

Matrix Basis::design(const Matrix& x) const {
  if (x.rows() > 0 && static_cast<std::size_t>(x.cols()) != dim_) {
    throw DimensionError("input has dimension " + std::to_string(x.cols()) + ", basis expects " +
                         std::to_string(dim_));
  }
  if (kind_ == BasisKind::gaussian_kernel) {
    if (x.rows() == 0) return Matrix(0, centers_.rows());
    return kernels::gaussian_design(x, centers_, bandwidth_);
  }
  Matrix out(x.rows(), static_cast<Eigen::Index>(dim_ + 1));
  if (x.rows() > 0) out.leftCols(static_cast<Eigen::Index>(dim_)) = x;
  out.col(static_cast<Eigen::Index>(dim_)).setOnes();
  return out;
}

Matrix Basis::design(const SampleSet& s) const { return design(s.points()); }

Classifier::Classifier(Basis basis, Vector weights)
    : basis_(std::move(basis)), weights_(std::move(weights)) {
  if (static_cast<std::size_t>(weights_.size()) != basis_.size()) {
    throw ConfigError("weight vector length " + std::to_string(weights_.size()) +
                      " does not match basis size " + std::to_string(basis_.size()));
  }
  if (!weights_.allFinite()) throw InputError("non-finite classifier weight");
}

double Classifier::decision(std::span<const double> x) const {
  return basis_.featurize(x).dot(weights_);
}

Vector Classifier::decisions(const SampleSet& s) const {
  if (s.empty()) return Vector(0);
  return basis_.design(s) * weights_;
}

std::vector<double> median_bandwidths(const SampleSet& points,
                                      std::span<const double> multipliers) {
  std::vector<double> d = kernels::pairwise_distances(points.points());
  if (d.empty()) throw DegenerateError("median bandwidth needs at least two points");
  const std::size_t mid = d.size() / 2;
  std::nth_element(d.begin(), d.begin() + static_cast<std::ptrdiff_t>(mid), d.end());
  double median = d[mid];
  if (d.size() % 2 == 0) {
    const double lower = *std::max_element(d.begin(), d.begin() + static_cast<std::ptrdiff_t>(mid));
    median = 0.5 * (median + lower);
  }
  if (!(median > 0.0)) throw DegenerateError("median pairwise distance is zero (identical points)");
  std::vector<double> out;
  out.reserve(multipliers.size());
  for (double m : multipliers) {
    if (!(m > 0.0)) throw ConfigError("bandwidth multipliers must be positive");
    out.push_back(m * median);
  }
  return out;
}

SampleSet choose_centers(const TripleDataset& data, const CenterPolicy& policy) {
  SampleSet pool = policy.source == CenterSource::labeled_only ? data.labeled_points()
                                                               : data.all_points();
  if (pool.empty()) throw DataError("no points available as basis centers");
  if (policy.cap == 0 || pool.size() <= policy.cap) return pool;
  Rng rng(policy.seed);
  auto perm = rng.permutation(pool.size());
  perm.resize(policy.cap);
  std::sort(perm.begin(), perm.end());
  return pool.subset(perm);
}

}  // namespace pnu
