#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "pnu/data.hpp"

namespace pnu {

enum class BasisKind { gaussian_kernel, raw_linear_with_offset };

/// Basis functions phi(x) of a linear-in-parameter model g(x) = w^T phi(x).
class Basis {
 public:
  static Basis gaussian(Matrix centers, double bandwidth);
  static Basis raw_linear(std::size_t dim);

  BasisKind kind() const { return kind_; }
  std::size_t dim() const { return dim_; }
  /// Number of basis functions b.
  std::size_t size() const;
  const Matrix& centers() const { return centers_; }
  double bandwidth() const { return bandwidth_; }

  Vector featurize(std::span<const double> x) const;
  /// Design matrix, one featurized row per input row.
  Matrix design(const Matrix& x) const;
  Matrix design(const SampleSet& s) const;

 private:
  BasisKind kind_ = BasisKind::raw_linear_with_offset;
  std::size_t dim_ = 0;
  Matrix centers_;
  double bandwidth_ = 0.0;
};

class Classifier {
 public:
  Classifier(Basis basis, Vector weights);

  const Basis& basis() const { return basis_; }
  const Vector& weights() const { return weights_; }

  double decision(std::span<const double> x) const;
  /// +1 or -1, with ties at 0 going to +1.
  int predict(std::span<const double> x) const { return decision(x) >= 0.0 ? 1 : -1; }
  Vector decisions(const SampleSet& s) const;

 private:
  Basis basis_;
  Vector weights_;
};

inline constexpr std::array<double, 6> kDefaultBandwidthMultipliers = {
    1.0 / 8.0, 1.0 / 4.0, 1.0 / 2.0, 1.0, 3.0 / 2.0, 2.0};

/// Median pairwise distance over i<j, times each multiplier.
std::vector<double> median_bandwidths(
    const SampleSet& points,
    std::span<const double> multipliers = kDefaultBandwidthMultipliers);

enum class CenterSource { labeled_only, all_points };

/// Which points become Gaussian centers. A nonzero cap subsamples without
/// replacement when more candidates are available.
struct CenterPolicy {
  CenterSource source = CenterSource::all_points;
  std::size_t cap = 500;
  std::uint64_t seed = 0;
};

SampleSet choose_centers(const TripleDataset& data, const CenterPolicy& policy);

}  // namespace pnu
