#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "pnu/rng.hpp"

namespace pnu {

using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Vector = Eigen::VectorXd;

/// Feature vectors of one dimension, stored one per row.
class SampleSet {
 public:
  SampleSet() = default;
  explicit SampleSet(std::size_t dim) : points_(0, static_cast<Eigen::Index>(dim)) {}
  /// Throws InputError on non-finite coordinates.
  explicit SampleSet(Matrix points);

  std::size_t size() const { return static_cast<std::size_t>(points_.rows()); }
  std::size_t dim() const { return static_cast<std::size_t>(points_.cols()); }
  bool empty() const { return points_.rows() == 0; }

  const Matrix& points() const { return points_; }
  std::span<const double> row(std::size_t i) const {
    return {points_.data() + i * dim(), dim()};
  }

  SampleSet subset(std::span<const std::size_t> indices) const;
  /// Rows of a then rows of b; dims must agree unless one side is empty.
  static SampleSet concat(const SampleSet& a, const SampleSet& b);

 private:
  Matrix points_;
};

class ClassPrior {
 public:
  /// theta_p must lie strictly inside (0, 1); ConfigError otherwise.
  explicit ClassPrior(double theta_p);
  double theta_p() const { return theta_p_; }
  double theta_n() const { return 1.0 - theta_p_; }

 private:
  double theta_p_;
};

struct TripleDataset {
  SampleSet positives;
  SampleSet negatives;
  SampleSet unlabeled;
  std::optional<ClassPrior> prior;

  /// Common dimension; DimensionError when the non-empty sets disagree.
  std::size_t dim() const;
  std::size_t total() const { return positives.size() + negatives.size() + unlabeled.size(); }
  /// The prior, or ConfigError when it was never supplied.
  const ClassPrior& require_prior() const;
  SampleSet all_points() const;
  SampleSet labeled_points() const;
};

/// Reads a CSV with a header row. Labels: +1 positive, -1 negative, 0 unlabeled.
TripleDataset load_csv(const std::string& path, const std::string& label_column = "label");
TripleDataset parse_csv(std::istream& in, const std::string& label_column = "label");

/// Per-coordinate min/max from the pooled training data.
struct ScalingRecord {
  std::vector<double> mins;
  std::vector<double> maxs;

  std::vector<double> apply(std::span<const double> x) const;
  SampleSet apply(const SampleSet& s) const;
};

struct ScaledDataset {
  TripleDataset data;
  ScalingRecord record;
};

ScaledDataset scale_features(const TripleDataset& dataset);

/// Two unit-covariance Gaussians at +/- separation/2 along the first axis.
struct GaussianPair {
  double separation;
  std::size_t dim;

  std::vector<double> draw(int label, Rng& rng) const;
  SampleSet draw_class(int label, std::size_t n, Rng& rng) const;
  /// Class ~ Bernoulli(theta_p), then the class conditional; labels returned separately.
  SampleSet draw_mixture(double theta_p, std::size_t n, Rng& rng,
                         std::vector<int>* labels = nullptr) const;
};

TripleDataset synth_gaussians(double theta_p, std::size_t n_p, std::size_t n_n, std::size_t n_u,
                              double separation, std::size_t dim, std::uint64_t seed);

/// Labeled rows available to the sampling protocol.
struct LabeledPool {
  SampleSet positives;
  SampleSet negatives;
};

struct ProtocolDraw {
  TripleDataset data;
  LabeledPool remainder;  // rows not used by the draw
};

/// Class counts are round(theta * n); labeled and unlabeled draws are disjoint.
ProtocolDraw protocol_split_with_remainder(const LabeledPool& pool, std::size_t n_l,
                                           double theta_l, std::size_t n_u, double theta_u,
                                           std::uint64_t seed);
TripleDataset protocol_split(const LabeledPool& pool, std::size_t n_l, double theta_l,
                             std::size_t n_u, double theta_u, std::uint64_t seed);

std::size_t class_count(double theta, std::size_t n);

}  // namespace pnu
