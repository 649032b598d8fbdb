#pragma once

#include <initializer_list>
#include <vector>

#include "pnu/data.hpp"
#include "pnu/rng.hpp"

namespace pnu::test {

inline SampleSet set_of(std::initializer_list<std::initializer_list<double>> rows) {
  const std::size_t dim = rows.size() ? rows.begin()->size() : 1;
  Matrix m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(dim));
  Eigen::Index i = 0;
  for (const auto& r : rows) {
    Eigen::Index j = 0;
    for (double v : r) m(i, j++) = v;
    ++i;
  }
  return SampleSet(std::move(m));
}

inline SampleSet set_1d(const std::vector<double>& xs) {
  Matrix m(static_cast<Eigen::Index>(xs.size()), 1);
  for (std::size_t i = 0; i < xs.size(); ++i) m(static_cast<Eigen::Index>(i), 0) = xs[i];
  return SampleSet(std::move(m));
}

inline SampleSet random_set(std::size_t n, std::size_t dim, Rng& rng, double shift = 0.0) {
  Matrix m(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(dim));
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) m(i, j) = rng.normal() + (j == 0 ? shift : 0.0);
  return SampleSet(std::move(m));
}

inline TripleDataset random_triple(std::size_t np, std::size_t nn, std::size_t nu, std::size_t dim,
                                   double theta, Rng& rng) {
  return {random_set(np, dim, rng, 1.0), random_set(nn, dim, rng, -1.0), random_set(nu, dim, rng),
          ClassPrior(theta)};
}

}  // namespace pnu::test
