#pragma once

// Data-parallel inner loops. Every kernel in pnu::kernels has a serial twin in
// pnu::kernels::reference performing the same floating-point operations in
// the same order, so the two agree bit for bit at any thread count.

#include "pnu/data.hpp"

namespace pnu::kernels {

/// Phi(i, j) = exp(-||x_i - c_j||^2 / (2 sigma^2)).
Matrix gaussian_design(const Matrix& x, const Matrix& centers, double bandwidth);

/// Phi^T Phi, summed over rows in index order.
Matrix gram(const Matrix& phi);

/// Sum over rows of Phi, in index order.
Vector column_sums(const Matrix& phi);

/// sum_i sum_j ||a_i - b_j||.
double cross_distance_sum(const Matrix& a, const Matrix& b);

/// sum_{i<j} ||a_i - a_j||.
double within_distance_sum(const Matrix& a);

/// All ||a_i - a_j|| for i<j, row-major pair order.
std::vector<double> pairwise_distances(const Matrix& a);

namespace reference {
Matrix gaussian_design(const Matrix& x, const Matrix& centers, double bandwidth);
Matrix gram(const Matrix& phi);
Vector column_sums(const Matrix& phi);
double cross_distance_sum(const Matrix& a, const Matrix& b);
double within_distance_sum(const Matrix& a);
std::vector<double> pairwise_distances(const Matrix& a);
}  // namespace reference

}  // namespace pnu::kernels
