#include "pnu/kernels.hpp"

#include <cmath>

namespace pnu::kernels {

namespace {

inline double sq_dist(const double* a, const double* b, Eigen::Index d) {
  double s = 0.0;
  for (Eigen::Index k = 0; k < d; ++k) {
    const double t = a[k] - b[k];
    s += t * t;
  }
  return s;
}

inline void design_row(const Matrix& x, const Matrix& c, double scale, Matrix& out,
                       Eigen::Index i) {
  const Eigen::Index d = x.cols();
  for (Eigen::Index j = 0; j < c.rows(); ++j) {
    out(i, j) = std::exp(-sq_dist(x.data() + i * d, c.data() + j * d, d) * scale);
  }
}

// phi_t is Phi transposed (b x n, row-major) so both operands stream.
inline void gram_row(const Matrix& phi_t, Matrix& g, Eigen::Index j) {
  const Eigen::Index n = phi_t.cols();
  const double* rj = phi_t.data() + j * n;
  for (Eigen::Index k = j; k < phi_t.rows(); ++k) {
    const double* rk = phi_t.data() + k * n;
    double s = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) s += rj[i] * rk[i];
    g(j, k) = s;
    g(k, j) = s;
  }
}

inline double cross_row(const Matrix& a, const Matrix& b, Eigen::Index i) {
  const Eigen::Index d = a.cols();
  double s = 0.0;
  for (Eigen::Index j = 0; j < b.rows(); ++j) {
    s += std::sqrt(sq_dist(a.data() + i * d, b.data() + j * d, d));
  }
  return s;
}

inline double within_row(const Matrix& a, Eigen::Index i) {
  const Eigen::Index d = a.cols();
  double s = 0.0;
  for (Eigen::Index j = i + 1; j < a.rows(); ++j) {
    s += std::sqrt(sq_dist(a.data() + i * d, a.data() + j * d, d));
  }
  return s;
}

inline std::size_t pair_offset(Eigen::Index i, Eigen::Index n) {
  // pairs (i', j) with i' < i come first
  const auto ii = static_cast<std::size_t>(i);
  const auto nn = static_cast<std::size_t>(n);
  return ii * nn - ii * (ii + 1) / 2;
}

double ordered_sum(const std::vector<double>& parts) {
  double s = 0.0;
  for (double p : parts) s += p;
  return s;
}

}  // namespace

Matrix gaussian_design(const Matrix& x, const Matrix& centers, double bandwidth) {
  Matrix out(x.rows(), centers.rows());
  const double scale = 1.0 / (2.0 * bandwidth * bandwidth);
#pragma omp parallel for schedule(static)
  for (Eigen::Index i = 0; i < x.rows(); ++i) design_row(x, centers, scale, out, i);
  return out;
}

Matrix gram(const Matrix& phi) {
  const Matrix phi_t = phi.transpose();
  Matrix g(phi.cols(), phi.cols());
#pragma omp parallel for schedule(dynamic, 4)
  for (Eigen::Index j = 0; j < phi_t.rows(); ++j) gram_row(phi_t, g, j);
  return g;
}

Vector column_sums(const Matrix& phi) {
  Vector s = Vector::Zero(phi.cols());
#pragma omp parallel for schedule(static)
  for (Eigen::Index j = 0; j < phi.cols(); ++j) {
    double acc = 0.0;
    for (Eigen::Index i = 0; i < phi.rows(); ++i) acc += phi(i, j);
    s(j) = acc;
  }
  return s;
}

double cross_distance_sum(const Matrix& a, const Matrix& b) {
  std::vector<double> parts(static_cast<std::size_t>(a.rows()));
#pragma omp parallel for schedule(static)
  for (Eigen::Index i = 0; i < a.rows(); ++i) parts[static_cast<std::size_t>(i)] = cross_row(a, b, i);
  return ordered_sum(parts);
}

double within_distance_sum(const Matrix& a) {
  std::vector<double> parts(static_cast<std::size_t>(a.rows()));
#pragma omp parallel for schedule(dynamic, 16)
  for (Eigen::Index i = 0; i < a.rows(); ++i) parts[static_cast<std::size_t>(i)] = within_row(a, i);
  return ordered_sum(parts);
}

std::vector<double> pairwise_distances(const Matrix& a) {
  const Eigen::Index n = a.rows();
  const Eigen::Index d = a.cols();
  std::vector<double> out(n > 1 ? static_cast<std::size_t>(n * (n - 1) / 2) : 0);
#pragma omp parallel for schedule(dynamic, 16)
  for (Eigen::Index i = 0; i < n; ++i) {
    std::size_t k = pair_offset(i, n);
    for (Eigen::Index j = i + 1; j < n; ++j) {
      out[k++] = std::sqrt(sq_dist(a.data() + i * d, a.data() + j * d, d));
    }
  }
  return out;
}

namespace reference {

Matrix gaussian_design(const Matrix& x, const Matrix& centers, double bandwidth) {
  Matrix out(x.rows(), centers.rows());
  const double scale = 1.0 / (2.0 * bandwidth * bandwidth);
  for (Eigen::Index i = 0; i < x.rows(); ++i) design_row(x, centers, scale, out, i);
  return out;
}

Matrix gram(const Matrix& phi) {
  const Matrix phi_t = phi.transpose();
  Matrix g(phi.cols(), phi.cols());
  for (Eigen::Index j = 0; j < phi_t.rows(); ++j) gram_row(phi_t, g, j);
  return g;
}

Vector column_sums(const Matrix& phi) {
  Vector s = Vector::Zero(phi.cols());
  for (Eigen::Index j = 0; j < phi.cols(); ++j) {
    double acc = 0.0;
    for (Eigen::Index i = 0; i < phi.rows(); ++i) acc += phi(i, j);
    s(j) = acc;
  }
  return s;
}

double cross_distance_sum(const Matrix& a, const Matrix& b) {
  double s = 0.0;
  for (Eigen::Index i = 0; i < a.rows(); ++i) s += cross_row(a, b, i);
  return s;
}

double within_distance_sum(const Matrix& a) {
  double s = 0.0;
  for (Eigen::Index i = 0; i < a.rows(); ++i) s += within_row(a, i);
  return s;
}

std::vector<double> pairwise_distances(const Matrix& a) {
  const Eigen::Index n = a.rows();
  const Eigen::Index d = a.cols();
  std::vector<double> out;
  out.reserve(n > 1 ? static_cast<std::size_t>(n * (n - 1) / 2) : 0);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      out.push_back(std::sqrt(sq_dist(a.data() + i * d, a.data() + j * d, d)));
    }
  }
  return out;
}

}  // namespace reference

}  // namespace pnu::kernels
