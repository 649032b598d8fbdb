#include "pnu/prior.hpp"

#include <algorithm>
#include <cmath>

#include "pnu/error.hpp"
#include "pnu/kernels.hpp"

namespace pnu {

PairwiseStats pairwise_stats(const SampleSet& p, const SampleSet& n, const SampleSet& u) {
  if (p.size() < 2 || n.size() < 2 || u.size() < 2) {
    throw DataError("prior estimation needs at least two points in each of P, N and U");
  }
  if (p.dim() != n.dim() || p.dim() != u.dim()) {
    throw DimensionError("prior estimation: P, N and U dimensions differ");
  }
  const double np = static_cast<double>(p.size());
  const double nn = static_cast<double>(n.size());
  const double nu = static_cast<double>(u.size());
  PairwiseStats s;
  s.a11 = 2.0 * kernels::within_distance_sum(p.points()) / (np * np);
  s.a22 = 2.0 * kernels::within_distance_sum(n.points()) / (nn * nn);
  s.a12 = kernels::cross_distance_sum(p.points(), n.points()) / (np * nn);
  s.b1 = kernels::cross_distance_sum(p.points(), u.points()) / (np * nu);
  s.b2 = kernels::cross_distance_sum(n.points(), u.points()) / (nn * nu);
  return s;
}

PriorEstimate estimate_prior(const SampleSet& p, const SampleSet& n, const SampleSet& u) {
  PriorEstimate e{};
  e.stats = pairwise_stats(p, n, u);
  const PairwiseStats& s = e.stats;
  e.a_hat = -s.a11 + 2.0 * s.a12 - s.a22;
  e.b_hat = -s.b1 + s.a12 + s.b2 - s.a22;
  const double scale = std::max({s.a11, s.a12, s.a22, 1e-300});
  if (e.a_hat <= 1e-12 * scale) {
    e.theta_hat = 0.5;
    e.degenerate = true;
    return e;
  }
  e.theta_hat = std::clamp(e.b_hat / e.a_hat, 0.0, 1.0);
  e.degenerate = false;
  return e;
}

}  // namespace pnu
