#pragma once

#include "pnu/data.hpp"

namespace pnu {

/// Mean pairwise Euclidean distances. Within-set means run over all n^2
/// ordered pairs, self-pairs included, so that 2 a12 - a11 - a22 is the
/// (nonnegative) energy distance between the empirical P and N distributions.
struct PairwiseStats {
  double a11 = 0.0;  // within P
  double a12 = 0.0;  // P to N
  double a22 = 0.0;  // within N
  double b1 = 0.0;   // P to U
  double b2 = 0.0;   // N to U
};

PairwiseStats pairwise_stats(const SampleSet& p, const SampleSet& n, const SampleSet& u);

struct PriorEstimate {
  double theta_hat;
  bool degenerate;  // P and N indistinguishable; theta_hat fixed at 0.5
  double a_hat;
  double b_hat;
  PairwiseStats stats;
};

/// Mixture weight beta minimizing the energy distance between
/// beta P + (1 - beta) N and U, clamped to [0, 1].
PriorEstimate estimate_prior(const SampleSet& p, const SampleSet& n, const SampleSet& u);

}  // namespace pnu
