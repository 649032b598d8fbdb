#include <gtest/gtest.h>

#include <cmath>

#include "helpers.hpp"
#include "pnu/error.hpp"
#include "pnu/prior.hpp"

using namespace pnu;

namespace {

double mean_dist(const Matrix& a, const Matrix& b) {
  double s = 0;
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < b.rows(); ++j) s += (a.row(i) - b.row(j)).norm();
  return s / static_cast<double>(a.rows() * b.rows());
}

// Energy distance between beta P + (1-beta) N and U from mixture expectations.
double energy(double beta, const Matrix& p, const Matrix& n, const Matrix& u) {
  const double pp = mean_dist(p, p), nn = mean_dist(n, n), pn = mean_dist(p, n);
  const double pu = mean_dist(p, u), nu = mean_dist(n, u), uu = mean_dist(u, u);
  const double cross = beta * pu + (1 - beta) * nu;
  const double self = beta * beta * pp + 2 * beta * (1 - beta) * pn + (1 - beta) * (1 - beta) * nn;
  return 2 * cross - self - uu;
}

}  // namespace

TEST(Prior, SameAsPositives) {
  const GaussianPair gen{6.0, 2};
  Rng rng(1);
  const auto e = estimate_prior(gen.draw_class(1, 1000, rng), gen.draw_class(-1, 1000, rng), gen.draw_class(1, 1000, rng));
  EXPECT_NEAR(e.theta_hat, 1.0, 0.05);
  EXPECT_FALSE(e.degenerate);
}

TEST(Prior, HalfMixture) {
  const GaussianPair gen{6.0, 2};
  Rng rng(2);
  const auto e = estimate_prior(gen.draw_class(1, 1000, rng), gen.draw_class(-1, 1000, rng), gen.draw_mixture(0.5, 1000, rng));
  EXPECT_NEAR(e.theta_hat, 0.5, 0.05);
}

TEST(Prior, GridOracle) {
  Rng rng(3);
  for (int t = 0; t < 10; ++t) {
    const auto p = test::random_set(20 + rng.below(20), 3, rng, 1.5).points();
    const auto n = test::random_set(20 + rng.below(20), 3, rng, -1.5).points();
    const auto u = GaussianPair{3.0, 3}.draw_mixture(rng.uniform(), 40, rng).points();
    double best = 0, bv = 1e300;
    for (int i = 0; i <= 1000; ++i) {
      const double v = energy(i / 1000.0, p, n, u);
      if (v < bv) {
        bv = v;
        best = i / 1000.0;
      }
    }
    EXPECT_NEAR(estimate_prior(SampleSet(p), SampleSet(n), SampleSet(u)).theta_hat, best, 0.001);
  }
}

TEST(Prior, StatsMatchDirect) {
  Rng rng(4);
  const auto p = test::random_set(7, 2, rng), n = test::random_set(9, 2, rng), u = test::random_set(5, 2, rng);
  const auto s = pairwise_stats(p, n, u);
  EXPECT_NEAR(s.a11, mean_dist(p.points(), p.points()), 1e-13);
  EXPECT_NEAR(s.a22, mean_dist(n.points(), n.points()), 1e-13);
  EXPECT_NEAR(s.a12, mean_dist(p.points(), n.points()), 1e-13);
  EXPECT_NEAR(s.b1, mean_dist(p.points(), u.points()), 1e-13);
  EXPECT_NEAR(s.b2, mean_dist(n.points(), u.points()), 1e-13);
}

TEST(Prior, AHatNonnegative) {
  Rng rng(5);
  for (int t = 0; t < 50; ++t) {
    const auto e = estimate_prior(test::random_set(2 + rng.below(10), 2, rng, rng.normal()),
                                  test::random_set(2 + rng.below(10), 2, rng), test::random_set(3, 2, rng));
    EXPECT_GE(e.a_hat, -1e-12);
  }
}

TEST(Prior, SwapSymmetry) {
  Rng rng(6);
  for (int t = 0; t < 20; ++t) {
    const auto p = test::random_set(15, 2, rng, 1.0), n = test::random_set(12, 2, rng, -1.0);
    const auto u = GaussianPair{2.0, 2}.draw_mixture(0.2 + 0.6 * rng.uniform(), 30, rng);
    EXPECT_NEAR(estimate_prior(p, n, u).theta_hat, 1 - estimate_prior(n, p, u).theta_hat, 1e-10);
  }
}

TEST(Prior, RigidMotionInvariant) {
  Rng rng(7);
  const auto p = test::random_set(15, 2, rng, 1.0), n = test::random_set(12, 2, rng, -1.0);
  const auto u = GaussianPair{2.0, 2}.draw_mixture(0.35, 30, rng);
  const double c = std::cos(0.7), s = std::sin(0.7);
  Eigen::Matrix2d r;
  r << c, -s, s, c;
  auto move = [&](const SampleSet& x) {
    Matrix m = x.points() * r.transpose();
    m.col(0).array() += 3.0;
    m.col(1).array() -= 8.0;
    return SampleSet(m);
  };
  EXPECT_NEAR(estimate_prior(p, n, u).theta_hat, estimate_prior(move(p), move(n), move(u)).theta_hat, 1e-10);
}

TEST(Prior, DegenerateAndErrors) {
  const auto same = test::set_of({{0, 0}, {1, 1}});
  const auto e = estimate_prior(same, same, test::set_of({{0, 1}, {2, 2}}));
  EXPECT_TRUE(e.degenerate);
  EXPECT_EQ(e.theta_hat, 0.5);
  EXPECT_THROW(estimate_prior(test::set_of({{0, 0}}), same, same), DataError);
  EXPECT_THROW(estimate_prior(same, same, test::set_1d({1, 2})), DimensionError);
}
