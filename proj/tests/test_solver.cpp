#include <gtest/gtest.h>

#include <cmath>

#include "helpers.hpp"
#include "oracles.hpp"
#include "pnu/error.hpp"
#include "pnu/solver.hpp"

using namespace pnu;

namespace {

const LossFn kSq = make_loss(LossKind::scaled_squared);
const LossFn kRamp = make_loss(LossKind::ramp);

std::function<double(const Vector&)> obj(const RiskSpec& s, const TripleDataset& d, const Basis& b, double lambda) {
  return [&s, &d, &b, lambda](const Vector& w) { return test::direct_objective(s, d, b, lambda, w); };
}

}  // namespace

TEST(Objective, Examples) {
  Rng rng(1);
  const auto d = test::random_triple(5, 5, 5, 2, 0.5, rng);
  const Basis b = Basis::raw_linear(2);
  const auto pn = build_base(RiskFamily::PN, ClassPrior(0.5), kRamp);
  EXPECT_DOUBLE_EQ(objective(pn, d, b, 3.0, Vector::Zero(3)), 0.5);
  Vector w(3);
  w << 0.3, -1.0, 2.0;
  EXPECT_NEAR(objective(pn, d, b, 0.2, w) - objective(pn, d, b, 0.1, w), 0.1 * w.squaredNorm(), 1e-14);
  RiskSpec c{RiskFamily::PN, 0.0, 0.5, kRamp, {}, 0.75};
  EXPECT_DOUBLE_EQ(objective(c, d, b, 0.5, w), 0.75 + 0.5 * w.squaredNorm());
  EXPECT_NEAR(objective(pn, d, b, 0.2, w), test::direct_objective(pn, d, b, 0.2, w), 1e-14);
}

TEST(ClosedForm, TwoPointExample) {
  TripleDataset d{test::set_1d({1.0}), test::set_1d({-1.0}), SampleSet(1), ClassPrior(0.5)};
  const Basis b = Basis::raw_linear(1);
  const auto spec = build_base(RiskFamily::PN, ClassPrior(0.5), kSq);
  const double lambda = 1e-3;
  const Vector w = train_closed_form(spec, d, b, lambda).weights();
  const Vector oracle = test::coordinate_descent(obj(spec, d, b, lambda), Vector::Zero(2));
  EXPECT_LT((w - oracle).cwiseAbs().maxCoeff(), 1e-6);
  // by symmetry the offset is 0 and the slope solves (1/4 + lambda) w = 1/4
  EXPECT_NEAR(w(0), 0.25 / (0.25 + lambda), 1e-12);
  EXPECT_NEAR(w(1), 0.0, 1e-12);
}

TEST(ClosedForm, StationaryAndOptimal) {
  Rng rng(2);
  for (int trial = 0; trial < 10; ++trial) {
    const double theta = 0.2 + 0.6 * rng.uniform();
    const auto d = test::random_triple(6, 5, 12, 2, theta, rng);
    const Basis b = Basis::gaussian(d.all_points().subset(std::vector<std::size_t>{0, 3, 8, 15}).points(), 1.0);
    const auto spec = build_pnu(2 * rng.uniform() - 1, ClassPrior(theta), kSq, PnuMode::convex);
    const double lambda = 0.01;
    const Vector w = train_closed_form(spec, d, b, lambda).weights();
    const auto f = obj(spec, d, b, lambda);
    const QuadraticProblem q = assemble_quadratic(spec, make_moments(make_designs(b, d)));
    EXPECT_LT(test::numeric_gradient(f, w).cwiseAbs().maxCoeff(), 1e-8 * (1 + q.h.norm()));
    const double best = f(w);
    for (int k = 0; k < 100; ++k) {
      Vector p = w;
      for (Eigen::Index j = 0; j < p.size(); ++j) p(j) += 0.01 * rng.normal();
      EXPECT_LE(best, f(p));
    }
    EXPECT_NEAR(q.value(w, lambda), f(w), 1e-12);
  }
}

TEST(ClosedForm, DuplicationInvariant) {
  Rng rng(3);
  const auto d = test::random_triple(5, 6, 8, 2, 0.4, rng);
  const TripleDataset dd{SampleSet::concat(d.positives, d.positives), SampleSet::concat(d.negatives, d.negatives),
                         SampleSet::concat(d.unlabeled, d.unlabeled), d.prior};
  const Basis b = Basis::raw_linear(2);
  const auto spec = build_pnu(0.4, ClassPrior(0.4), kSq, PnuMode::convex);
  const Vector a = train_closed_form(spec, d, b, 0.1).weights();
  const Vector c = train_closed_form(spec, dd, b, 0.1).weights();
  EXPECT_LT((a - c).cwiseAbs().maxCoeff(), 1e-10);
}

TEST(ClosedForm, PermutationInvariant) {
  Rng rng(4);
  const auto d = test::random_triple(9, 7, 20, 3, 0.4, rng);
  TripleDataset p = d;
  p.positives = d.positives.subset(rng.permutation(9));
  p.unlabeled = d.unlabeled.subset(rng.permutation(20));
  const Basis b = Basis::gaussian(d.unlabeled.points().topRows(6), 1.5);
  const auto spec = build_combined(RiskFamily::C_PUNU, 0.3, ClassPrior(0.4), kSq);
  const Vector a = train_closed_form(spec, d, b, 0.01).weights();
  const Vector c = train_closed_form(spec, p, b, 0.01).weights();
  EXPECT_LT((a - c).cwiseAbs().maxCoeff(), 1e-10);
}

TEST(ClosedForm, PnpuEndpoints) {
  Rng rng(5);
  const ClassPrior pr(0.35);
  const auto d = test::random_triple(8, 8, 25, 2, 0.35, rng);
  const Basis b = Basis::raw_linear(2);
  const auto w0 = train_closed_form(build_combined(RiskFamily::C_PNPU, 0.0, pr, kSq), d, b, 0.05).weights();
  const auto wpn = train_closed_form(build_base(RiskFamily::PN, pr, kSq), d, b, 0.05).weights();
  EXPECT_LT((w0 - wpn).cwiseAbs().maxCoeff(), 1e-8);
  const auto w1 = train_closed_form(build_combined(RiskFamily::C_PNPU, 1.0, pr, kSq), d, b, 0.05).weights();
  const auto wpu = train_closed_form(build_base(RiskFamily::C_PU, pr, kSq), d, b, 0.05).weights();
  EXPECT_LT((w1 - wpu).cwiseAbs().maxCoeff(), 1e-8);
}

TEST(ClosedForm, Errors) {
  TripleDataset d{test::set_1d({1.0}), test::set_1d({1.0}), SampleSet(1), ClassPrior(0.5)};
  const auto pn = build_base(RiskFamily::PN, ClassPrior(0.5), kSq);
  // both points share one feature vector, so A is rank one at lambda = 0
  EXPECT_THROW(train_closed_form(pn, d, Basis::raw_linear(1), 0.0), RankError);
  EXPECT_NO_THROW(train_closed_form(pn, d, Basis::raw_linear(1), 1e-3));
  const auto ramp = build_base(RiskFamily::PN, ClassPrior(0.5), kRamp);
  EXPECT_THROW(train_closed_form(ramp, d, Basis::raw_linear(1), 1e-3), ConfigError);
  const auto nonconvex = build_combined(RiskFamily::N_PNPU, 0.5, ClassPrior(0.5), kRamp);
  EXPECT_THROW(train_closed_form(nonconvex, d, Basis::raw_linear(1), 1e-3), ConfigError);
}

TEST(ClosedForm, NonsingularAtZeroLambda) {
  TripleDataset d{test::set_1d({1.0, 2.0}), test::set_1d({-1.0, -3.0}), SampleSet(1), ClassPrior(0.5)};
  const auto pn = build_base(RiskFamily::PN, ClassPrior(0.5), kSq);
  const Basis b = Basis::raw_linear(1);
  const Vector w = train_closed_form(pn, d, b, 0.0).weights();
  EXPECT_LT(test::numeric_gradient(obj(pn, d, b, 0.0), w).cwiseAbs().maxCoeff(), 1e-10);
}

TEST(Cccp, TraceNonIncreasing) {
  Rng rng(6);
  for (int trial = 0; trial < 10; ++trial) {
    const double theta = 0.3 + 0.4 * rng.uniform();
    const auto d = test::random_triple(10, 10, 30, 2, theta, rng);
    const Basis b = Basis::gaussian(d.all_points().points().topRows(8), 1.0);
    const auto spec = build_pnu(2 * rng.uniform() - 1, ClassPrior(theta), kRamp, PnuMode::nonconvex);
    TrainConfig cfg;
    cfg.lambda = 0.01;
    cfg.method = SolveMethod::cccp;
    const auto r = train_cccp(spec, d, b, cfg);
    ASSERT_GE(r.trace.size(), 1u);
    for (std::size_t i = 1; i < r.trace.size(); ++i) EXPECT_LE(r.trace[i], r.trace[i - 1]);
    EXPECT_NEAR(r.trace.back(), objective(spec, d, b, cfg.lambda, r.classifier.weights()), 1e-12);
  }
}

// With all margins inside (-1, 1) the concave part never activates, so CCCP
// solves one hinge problem; check against subgradient optimality directly.
TEST(Cccp, InactiveConcavePartGivesHingeSolution) {
  TripleDataset d{test::set_1d({0.2, 0.5}), test::set_1d({-0.3, 0.1}), SampleSet(1), ClassPrior(0.5)};
  const Basis b = Basis::raw_linear(1);
  const auto spec = build_base(RiskFamily::PN, ClassPrior(0.5), kRamp);
  TrainConfig cfg;
  cfg.lambda = 1.0;
  const auto r = train_cccp(spec, d, b, cfg);
  const Vector w = r.classifier.weights();
  for (const SampleSet* s : {&d.positives, &d.negatives})
    for (std::size_t i = 0; i < s->size(); ++i) EXPECT_LT(std::abs(r.classifier.decision(s->row(i))), 1.0);
  // all margins below 1: objective is 1/2 - 1/4 mean(m) + lambda ||w||^2 with a linear risk part
  const Vector target = [&] {
    Vector g = Vector::Zero(2);
    for (double x : {0.2, 0.5}) g += 0.125 * Vector{{x, 1.0}};
    for (double x : {-0.3, 0.1}) g -= 0.125 * Vector{{x, 1.0}};
    return Vector(g / (2 * cfg.lambda));
  }();
  EXPECT_LT((w - target).cwiseAbs().maxCoeff(), 1e-6);
}

TEST(Cccp, BeatsSquaredSolutionOnSeparable1d) {
  TripleDataset d{test::set_1d({0.5, 1.0, 2.0, 3.0}), test::set_1d({-0.5, -1.5, -2.0, -4.0}), SampleSet(1),
                  ClassPrior(0.5)};
  const Basis b = Basis::raw_linear(1);
  const double lambda = 1e-3;
  const auto ramp = build_base(RiskFamily::PN, ClassPrior(0.5), kRamp);
  TrainConfig cfg;
  cfg.lambda = lambda;
  const auto r = train_cccp(ramp, d, b, cfg);
  const Vector wsq = train_closed_form(build_base(RiskFamily::PN, ClassPrior(0.5), kSq), d, b, lambda).weights();
  EXPECT_LE(r.trace.back(), objective(ramp, d, b, lambda, wsq) + 1e-12);
}

TEST(Cccp, Errors) {
  TripleDataset d{test::set_1d({1.0}), test::set_1d({-1.0}), SampleSet(1), ClassPrior(0.5)};
  const auto ramp = build_base(RiskFamily::PN, ClassPrior(0.5), kRamp);
  TrainConfig cfg;
  cfg.lambda = 0.0;
  EXPECT_THROW(train_cccp(ramp, d, Basis::raw_linear(1), cfg), ConfigError);
  cfg.lambda = 0.1;
  EXPECT_THROW(train_cccp(build_base(RiskFamily::PN, ClassPrior(0.5), kSq), d, Basis::raw_linear(1), cfg),
               ConfigError);
  cfg.inner_max_epochs = 0;
  TripleDataset bigger{test::set_1d({1.0, 2.0, -0.3}), test::set_1d({-1.0, 0.4}), SampleSet(1), ClassPrior(0.5)};
  try {
    train_cccp(ramp, bigger, Basis::raw_linear(1), cfg);
    FAIL();
  } catch (const IterationLimitError& e) {
    EXPECT_EQ(e.trace().size(), 1u);
  }
}

TEST(Train, Dispatch) {
  Rng rng(7);
  const auto d = test::random_triple(5, 5, 5, 2, 0.5, rng);
  const Basis b = Basis::raw_linear(2);
  TrainConfig cfg;
  cfg.lambda = 0.1;
  const auto sq = build_base(RiskFamily::PN, ClassPrior(0.5), kSq);
  EXPECT_EQ(train(sq, d, b, cfg).weights(), train_closed_form(sq, d, b, 0.1).weights());
  cfg.method = SolveMethod::cccp;
  const auto ramp = build_base(RiskFamily::PN, ClassPrior(0.5), kRamp);
  EXPECT_EQ(train(ramp, d, b, cfg).weights(), train_cccp(ramp, d, b, cfg).classifier.weights());
}
