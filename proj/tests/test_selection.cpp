#include <gtest/gtest.h>

#include <cmath>

#include "helpers.hpp"
#include "pnu/error.hpp"
#include "pnu/selection.hpp"

using namespace pnu;

namespace {

Grid small_grid() {
  Grid g;
  g.lambdas = {1e-3, 1e-1};
  g.etas = {-0.5, 0.0, 0.5};
  g.gammas = {0.0, 0.5, 1.0};
  g.bandwidth_multipliers = {0.5, 1.0};
  return g;
}

}  // namespace

TEST(Grid, Defaults) {
  const Grid g = Grid::defaults();
  ASSERT_EQ(g.lambdas.size(), 8u);
  EXPECT_DOUBLE_EQ(g.lambdas.front(), 1e-5);
  EXPECT_DOUBLE_EQ(g.lambdas.back(), 1e2);
  ASSERT_EQ(g.etas.size(), 21u);
  EXPECT_EQ(g.etas[1], -0.9);
  EXPECT_EQ(g.etas[10], 0.0);
  EXPECT_EQ(g.etas[20], 1.0);
  ASSERT_EQ(g.gammas.size(), 21u);
  EXPECT_EQ(g.gammas[1], 0.05);
  EXPECT_EQ(g.bandwidth_multipliers.size(), 6u);
  EXPECT_NO_THROW(g.validate());
  Grid bad = g;
  bad.etas.push_back(1.5);
  EXPECT_THROW(bad.validate(), ConfigError);
  bad = g;
  bad.lambdas.clear();
  EXPECT_THROW(bad.validate(), ConfigError);
}

TEST(EtaBar, Examples) {
  EXPECT_DOUBLE_EQ(eta_bar(ClassPrior(0.5), 10, 10), 0.0);
  EXPECT_NEAR(eta_bar(ClassPrior(0.5), 30, 10), 0.5, 1e-15);
  EXPECT_LT(eta_bar(ClassPrior(0.999), 10, 10), -0.99);
  EXPECT_THROW(eta_bar(ClassPrior(0.5), 0, 10), DataError);
}

// Under equal sigmas, eta_bar minimizes the PNU asymptotic variance over a fine grid.
TEST(EtaBar, MatchesBruteForceVariance) {
  for (auto [theta, np, nn] : {std::tuple{0.5, 30u, 10u}, std::tuple{0.3, 10u, 10u}, std::tuple{0.7, 10u, 25u}}) {
    const double pp = theta * theta / np, pn = (1 - theta) * (1 - theta) / nn;
    double best = 0, best_v = 1e300;
    for (int i = -1000; i <= 1000; ++i) {
      const double eta = i / 1000.0;
      const double g = std::abs(eta);
      const double v = eta >= 0 ? (1 + g) * (1 + g) * pp + (1 - g) * (1 - g) * pn
                                : (1 - g) * (1 - g) * pp + (1 + g) * (1 + g) * pn;
      if (v < best_v) {
        best_v = v;
        best = eta;
      }
    }
    EXPECT_NEAR(eta_bar(ClassPrior(theta), np, nn), best, 0.001);
  }
}

TEST(Folds, SizesAndDeterminism) {
  Rng rng(1);
  const auto d = test::random_triple(10, 7, 0, 2, 0.5, rng);
  const auto a = k_fold_split(d, 5, 3);
  std::vector<int> count(5, 0);
  for (auto f : a.p) ++count[f];
  for (int c : count) EXPECT_EQ(c, 2);
  EXPECT_TRUE(a.u.empty());
  const auto b = k_fold_split(d, 5, 3);
  EXPECT_EQ(a.p, b.p);
  EXPECT_EQ(a.n, b.n);
  EXPECT_NE(a.p, k_fold_split(d, 5, 4).p);
  for (std::size_t f = 0; f < 5; ++f) {
    EXPECT_EQ(a.training(d, f).positives.size() + a.holdout(d, f).positives.size(), 10u);
    EXPECT_TRUE(a.holdout(d, f).unlabeled.empty());
  }
}

TEST(Folds, UndersizedStratum) {
  Rng rng(2);
  EXPECT_THROW(k_fold_split(test::random_triple(3, 10, 0, 2, 0.5, rng), 5, 1), DataError);
  EXPECT_THROW(k_fold_split(test::random_triple(10, 10, 0, 2, 0.5, rng), 1, 1), ConfigError);
  EXPECT_NO_THROW(k_fold_split(test::random_triple(10, 10, 2, 2, 0.5, rng), 5, 1));
}

TEST(Choose, TieBreaking) {
  std::vector<CandidateResult> r(4);
  r[0].candidate = {1e-3, 0.5, 1, 1};
  r[1].candidate = {1e-3, -0.2, 1, 1};
  r[2].candidate = {1e-1, -0.2, 1, 2};
  r[3].candidate = {1e-1, -0.2, 1, 0.5};
  for (auto& c : r) c.mean_score = 0.1;
  EXPECT_EQ(choose_candidate(r), 3u);
  r[0].mean_score = 0.05;
  EXPECT_EQ(choose_candidate(r), 0u);
  r[0].failed = true;
  EXPECT_EQ(choose_candidate(r), 3u);
  for (auto& c : r) c.failed = true;
  EXPECT_THROW(choose_candidate(r), Error);
}

TEST(Spec, MethodAndSpec) {
  EXPECT_EQ(method_for(make_loss(LossKind::ramp)), SolveMethod::cccp);
  EXPECT_EQ(method_for(make_loss(LossKind::scaled_squared)), SolveMethod::closed_form);
  EXPECT_THROW(method_for(make_loss(LossKind::hinge)), ConfigError);
  const auto s = candidate_spec(TrainFamily::PUNU, 0.3, ClassPrior(0.4), make_loss(LossKind::scaled_squared));
  EXPECT_EQ(s.family, RiskFamily::C_PUNU);
  EXPECT_EQ(candidate_spec(TrainFamily::PUNU, 0.3, ClassPrior(0.4), make_loss(LossKind::ramp)).family,
            RiskFamily::N_PUNU);
}

TEST(CrossValidate, SingleCandidate) {
  Rng rng(3);
  const auto d = test::random_triple(10, 10, 20, 2, 0.5, rng);
  Grid g;
  g.lambdas = {0.1};
  g.etas = {0.2};
  g.gammas = {0.0};
  g.bandwidth_multipliers = {1.0};
  const auto r = cross_validate(d, g, 5, TrainFamily::PNU, make_loss(LossKind::scaled_squared), 1);
  ASSERT_EQ(r.results.size(), 1u);
  EXPECT_EQ(r.chosen, 0u);
  EXPECT_EQ(r.results[0].fold_scores.size(), 5u);
  ASSERT_TRUE(r.refit.has_value());
}

TEST(CrossValidate, DuplicatedCandidateScoresMatch) {
  Rng rng(4);
  const auto d = test::random_triple(10, 10, 20, 2, 0.4, rng);
  Grid g = small_grid();
  g.lambdas = {0.01, 0.01};
  const auto r = cross_validate(d, g, 5, TrainFamily::PNU, make_loss(LossKind::scaled_squared), 2);
  for (std::size_t i = 0; i < r.results.size(); i += 2) {
    EXPECT_EQ(r.results[i].mean_score, r.results[i + 1].mean_score);
    EXPECT_EQ(r.results[i].fold_scores, r.results[i + 1].fold_scores);
  }
}

TEST(CrossValidate, ChosenAttainsMinimum) {
  Rng rng(5);
  const auto d = test::random_triple(10, 10, 30, 2, 0.5, rng);
  for (TrainFamily fam : {TrainFamily::PN, TrainFamily::PNU, TrainFamily::PUNU}) {
    const auto r = cross_validate(d, small_grid(), 5, fam, make_loss(LossKind::scaled_squared), 3);
    for (const auto& c : r.results) {
      if (!c.failed) EXPECT_GE(c.mean_score, r.results[r.chosen].mean_score);
    }
    EXPECT_NEAR(r.validation_eta, 0.0, 1e-15);
  }
}

TEST(CrossValidate, SeparableDataZeroTrainingError) {
  // Two well-separated clusters; unlabeled points follow the same clusters.
  Rng rng(6);
  const GaussianPair gen{12.0, 2};
  TripleDataset d{gen.draw_class(1, 15, rng), gen.draw_class(-1, 15, rng), gen.draw_mixture(0.5, 40, rng),
                  ClassPrior(0.5)};
  const auto r = cross_validate(d, small_grid(), 5, TrainFamily::PNU, make_loss(LossKind::scaled_squared), 4);
  const Classifier& c = *r.refit;
  for (std::size_t i = 0; i < d.positives.size(); ++i) EXPECT_EQ(c.predict(d.positives.row(i)), 1);
  for (std::size_t i = 0; i < d.negatives.size(); ++i) EXPECT_EQ(c.predict(d.negatives.row(i)), -1);
}

TEST(CrossValidate, RampUsesCccp) {
  Rng rng(7);
  const auto d = test::random_triple(6, 6, 10, 2, 0.5, rng);
  Grid g = small_grid();
  g.etas = {0.0, 0.5};
  g.lambdas = {0.1};
  g.bandwidth_multipliers = {1.0};
  CVOptions opt;
  opt.basis = BasisKind::raw_linear_with_offset;
  const auto r = cross_validate(d, g, 3, TrainFamily::PNU, make_loss(LossKind::ramp), 5, opt);
  EXPECT_EQ(r.results.size(), 2u);
  for (const auto& c : r.results) EXPECT_FALSE(c.failed) << c.failure;
}

TEST(CrossValidate, FailuresRecordedPerCandidate) {
  Rng rng(8);
  auto d = test::random_triple(10, 10, 0, 2, 0.5, rng);
  Grid g = small_grid();
  const auto r = cross_validate(d, g, 5, TrainFamily::PNU, make_loss(LossKind::scaled_squared), 6);
  // eta != 0 needs U, which is empty here
  for (const auto& c : r.results) EXPECT_EQ(c.failed, c.candidate.combo != 0.0);
  EXPECT_EQ(r.chosen_candidate().combo, 0.0);
}

// At eta = 0 the fold score is the prior-weighted held-out error rate.
TEST(CrossValidate, ValidationScoreAtZeroIsLabeledError) {
  Rng rng(9);
  const auto d = test::random_triple(10, 10, 20, 2, 0.3, rng);
  Grid g;
  g.lambdas = {0.1};
  g.etas = {0.0};
  g.gammas = {0.0};
  g.bandwidth_multipliers = {1.0};
  CVOptions opt;
  opt.basis = BasisKind::raw_linear_with_offset;
  opt.validation_eta = 0.0;
  const auto r = cross_validate(d, g, 5, TrainFamily::PN, make_loss(LossKind::scaled_squared), 7, opt);
  const auto folds = k_fold_split(d, 5, 7);
  for (std::size_t f = 0; f < 5; ++f) {
    const auto tr = folds.training(d, f), ho = folds.holdout(d, f);
    const Classifier c = train_closed_form(build_base(RiskFamily::PN, ClassPrior(0.3), make_loss(LossKind::scaled_squared)),
                                           tr, Basis::raw_linear(2), 0.1);
    double ep = 0, en = 0;
    for (std::size_t i = 0; i < ho.positives.size(); ++i) ep += c.predict(ho.positives.row(i)) != 1;
    for (std::size_t i = 0; i < ho.negatives.size(); ++i) en += c.predict(ho.negatives.row(i)) != -1;
    const double expect = 0.3 * ep / ho.positives.size() + 0.7 * en / ho.negatives.size();
    EXPECT_NEAR(r.results[0].fold_scores[f], expect, 1e-15);
  }
}
