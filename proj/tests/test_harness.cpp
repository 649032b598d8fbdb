#include <gtest/gtest.h>

#include <cmath>
#include <fstream>
#include <sstream>

#include "pnu/error.hpp"
#include "pnu/harness.hpp"
#include "pnu/serialize.hpp"

using namespace pnu;

namespace {

ExperimentConfig tiny(Experiment e) {
  ExperimentConfig c;
  c.experiment = e;
  c.trials = 3;
  c.seed = 11;
  c.theta_u = {0.3};
  c.n_u_v = {20};
  c.n_u = {40};
  c.resamples = 30;
  c.test_size = 500;
  c.center_cap = 40;
  c.grid.lambdas = {1e-2, 1.0};
  c.grid.etas = {-0.5, 0.0, 0.5};
  c.grid.gammas = {0.0, 0.5, 1.0};
  c.grid.bandwidth_multipliers = {0.5, 1.0};
  return c;
}

void expect_same(const ExperimentReport& a, const ExperimentReport& b) {
  ASSERT_EQ(a.settings.size(), b.settings.size());
  for (std::size_t i = 0; i < a.settings.size(); ++i) {
    EXPECT_EQ(a.settings[i].label, b.settings[i].label);
    EXPECT_EQ(a.settings[i].values, b.settings[i].values);
    EXPECT_EQ(a.settings[i].mean, b.settings[i].mean);
    EXPECT_EQ(a.settings[i].se, b.settings[i].se);
  }
}

}  // namespace

TEST(Summarize, MeanAndSe) {
  SettingSummary s;
  s.values = {1, 2, 3, 6};
  summarize(s);
  EXPECT_DOUBLE_EQ(s.mean, 3.0);
  EXPECT_NEAR(s.se, std::sqrt(14.0 / 3.0 / 4.0), 1e-15);
  EXPECT_TRUE(s.se_defined);
  s.values = {5};
  summarize(s);
  EXPECT_EQ(s.se, 0.0);
  EXPECT_FALSE(s.se_defined);
}

TEST(Config, Validation) {
  auto c = tiny(Experiment::variance_ratio);
  c.trials = 0;
  EXPECT_THROW(run_experiment(c), ConfigError);
  c = tiny(Experiment::variance_ratio);
  c.n_u_v.clear();
  EXPECT_THROW(run_experiment(c), ConfigError);
  c = tiny(Experiment::benchmark_compare);
  c.synthetic.reset();
  EXPECT_THROW(run_experiment(c), ConfigError);
  EXPECT_EQ(experiment_from_name("validation_ratio"), Experiment::validation_ratio);
  EXPECT_THROW(experiment_from_name("x"), ConfigError);
}

TEST(VarianceRatio, RunsAndReplays) {
  const auto c = tiny(Experiment::variance_ratio);
  const auto a = run_experiment(c);
  ASSERT_EQ(a.settings.size(), 1u);
  EXPECT_EQ(a.settings[0].label, "theta_p=0.3,n_u_v=20");
  EXPECT_EQ(a.settings[0].values.size() + a.settings[0].failures.size(), 3u);
  for (double v : a.settings[0].values) EXPECT_GT(v, 0.0);
  expect_same(a, run_experiment(c));
  // the echoed config replays the report
  const auto echoed = experiment_config_from_json(to_json(a).at("config"));
  expect_same(a, run_experiment(echoed));
}

TEST(VarianceRatio, SingleTrialFlagsSe) {
  auto c = tiny(Experiment::variance_ratio);
  c.trials = 1;
  const auto r = run_experiment(c);
  EXPECT_FALSE(r.settings[0].se_defined);
  EXPECT_EQ(r.settings[0].se, 0.0);
}

TEST(VarianceRatio, BalancedIsNearOne) {
  auto c = tiny(Experiment::variance_ratio);
  c.theta_u = {0.5};
  c.trials = 4;
  const auto r = run_experiment(c);
  // eta_hat tracks sigma estimates, so ratios stay close to 1 when theta = 1/2
  for (double v : r.settings[0].values) EXPECT_NEAR(v, 1.0, 0.5);
}

TEST(ValidationRatio, RunsAndIsDeterministic) {
  const auto c = tiny(Experiment::validation_ratio);
  const auto a = run_experiment(c);
  ASSERT_EQ(a.settings.size(), 1u);
  for (double v : a.settings[0].values) EXPECT_GT(v, 0.0);
  expect_same(a, run_experiment(c));
}

// With a single candidate both selections agree, so every ratio is exactly 1.
TEST(ValidationRatio, IdenticalSelectionGivesOne) {
  auto c = tiny(Experiment::validation_ratio);
  c.grid.lambdas = {0.1};
  c.grid.bandwidth_multipliers = {1.0};
  const auto r = run_experiment(c);
  ASSERT_FALSE(r.settings[0].values.empty());
  for (double v : r.settings[0].values) EXPECT_EQ(v, 1.0);
}

TEST(Benchmark, MethodsAndDegenerateEquivalence) {
  auto c = tiny(Experiment::benchmark_compare);
  c.n_l = 10;
  c.theta_l = 0.7;
  c.theta_u = {0.5};
  c.trials = 2;
  const auto r = run_experiment(c);
  ASSERT_EQ(r.settings.size(), 3u);
  EXPECT_EQ(r.settings[0].label, "method=PN,n_u=40");
  EXPECT_EQ(r.settings[1].label, "method=PNU,n_u=40");
  EXPECT_EQ(r.settings[2].label, "method=PUNU,n_u=40");
  for (const auto& s : r.settings) EXPECT_EQ(s.values.size(), 2u) << (s.failures.empty() ? "" : s.failures[0]);

  // PNU restricted to eta = 0 trains the same model class as the PN baseline.
  c.grid.etas = {0.0};
  c.n_u = {0};
  const auto z = run_experiment(c);
  EXPECT_EQ(z.settings[0].values, z.settings[1].values);
}

TEST(Benchmark, SeparableReachesZero) {
  auto c = tiny(Experiment::benchmark_compare);
  c.synthetic = SyntheticSource{14.0, 2};
  c.n_l = 10;
  c.theta_l = 0.7;
  c.theta_u = {0.5};
  c.trials = 2;
  const auto r = run_experiment(c);
  for (const auto& s : r.settings) {
    ASSERT_EQ(s.values.size(), 2u);
    for (double v : s.values) EXPECT_EQ(v, 0.0) << s.label;
  }
}

TEST(Benchmark, CsvPoolSource) {
  const std::string path = ::testing::TempDir() + "pool.csv";
  {
    std::ofstream out(path);
    out << "x,y,label\n";
    Rng rng(3);
    for (int i = 0; i < 400; ++i) {
      const int y = i % 2 ? 1 : -1;
      out << rng.normal() + 1.5 * y << ',' << rng.normal() << ',' << y << '\n';
    }
  }
  auto c = tiny(Experiment::benchmark_compare);
  c.synthetic.reset();
  c.data_path = path;
  c.n_l = 10;
  c.theta_u = {0.5};
  c.test_size = 100;
  c.trials = 2;
  const auto r = run_experiment(c);
  for (const auto& s : r.settings) EXPECT_EQ(s.values.size(), 2u) << (s.failures.empty() ? "" : s.failures[0]);
}

TEST(Report, CsvAndSeRecompute) {
  const auto r = run_experiment(tiny(Experiment::variance_ratio));
  const std::string csv = report_csv(r);
  std::istringstream in(csv);
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "setting,trial,value");
  std::size_t rows = 0;
  while (std::getline(in, line)) ++rows;
  EXPECT_EQ(rows, r.settings[0].values.size());
  SettingSummary copy = r.settings[0];
  summarize(copy);
  EXPECT_EQ(copy.se, r.settings[0].se);
}
