#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "pnu/data.hpp"
#include "pnu/selection.hpp"

namespace pnu {

enum class Experiment { variance_ratio, validation_ratio, benchmark_compare };

std::string_view experiment_name(Experiment e);
Experiment experiment_from_name(std::string_view name);

struct SyntheticSource {
  double separation = 2.0;
  std::size_t dim = 2;
};

struct ExperimentConfig {
  Experiment experiment = Experiment::variance_ratio;
  std::size_t trials = 100;
  std::uint64_t seed = 1;

  std::size_t n_l = 20;       // labeled training samples
  double theta_l = 0.5;       // class ratio of the labeled draw
  std::vector<std::size_t> n_u = {300};         // unlabeled training samples (benchmark)
  std::vector<double> theta_u = {0.3, 0.5, 0.7};  // prior of unlabeled and test data

  std::size_t n_p_v = 10;     // validation draws
  std::size_t n_n_v = 10;
  std::vector<std::size_t> n_u_v = {10, 50, 100, 200, 300};
  std::size_t resamples = 1000;  // validation redraws per sweep point
  std::size_t test_size = 10000;

  std::size_t k = 5;
  Grid grid = Grid::defaults();
  std::size_t center_cap = 500;
  std::string loss = "scaled_squared";  // training loss
  bool scale_features = true;           // benchmark only
  bool estimate_prior = false;          // benchmark only: energy-distance prior

  std::optional<SyntheticSource> synthetic = SyntheticSource{};
  std::string data_path;  // CSV pool when synthetic is unset
  std::string label_column = "label";
};

struct SettingSummary {
  std::string label;
  std::map<std::string, double> params;
  std::vector<double> values;  // one per successful trial, trial order
  std::vector<std::size_t> trial_index;
  double mean = 0.0;
  double se = 0.0;          // sample std / sqrt(count)
  bool se_defined = false;  // false with fewer than two values (se reported as 0)
  std::vector<std::string> failures;
  double wall_seconds = 0.0;  // summed over trials; not part of replay comparisons
};

struct ExperimentReport {
  ExperimentConfig config;
  std::string rng_version;
  std::vector<SettingSummary> settings;

  const SettingSummary& setting(const std::string& label) const;
};

/// Fills mean, se and se_defined from values.
void summarize(SettingSummary& s);

ExperimentReport run_variance_ratio(const ExperimentConfig& config);
ExperimentReport run_validation_ratio(const ExperimentConfig& config);
ExperimentReport run_benchmark_compare(const ExperimentConfig& config);
ExperimentReport run_experiment(const ExperimentConfig& config);

/// Long-format CSV: setting,trial,value.
std::string report_csv(const ExperimentReport& report);


}  // namespace pnu
