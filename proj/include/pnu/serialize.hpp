#pragma once

#include <optional>
#include <string>

#include <json.hpp>

#include "pnu/data.hpp"
#include "pnu/harness.hpp"
#include "pnu/model.hpp"
#include "pnu/prior.hpp"
#include "pnu/risk.hpp"
#include "pnu/selection.hpp"
#include "pnu/theory.hpp"

namespace pnu {

using json = nlohmann::json;

/// Everything `predict` needs to reproduce a trained model.
struct ModelFile {
  Classifier classifier;
  std::optional<ScalingRecord> scaling;
  RiskSpec spec;
  double lambda = 0.0;
};

json to_json(const RiskSpec& spec);
json to_json(const Classifier& c);
json to_json(const ScalingRecord& s);
json to_json(const Grid& g);
json to_json(const Candidate& c);
json to_json(const CVReport& r);
json to_json(const PriorEstimate& p);
json to_json(const BoundTerms& b);
json to_json(const ExperimentConfig& c);
json to_json(const ExperimentReport& r);
json to_json(const ModelFile& m);

RiskSpec risk_spec_from_json(const json& j);
Classifier classifier_from_json(const json& j);
ScalingRecord scaling_from_json(const json& j);
Grid grid_from_json(const json& j);
ExperimentConfig experiment_config_from_json(const json& j);
ModelFile model_file_from_json(const json& j);

/// Reads a JSON document; ConfigError when missing or malformed.
json read_json_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

}  // namespace pnu
