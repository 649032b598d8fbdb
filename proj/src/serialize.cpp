#include "pnu/serialize.hpp"

#include <fstream>
#include <sstream>

#include "pnu/error.hpp"

namespace pnu {

namespace {

std::string_view source_name(Source s) {
  switch (s) {
    case Source::P: return "P";
    case Source::N: return "N";
    case Source::U: return "U";
  }
  return "?";
}

Source source_from_name(const std::string& s) {
  if (s == "P") return Source::P;
  if (s == "N") return Source::N;
  if (s == "U") return Source::U;
  throw ConfigError("unknown sample set '" + s + "'");
}

json matrix_json(const Matrix& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json r = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) r.push_back(m(i, j));
    rows.push_back(std::move(r));
  }
  return rows;
}

Matrix matrix_from(const json& j, std::size_t cols) {
  Matrix m(static_cast<Eigen::Index>(j.size()), static_cast<Eigen::Index>(cols));
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (j[i].size() != cols) throw ConfigError("ragged matrix in model file");
    for (std::size_t c = 0; c < cols; ++c) m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(c)) = j[i][c].get<double>();
  }
  return m;
}

template <typename F>
auto guard(F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("malformed JSON: ") + e.what());
  }
}

}  // namespace

json to_json(const RiskSpec& spec) {
  json terms = json::array();
  for (const RiskTerm& t : spec.terms) {
    terms.push_back({{"source", source_name(t.source)}, {"sign", t.sign}, {"weight", t.weight},
                     {"loss", loss_name(t.loss.kind)}, {"composite", t.composite}});
  }
  return {{"family", family_name(spec.family)}, {"combo", spec.combo}, {"theta_p", spec.theta_p},
          {"loss", loss_name(spec.loss.kind)}, {"terms", terms}, {"constant", spec.constant}};
}

RiskSpec risk_spec_from_json(const json& j) {
  return guard([&] {
    RiskSpec s{family_from_name(j.at("family").get<std::string>()), j.at("combo").get<double>(),
               j.at("theta_p").get<double>(), loss_from_name(j.at("loss").get<std::string>()), {},
               j.at("constant").get<double>()};
    for (const json& t : j.at("terms")) {
      s.terms.push_back({source_from_name(t.at("source").get<std::string>()), t.at("sign").get<int>(),
                         t.at("weight").get<double>(), loss_from_name(t.at("loss").get<std::string>()),
                         t.value("composite", false)});
    }
    return s;
  });
}

json to_json(const Classifier& c) {
  const Basis& b = c.basis();
  json basis;
  if (b.kind() == BasisKind::gaussian_kernel) {
    basis = {{"kind", "gaussian"}, {"dim", b.dim()}, {"bandwidth", b.bandwidth()},
             {"centers", matrix_json(b.centers())}};
  } else {
    basis = {{"kind", "linear"}, {"dim", b.dim()}};
  }
  std::vector<double> w(c.weights().data(), c.weights().data() + c.weights().size());
  return {{"basis", basis}, {"weights", w}};
}

Classifier classifier_from_json(const json& j) {
  return guard([&] {
    const json& b = j.at("basis");
    const std::string kind = b.at("kind").get<std::string>();
    const std::size_t dim = b.at("dim").get<std::size_t>();
    Basis basis = kind == "gaussian" ? Basis::gaussian(matrix_from(b.at("centers"), dim), b.at("bandwidth").get<double>())
                  : kind == "linear" ? Basis::raw_linear(dim)
                                     : throw ConfigError("unknown basis kind '" + kind + "'");
    const auto w = j.at("weights").get<std::vector<double>>();
    return Classifier(std::move(basis), Eigen::Map<const Vector>(w.data(), static_cast<Eigen::Index>(w.size())));
  });
}

json to_json(const ScalingRecord& s) { return {{"mins", s.mins}, {"maxs", s.maxs}}; }

ScalingRecord scaling_from_json(const json& j) {
  return guard([&] {
    ScalingRecord s{j.at("mins").get<std::vector<double>>(), j.at("maxs").get<std::vector<double>>()};
    if (s.mins.size() != s.maxs.size()) throw ConfigError("scaling record sizes differ");
    return s;
  });
}

json to_json(const Grid& g) {
  return {{"lambdas", g.lambdas}, {"etas", g.etas}, {"gammas", g.gammas},
          {"bandwidth_multipliers", g.bandwidth_multipliers}};
}

Grid grid_from_json(const json& j) {
  return guard([&] {
    Grid g{j.at("lambdas").get<std::vector<double>>(), j.at("etas").get<std::vector<double>>(),
           j.at("gammas").get<std::vector<double>>(), j.at("bandwidth_multipliers").get<std::vector<double>>()};
    g.validate();
    return g;
  });
}

json to_json(const Candidate& c) {
  return {{"lambda", c.lambda}, {"combo", c.combo}, {"multiplier", c.multiplier}, {"bandwidth", c.bandwidth}};
}

json to_json(const CVReport& r) {
  json results = json::array();
  for (const auto& c : r.results) {
    json e = {{"candidate", to_json(c.candidate)}, {"fold_scores", c.fold_scores},
              {"mean_score", c.mean_score}, {"failed", c.failed}};
    if (c.failed) e["failure"] = c.failure;
    results.push_back(std::move(e));
  }
  json out = {{"family", train_family_name(r.family)}, {"loss", loss_name(r.loss.kind)}, {"k", r.k},
              {"seed", r.seed}, {"validation_eta", r.validation_eta}, {"chosen", to_json(r.chosen_candidate())},
              {"chosen_score", r.results.at(r.chosen).mean_score}, {"results", results}};
  if (r.refit) out["classifier"] = to_json(*r.refit);
  return out;
}

json to_json(const PriorEstimate& p) {
  return {{"theta_hat", p.theta_hat}, {"degenerate", p.degenerate}, {"a_hat", p.a_hat}, {"b_hat", p.b_hat}};
}

json to_json(const BoundTerms& b) {
  return {{"multiplier", b.multiplier}, {"constant", b.constant}, {"chi", b.chi}, {"value", b.value}};
}

json to_json(const ExperimentConfig& c) {
  json j = {{"experiment", experiment_name(c.experiment)},
            {"trials", c.trials},
            {"seed", c.seed},
            {"n_l", c.n_l},
            {"theta_l", c.theta_l},
            {"n_u", c.n_u},
            {"theta_u", c.theta_u},
            {"n_p_v", c.n_p_v},
            {"n_n_v", c.n_n_v},
            {"n_u_v", c.n_u_v},
            {"resamples", c.resamples},
            {"test_size", c.test_size},
            {"k", c.k},
            {"grid", to_json(c.grid)},
            {"center_cap", c.center_cap},
            {"loss", c.loss},
            {"scale_features", c.scale_features},
            {"estimate_prior", c.estimate_prior},
            {"data_path", c.data_path},
            {"label_column", c.label_column}};
  if (c.synthetic) j["synthetic"] = {{"separation", c.synthetic->separation}, {"dim", c.synthetic->dim}};
  return j;
}

ExperimentConfig experiment_config_from_json(const json& j) {
  return guard([&] {
    ExperimentConfig c;
    c.experiment = experiment_from_name(j.at("experiment").get<std::string>());
    c.trials = j.at("trials").get<std::size_t>();
    c.seed = j.at("seed").get<std::uint64_t>();
    c.n_l = j.at("n_l").get<std::size_t>();
    c.theta_l = j.at("theta_l").get<double>();
    c.n_u = j.at("n_u").get<std::vector<std::size_t>>();
    c.theta_u = j.at("theta_u").get<std::vector<double>>();
    c.n_p_v = j.at("n_p_v").get<std::size_t>();
    c.n_n_v = j.at("n_n_v").get<std::size_t>();
    c.n_u_v = j.at("n_u_v").get<std::vector<std::size_t>>();
    c.resamples = j.at("resamples").get<std::size_t>();
    c.test_size = j.at("test_size").get<std::size_t>();
    c.k = j.at("k").get<std::size_t>();
    c.grid = grid_from_json(j.at("grid"));
    c.center_cap = j.at("center_cap").get<std::size_t>();
    c.loss = j.at("loss").get<std::string>();
    c.scale_features = j.at("scale_features").get<bool>();
    c.estimate_prior = j.at("estimate_prior").get<bool>();
    c.data_path = j.at("data_path").get<std::string>();
    c.label_column = j.at("label_column").get<std::string>();
    if (j.contains("synthetic")) {
      c.synthetic = SyntheticSource{j["synthetic"].at("separation").get<double>(),
                                    j["synthetic"].at("dim").get<std::size_t>()};
    } else {
      c.synthetic.reset();
    }
    return c;
  });
}

json to_json(const ExperimentReport& r) {
  json settings = json::array();
  for (const auto& s : r.settings) {
    settings.push_back({{"label", s.label}, {"params", s.params}, {"values", s.values},
                        {"trial_index", s.trial_index}, {"mean", s.mean},
                        {"se", s.se_defined ? json(s.se) : json(nullptr)}, {"count", s.values.size()},
                        {"failures", s.failures}, {"wall_seconds", s.wall_seconds}});
  }
  return {{"config", to_json(r.config)}, {"rng_version", r.rng_version}, {"settings", settings}};
}

json to_json(const ModelFile& m) {
  json j = {{"classifier", to_json(m.classifier)}, {"spec", to_json(m.spec)}, {"lambda", m.lambda}};
  if (m.scaling) j["scaling"] = to_json(*m.scaling);
  return j;
}

ModelFile model_file_from_json(const json& j) {
  return guard([&] {
    ModelFile m{classifier_from_json(j.at("classifier")), std::nullopt, risk_spec_from_json(j.at("spec")),
                j.value("lambda", 0.0)};
    if (j.contains("scaling")) m.scaling = scaling_from_json(j["scaling"]);
    return m;
  });
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw ConfigError("malformed JSON in '" + path + "': " + e.what());
  }
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write '" + path + "'");
  out << text;
}

}  // namespace pnu
