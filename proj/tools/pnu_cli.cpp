// pnu: command-line front end for training, selection, bounds, prior
// estimation and the experiment harness.
//
// Exit codes: 0 success, 2 configuration error, 3 data error, 1 anything else.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "pnu/error.hpp"
#include "pnu/harness.hpp"
#include "pnu/serialize.hpp"
#include "pnu/solver.hpp"

using namespace pnu;

namespace {

struct Options {
  std::string data;
  std::string synthetic;
  std::string prior;
  std::optional<std::string> loss;
  std::string family;
  std::optional<double> lambda;
  std::optional<double> eta;
  std::optional<double> gamma;
  std::optional<std::size_t> k;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> trials;
  std::string out;
  std::string csv;

  std::string label_column = "label";
  std::string grid;
  std::string model;
  std::string config;
  std::string trace;
  std::string basis = "gaussian";
  std::optional<double> bandwidth;
  std::optional<std::size_t> center_cap;
  bool scale = false;

  // bound
  double delta = 0.05;
  std::optional<double> risk, c_w, c_phi;
  std::optional<std::size_t> n_p, n_n, n_u;

  // experiments
  std::optional<std::size_t> n_l, resamples, test_size;
  std::optional<double> theta_l;
  std::vector<std::size_t> n_u_list, n_u_v;
  std::vector<double> theta_u;
};

std::map<std::string, std::string> parse_pairs(const std::string& text) {
  std::map<std::string, std::string> kv;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw ConfigError("--synthetic expects key=value pairs, got '" + item + "'");
    kv[item.substr(0, eq)] = item.substr(eq + 1);
  }
  return kv;
}

double to_number(const std::string& key, const std::string& v) {
  try {
    std::size_t used = 0;
    const double x = std::stod(v, &used);
    if (used != v.size()) throw std::invalid_argument(v);
    return x;
  } catch (const std::exception&) {
    throw ConfigError("'" + key + "' expects a number, got '" + v + "'");
  }
}

std::size_t to_count(const std::string& key, const std::string& v) {
  const double x = to_number(key, v);
  if (x < 0 || x != std::floor(x)) throw ConfigError("'" + key + "' expects a count, got '" + v + "'");
  return static_cast<std::size_t>(x);
}

// --synthetic theta=0.4,n_p=50,n_n=50,n_u=200,sep=2,dim=2
struct SyntheticData {
  TripleDataset data;
  double theta;
};

SyntheticData synthetic_data(const std::string& text, std::uint64_t seed) {
  auto kv = parse_pairs(text);
  double theta = 0.5, sep = 2.0;
  std::size_t n_p = 50, n_n = 50, n_u = 200, dim = 2;
  for (const auto& [key, v] : kv) {
    if (key == "theta") theta = to_number(key, v);
    else if (key == "sep") sep = to_number(key, v);
    else if (key == "n_p") n_p = to_count(key, v);
    else if (key == "n_n") n_n = to_count(key, v);
    else if (key == "n_u") n_u = to_count(key, v);
    else if (key == "dim") dim = to_count(key, v);
    else throw ConfigError("unknown --synthetic key '" + key + "' (theta, n_p, n_n, n_u, sep, dim)");
  }
  if (dim == 0) throw ConfigError("--synthetic dim must be positive");
  return {synth_gaussians(theta, n_p, n_n, n_u, sep, dim, seed), theta};
}

SyntheticSource synthetic_source(const std::string& text) {
  SyntheticSource s;
  for (const auto& [key, v] : parse_pairs(text)) {
    if (key == "sep") s.separation = to_number(key, v);
    else if (key == "dim") s.dim = to_count(key, v);
    else throw ConfigError("experiments take --synthetic sep=..,dim=.. only; got '" + key + "'");
  }
  if (s.dim == 0) throw ConfigError("--synthetic dim must be positive");
  return s;
}

std::optional<double> given_prior(const std::string& text) {
  if (text.empty() || text == "estimate") return std::nullopt;
  if (text.rfind("given:", 0) != 0) throw ConfigError("--prior expects given:<theta> or estimate, got '" + text + "'");
  return to_number("--prior", text.substr(6));
}

// Loads --data or --synthetic and resolves the class prior.
TripleDataset load_dataset(const Options& o, bool need_prior = true) {
  if (!o.data.empty() && !o.synthetic.empty()) throw ConfigError("give either --data or --synthetic, not both");
  std::optional<double> nominal;
  TripleDataset d;
  if (!o.synthetic.empty()) {
    auto s = synthetic_data(o.synthetic, o.seed.value_or(1));
    d = std::move(s.data);
    nominal = s.theta;
  } else if (!o.data.empty()) {
    d = load_csv(o.data, o.label_column);
  } else {
    throw ConfigError("no data: pass --data <csv> or --synthetic <spec>");
  }
  d.dim();  // DimensionError on mixed widths
  if (const auto g = given_prior(o.prior)) {
    d.prior = ClassPrior(*g);
  } else if (o.prior == "estimate") {
    const auto e = estimate_prior(d.positives, d.negatives, d.unlabeled);
    if (e.degenerate) std::cerr << "warning: P and N are indistinguishable; prior estimate fixed at 0.5\n";
    d.prior = ClassPrior(std::clamp(e.theta_hat, 0.01, 0.99));
  } else if (nominal) {
    d.prior = ClassPrior(*nominal);
  } else if (need_prior) {
    throw ConfigError("--prior is required with --data (given:<theta> or estimate)");
  }
  return d;
}

void emit(const Options& o, const std::string& text) {
  if (o.out.empty()) {
    std::cout << text << '\n';
  } else {
    write_text_file(o.out, text + "\n");
  }
}

Grid load_grid(const Options& o) {
  return o.grid.empty() ? Grid::defaults() : grid_from_json(read_json_file(o.grid));
}

BasisKind basis_kind(const std::string& name) {
  if (name == "gaussian") return BasisKind::gaussian_kernel;
  if (name == "linear") return BasisKind::raw_linear_with_offset;
  throw ConfigError("--basis must be gaussian or linear, got '" + name + "'");
}

// ---------------------------------------------------------------- train
int cmd_train(const Options& o) {
  TripleDataset d = load_dataset(o);
  std::optional<ScalingRecord> scaling;
  if (o.scale) {
    auto s = scale_features(d);
    d = std::move(s.data);
    scaling = s.record;
  }
  const LossFn loss = loss_from_name(o.loss.value_or("scaled_squared"));
  const TrainFamily family = train_family_from_name(o.family.empty() ? "PNU" : o.family);
  double combo = 0.0;
  if (family == TrainFamily::PNU) combo = o.eta.value_or(0.0);
  if (family == TrainFamily::PUNU) combo = o.gamma.value_or(0.5);
  const RiskSpec spec = candidate_spec(family, combo, d.require_prior(), loss);

  Basis basis = Basis::raw_linear(d.dim());
  if (basis_kind(o.basis) == BasisKind::gaussian_kernel) {
    const SampleSet centers = choose_centers(d, {CenterSource::all_points, o.center_cap.value_or(500), o.seed.value_or(1)});
    const double bw = o.bandwidth ? *o.bandwidth : median_bandwidths(centers, std::vector<double>{1.0}).front();
    basis = Basis::gaussian(centers.points(), bw);
  }

  TrainConfig cfg;
  cfg.lambda = o.lambda.value_or(1e-3);
  cfg.method = method_for(loss);
  std::optional<Classifier> clf;
  if (cfg.method == SolveMethod::cccp) {
    const CccpResult r = train_cccp(spec, d, basis, cfg);
    if (!o.trace.empty()) {
      std::ostringstream t;
      t << "iter,objective\n";
      for (std::size_t i = 0; i < r.trace.size(); ++i) t << i << ',' << r.trace[i] << '\n';
      write_text_file(o.trace, t.str());
    }
    if (!r.converged) std::cerr << "warning: CCCP stopped at the iteration limit\n";
    clf = r.classifier;
  } else {
    clf = train_closed_form(spec, d, basis, cfg.lambda);
  }
  emit(o, to_json(ModelFile{*clf, scaling, spec, cfg.lambda}).dump(2));
  return 0;
}

// ---------------------------------------------------------------- predict
int cmd_predict(const Options& o) {
  if (o.model.empty()) throw ConfigError("predict needs --model <json>");
  const ModelFile m = model_file_from_json(read_json_file(o.model));
  const TripleDataset d = load_dataset(o, false);
  std::ostringstream csv;
  csv << "label,decision,prediction\n";
  std::size_t labeled = 0, wrong = 0;
  const std::pair<const SampleSet*, int> sets[] = {{&d.positives, 1}, {&d.negatives, -1}, {&d.unlabeled, 0}};
  for (const auto& [set, label] : sets) {
    if (set->empty()) continue;
    const Vector dec = m.classifier.decisions(m.scaling ? m.scaling->apply(*set) : *set);
    for (Eigen::Index i = 0; i < dec.size(); ++i) {
      const int pred = dec(i) >= 0 ? 1 : -1;
      csv << label << ',' << dec(i) << ',' << pred << '\n';
      if (label != 0) {
        ++labeled;
        wrong += pred != label;
      }
    }
  }
  if (o.out.empty()) {
    std::cout << csv.str();
  } else {
    write_text_file(o.out, csv.str());
  }
  if (labeled) std::cerr << "error on labeled rows: " << static_cast<double>(wrong) / labeled << " (" << labeled << " rows)\n";
  return 0;
}

// ---------------------------------------------------------------- cv
int cmd_cv(const Options& o) {
  TripleDataset d = load_dataset(o);
  if (o.scale) d = scale_features(d).data;
  CVOptions opt;
  opt.basis = basis_kind(o.basis);
  opt.centers = {CenterSource::all_points, o.center_cap.value_or(500), o.seed.value_or(1)};
  if (o.eta) opt.validation_eta = *o.eta;
  const CVReport r = cross_validate(d, load_grid(o), o.k.value_or(5),
                                    train_family_from_name(o.family.empty() ? "PNU" : o.family),
                                    loss_from_name(o.loss.value_or("scaled_squared")), o.seed.value_or(1), opt);
  emit(o, to_json(r).dump(2));
  if (!o.csv.empty()) {
    std::ostringstream csv;
    csv << "lambda,combo,multiplier,bandwidth,mean_score,failed\n";
    for (const auto& c : r.results) {
      csv << c.candidate.lambda << ',' << c.candidate.combo << ',' << c.candidate.multiplier << ','
          << c.candidate.bandwidth << ',' << c.mean_score << ',' << c.failed << '\n';
    }
    write_text_file(o.csv, csv.str());
  }
  const Candidate& c = r.chosen_candidate();
  std::cerr << "chosen: lambda=" << c.lambda << " combo=" << c.combo << " bandwidth=" << c.bandwidth
            << " score=" << r.results[r.chosen].mean_score << '\n';
  return 0;
}

// ---------------------------------------------------------------- bound
int cmd_bound(const Options& o) {
  if (o.family.empty()) throw ConfigError("bound needs --family (N-PUNU, N-PNPU, N-PNNU, C-PUNU, C-PNPU, C-PNNU)");
  const RiskFamily family = family_from_name(o.family);
  const double gam = o.gamma.value_or(0.5);
  double risk = 0, c_w = 0, c_phi = 0, theta = 0;
  SampleCounts counts{};

  if (!o.model.empty()) {
    // Empirical risk, C_w and C_phi from a trained model on the given data.
    const ModelFile m = model_file_from_json(read_json_file(o.model));
    TripleDataset d = load_dataset(o);
    if (m.scaling) {
      d.positives = m.scaling->apply(d.positives);
      d.negatives = m.scaling->apply(d.negatives);
      d.unlabeled = m.scaling->apply(d.unlabeled);
    }
    const LossFn l = make_loss(is_convex_family(family) ? LossKind::truncated_squared : LossKind::ramp);
    risk = evaluate_empirical(build_combined(family, gam, d.require_prior(), l), d, m.classifier);
    c_w = m.classifier.weights().norm();
    for (const SampleSet* s : {&d.positives, &d.negatives, &d.unlabeled}) {
      for (std::size_t i = 0; i < s->size(); ++i) c_phi = std::max(c_phi, m.classifier.basis().featurize(s->row(i)).norm());
    }
    counts = {d.positives.size(), d.negatives.size(), d.unlabeled.size()};
    theta = d.require_prior().theta_p();
  } else {
    const auto g = given_prior(o.prior);
    if (!o.risk || !o.c_w || !o.c_phi || !o.n_p || !o.n_n || !o.n_u || !g) {
      throw ConfigError("bound needs --model with data, or all of --risk --cw --cphi --n-p --n-n --n-u --prior given:x");
    }
    risk = *o.risk;
    c_w = *o.c_w;
    c_phi = *o.c_phi;
    counts = {*o.n_p, *o.n_n, *o.n_u};
    theta = *g;
  }
  const BoundTerms b = generalization_bound(family, gam, risk, {c_w, c_phi, o.delta, counts, theta});
  json j = to_json(b);
  j["family"] = family_name(family);
  j["gamma"] = gam;
  j["empirical_risk"] = risk;
  j["c_w"] = c_w;
  j["c_phi"] = c_phi;
  j["delta"] = o.delta;
  emit(o, j.dump(2));
  return 0;
}

// ---------------------------------------------------------------- estimate-prior
int cmd_estimate_prior(const Options& o) {
  const TripleDataset d = load_dataset(o, false);
  emit(o, to_json(estimate_prior(d.positives, d.negatives, d.unlabeled)).dump(2));
  return 0;
}

// ---------------------------------------------------------------- experiments
ExperimentConfig experiment_config(const Options& o, Experiment e) {
  json j = to_json(ExperimentConfig{});
  if (!o.config.empty()) {
    json user = read_json_file(o.config);
    if (user.contains("config") && user["config"].is_object()) user = user["config"];  // a previous report
    j.merge_patch(user);
  }
  j["experiment"] = experiment_name(e);
  ExperimentConfig c = experiment_config_from_json(j);
  if (!o.data.empty() && !o.synthetic.empty()) throw ConfigError("give either --data or --synthetic, not both");
  if (!o.data.empty()) {
    c.synthetic.reset();
    c.data_path = o.data;
    c.label_column = o.label_column;
  } else if (!o.synthetic.empty()) {
    c.synthetic = synthetic_source(o.synthetic);
  }
  if (o.trials) c.trials = *o.trials;
  if (o.seed) c.seed = *o.seed;
  if (o.k) c.k = *o.k;
  if (!o.grid.empty()) c.grid = load_grid(o);
  if (o.center_cap) c.center_cap = *o.center_cap;
  if (o.n_l) c.n_l = *o.n_l;
  if (o.theta_l) c.theta_l = *o.theta_l;
  if (!o.n_u_list.empty()) c.n_u = o.n_u_list;
  if (!o.theta_u.empty()) c.theta_u = o.theta_u;
  if (!o.n_u_v.empty()) c.n_u_v = o.n_u_v;
  if (o.resamples) c.resamples = *o.resamples;
  if (o.test_size) c.test_size = *o.test_size;
  if (o.loss) c.loss = *o.loss;
  if (o.prior == "estimate") {
    c.estimate_prior = true;
  } else if (const auto g = given_prior(o.prior)) {
    c.theta_u = {*g};
  }
  return c;
}

int cmd_experiment(const Options& o, Experiment e) {
  const ExperimentReport r = run_experiment(experiment_config(o, e));
  if (!o.out.empty()) write_text_file(o.out, to_json(r).dump(2) + "\n");
  if (!o.csv.empty()) write_text_file(o.csv, report_csv(r));
  std::printf("%-36s %10s %10s %6s %6s\n", "setting", "mean", "se", "n", "failed");
  for (const auto& s : r.settings) {
    std::printf("%-36s %10.5f %10.5f %6zu %6zu\n", s.label.c_str(), s.mean, s.se, s.values.size(), s.failures.size());
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Classification from positive, negative and unlabeled data"};
  app.require_subcommand(1);
  Options o;

  auto common = [&](CLI::App* s) {
    s->add_option("--data", o.data, "CSV file with a header row and a label column (+1, -1, 0)");
    s->add_option("--synthetic", o.synthetic, "Gaussian data, e.g. theta=0.4,n_p=50,n_n=50,n_u=200,sep=2,dim=2");
    s->add_option("--label-column", o.label_column, "Label column name");
    s->add_option("--prior", o.prior, "given:<theta> or estimate");
    s->add_option("--seed", o.seed, "Master seed");
    s->add_option("--out", o.out, "Output path (stdout when absent)");
  };
  auto training = [&](CLI::App* s) {
    s->add_option("--loss", o.loss, "Training loss (scaled_squared, ramp)");
    s->add_option("--family", o.family, "PN, PNU or PUNU");
    s->add_option("--basis", o.basis, "gaussian or linear");
    s->add_option("--center-cap", o.center_cap, "Maximum number of Gaussian centers");
    s->add_flag("--scale", o.scale, "Min-max scale features from the training data");
  };

  auto* train = app.add_subcommand("train", "Train one model with fixed hyperparameters");
  common(train);
  training(train);
  train->add_option("--lambda", o.lambda, "L2 regularization");
  train->add_option("--eta", o.eta, "PNU combination weight in [-1, 1]");
  train->add_option("--gamma", o.gamma, "PUNU combination weight in [0, 1]");
  train->add_option("--bandwidth", o.bandwidth, "Gaussian bandwidth (median heuristic when absent)");
  train->add_option("--trace", o.trace, "CSV of the CCCP objective per iteration (ramp loss)");

  auto* predict = app.add_subcommand("predict", "Score rows of a CSV with a trained model");
  common(predict);
  predict->add_option("--model", o.model, "Model JSON written by train")->required();

  auto* cv = app.add_subcommand("cv", "K-fold cross-validation over a hyperparameter grid");
  common(cv);
  training(cv);
  cv->add_option("--k", o.k, "Number of folds");
  cv->add_option("--grid", o.grid, "Grid JSON overriding the defaults");
  cv->add_option("--eta", o.eta, "Validation eta (eta-bar when absent)");
  cv->add_option("--csv", o.csv, "Per-candidate scores as CSV");

  auto* bound = app.add_subcommand("bound", "Generalization error bound");
  common(bound);
  bound->add_option("--family", o.family, "N-PUNU, N-PNPU, N-PNNU, C-PUNU, C-PNPU or C-PNNU")->required();
  bound->add_option("--gamma", o.gamma, "Combination weight");
  bound->add_option("--delta", o.delta, "Failure probability");
  bound->add_option("--model", o.model, "Model JSON; risk and constants are computed on the data");
  bound->add_option("--risk", o.risk, "Empirical risk");
  bound->add_option("--cw", o.c_w, "Bound on the weight norm");
  bound->add_option("--cphi", o.c_phi, "Bound on the feature norm");
  bound->add_option("--n-p", o.n_p, "Positive count");
  bound->add_option("--n-n", o.n_n, "Negative count");
  bound->add_option("--n-u", o.n_u, "Unlabeled count");

  auto* prior = app.add_subcommand("estimate-prior", "Energy-distance class-prior estimate");
  common(prior);

  std::vector<std::pair<CLI::App*, Experiment>> experiments = {
      {app.add_subcommand("exp-variance", "Variance ratio of PNU to PN validation risks"), Experiment::variance_ratio},
      {app.add_subcommand("exp-validation", "Error ratio of PNU- to PN-selected models"), Experiment::validation_ratio},
      {app.add_subcommand("exp-benchmark", "PN, PNU and PUNU test error comparison"), Experiment::benchmark_compare},
  };
  for (auto& [s, e] : experiments) {
    common(s);
    s->add_option("--config", o.config, "Experiment config JSON (or a previous report to replay)");
    s->add_option("--loss", o.loss, "Training loss");
    s->add_option("--k", o.k, "Number of folds");
    s->add_option("--trials", o.trials, "Number of trials");
    s->add_option("--csv", o.csv, "Long-format CSV: setting,trial,value");
    s->add_option("--grid", o.grid, "Grid JSON overriding the defaults");
    s->add_option("--center-cap", o.center_cap, "Maximum number of Gaussian centers");
    s->add_option("--n-l", o.n_l, "Labeled training samples");
    s->add_option("--theta-l", o.theta_l, "Class ratio of labeled data");
    s->add_option("--n-u", o.n_u_list, "Unlabeled training sample counts");
    s->add_option("--theta-u", o.theta_u, "Class priors of unlabeled and test data");
    s->add_option("--n-u-v", o.n_u_v, "Unlabeled validation sample counts");
    s->add_option("--resamples", o.resamples, "Validation redraws per setting");
    s->add_option("--test-size", o.test_size, "Test points per trial");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (train->parsed()) return cmd_train(o);
    if (predict->parsed()) return cmd_predict(o);
    if (cv->parsed()) return cmd_cv(o);
    if (bound->parsed()) return cmd_bound(o);
    if (prior->parsed()) return cmd_estimate_prior(o);
    for (auto& [s, e] : experiments) {
      if (s->parsed()) return cmd_experiment(o, e);
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const DataError& e) {
    std::cerr << "data error: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
