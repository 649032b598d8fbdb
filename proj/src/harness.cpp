#include "pnu/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <memory>
#include <sstream>

#include "pnu/error.hpp"
#include "pnu/prior.hpp"
#include "pnu/theory.hpp"

namespace pnu {

namespace {

struct Labeled {
  SampleSet x;
  std::vector<int> y;
};

// Where trial data comes from: the synthetic generator, or a finite CSV pool
// drawn without replacement.
class Sampler {
 public:
  virtual ~Sampler() = default;
  /// Draws and permanently removes rows (training data).
  virtual LabeledPool take(std::size_t n_p, std::size_t n_n, Rng& rng) = 0;
  /// Class-conditional draws that leave the pool intact.
  virtual LabeledPool sample(std::size_t n_p, std::size_t n_n, Rng& rng) const = 0;
  /// Marginal draws at class ratio theta.
  virtual Labeled sample_mixture(std::size_t n, double theta, Rng& rng) const = 0;
  /// Unlabeled training rows, removed from the pool, with round(theta n) positives.
  virtual SampleSet take_unlabeled(std::size_t n, double theta, Rng& rng) = 0;
  virtual std::unique_ptr<Sampler> clone() const = 0;
};

class SyntheticSampler : public Sampler {
 public:
  explicit SyntheticSampler(GaussianPair gen) : gen_(gen) {}
  LabeledPool take(std::size_t n_p, std::size_t n_n, Rng& rng) override { return sample(n_p, n_n, rng); }
  LabeledPool sample(std::size_t n_p, std::size_t n_n, Rng& rng) const override {
    LabeledPool out;
    out.positives = gen_.draw_class(+1, n_p, rng);
    out.negatives = gen_.draw_class(-1, n_n, rng);
    return out;
  }
  Labeled sample_mixture(std::size_t n, double theta, Rng& rng) const override {
    Labeled l;
    l.x = gen_.draw_mixture(theta, n, rng, &l.y);
    return l;
  }
  SampleSet take_unlabeled(std::size_t n, double theta, Rng& rng) override {
    const std::size_t np = class_count(theta, n);
    const SampleSet p = gen_.draw_class(+1, np, rng);
    const SampleSet q = gen_.draw_class(-1, n - np, rng);
    const SampleSet u = SampleSet::concat(p, q);
    if (u.empty()) return SampleSet(gen_.dim);
    return u.subset(rng.permutation(u.size()));
  }
  std::unique_ptr<Sampler> clone() const override { return std::make_unique<SyntheticSampler>(*this); }

 private:
  GaussianPair gen_;
};

class PoolSampler : public Sampler {
 public:
  explicit PoolSampler(LabeledPool pool) : pool_(std::move(pool)) {}

  LabeledPool take(std::size_t n_p, std::size_t n_n, Rng& rng) override {
    const ProtocolDraw d = draw_counts(n_p, n_n, rng);
    pool_ = d.remainder;
    return {d.data.positives, d.data.negatives};
  }
  LabeledPool sample(std::size_t n_p, std::size_t n_n, Rng& rng) const override {
    const ProtocolDraw d = draw_counts(n_p, n_n, rng);
    return {d.data.positives, d.data.negatives};
  }
  Labeled sample_mixture(std::size_t n, double theta, Rng& rng) const override {
    // Keep the class ratio when the pool cannot supply n rows at theta.
    std::size_t m = n;
    if (theta > 0.0) m = std::min<std::size_t>(m, static_cast<std::size_t>(pool_.positives.size() / theta));
    if (theta < 1.0) m = std::min<std::size_t>(m, static_cast<std::size_t>(pool_.negatives.size() / (1.0 - theta)));
    const std::size_t np = std::min(class_count(theta, m), pool_.positives.size());
    const std::size_t nn = std::min(m - np, pool_.negatives.size());
    const LabeledPool s = sample(np, nn, rng);
    Labeled l;
    const SampleSet both = SampleSet::concat(s.positives, s.negatives);
    std::vector<int> y(np, 1);
    y.resize(np + nn, -1);
    const auto perm = rng.permutation(both.size());
    l.x = both.subset(perm);
    for (std::size_t i = 0; i < perm.size(); ++i) l.y.push_back(y[perm[i]]);
    return l;
  }
  SampleSet take_unlabeled(std::size_t n, double theta, Rng& rng) override {
    const std::size_t np = class_count(theta, n);
    const LabeledPool t = take(np, n - np, rng);
    const SampleSet u = SampleSet::concat(t.positives, t.negatives);
    return u.subset(rng.permutation(u.size()));
  }
  std::unique_ptr<Sampler> clone() const override { return std::make_unique<PoolSampler>(*this); }

 private:
  ProtocolDraw draw_counts(std::size_t n_p, std::size_t n_n, Rng& rng) const {
    const std::size_t n = n_p + n_n;
    const double ratio = n ? static_cast<double>(n_p) / static_cast<double>(n) : 0.0;
    return protocol_split_with_remainder(pool_, n, ratio, 0, 0.5, rng.next_u64());
  }

  LabeledPool pool_;
};

std::unique_ptr<Sampler> make_sampler(const ExperimentConfig& c) {
  if (c.synthetic) return std::make_unique<SyntheticSampler>(GaussianPair{c.synthetic->separation, c.synthetic->dim});
  if (c.data_path.empty()) throw ConfigError("experiment needs --synthetic or --data");
  const TripleDataset d = load_csv(c.data_path, c.label_column);
  return std::make_unique<PoolSampler>(LabeledPool{d.positives, d.negatives});
}

std::string fmt(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

void validate(const ExperimentConfig& c) {
  if (c.trials < 1) throw ConfigError("trials must be at least 1");
  if (c.theta_u.empty() || c.n_u_v.empty() || c.n_u.empty()) throw ConfigError("experiment ranges must be nonempty");
  for (double t : c.theta_u) ClassPrior{t};
  if (!(c.theta_l >= 0.0 && c.theta_l <= 1.0)) throw ConfigError("theta_l must lie in [0,1]");
  if (c.k < 2) throw ConfigError("k must be at least 2");
  if (c.resamples < 2) throw ConfigError("resamples must be at least 2");
  if (c.synthetic && (c.synthetic->dim == 0)) throw ConfigError("synthetic dimension must be positive");
  c.grid.validate();
  loss_from_name(c.loss);
}

double sample_variance(const std::vector<double>& v) {
  double mean = 0.0;
  for (double x : v) mean += x;
  mean /= static_cast<double>(v.size());
  double ss = 0.0;
  for (double x : v) ss += (x - mean) * (x - mean);
  return ss / static_cast<double>(v.size() - 1);
}

double zero_one_mean(const Vector& g, int sign) {
  double s = 0.0;
  for (Eigen::Index i = 0; i < g.size(); ++i) s += evaluate_unchecked(LossKind::zero_one, sign * g(i));
  return s / static_cast<double>(g.size());
}

double test_error(const Classifier& clf, const Labeled& test) {
  const Vector g = clf.decisions(test.x);
  std::size_t wrong = 0;
  for (Eigen::Index i = 0; i < g.size(); ++i) {
    const int pred = g(i) >= 0.0 ? 1 : -1;
    if (pred != test.y[static_cast<std::size_t>(i)]) ++wrong;
  }
  return static_cast<double>(wrong) / static_cast<double>(g.size());
}

struct TrialOutcome {
  std::vector<double> values;          // one per setting
  std::vector<bool> ok;
  std::vector<std::string> errors;
  std::vector<double> seconds;
};

// Runs trials (concurrently when OpenMP threads are available) and assembles
// per-setting summaries in trial order.
template <typename TrialFn>
ExperimentReport run_trials(const ExperimentConfig& config, std::vector<SettingSummary> settings,
                            TrialFn&& trial) {
  std::vector<TrialOutcome> outcomes(config.trials);
  const auto trials = static_cast<std::ptrdiff_t>(config.trials);
#pragma omp parallel for schedule(dynamic, 1)
  for (std::ptrdiff_t t = 0; t < trials; ++t) {
    TrialOutcome& o = outcomes[static_cast<std::size_t>(t)];
    o.values.assign(settings.size(), 0.0);
    o.ok.assign(settings.size(), false);
    o.errors.assign(settings.size(), {});
    o.seconds.assign(settings.size(), 0.0);
    try {
      trial(static_cast<std::size_t>(t), derive_seed(config.seed, static_cast<std::uint64_t>(t)), o);
    } catch (const std::exception& e) {
      for (std::size_t s = 0; s < settings.size(); ++s) {
        if (!o.ok[s] && o.errors[s].empty()) o.errors[s] = e.what();
      }
    }
  }
  for (std::size_t t = 0; t < outcomes.size(); ++t) {
    for (std::size_t s = 0; s < settings.size(); ++s) {
      const TrialOutcome& o = outcomes[t];
      settings[s].wall_seconds += o.seconds[s];
      if (o.ok[s]) {
        settings[s].values.push_back(o.values[s]);
        settings[s].trial_index.push_back(t);
      } else {
        settings[s].failures.push_back("trial " + std::to_string(t) + ": " +
                                       (o.errors[s].empty() ? "no value" : o.errors[s]));
      }
    }
  }
  for (auto& s : settings) summarize(s);
  return {config, std::string(Rng::kRngVersion), std::move(settings)};
}

// Helper to record a trial failure for a setting without aborting the others.
template <typename F>
void guarded(TrialOutcome& o, std::size_t slot, F&& f) {
  try {
    o.values[slot] = f();
    o.ok[slot] = true;
  } catch (const std::exception& e) {
    o.errors[slot] = e.what();
  }
}

// Folds cannot outnumber the smaller labeled class.
std::size_t fold_count(std::size_t k, std::size_t n_p, std::size_t n_n) {
  return std::max<std::size_t>(2, std::min({k, n_p, n_n}));
}

Grid pn_grid(const Grid& g) {
  Grid out = g;
  out.etas = {0.0};
  out.gammas = {0.0};
  return out;
}

}  // namespace

std::string_view experiment_name(Experiment e) {
  switch (e) {
    case Experiment::variance_ratio: return "variance_ratio";
    case Experiment::validation_ratio: return "validation_ratio";
    case Experiment::benchmark_compare: return "benchmark_compare";
  }
  return "?";
}

Experiment experiment_from_name(std::string_view name) {
  for (auto e : {Experiment::variance_ratio, Experiment::validation_ratio, Experiment::benchmark_compare}) {
    if (experiment_name(e) == name) return e;
  }
  throw ConfigError("unknown experiment '" + std::string(name) + "'");
}

const SettingSummary& ExperimentReport::setting(const std::string& label) const {
  for (const auto& s : settings) {
    if (s.label == label) return s;
  }
  throw ConfigError("report has no setting '" + label + "'");
}

void summarize(SettingSummary& s) {
  const std::size_t n = s.values.size();
  s.mean = 0.0;
  s.se = 0.0;
  s.se_defined = false;
  if (n == 0) return;
  double sum = 0.0;
  for (double v : s.values) sum += v;
  s.mean = sum / static_cast<double>(n);
  if (n < 2) return;
  s.se = std::sqrt(sample_variance(s.values) / static_cast<double>(n));
  s.se_defined = true;
}

ExperimentReport run_variance_ratio(const ExperimentConfig& config) {
  validate(config);
  const auto sampler = make_sampler(config);
  const LossFn loss = loss_from_name(config.loss);
  const LossFn zo = make_loss(LossKind::zero_one);

  std::vector<SettingSummary> settings;
  for (double theta : config.theta_u) {
    for (std::size_t nuv : config.n_u_v) {
      SettingSummary s;
      s.params = {{"theta_p", theta}, {"n_u_v", static_cast<double>(nuv)}};
      s.label = "theta_p=" + fmt(theta) + ",n_u_v=" + std::to_string(nuv);
      settings.push_back(std::move(s));
    }
  }

  return run_trials(config, std::move(settings), [&](std::size_t, std::uint64_t seed, TrialOutcome& o) {
    std::size_t slot = 0;
    for (std::size_t ti = 0; ti < config.theta_u.size(); ++ti) {
      const auto t0 = std::chrono::steady_clock::now();
      const ClassPrior prior(config.theta_u[ti]);
      const std::uint64_t tseed = derive_seed(seed, ti);
      auto local = sampler->clone();
      Rng rng(derive_seed(tseed, 0));
      const std::size_t lp = class_count(config.theta_l, config.n_l);
      const LabeledPool lab = local->take(lp, config.n_l - lp, rng);
      TripleDataset train{lab.positives, lab.negatives, SampleSet(lab.positives.dim()), prior};

      std::optional<Classifier> g;
      std::string train_error;
      try {
        CVOptions opt;
        opt.centers = {CenterSource::labeled_only, config.center_cap, derive_seed(tseed, 1)};
        g = cross_validate(train, pn_grid(config.grid), fold_count(config.k, lp, config.n_l - lp),
                           TrainFamily::PN, loss,
                           derive_seed(tseed, 2), opt).refit;
      } catch (const std::exception& e) {
        train_error = e.what();
      }

      for (std::size_t vi = 0; vi < config.n_u_v.size(); ++vi, ++slot) {
        if (!g) {
          o.errors[slot] = train_error;
          continue;
        }
        guarded(o, slot, [&] {
          Rng vr(derive_seed(tseed, 100 + vi));
          const std::size_t r = config.resamples;
          std::vector<double> tp(r), tn(r), tu_pos(r), tu_neg(r);
          double sum_p = 0, sq_p = 0, sum_n = 0, sq_n = 0;
          std::size_t cnt_p = 0, cnt_n = 0;
          for (std::size_t i = 0; i < r; ++i) {
            const LabeledPool v = local->sample(config.n_p_v, config.n_n_v, vr);
            const Labeled u = local->sample_mixture(config.n_u_v[vi], prior.theta_p(), vr);
            const Vector gp = g->decisions(v.positives);
            const Vector gn = g->decisions(v.negatives);
            const Vector gu = g->decisions(u.x);
            tp[i] = zero_one_mean(gp, +1);
            tn[i] = zero_one_mean(gn, -1);
            tu_pos[i] = zero_one_mean(gu, +1);
            tu_neg[i] = zero_one_mean(gu, -1);
            for (Eigen::Index j = 0; j < gp.size(); ++j) {
              const double l = evaluate_unchecked(LossKind::zero_one, gp(j));
              sum_p += l;
              sq_p += l * l;
            }
            for (Eigen::Index j = 0; j < gn.size(); ++j) {
              const double l = evaluate_unchecked(LossKind::zero_one, -gn(j));
              sum_n += l;
              sq_n += l * l;
            }
            cnt_p += static_cast<std::size_t>(gp.size());
            cnt_n += static_cast<std::size_t>(gn.size());
          }
          auto pooled_sd = [](double sum, double sq, std::size_t n) {
            const double m = sum / static_cast<double>(n);
            return std::sqrt(std::max(0.0, (sq - static_cast<double>(n) * m * m) / static_cast<double>(n - 1)));
          };
          const VarianceProfile prof = VarianceProfile::from_sigmas(
              pooled_sd(sum_p, sq_p, cnt_p), pooled_sd(sum_n, sq_n, cnt_n), prior, config.n_p_v,
              config.n_n_v);
          const double eta = (prof.psi_p + prof.psi_n) > 0.0 ? optimal_eta(prof) : 0.0;
          const RiskSpec pnu = build_pnu(std::clamp(eta, -1.0, 1.0), prior, zo, PnuMode::nonconvex);
          std::vector<double> r_pn(r), r_pnu(r);
          for (std::size_t i = 0; i < r; ++i) {
            r_pn[i] = prior.theta_p() * tp[i] + prior.theta_n() * tn[i];
            double acc = pnu.constant;
            for (const RiskTerm& t : pnu.terms) {
              const double avg = t.source == Source::P ? tp[i]
                                 : t.source == Source::N ? tn[i]
                                 : (t.sign > 0 ? tu_pos[i] : tu_neg[i]);
              acc += t.weight * avg;
            }
            r_pnu[i] = acc;
          }
          const double var_pn = sample_variance(r_pn);
          if (!(var_pn > 0.0)) throw DegenerateError("PN risk has zero variance across resamples");
          return sample_variance(r_pnu) / var_pn;
        });
      }
      const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      for (std::size_t vi = 0; vi < config.n_u_v.size(); ++vi) {
        o.seconds[slot - config.n_u_v.size() + vi] = secs / static_cast<double>(config.n_u_v.size());
      }
    }
  });
}

ExperimentReport run_validation_ratio(const ExperimentConfig& config) {
  validate(config);
  const auto sampler = make_sampler(config);
  const LossFn loss = loss_from_name(config.loss);
  const LossFn zo = make_loss(LossKind::zero_one);

  std::vector<SettingSummary> settings;
  for (double theta : config.theta_u) {
    for (std::size_t nuv : config.n_u_v) {
      SettingSummary s;
      s.params = {{"theta_p", theta}, {"n_u_v", static_cast<double>(nuv)}};
      s.label = "theta_p=" + fmt(theta) + ",n_u_v=" + std::to_string(nuv);
      settings.push_back(std::move(s));
    }
  }

  return run_trials(config, std::move(settings), [&](std::size_t, std::uint64_t seed, TrialOutcome& o) {
    std::size_t slot = 0;
    for (std::size_t ti = 0; ti < config.theta_u.size(); ++ti) {
      const ClassPrior prior(config.theta_u[ti]);
      const std::uint64_t tseed = derive_seed(seed, ti);
      auto local = sampler->clone();
      Rng rng(derive_seed(tseed, 0));
      const std::size_t lp = class_count(config.theta_l, config.n_l);
      const LabeledPool lab = local->take(lp, config.n_l - lp, rng);
      const TripleDataset train{lab.positives, lab.negatives, SampleSet(lab.positives.dim()), prior};

      // Every candidate is trained once on the PN risk; only the validation score differs.
      CVOptions opt;
      opt.centers = {CenterSource::labeled_only, config.center_cap, derive_seed(tseed, 1)};
      const SampleSet centers = choose_centers(train, opt.centers);
      const std::vector<double> bws = median_bandwidths(centers, config.grid.bandwidth_multipliers);
      const RiskSpec spec = build_base(RiskFamily::PN, prior, loss);
      const SolveMethod method = method_for(loss);
      std::vector<Classifier> models;
      std::vector<Candidate> cands;
      for (std::size_t bi = 0; bi < bws.size(); ++bi) {
        const Basis basis = Basis::gaussian(centers.points(), bws[bi]);
        const SetDesigns d = make_designs(basis, train);
        const QuadraticProblem q = assemble_quadratic(spec, make_moments(d));
        for (double lambda : config.grid.lambdas) {
          Vector w;
          if (method == SolveMethod::closed_form) {
            w = solve_quadratic(q, lambda);
          } else {
            TrainConfig cfg;
            cfg.lambda = lambda;
            w = train_cccp(spec, train, basis, cfg).classifier.weights();
          }
          models.emplace_back(basis, w);
          cands.push_back({lambda, 0.0, config.grid.bandwidth_multipliers[bi], bws[bi]});
        }
      }
      Rng test_rng(derive_seed(tseed, 3));
      const Labeled test = local->sample_mixture(config.test_size, prior.theta_p(), test_rng);
      std::vector<double> errors(models.size(), -1.0);
      auto error_of = [&](std::size_t m) {
        if (errors[m] < 0.0) errors[m] = test_error(models[m], test);
        return errors[m];
      };

      const double eta = eta_bar(prior, config.n_p_v, config.n_n_v);
      const RiskSpec score_pn = build_pnu(0.0, prior, zo, PnuMode::nonconvex);
      const RiskSpec score_pnu = build_pnu(eta, prior, zo, PnuMode::nonconvex);
      for (std::size_t vi = 0; vi < config.n_u_v.size(); ++vi, ++slot) {
        guarded(o, slot, [&] {
          Rng vr(derive_seed(tseed, 100 + vi));
          const LabeledPool v = local->sample(config.n_p_v, config.n_n_v, vr);
          const Labeled u = local->sample_mixture(config.n_u_v[vi], prior.theta_p(), vr);
          const TripleDataset val{v.positives, v.negatives, u.x, prior};
          std::vector<CandidateResult> by_pn(models.size()), by_pnu(models.size());
          for (std::size_t m = 0; m < models.size(); ++m) {
            by_pn[m].candidate = cands[m];
            by_pnu[m].candidate = cands[m];
            by_pn[m].mean_score = evaluate_empirical(score_pn, val, models[m]);
            by_pnu[m].mean_score = evaluate_empirical(score_pnu, val, models[m]);
          }
          const std::size_t a = choose_candidate(by_pnu);
          const std::size_t b = choose_candidate(by_pn);
          if (a == b) return 1.0;
          const double ea = error_of(a), eb = error_of(b);
          if (eb == 0.0) {
            if (ea == 0.0) return 1.0;
            throw DegenerateError("PN-selected classifier has zero test error");
          }
          return ea / eb;
        });
      }
    }
  });
}

ExperimentReport run_benchmark_compare(const ExperimentConfig& config) {
  validate(config);
  const auto sampler = make_sampler(config);
  const LossFn loss = loss_from_name(config.loss);
  const ClassPrior nominal(config.theta_u.front());
  const double theta_u = nominal.theta_p();
  const TrainFamily methods[3] = {TrainFamily::PN, TrainFamily::PNU, TrainFamily::PUNU};

  std::vector<SettingSummary> settings;
  for (std::size_t nu : config.n_u) {
    for (TrainFamily m : methods) {
      SettingSummary s;
      s.params = {{"n_u", static_cast<double>(nu)}, {"theta_u", theta_u}, {"theta_l", config.theta_l},
                  {"n_l", static_cast<double>(config.n_l)}};
      s.label = "method=" + std::string(train_family_name(m)) + ",n_u=" + std::to_string(nu);
      settings.push_back(std::move(s));
    }
  }

  return run_trials(config, std::move(settings), [&](std::size_t, std::uint64_t seed, TrialOutcome& o) {
    for (std::size_t ui = 0; ui < config.n_u.size(); ++ui) {
      const std::uint64_t tseed = derive_seed(seed, ui);
      auto local = sampler->clone();
      Rng rng(derive_seed(tseed, 0));
      const std::size_t lp = class_count(config.theta_l, config.n_l);
      const LabeledPool lab = local->take(lp, config.n_l - lp, rng);
      const SampleSet u = local->take_unlabeled(config.n_u[ui], theta_u, rng);
      TripleDataset full{lab.positives, lab.negatives, u, std::nullopt};
      Rng test_rng(derive_seed(tseed, 3));
      Labeled test = local->sample_mixture(config.test_size, theta_u, test_rng);

      if (config.scale_features) {
        const ScaledDataset scaled = scale_features(full);
        full = scaled.data;
        test.x = scaled.record.apply(test.x);
      }
      if (config.estimate_prior) {
        const PriorEstimate e = estimate_prior(full.positives, full.negatives, full.unlabeled);
        full.prior = ClassPrior(std::clamp(e.theta_hat, 0.01, 0.99));
      } else {
        full.prior = nominal;
      }

      for (std::size_t mi = 0; mi < 3; ++mi) {
        const std::size_t slot = ui * 3 + mi;
        const auto t0 = std::chrono::steady_clock::now();
        guarded(o, slot, [&] {
          TripleDataset data = full;
          Grid grid = config.grid;
          if (methods[mi] == TrainFamily::PN) {
            data.unlabeled = SampleSet(full.dim());
            grid = pn_grid(grid);
          }
          CVOptions opt;
          opt.centers = {CenterSource::all_points, config.center_cap, derive_seed(tseed, 10 + mi)};
          const CVReport rep = cross_validate(data, grid, fold_count(config.k, lp, config.n_l - lp),
                                              methods[mi], loss,
                                              derive_seed(tseed, 20), opt);
          return test_error(*rep.refit, test);
        });
        o.seconds[slot] = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      }
    }
  });
}

ExperimentReport run_experiment(const ExperimentConfig& config) {
  switch (config.experiment) {
    case Experiment::variance_ratio: return run_variance_ratio(config);
    case Experiment::validation_ratio: return run_validation_ratio(config);
    case Experiment::benchmark_compare: return run_benchmark_compare(config);
  }
  throw ConfigError("unknown experiment");
}

std::string report_csv(const ExperimentReport& report) {
  std::ostringstream os;
  os.precision(17);
  os << "setting,trial,value\n";
  for (const auto& s : report.settings) {
    for (std::size_t i = 0; i < s.values.size(); ++i) {
      os << '"' << s.label << "\"," << s.trial_index[i] << ',' << s.values[i] << '\n';
    }
  }
  return os.str();
}

}  // namespace pnu
