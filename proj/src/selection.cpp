#include "pnu/selection.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "pnu/error.hpp"

namespace pnu {

namespace {

std::vector<double> linspace_steps(double lo, double step, int count) {
  std::vector<double> v;
  for (int i = 0; i < count; ++i) {
    // round to kill accumulated drift: -0.9 + ... must land on exact tenths
    v.push_back(std::round((lo + step * i) * 1e12) / 1e12);
  }
  return v;
}

std::vector<std::size_t> assign_folds(std::size_t n, std::size_t k, Rng& rng) {
  std::vector<std::size_t> fold(n);
  const auto perm = rng.permutation(n);
  for (std::size_t pos = 0; pos < n; ++pos) fold[perm[pos]] = pos % k;
  return fold;
}

std::vector<std::size_t> members(const std::vector<std::size_t>& fold, std::size_t f, bool in) {
  std::vector<std::size_t> idx;
  for (std::size_t i = 0; i < fold.size(); ++i) {
    if ((fold[i] == f) == in) idx.push_back(i);
  }
  return idx;
}

TripleDataset pick(const TripleDataset& data, const FoldAssignment& a, std::size_t f, bool in) {
  TripleDataset out;
  out.positives = data.positives.subset(members(a.p, f, in));
  out.negatives = data.negatives.subset(members(a.n, f, in));
  out.unlabeled = data.unlabeled.subset(members(a.u, f, in));
  out.prior = data.prior;
  return out;
}

std::vector<double> combos_for(TrainFamily family, const Grid& grid) {
  switch (family) {
    case TrainFamily::PN: return {0.0};
    case TrainFamily::PNU: return grid.etas;
    case TrainFamily::PUNU: return grid.gammas;
  }
  return {0.0};
}

Vector decisions_of(const Matrix& design, const Vector& w) {
  return design.rows() ? Vector(design * w) : Vector(0);
}

SetDecisions view(const Vector& p, const Vector& n, const Vector& u) {
  return {{p.data(), static_cast<std::size_t>(p.size())},
          {n.data(), static_cast<std::size_t>(n.size())},
          {u.data(), static_cast<std::size_t>(u.size())}};
}

}  // namespace

Grid Grid::defaults() {
  Grid g;
  for (int e = -5; e <= 2; ++e) g.lambdas.push_back(std::pow(10.0, e));
  g.etas = linspace_steps(-1.0, 0.1, 21);
  g.gammas = linspace_steps(0.0, 0.05, 21);
  g.bandwidth_multipliers.assign(kDefaultBandwidthMultipliers.begin(),
                                 kDefaultBandwidthMultipliers.end());
  return g;
}

void Grid::validate() const {
  if (lambdas.empty() || etas.empty() || gammas.empty() || bandwidth_multipliers.empty()) {
    throw ConfigError("every grid list must be nonempty");
  }
  for (double l : lambdas) {
    if (!(l >= 0.0)) throw ConfigError("grid lambdas must be nonnegative");
  }
  for (double e : etas) {
    if (!(e >= -1.0 && e <= 1.0)) throw ConfigError("grid etas must lie in [-1,1]");
  }
  for (double g : gammas) {
    if (!(g >= 0.0 && g <= 1.0)) throw ConfigError("grid gammas must lie in [0,1]");
  }
  for (double m : bandwidth_multipliers) {
    if (!(m > 0.0)) throw ConfigError("bandwidth multipliers must be positive");
  }
}

double eta_bar(const ClassPrior& prior, std::size_t n_p, std::size_t n_n) {
  if (n_p == 0 || n_n == 0) throw DataError("eta_bar needs at least one positive and one negative");
  const double psi_p = prior.theta_p() * prior.theta_p() / static_cast<double>(n_p);
  const double psi_n = prior.theta_n() * prior.theta_n() / static_cast<double>(n_n);
  return (psi_n - psi_p) / (psi_p + psi_n);
}

TripleDataset FoldAssignment::training(const TripleDataset& data, std::size_t fold) const {
  return pick(data, *this, fold, false);
}

TripleDataset FoldAssignment::holdout(const TripleDataset& data, std::size_t fold) const {
  return pick(data, *this, fold, true);
}

FoldAssignment k_fold_split(const TripleDataset& data, std::size_t k, std::uint64_t seed) {
  if (k < 2) throw ConfigError("k-fold split needs k >= 2");
  if (!data.positives.empty() && data.positives.size() < k) {
    throw DataError("P set has " + std::to_string(data.positives.size()) + " samples, fewer than k=" +
                    std::to_string(k));
  }
  if (!data.negatives.empty() && data.negatives.size() < k) {
    throw DataError("N set has " + std::to_string(data.negatives.size()) + " samples, fewer than k=" +
                    std::to_string(k));
  }
  FoldAssignment a;
  a.k = k;
  Rng rp(derive_seed(seed, 0)), rn(derive_seed(seed, 1)), ru(derive_seed(seed, 2));
  a.p = assign_folds(data.positives.size(), k, rp);
  a.n = assign_folds(data.negatives.size(), k, rn);
  a.u = assign_folds(data.unlabeled.size(), k, ru);
  return a;
}

std::string_view train_family_name(TrainFamily f) {
  switch (f) {
    case TrainFamily::PN: return "PN";
    case TrainFamily::PNU: return "PNU";
    case TrainFamily::PUNU: return "PUNU";
  }
  return "?";
}

TrainFamily train_family_from_name(std::string_view name) {
  if (name == "PN") return TrainFamily::PN;
  if (name == "PNU") return TrainFamily::PNU;
  if (name == "PUNU") return TrainFamily::PUNU;
  throw ConfigError("unknown training family '" + std::string(name) + "' (PN, PNU, PUNU)");
}

SolveMethod method_for(const LossFn& loss) {
  if (loss.kind == LossKind::ramp) return SolveMethod::cccp;
  if (loss.kind == LossKind::scaled_squared || loss.kind == LossKind::linear) {
    return SolveMethod::closed_form;
  }
  throw ConfigError("training supports the ramp and scaled_squared losses, got " +
                    std::string(loss_name(loss)));
}

RiskSpec candidate_spec(TrainFamily family, double combo, const ClassPrior& prior,
                        const LossFn& loss) {
  const bool convex = method_for(loss) == SolveMethod::closed_form;
  switch (family) {
    case TrainFamily::PN:
      return build_base(RiskFamily::PN, prior, loss);
    case TrainFamily::PNU:
      return build_pnu(combo, prior, loss, convex ? PnuMode::convex : PnuMode::nonconvex);
    case TrainFamily::PUNU:
      return build_combined(convex ? RiskFamily::C_PUNU : RiskFamily::N_PUNU, combo, prior, loss);
  }
  throw ConfigError("unknown training family");
}

std::size_t choose_candidate(const std::vector<CandidateResult>& results) {
  std::optional<std::size_t> best;
  auto better = [](const CandidateResult& a, const CandidateResult& b) {
    if (a.mean_score != b.mean_score) return a.mean_score < b.mean_score;
    const double ca = std::abs(a.candidate.combo), cb = std::abs(b.candidate.combo);
    if (ca != cb) return ca < cb;
    if (a.candidate.lambda != b.candidate.lambda) return a.candidate.lambda > b.candidate.lambda;
    return a.candidate.bandwidth < b.candidate.bandwidth;
  };
  for (std::size_t i = 0; i < results.size(); ++i) {
    if (results[i].failed) continue;
    if (!best || better(results[i], results[*best])) best = i;
  }
  if (!best) throw Error("cross-validation: every candidate failed");
  return *best;
}

Basis candidate_basis(const TripleDataset& data, const Candidate& c, const CVOptions& options) {
  if (options.basis == BasisKind::raw_linear_with_offset) return Basis::raw_linear(data.dim());
  return Basis::gaussian(choose_centers(data, options.centers).points(), c.bandwidth);
}

CVReport cross_validate(const TripleDataset& data, const Grid& grid, std::size_t k,
                        TrainFamily family, const LossFn& loss, std::uint64_t seed,
                        const CVOptions& options) {
  grid.validate();
  const ClassPrior& prior = data.require_prior();
  const SolveMethod method = method_for(loss);

  CVReport report{family, loss, k, seed, 0.0, {}, 0, std::nullopt};
  if (options.validation_eta) {
    report.validation_eta = *options.validation_eta;
  } else if (!data.unlabeled.empty()) {
    report.validation_eta = eta_bar(prior, data.positives.size(), data.negatives.size());
  }
  const RiskSpec score_spec = build_pnu(report.validation_eta, prior, make_loss(LossKind::zero_one),
                                        PnuMode::nonconvex);

  std::vector<double> multipliers{0.0};
  std::vector<double> bandwidths{0.0};
  if (options.basis == BasisKind::gaussian_kernel) {
    multipliers = grid.bandwidth_multipliers;
    bandwidths = median_bandwidths(choose_centers(data, options.centers), multipliers);
  }
  const std::vector<double> combos = combos_for(family, grid);
  const std::size_t n_lambda = grid.lambdas.size();
  const std::size_t per_bw = combos.size() * n_lambda;

  for (std::size_t bi = 0; bi < bandwidths.size(); ++bi) {
    for (double combo : combos) {
      for (double lambda : grid.lambdas) {
        CandidateResult r;
        r.candidate = {lambda, combo, multipliers[bi], bandwidths[bi]};
        r.fold_scores.assign(k, std::numeric_limits<double>::quiet_NaN());
        report.results.push_back(std::move(r));
      }
    }
  }

  const FoldAssignment folds = k_fold_split(data, k, seed);
  // one error slot per (fold, candidate) so concurrent tasks never share a string
  std::vector<std::vector<std::string>> fold_errors(k, std::vector<std::string>(report.results.size()));
  const auto tasks = static_cast<std::ptrdiff_t>(k * bandwidths.size());

#pragma omp parallel for schedule(dynamic, 1)
  for (std::ptrdiff_t task = 0; task < tasks; ++task) {
    const std::size_t f = static_cast<std::size_t>(task) / bandwidths.size();
    const std::size_t bi = static_cast<std::size_t>(task) % bandwidths.size();
    const std::size_t base = bi * per_bw;
    std::vector<std::string>& errors = fold_errors[f];
    try {
      const TripleDataset train = folds.training(data, f);
      const TripleDataset hold = folds.holdout(data, f);
      CVOptions fold_options = options;
      fold_options.centers.seed = derive_seed(options.centers.seed, f + 1);
      const Basis basis = candidate_basis(train, report.results[base].candidate, fold_options);
      const SetDesigns held = make_designs(basis, hold);
      std::optional<DesignMoments> moments;
      if (method == SolveMethod::closed_form) moments = make_moments(make_designs(basis, train));

      for (std::size_t ci = 0; ci < combos.size(); ++ci) {
        std::optional<RiskSpec> spec;
        std::string spec_error;
        try {
          spec = candidate_spec(family, combos[ci], prior, loss);
        } catch (const std::exception& e) {
          spec_error = e.what();
        }
        std::optional<QuadraticProblem> q;
        if (spec && moments) {
          try {
            q = assemble_quadratic(*spec, *moments);
          } catch (const std::exception& e) {
            spec_error = e.what();
          }
        }
        for (std::size_t li = 0; li < n_lambda; ++li) {
          const std::size_t slot = base + ci * n_lambda + li;
          if (!spec_error.empty()) {
            errors[slot] = spec_error;
            continue;
          }
          try {
            Vector w;
            if (q) {
              w = solve_quadratic(*q, grid.lambdas[li]);
            } else {
              TrainConfig cfg = options.cccp;
              cfg.lambda = grid.lambdas[li];
              w = train_cccp(*spec, train, basis, cfg).classifier.weights();
            }
            const Vector p = decisions_of(held.p, w);
            const Vector n = decisions_of(held.n, w);
            const Vector u = decisions_of(held.u, w);
            report.results[slot].fold_scores[f] = evaluate_on_decisions(score_spec, view(p, n, u));
          } catch (const std::exception& e) {
            errors[slot] = e.what();
          }
        }
      }
    } catch (const std::exception& e) {
      for (std::size_t s = base; s < base + per_bw; ++s) errors[s] = e.what();
    }
  }

  for (std::size_t i = 0; i < report.results.size(); ++i) {
    CandidateResult& r = report.results[i];
    for (std::size_t f = 0; f < k && !r.failed; ++f) {
      if (fold_errors[f][i].empty()) continue;
      r.failed = true;
      r.failure = "fold " + std::to_string(f) + ": " + fold_errors[f][i];
    }
    if (r.failed) {
      r.mean_score = std::numeric_limits<double>::quiet_NaN();
      continue;
    }
    double s = 0.0;
    for (double v : r.fold_scores) s += v;
    r.mean_score = s / static_cast<double>(k);
  }
  report.chosen = choose_candidate(report.results);

  if (options.refit) {
    const Candidate& c = report.chosen_candidate();
    const Basis basis = candidate_basis(data, c, options);
    const RiskSpec spec = candidate_spec(family, c.combo, prior, loss);
    TrainConfig cfg = options.cccp;
    cfg.lambda = c.lambda;
    cfg.method = method;
    report.refit = train(spec, data, basis, cfg);
  }
  return report;
}

}  // namespace pnu
