#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "pnu/model.hpp"
#include "pnu/risk.hpp"
#include "pnu/solver.hpp"

namespace pnu {

struct Grid {
  std::vector<double> lambdas;
  std::vector<double> etas;
  std::vector<double> gammas;
  std::vector<double> bandwidth_multipliers;

  /// lambda in {1e-5, ..., 1e2}, eta in {-1, -0.9, ..., 1}, gamma in {0, 0.05, ..., 1}.
  static Grid defaults();
  void validate() const;
};

/// (psi_N - psi_P) / (psi_P + psi_N) under sigma_P = sigma_N, with
/// psi proportional to theta^2 / n. Positive selects the PNPU branch.
double eta_bar(const ClassPrior& prior, std::size_t n_p, std::size_t n_n);

/// Fold index of every sample, stratified by set.
struct FoldAssignment {
  std::size_t k = 0;
  std::vector<std::size_t> p, n, u;

  TripleDataset training(const TripleDataset& data, std::size_t fold) const;
  TripleDataset holdout(const TripleDataset& data, std::size_t fold) const;
};

FoldAssignment k_fold_split(const TripleDataset& data, std::size_t k, std::uint64_t seed);

enum class TrainFamily { PN, PNU, PUNU };

std::string_view train_family_name(TrainFamily f);
TrainFamily train_family_from_name(std::string_view name);

/// The training risk of one candidate; convex mode for scaled_squared/linear
/// losses, non-convex (CCCP) for ramp.
RiskSpec candidate_spec(TrainFamily family, double combo, const ClassPrior& prior,
                        const LossFn& loss);
SolveMethod method_for(const LossFn& loss);

struct CVOptions {
  BasisKind basis = BasisKind::gaussian_kernel;
  CenterPolicy centers{};
  TrainConfig cccp{};  // iteration settings when the loss needs CCCP
  /// Validation eta; eta_bar of the full data when absent.
  std::optional<double> validation_eta;
  bool refit = true;
};

struct Candidate {
  double lambda = 0.0;
  double combo = 0.0;
  double multiplier = 0.0;  // 0 for the raw linear basis
  double bandwidth = 0.0;
};

struct CandidateResult {
  Candidate candidate;
  std::vector<double> fold_scores;
  double mean_score = 0.0;
  bool failed = false;
  std::string failure;
};

struct CVReport {
  TrainFamily family;
  LossFn loss;
  std::size_t k = 0;
  std::uint64_t seed = 0;
  double validation_eta = 0.0;
  std::vector<CandidateResult> results;
  std::size_t chosen = 0;
  std::optional<Classifier> refit;

  const Candidate& chosen_candidate() const { return results.at(chosen).candidate; }
};

/// Index of the best candidate: lowest mean score, then smaller |combo|,
/// larger lambda, smaller bandwidth.
std::size_t choose_candidate(const std::vector<CandidateResult>& results);

CVReport cross_validate(const TripleDataset& data, const Grid& grid, std::size_t k,
                        TrainFamily family, const LossFn& loss, std::uint64_t seed,
                        const CVOptions& options = {});

/// Basis for one candidate over `data`, sharing the center policy.
Basis candidate_basis(const TripleDataset& data, const Candidate& c, const CVOptions& options);

}  // namespace pnu
