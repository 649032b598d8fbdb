#pragma once

#include <optional>

#include "pnu/data.hpp"
#include "pnu/losses.hpp"
#include "pnu/model.hpp"
#include "pnu/risk.hpp"

namespace pnu {

struct VarianceProfile {
  double sigma_p = 0.0;
  double sigma_n = 0.0;
  double psi_p = 0.0;  // theta_P^2 sigma_P^2 / n_P
  double psi_n = 0.0;  // theta_N^2 sigma_N^2 / n_N
  std::size_t n_p = 0;
  std::size_t n_n = 0;
  double theta_p = 0.5;

  static VarianceProfile from_sigmas(double sigma_p, double sigma_n, const ClassPrior& prior,
                                     std::size_t n_p, std::size_t n_n);
  /// Profile carrying only psi values (sigmas and counts left unset).
  static VarianceProfile from_psi(double psi_p, double psi_n);
};

struct SigmaEstimate {
  double sigma_p;
  double sigma_n;
};

/// Sample standard deviations (n-1 denominator) of l(g(x)) on P and l(-g(x)) on N.
SigmaEstimate estimate_sigmas(const Classifier& classifier, const LossFn& loss,
                              const SampleSet& positives, const SampleSet& negatives);
SigmaEstimate estimate_sigmas(std::span<const double> p_decisions,
                              std::span<const double> n_decisions, const LossFn& loss);

struct OptimalGamma {
  double value;
  bool in_range;  // whether value lies in [0, 1]

  double clamped() const { return value < 0.0 ? 0.0 : (value > 1.0 ? 1.0 : value); }
};

/// Variance-minimizing combination weight for N-PUNU, N-PNPU or N-PNNU.
OptimalGamma optimal_gamma(RiskFamily family, const VarianceProfile& profile);

/// Signed PNU trade-off from a profile: +gamma_PNPU when psi_P <= psi_N,
/// otherwise -gamma_PNNU.
double optimal_eta(const VarianceProfile& profile);

/// Large-n_U variance of PN, N-PUNU, N-PNPU or N-PNNU at gamma.
double asymptotic_variance(RiskFamily family, double gamma, const VarianceProfile& profile);

struct SampleCounts {
  std::size_t n_p;
  std::size_t n_n;
  std::size_t n_u;
};

/// c_P theta_P / sqrt(n_P) + c_N theta_N / sqrt(n_N) + c_U / sqrt(n_U).
double chi(double c_p, double c_n, double c_u, const ClassPrior& prior, const SampleCounts& n);

struct BoundInputs {
  double c_w;
  double c_phi;
  double delta;
  SampleCounts counts;
  double theta_p;
};

struct BoundTerms {
  double multiplier;  // 2 (non-convex) or 4 (convex)
  double constant;    // C or C'
  double chi;
  double value;
};

/// Upper bound on the misclassification rate from an empirical risk.
BoundTerms generalization_bound(RiskFamily family, double gamma, double empirical_risk,
                                const BoundInputs& inputs);

struct AlphaRatios {
  double alpha_pu_pn;
  double alpha_nu_pn;
  double limit_pu_pn;  // n_U -> infinity
  double limit_nu_pn;
  double limit_product;
};

/// n_u = nullopt means n_U -> infinity.
AlphaRatios alpha_ratios(const ClassPrior& prior, std::size_t n_p, std::size_t n_n,
                         std::optional<std::size_t> n_u);

}  // namespace pnu
