#include "pnu/theory.hpp"

#include <cmath>

#include "pnu/error.hpp"

namespace pnu {

namespace {

double sample_std(std::span<const double> v) {
  double mean = 0.0;
  for (double x : v) mean += x;
  mean /= static_cast<double>(v.size());
  double ss = 0.0;
  for (double x : v) ss += (x - mean) * (x - mean);
  return std::sqrt(ss / static_cast<double>(v.size() - 1));
}

void require_counts(const SampleCounts& n) {
  if (n.n_p == 0 || n.n_n == 0 || n.n_u == 0) throw DataError("sample counts must be at least 1");
}

}  // namespace

VarianceProfile VarianceProfile::from_sigmas(double sigma_p, double sigma_n,
                                             const ClassPrior& prior, std::size_t n_p,
                                             std::size_t n_n) {
  if (n_p == 0 || n_n == 0) throw DataError("variance profile needs n_P, n_N >= 1");
  if (!(sigma_p >= 0.0) || !(sigma_n >= 0.0)) throw InputError("sigmas must be nonnegative");
  VarianceProfile v;
  v.sigma_p = sigma_p;
  v.sigma_n = sigma_n;
  v.n_p = n_p;
  v.n_n = n_n;
  v.theta_p = prior.theta_p();
  v.psi_p = prior.theta_p() * prior.theta_p() * sigma_p * sigma_p / static_cast<double>(n_p);
  v.psi_n = prior.theta_n() * prior.theta_n() * sigma_n * sigma_n / static_cast<double>(n_n);
  return v;
}

VarianceProfile VarianceProfile::from_psi(double psi_p, double psi_n) {
  if (!(psi_p >= 0.0) || !(psi_n >= 0.0)) throw InputError("psi values must be nonnegative");
  VarianceProfile v;
  v.psi_p = psi_p;
  v.psi_n = psi_n;
  return v;
}

SigmaEstimate estimate_sigmas(std::span<const double> p_decisions,
                              std::span<const double> n_decisions, const LossFn& loss) {
  if (p_decisions.size() < 2 || n_decisions.size() < 2) {
    throw DataError("sigma estimation needs at least two points per class");
  }
  std::vector<double> lp, ln;
  lp.reserve(p_decisions.size());
  ln.reserve(n_decisions.size());
  for (double g : p_decisions) lp.push_back(evaluate(loss, g));
  for (double g : n_decisions) ln.push_back(evaluate(loss, -g));
  return {sample_std(lp), sample_std(ln)};
}

SigmaEstimate estimate_sigmas(const Classifier& classifier, const LossFn& loss,
                              const SampleSet& positives, const SampleSet& negatives) {
  if (positives.size() < 2 || negatives.size() < 2) {
    throw DataError("sigma estimation needs at least two points per class");
  }
  const Vector p = classifier.decisions(positives);
  const Vector n = classifier.decisions(negatives);
  return estimate_sigmas({p.data(), static_cast<std::size_t>(p.size())},
                         {n.data(), static_cast<std::size_t>(n.size())}, loss);
}

OptimalGamma optimal_gamma(RiskFamily family, const VarianceProfile& profile) {
  const double sum = profile.psi_p + profile.psi_n;
  if (!(sum > 0.0)) throw DataError("optimal gamma needs psi_P + psi_N > 0");
  double g;
  switch (family) {
    case RiskFamily::N_PUNU:
      g = profile.psi_p / sum;
      break;
    case RiskFamily::N_PNPU:
      g = (profile.psi_n - profile.psi_p) / sum;
      break;
    case RiskFamily::N_PNNU:
      g = (profile.psi_p - profile.psi_n) / sum;
      break;
    default:
      throw ConfigError("optimal gamma is defined for N-PUNU, N-PNPU and N-PNNU");
  }
  return {g, g >= 0.0 && g <= 1.0};
}

double optimal_eta(const VarianceProfile& profile) {
  if (profile.psi_p <= profile.psi_n) return optimal_gamma(RiskFamily::N_PNPU, profile).value;
  return -optimal_gamma(RiskFamily::N_PNNU, profile).value;
}

double asymptotic_variance(RiskFamily family, double gamma, const VarianceProfile& profile) {
  const double pp = profile.psi_p;
  const double pn = profile.psi_n;
  const double g = gamma;
  switch (family) {
    case RiskFamily::PN:
      return pp + pn;
    case RiskFamily::N_PUNU:
      return 4.0 * (1.0 - g) * (1.0 - g) * pp + 4.0 * g * g * pn;
    case RiskFamily::N_PNPU:
      return (1.0 + g) * (1.0 + g) * pp + (1.0 - g) * (1.0 - g) * pn;
    case RiskFamily::N_PNNU:
      return (1.0 - g) * (1.0 - g) * pp + (1.0 + g) * (1.0 + g) * pn;
    default:
      throw ConfigError("asymptotic variance is defined for PN, N-PUNU, N-PNPU and N-PNNU");
  }
}

double chi(double c_p, double c_n, double c_u, const ClassPrior& prior, const SampleCounts& n) {
  require_counts(n);
  return c_p * prior.theta_p() / std::sqrt(static_cast<double>(n.n_p)) +
         c_n * prior.theta_n() / std::sqrt(static_cast<double>(n.n_n)) +
         c_u / std::sqrt(static_cast<double>(n.n_u));
}

BoundTerms generalization_bound(RiskFamily family, double gamma, double empirical_risk,
                                const BoundInputs& in) {
  if (!(gamma >= 0.0 && gamma <= 1.0)) throw ConfigError("bound needs gamma in [0,1]");
  if (!(in.delta > 0.0 && in.delta < 1.0)) throw ConfigError("bound needs delta in (0,1)");
  if (!(in.c_w > 0.0) || !(in.c_phi > 0.0)) throw ConfigError("bound needs C_w, C_phi > 0");
  const ClassPrior prior(in.theta_p);
  const double g = gamma;
  const double c_nc = 2.0 * in.c_w * in.c_phi + std::sqrt(2.0 * std::log(3.0 / in.delta));
  const double c_cv = 4.0 * in.c_w * in.c_phi + std::sqrt(2.0 * std::log(4.0 / in.delta));
  BoundTerms t{};
  switch (family) {
    case RiskFamily::N_PUNU:
      t = {2.0, c_nc, chi(2.0 - 2.0 * g, 2.0 * g, std::abs(2.0 * g - 1.0), prior, in.counts), 0.0};
      break;
    case RiskFamily::N_PNPU:
      t = {2.0, c_nc, chi(1.0 + g, 1.0 - g, g, prior, in.counts), 0.0};
      break;
    case RiskFamily::N_PNNU:
      t = {2.0, c_nc, chi(1.0 - g, 1.0 + g, g, prior, in.counts), 0.0};
      break;
    case RiskFamily::C_PUNU:
      t = {4.0, c_cv, chi(1.0 - g, g, 1.0, prior, in.counts), 0.0};
      break;
    case RiskFamily::C_PNPU:
      t = {4.0, c_cv, chi(1.0, 1.0 - g, g, prior, in.counts), 0.0};
      break;
    case RiskFamily::C_PNNU:
      t = {4.0, c_cv, chi(1.0 - g, 1.0, g, prior, in.counts), 0.0};
      break;
    default:
      throw ConfigError("generalization bounds are defined for the combined families");
  }
  t.value = t.multiplier * empirical_risk + t.constant * t.chi;
  return t;
}

AlphaRatios alpha_ratios(const ClassPrior& prior, std::size_t n_p, std::size_t n_n,
                         std::optional<std::size_t> n_u) {
  if (n_p == 0 || n_n == 0 || (n_u && *n_u == 0)) throw DataError("sample counts must be at least 1");
  const double p_term = prior.theta_p() / std::sqrt(static_cast<double>(n_p));
  const double n_term = prior.theta_n() / std::sqrt(static_cast<double>(n_n));
  const double u_term = n_u ? 1.0 / std::sqrt(static_cast<double>(*n_u)) : 0.0;
  AlphaRatios a;
  a.alpha_pu_pn = (p_term + u_term) / n_term;
  a.alpha_nu_pn = (n_term + u_term) / p_term;
  a.limit_pu_pn = p_term / n_term;
  a.limit_nu_pn = n_term / p_term;
  a.limit_product = a.limit_pu_pn * a.limit_nu_pn;
  return a;
}

}  // namespace pnu
