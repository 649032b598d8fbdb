#pragma once

#include <span>
#include <string_view>
#include <vector>

#include "pnu/data.hpp"
#include "pnu/losses.hpp"
#include "pnu/model.hpp"

namespace pnu {

enum class Source { P, N, U };

enum class RiskFamily {
  PN,
  N_PU, C_PU, N_NU, C_NU,
  N_PUNU, C_PUNU, N_PNPU, C_PNPU, N_PNNU, C_PNNU,
  PNU,
};

std::string_view family_name(RiskFamily family);
RiskFamily family_from_name(std::string_view name);
bool is_convex_family(RiskFamily family);

/// weight * mean over `source` of loss(sign * g(x)); with `composite` set the
/// averaged quantity is loss(m) - loss(-m).
struct RiskTerm {
  Source source;
  int sign;
  double weight;
  LossFn loss;
  bool composite = false;

  bool operator==(const RiskTerm&) const = default;
};

/// A risk as data: a weighted term table plus an additive constant.
/// Zero-weight terms are omitted from the table.
struct RiskSpec {
  RiskFamily family;
  double combo = 0.0;
  double theta_p;
  LossFn loss;
  std::vector<RiskTerm> terms;
  double constant = 0.0;
};

RiskSpec build_base(RiskFamily family, const ClassPrior& prior, const LossFn& loss);
RiskSpec build_combined(RiskFamily family, double gamma, const ClassPrior& prior,
                        const LossFn& loss);

enum class PnuMode { nonconvex, convex };

/// eta >= 0 selects the PNPU branch with gamma = eta, eta < 0 the PNNU branch
/// with gamma = -eta.
RiskSpec build_pnu(double eta, const ClassPrior& prior, const LossFn& loss, PnuMode mode);

/// Decision values g(x) over each sample set.
struct SetDecisions {
  std::span<const double> p;
  std::span<const double> n;
  std::span<const double> u;
};

/// Mean over `values` of loss(sign * v), or of the composite when requested.
double term_average(const RiskTerm& term, std::span<const double> values);

double evaluate_on_decisions(const RiskSpec& spec, const SetDecisions& decisions);
double evaluate_empirical(const RiskSpec& spec, const TripleDataset& data,
                          const Classifier& classifier);
double evaluate_zero_one_pnu(double eta, const ClassPrior& prior, const TripleDataset& data,
                             const Classifier& classifier);

}  // namespace pnu
