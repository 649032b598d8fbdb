#include "pnu/risk.hpp"

#include <array>
#include <cmath>
#include <string>
#include <utility>

#include "pnu/error.hpp"

namespace pnu {

namespace {

constexpr std::array<std::pair<RiskFamily, std::string_view>, 12> kFamilyNames = {{
    {RiskFamily::PN, "PN"},
    {RiskFamily::N_PU, "N-PU"},
    {RiskFamily::C_PU, "C-PU"},
    {RiskFamily::N_NU, "N-NU"},
    {RiskFamily::C_NU, "C-NU"},
    {RiskFamily::N_PUNU, "N-PUNU"},
    {RiskFamily::C_PUNU, "C-PUNU"},
    {RiskFamily::N_PNPU, "N-PNPU"},
    {RiskFamily::C_PNPU, "C-PNPU"},
    {RiskFamily::N_PNNU, "N-PNNU"},
    {RiskFamily::C_PNNU, "C-PNNU"},
    {RiskFamily::PNU, "PNU"},
}};

void require_compatible(RiskFamily family, const LossFn& loss) {
  if (family == RiskFamily::PN) return;
  if (is_convex_family(family)) {
    if (!check_condition(loss, LossCondition::linear_odd_eq6) &&
        loss.kind != LossKind::truncated_squared) {
      throw ConfigError(std::string(family_name(family)) + " needs a loss with l(m)-l(-m)=-m; " +
                        std::string(loss_name(loss)) + " violates it");
    }
  } else if (!check_condition(loss, LossCondition::symmetry_eq3)) {
    throw ConfigError(std::string(family_name(family)) + " needs a loss with l(m)+l(-m)=1; " +
                      std::string(loss_name(loss)) + " violates it");
  }
}

// Linearized composite part of the convex PU/NU risks. For truncated_squared
// the composite is kept as-is for bound evaluation.
RiskTerm composite_term(Source source, int sign, double weight, const LossFn& loss) {
  if (loss.kind == LossKind::truncated_squared) return {source, sign, weight, loss, true};
  return {source, sign, weight, make_loss(LossKind::linear), false};
}

struct TableBuilder {
  RiskSpec spec;
  void add(RiskTerm t) {
    if (t.weight != 0.0) spec.terms.push_back(t);
  }
  void add(Source s, int sign, double w, const LossFn& l) { add(RiskTerm{s, sign, w, l, false}); }
};

}  // namespace

std::string_view family_name(RiskFamily family) {
  for (const auto& [f, name] : kFamilyNames) {
    if (f == family) return name;
  }
  return "?";
}

RiskFamily family_from_name(std::string_view name) {
  for (const auto& [f, n] : kFamilyNames) {
    if (n == name) return f;
  }
  throw ConfigError("unknown risk family '" + std::string(name) + "'");
}

bool is_convex_family(RiskFamily family) {
  switch (family) {
    case RiskFamily::C_PU:
    case RiskFamily::C_NU:
    case RiskFamily::C_PUNU:
    case RiskFamily::C_PNPU:
    case RiskFamily::C_PNNU:
      return true;
    default:
      return false;
  }
}

RiskSpec build_base(RiskFamily family, const ClassPrior& prior, const LossFn& loss) {
  const double tp = prior.theta_p();
  const double tn = prior.theta_n();
  TableBuilder b{RiskSpec{family, 0.0, tp, loss, {}, 0.0}};
  require_compatible(family, loss);
  switch (family) {
    case RiskFamily::PN:
      b.add(Source::P, +1, tp, loss);
      b.add(Source::N, -1, tn, loss);
      break;
    case RiskFamily::N_PU:
      b.add(Source::P, +1, 2.0 * tp, loss);
      b.add(Source::U, -1, 1.0, loss);
      b.spec.constant = -tp;
      break;
    case RiskFamily::N_NU:
      b.add(Source::N, -1, 2.0 * tn, loss);
      b.add(Source::U, +1, 1.0, loss);
      b.spec.constant = -tn;
      break;
    case RiskFamily::C_PU:
      b.add(composite_term(Source::P, +1, tp, loss));
      b.add(Source::U, -1, 1.0, loss);
      break;
    case RiskFamily::C_NU:
      b.add(composite_term(Source::N, -1, tn, loss));
      b.add(Source::U, +1, 1.0, loss);
      break;
    default:
      throw ConfigError(std::string(family_name(family)) + " is not a base risk family");
  }
  return b.spec;
}

RiskSpec build_combined(RiskFamily family, double gamma, const ClassPrior& prior,
                        const LossFn& loss) {
  if (!(gamma >= 0.0 && gamma <= 1.0)) {
    throw ConfigError("combination weight gamma must lie in [0,1], got " + std::to_string(gamma));
  }
  require_compatible(family, loss);
  const double tp = prior.theta_p();
  const double tn = prior.theta_n();
  const double g = gamma;
  TableBuilder b{RiskSpec{family, gamma, tp, loss, {}, 0.0}};
  switch (family) {
    case RiskFamily::N_PUNU:
      b.add(Source::P, +1, (2.0 - 2.0 * g) * tp, loss);
      b.add(Source::N, -1, 2.0 * g * tn, loss);
      b.add(Source::U, -1, 1.0 - g, loss);
      b.add(Source::U, +1, g, loss);
      b.spec.constant = -(1.0 - g) * tp - g * tn;
      break;
    case RiskFamily::N_PNPU:
      b.add(Source::P, +1, (1.0 + g) * tp, loss);
      b.add(Source::N, -1, (1.0 - g) * tn, loss);
      b.add(Source::U, -1, g, loss);
      b.spec.constant = -g * tp;
      break;
    case RiskFamily::N_PNNU:
      b.add(Source::P, +1, (1.0 - g) * tp, loss);
      b.add(Source::N, -1, (1.0 + g) * tn, loss);
      b.add(Source::U, +1, g, loss);
      b.spec.constant = -g * tn;
      break;
    case RiskFamily::C_PUNU:
      b.add(composite_term(Source::P, +1, (1.0 - g) * tp, loss));
      b.add(composite_term(Source::N, -1, g * tn, loss));
      b.add(Source::U, -1, 1.0 - g, loss);
      b.add(Source::U, +1, g, loss);
      break;
    case RiskFamily::C_PNPU:
      b.add(Source::P, +1, (1.0 - g) * tp, loss);
      b.add(Source::N, -1, (1.0 - g) * tn, loss);
      b.add(composite_term(Source::P, +1, g * tp, loss));
      b.add(Source::U, -1, g, loss);
      break;
    case RiskFamily::C_PNNU:
      b.add(Source::P, +1, (1.0 - g) * tp, loss);
      b.add(Source::N, -1, (1.0 - g) * tn, loss);
      b.add(composite_term(Source::N, -1, g * tn, loss));
      b.add(Source::U, +1, g, loss);
      break;
    default:
      throw ConfigError(std::string(family_name(family)) + " is not a combined risk family");
  }
  if (b.spec.constant == 0.0) b.spec.constant = 0.0;  // normalize -0
  return b.spec;
}

RiskSpec build_pnu(double eta, const ClassPrior& prior, const LossFn& loss, PnuMode mode) {
  if (!(eta >= -1.0 && eta <= 1.0)) {
    throw ConfigError("PNU trade-off eta must lie in [-1,1], got " + std::to_string(eta));
  }
  const bool convex = mode == PnuMode::convex;
  RiskSpec spec =
      eta >= 0.0
          ? build_combined(convex ? RiskFamily::C_PNPU : RiskFamily::N_PNPU, eta, prior, loss)
          : build_combined(convex ? RiskFamily::C_PNNU : RiskFamily::N_PNNU, -eta, prior, loss);
  spec.family = RiskFamily::PNU;
  spec.combo = eta;
  return spec;
}

double term_average(const RiskTerm& term, std::span<const double> values) {
  const LossKind kind = term.loss.kind;
  const double s = static_cast<double>(term.sign);
  double acc = 0.0;
  if (term.composite) {
    for (double v : values) {
      acc += evaluate_unchecked(kind, s * v) - evaluate_unchecked(kind, -s * v);
    }
  } else {
    for (double v : values) acc += evaluate_unchecked(kind, s * v);
  }
  return acc / static_cast<double>(values.size());
}

double evaluate_on_decisions(const RiskSpec& spec, const SetDecisions& decisions) {
  double total = 0.0;
  for (const RiskTerm& t : spec.terms) {
    std::span<const double> values = t.source == Source::P   ? decisions.p
                                     : t.source == Source::N ? decisions.n
                                                             : decisions.u;
    if (values.empty()) {
      const char* name = t.source == Source::P ? "P" : t.source == Source::N ? "N" : "U";
      throw EvaluationError(std::string("risk term needs a nonempty ") + name + " set");
    }
    total += t.weight * term_average(t, values);
  }
  return total + spec.constant;
}

double evaluate_empirical(const RiskSpec& spec, const TripleDataset& data,
                          const Classifier& classifier) {
  bool need[3] = {false, false, false};
  for (const RiskTerm& t : spec.terms) need[static_cast<int>(t.source)] = true;
  const Vector p = need[0] ? classifier.decisions(data.positives) : Vector(0);
  const Vector n = need[1] ? classifier.decisions(data.negatives) : Vector(0);
  const Vector u = need[2] ? classifier.decisions(data.unlabeled) : Vector(0);
  for (std::span<const double> v : {std::span<const double>(p.data(), p.size()),
                                    std::span<const double>(n.data(), n.size()),
                                    std::span<const double>(u.data(), u.size())}) {
    for (double x : v) {
      if (!std::isfinite(x)) throw InputError("non-finite decision value");
    }
  }
  return evaluate_on_decisions(
      spec, {{p.data(), static_cast<std::size_t>(p.size())},
             {n.data(), static_cast<std::size_t>(n.size())},
             {u.data(), static_cast<std::size_t>(u.size())}});
}

double evaluate_zero_one_pnu(double eta, const ClassPrior& prior, const TripleDataset& data,
                             const Classifier& classifier) {
  return evaluate_empirical(build_pnu(eta, prior, make_loss(LossKind::zero_one), PnuMode::nonconvex),
                            data, classifier);
}

}  // namespace pnu
