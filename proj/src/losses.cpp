#include "pnu/losses.hpp"

#include <cmath>
#include <limits>

#include "pnu/error.hpp"

namespace pnu {

LossFn make_loss(LossKind kind) {
  constexpr double inf = std::numeric_limits<double>::infinity();
  switch (kind) {
    case LossKind::zero_one:
      return {kind, false, inf};
    case LossKind::ramp:
      return {kind, false, 0.5};
    case LossKind::scaled_squared:
      return {kind, true, inf};
    case LossKind::truncated_squared:
      return {kind, false, 0.5};
    case LossKind::linear:
      return {kind, true, 1.0};
    case LossKind::hinge:
      return {kind, true, 1.0};
  }
  throw ConfigError("unknown loss kind");
}

LossFn loss_from_name(std::string_view name) {
  for (auto kind : {LossKind::zero_one, LossKind::ramp, LossKind::scaled_squared,
                    LossKind::truncated_squared, LossKind::linear, LossKind::hinge}) {
    if (loss_name(kind) == name) return make_loss(kind);
  }
  throw ConfigError("unknown loss '" + std::string(name) + "'");
}

std::string_view loss_name(LossKind kind) {
  switch (kind) {
    case LossKind::zero_one: return "zero_one";
    case LossKind::ramp: return "ramp";
    case LossKind::scaled_squared: return "scaled_squared";
    case LossKind::truncated_squared: return "truncated_squared";
    case LossKind::linear: return "linear";
    case LossKind::hinge: return "hinge";
  }
  return "?";
}

double evaluate(const LossFn& loss, double margin) {
  if (!std::isfinite(margin)) throw InputError("loss evaluated at a non-finite margin");
  return evaluate_unchecked(loss.kind, margin);
}

double composite(const LossFn& loss, double margin) {
  if (!std::isfinite(margin)) throw InputError("loss evaluated at a non-finite margin");
  // (m-1)^2/4 - (m+1)^2/4 = -m; the subtraction would round
  if (loss.kind == LossKind::scaled_squared) return -margin;
  return evaluate(loss, margin) - evaluate(loss, -margin);
}

bool check_condition(const LossFn& loss, LossCondition which) {
  switch (which) {
    case LossCondition::symmetry_eq3:
      // zero_one holds for every m != 0; at m = 0 the sign(0)=+1 tie gives 0 + 0.
      return loss.kind == LossKind::zero_one || loss.kind == LossKind::ramp;
    case LossCondition::linear_odd_eq6:
      return loss.kind == LossKind::scaled_squared || loss.kind == LossKind::linear;
  }
  return false;
}

}  // namespace pnu
