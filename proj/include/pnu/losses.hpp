#pragma once

#include <string>
#include <string_view>

namespace pnu {

enum class LossKind { zero_one, ramp, scaled_squared, truncated_squared, linear, hinge };

/// A loss l(m) on the margin m = y g(x), with metadata.
struct LossFn {
  LossKind kind;
  bool convex;
  double lipschitz;  // +inf where no global constant exists

  bool operator==(const LossFn&) const = default;
};

enum class LossCondition {
  symmetry_eq3,    // l(m) + l(-m) = 1
  linear_odd_eq6,  // l(m) - l(-m) = -m
};

LossFn make_loss(LossKind kind);
LossFn loss_from_name(std::string_view name);
std::string_view loss_name(LossKind kind);
inline std::string_view loss_name(const LossFn& loss) { return loss_name(loss.kind); }

/// l(margin). Throws InputError on a non-finite margin.
double evaluate(const LossFn& loss, double margin);

/// l(m) - l(-m).
double composite(const LossFn& loss, double margin);

/// Whether the identity holds analytically for this loss kind.
bool check_condition(const LossFn& loss, LossCondition which);

// Unchecked kernel used by hot loops; the margin must be finite.
inline double evaluate_unchecked(LossKind kind, double m) noexcept {
  switch (kind) {
    case LossKind::zero_one:
      return m >= 0.0 ? 0.0 : 1.0;
    case LossKind::ramp: {
      double v = 1.0 - m;
      v = v < 0.0 ? 0.0 : (v > 2.0 ? 2.0 : v);
      return 0.5 * v;
    }
    case LossKind::scaled_squared:
      return 0.25 * (m - 1.0) * (m - 1.0);
    case LossKind::truncated_squared:
      if (m <= 0.0) return 0.25;
      if (m <= 1.0) return 0.25 * (m - 1.0) * (m - 1.0);
      return 0.0;
    case LossKind::linear:
      return -m;
    case LossKind::hinge:
      return m < 1.0 ? 1.0 - m : 0.0;
  }
  return 0.0;
}

}  // namespace pnu
