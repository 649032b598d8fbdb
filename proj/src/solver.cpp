#include "pnu/solver.hpp"

#include <algorithm>
#include <cmath>

#include "pnu/kernels.hpp"

namespace pnu {

namespace {

const Matrix& design_for(const SetDesigns& d, Source s) {
  return s == Source::P ? d.p : s == Source::N ? d.n : d.u;
}

const SetMoments& moments_for(const DesignMoments& m, Source s) {
  return s == Source::P ? m.p : s == Source::N ? m.n : m.u;
}

const char* source_name(Source s) { return s == Source::P ? "P" : s == Source::N ? "N" : "U"; }

SetMoments moments_of(const Matrix& phi) {
  SetMoments m;
  m.count = static_cast<std::size_t>(phi.rows());
  m.gram = kernels::gram(phi);
  m.sum = kernels::column_sums(phi);
  return m;
}

double risk_from_designs(const RiskSpec& spec, const SetDesigns& d, const Vector& w) {
  const Vector p = d.p.rows() ? Vector(d.p * w) : Vector(0);
  const Vector n = d.n.rows() ? Vector(d.n * w) : Vector(0);
  const Vector u = d.u.rows() ? Vector(d.u * w) : Vector(0);
  return evaluate_on_decisions(spec, {{p.data(), static_cast<std::size_t>(p.size())},
                                      {n.data(), static_cast<std::size_t>(n.size())},
                                      {u.data(), static_cast<std::size_t>(u.size())}});
}

// One weighted hinge a * max(0, 1 - y phi^T w) of the convex surrogate.
struct HingeItem {
  const double* phi;
  double a;
  double y;
  double scale;  // c / |D|, multiplies the concave-part slope
};

// Dual coordinate ascent for
//   min_w  lambda ||w||^2 + b^T w + sum_i a_i max(0, 1 - y_i phi_i^T w).
// With alpha_i in [0, a_i]: w = (sum_i alpha_i y_i phi_i - b) / (2 lambda),
// dual value sum_i alpha_i - lambda ||w||^2.
class HingeDualSolver {
 public:
  HingeDualSolver(std::vector<HingeItem> items, Eigen::Index b, double lambda)
      : items_(std::move(items)), b_(b), lambda_(lambda), alpha_(items_.size(), 0.0),
        qdiag_(items_.size()) {
    for (std::size_t i = 0; i < items_.size(); ++i) {
      qdiag_[i] = row(i).squaredNorm() / (2.0 * lambda_);
    }
  }

  /// Returns false when the gap target is not met within max_epochs.
  bool solve(const Vector& linear, double tol, int max_epochs, std::uint64_t seed, Vector& w) {
    Vector v = Vector::Zero(b_);
    for (std::size_t i = 0; i < items_.size(); ++i) {
      if (alpha_[i] != 0.0) v += alpha_[i] * items_[i].y * row(i);
    }
    w = (v - linear) / (2.0 * lambda_);
    Rng rng(seed);
    for (int epoch = 0; epoch < max_epochs; ++epoch) {
      const double gap = primal(linear, w) - dual(w);
      if (gap <= tol * std::max(1.0, std::abs(primal(linear, w)))) return true;
      for (std::size_t i : rng.permutation(items_.size())) {
        const HingeItem& it = items_[i];
        const double grad = 1.0 - it.y * row(i).dot(w);
        double next;
        if (qdiag_[i] > 0.0) {
          next = std::clamp(alpha_[i] + grad / qdiag_[i], 0.0, it.a);
        } else {
          next = it.a;  // phi = 0: hinge is the constant a
        }
        const double delta = next - alpha_[i];
        if (delta != 0.0) {
          alpha_[i] = next;
          v += delta * it.y * row(i);
          w += (delta * it.y / (2.0 * lambda_)) * row(i);
        }
      }
      w = (v - linear) / (2.0 * lambda_);
    }
    return primal(linear, w) - dual(w) <= tol * std::max(1.0, std::abs(primal(linear, w)));
  }

 private:
  Eigen::Map<const Vector> row(std::size_t i) const { return {items_[i].phi, b_}; }

  double primal(const Vector& linear, const Vector& w) const {
    double hinge = 0.0;
    for (std::size_t i = 0; i < items_.size(); ++i) {
      const double m = items_[i].y * row(i).dot(w);
      if (m < 1.0) hinge += items_[i].a * (1.0 - m);
    }
    return lambda_ * w.squaredNorm() + linear.dot(w) + hinge;
  }

  double dual(const Vector& w) const {
    double s = 0.0;
    for (double a : alpha_) s += a;
    return s - lambda_ * w.squaredNorm();
  }

  std::vector<HingeItem> items_;
  Eigen::Index b_;
  double lambda_;
  std::vector<double> alpha_;
  std::vector<double> qdiag_;
};

}  // namespace

SetDesigns make_designs(const Basis& basis, const TripleDataset& data) {
  return {basis.design(data.positives), basis.design(data.negatives),
          basis.design(data.unlabeled)};
}

DesignMoments make_moments(const SetDesigns& designs) {
  return {moments_of(designs.p), moments_of(designs.n), moments_of(designs.u)};
}

double QuadraticProblem::value(const Vector& w, double lambda) const {
  return w.dot(a * w) + lambda * w.squaredNorm() - 2.0 * h.dot(w) + constant;
}

QuadraticProblem assemble_quadratic(const RiskSpec& spec, const DesignMoments& moments) {
  const Eigen::Index b = moments.p.sum.size();
  QuadraticProblem q{Matrix::Zero(b, b), Vector::Zero(b), spec.constant};
  for (const RiskTerm& t : spec.terms) {
    const SetMoments& m = moments_for(moments, t.source);
    if (m.count == 0) {
      throw EvaluationError(std::string("risk term needs a nonempty ") + source_name(t.source) +
                            " set");
    }
    const double n = static_cast<double>(m.count);
    const double c = t.weight;
    const double s = static_cast<double>(t.sign);
    if (t.composite) throw ConfigError("closed-form training cannot handle composite terms");
    switch (t.loss.kind) {
      case LossKind::scaled_squared:
        if (c < 0.0) {
          throw ConfigError("closed-form training needs nonnegative squared-loss weights");
        }
        q.a += (c / (4.0 * n)) * m.gram;
        q.h += (c * s / (4.0 * n)) * m.sum;
        q.constant += c / 4.0;
        break;
      case LossKind::linear:
        q.h += (c * s / (2.0 * n)) * m.sum;
        break;
      default:
        throw ConfigError("closed-form training supports only scaled_squared and linear terms, got " +
                          std::string(loss_name(t.loss)));
    }
  }
  return q;
}

Vector solve_quadratic(const QuadraticProblem& problem, double lambda) {
  if (!(lambda >= 0.0)) throw ConfigError("regularization weight must be nonnegative");
  Matrix m = problem.a;
  m.diagonal().array() += lambda;
  Eigen::LLT<Matrix> llt(m);
  const bool ok = llt.info() == Eigen::Success;
  if (lambda == 0.0) {
    if (!ok || llt.rcond() < 1e-12) {
      throw RankError("quadratic system is singular at lambda = 0; use lambda > 0");
    }
    return llt.solve(problem.h);
  }
  if (ok) return llt.solve(problem.h);
  return m.completeOrthogonalDecomposition().solve(problem.h);
}

double objective(const RiskSpec& spec, const TripleDataset& data, const Basis& basis,
                 double lambda, const Vector& w) {
  return evaluate_empirical(spec, data, Classifier(basis, w)) + lambda * w.squaredNorm();
}

Classifier train_closed_form(const RiskSpec& spec, const TripleDataset& data, const Basis& basis,
                             double lambda) {
  const QuadraticProblem q = assemble_quadratic(spec, make_moments(make_designs(basis, data)));
  return Classifier(basis, solve_quadratic(q, lambda));
}

CccpResult train_cccp(const RiskSpec& spec, const TripleDataset& data, const Basis& basis,
                      const TrainConfig& config) {
  if (!(config.lambda > 0.0)) throw ConfigError("CCCP training needs lambda > 0");
  if (config.cccp_max_iter < 1 || !(config.cccp_tol > 0.0)) {
    throw ConfigError("CCCP needs a positive iteration limit and tolerance");
  }
  const SetDesigns d = make_designs(basis, data);
  const Eigen::Index b = static_cast<Eigen::Index>(basis.size());

  Vector linear_fixed = Vector::Zero(b);
  std::vector<HingeItem> items;
  for (const RiskTerm& t : spec.terms) {
    const Matrix& phi = design_for(d, t.source);
    if (phi.rows() == 0) {
      throw EvaluationError(std::string("risk term needs a nonempty ") + source_name(t.source) +
                            " set");
    }
    if (t.composite) throw ConfigError("CCCP training cannot handle composite terms");
    const double n = static_cast<double>(phi.rows());
    const double s = static_cast<double>(t.sign);
    if (t.loss.kind == LossKind::linear) {
      linear_fixed -= (t.weight * s / n) * kernels::column_sums(phi);
    } else if (t.loss.kind == LossKind::ramp) {
      if (t.weight < 0.0) throw ConfigError("CCCP needs nonnegative ramp-loss weights");
      for (Eigen::Index i = 0; i < phi.rows(); ++i) {
        items.push_back({phi.data() + i * b, t.weight / (2.0 * n), s, t.weight / n});
      }
    } else {
      throw ConfigError("CCCP supports only ramp and linear terms, got " +
                        std::string(loss_name(t.loss)));
    }
  }

  Vector w = config.init ? *config.init : Vector::Zero(b);
  if (w.size() != b) throw ConfigError("CCCP initial weights have the wrong length");
  auto true_objective = [&](const Vector& v) {
    return risk_from_designs(spec, d, v) + config.lambda * v.squaredNorm();
  };

  CccpResult result{Classifier(basis, w), {true_objective(w)}, 0, false};
  HingeDualSolver inner(items, b, config.lambda);
  for (int it = 1; it <= config.cccp_max_iter; ++it) {
    // ramp(m) = 1/2 max(0, 1-m) - 1/2 max(0, -1-m); the concave part has
    // slope 1/2 where m < -1 and 0 elsewhere (ties at m = -1 take 0).
    Vector linear = linear_fixed;
    for (const HingeItem& h : items) {
      const Eigen::Map<const Vector> phi(h.phi, b);
      if (h.y * phi.dot(w) < -1.0) linear += (0.5 * h.scale * h.y) * phi;
    }
    Vector next;
    if (!inner.solve(linear, config.inner_tol, config.inner_max_epochs,
                     derive_seed(0x5eed, static_cast<std::uint64_t>(it)), next)) {
      throw IterationLimitError("CCCP inner solve did not reach its tolerance", result.trace);
    }
    const double prev = result.trace.back();
    const double value = true_objective(next);
    result.iterations = it;
    if (value > prev) {
      result.converged = true;  // inner inexactness only; keep the previous iterate
      break;
    }
    w = std::move(next);
    result.trace.push_back(value);
    if (prev - value < config.cccp_tol) {
      result.converged = true;
      break;
    }
  }
  result.classifier = Classifier(basis, w);
  return result;
}

Classifier train(const RiskSpec& spec, const TripleDataset& data, const Basis& basis,
                 const TrainConfig& config) {
  if (config.method == SolveMethod::cccp) return train_cccp(spec, data, basis, config).classifier;
  return train_closed_form(spec, data, basis, config.lambda);
}

}  // namespace pnu
