#pragma once

#include <optional>
#include <vector>

#include "pnu/error.hpp"
#include "pnu/model.hpp"
#include "pnu/risk.hpp"

namespace pnu {

enum class SolveMethod { closed_form, cccp };

struct TrainConfig {
  double lambda = 1e-3;
  SolveMethod method = SolveMethod::closed_form;
  int cccp_max_iter = 50;
  double cccp_tol = 1e-6;
  std::optional<Vector> init;  // w = 0 when absent
  double inner_tol = 1e-8;     // relative duality gap of each convex subproblem
  int inner_max_epochs = 200000;
};

/// Design matrices of the three sample sets under one basis.
struct SetDesigns {
  Matrix p, n, u;
};

SetDesigns make_designs(const Basis& basis, const TripleDataset& data);

/// Sufficient statistics of one design matrix for quadratic assembly.
struct SetMoments {
  Matrix gram;  // Phi^T Phi
  Vector sum;   // column sums of Phi
  std::size_t count = 0;
};

struct DesignMoments {
  SetMoments p, n, u;
};

DesignMoments make_moments(const SetDesigns& designs);

/// J(w) = w^T A w - 2 h^T w + constant.
struct QuadraticProblem {
  Matrix a;
  Vector h;
  double constant = 0.0;

  double value(const Vector& w, double lambda) const;
};

/// ConfigError on terms that are not scaled_squared with weight >= 0 or linear.
QuadraticProblem assemble_quadratic(const RiskSpec& spec, const DesignMoments& moments);

/// Minimizer of J(w) + lambda ||w||^2, i.e. (A + lambda I) w = h.
Vector solve_quadratic(const QuadraticProblem& problem, double lambda);

double objective(const RiskSpec& spec, const TripleDataset& data, const Basis& basis,
                 double lambda, const Vector& w);

Classifier train_closed_form(const RiskSpec& spec, const TripleDataset& data, const Basis& basis,
                             double lambda);

struct CccpResult {
  Classifier classifier;
  /// True objective at the initial point, then after every accepted iteration.
  std::vector<double> trace;
  int iterations = 0;
  bool converged = false;
};

class IterationLimitError : public Error {
 public:
  IterationLimitError(const std::string& what, std::vector<double> trace)
      : Error(what), trace_(std::move(trace)) {}
  const std::vector<double>& trace() const { return trace_; }

 private:
  std::vector<double> trace_;
};

/// Concave-convex procedure for specs whose nonlinear terms all use the ramp loss.
CccpResult train_cccp(const RiskSpec& spec, const TripleDataset& data, const Basis& basis,
                      const TrainConfig& config);

/// Picks closed form or CCCP from the spec's losses and config.method.
Classifier train(const RiskSpec& spec, const TripleDataset& data, const Basis& basis,
                 const TrainConfig& config);

}  // namespace pnu
