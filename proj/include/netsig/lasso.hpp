#pragma once

#include "netsig/types.hpp"

namespace netsig {

// Mean logistic loss (1/n) * sum log(1 + exp(-y_i * (x_i.w + b))) and the
// L1-penalized objective built on it. Labels must be in {-1,+1}.
double mean_logistic_loss(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                          const Eigen::VectorXd& weights, double intercept);
double l1_logistic_objective(const Eigen::MatrixXd& X,
                             const Eigen::VectorXd& y,
                             const Eigen::VectorXd& weights, double intercept,
                             double lambda);

/// Gradient of the mean logistic loss with respect to the weights.
Eigen::VectorXd logistic_gradient(const Eigen::MatrixXd& X,
                                  const Eigen::VectorXd& y,
                                  const Eigen::VectorXd& weights,
                                  double intercept);
double logistic_intercept_gradient(const Eigen::MatrixXd& X,
                                   const Eigen::VectorXd& y,
                                   const Eigen::VectorXd& weights,
                                   double intercept);

/// Minimizer of the intercept-only model: log(n_pos / n_neg).
double intercept_only_optimum(const Eigen::VectorXd& y);

/// Smallest lambda at which the all-zero weight vector is optimal:
/// max_j |grad_j| at the intercept-only model.
double lasso_lambda_max(const Eigen::MatrixXd& X, const Eigen::VectorXd& y);

struct LassoOptions {
  double kkt_tol = 1e-6;         // convergence: max KKT violation
  double activation_tol = 1e-8;  // |w_j| above this counts as active
  int max_sweeps = 10000;
  bool track_objective = false;  // record objective after every sweep
};

struct LassoFit {
  Eigen::VectorXd weights;
  double intercept = 0.0;
  double lambda = 0.0;
  bool converged = false;
  int iterations = 0;  // coordinate sweeps
  std::vector<double> objective_trace;  // filled when track_objective
};

/// Cyclic coordinate descent with quadratic majorization for
///   min (1/n) sum log(1+exp(-y_i (x_i.w + b))) + lambda ||w||_1
/// with unpenalized intercept. A warm start only changes the iteration
/// count, not the solution beyond tolerance.
LassoFit fit_l1_logistic(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                         double lambda, const LassoOptions& options = {},
                         const LassoFit* warm_start = nullptr);

/// Max KKT violation of a fit: stationarity on active coordinates and the
/// intercept, subgradient bound on inactive ones.
double lasso_kkt_violation(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                           const Eigen::VectorXd& weights, double intercept,
                           double lambda);

/// Warm-started fits along a decreasing grid; active sets are feature
/// indices with |w_j| above the activation tolerance.
SelectionPath lasso_path(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                         const LambdaGrid& grid,
                         const LassoOptions& options = {});

}  // namespace netsig
