#include "netsig/lasso.hpp"

#include <cmath>
#include <stdexcept>

namespace netsig {

namespace {

double softplus(double z) {
  // log(1 + exp(z)) without overflow
  return std::max(z, 0.0) + std::log1p(std::exp(-std::abs(z)));
}

double soft_threshold(double u, double t) {
  if (u > t) return u - t;
  if (u < -t) return u + t;
  return 0.0;
}

void check_inputs(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                  double lambda) {
  if (X.rows() != y.size()) throw std::invalid_argument("X/y size mismatch");
  if (X.rows() == 0) throw std::invalid_argument("empty design matrix");
  if (!X.allFinite()) throw std::invalid_argument("non-finite design matrix");
  for (Eigen::Index i = 0; i < y.size(); ++i) {
    if (y[i] != 1.0 && y[i] != -1.0) {
      throw std::invalid_argument("labels must be in {-1,+1}");
    }
  }
  if (!(lambda > 0.0) || !std::isfinite(lambda)) {
    throw std::invalid_argument("lambda must be positive");
  }
}

// yq_i = y_i * sigma(-m_i) where m_i is the margin y_i * f_i.
void refresh_yq(const Eigen::VectorXd& y, const Eigen::VectorXd& margins,
                Eigen::VectorXd& yq) {
  yq = y.array() / (1.0 + margins.array().exp());
}

}  // namespace

double mean_logistic_loss(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                          const Eigen::VectorXd& weights, double intercept) {
  const Eigen::VectorXd f = (X * weights).array() + intercept;
  double loss = 0.0;
  for (Eigen::Index i = 0; i < y.size(); ++i) loss += softplus(-y[i] * f[i]);
  return loss / static_cast<double>(y.size());
}

double l1_logistic_objective(const Eigen::MatrixXd& X,
                             const Eigen::VectorXd& y,
                             const Eigen::VectorXd& weights, double intercept,
                             double lambda) {
  return mean_logistic_loss(X, y, weights, intercept) +
         lambda * weights.lpNorm<1>();
}

Eigen::VectorXd logistic_gradient(const Eigen::MatrixXd& X,
                                  const Eigen::VectorXd& y,
                                  const Eigen::VectorXd& weights,
                                  double intercept) {
  const Eigen::VectorXd margins =
      y.array() * ((X * weights).array() + intercept);
  Eigen::VectorXd yq;
  refresh_yq(y, margins, yq);
  return -(X.transpose() * yq) / static_cast<double>(y.size());
}

double logistic_intercept_gradient(const Eigen::MatrixXd& X,
                                   const Eigen::VectorXd& y,
                                   const Eigen::VectorXd& weights,
                                   double intercept) {
  const Eigen::VectorXd margins =
      y.array() * ((X * weights).array() + intercept);
  Eigen::VectorXd yq;
  refresh_yq(y, margins, yq);
  return -yq.sum() / static_cast<double>(y.size());
}

double intercept_only_optimum(const Eigen::VectorXd& y) {
  const double pos = (y.array() > 0.0).count();
  const double neg = static_cast<double>(y.size()) - pos;
  if (pos == 0.0 || neg == 0.0) {
    throw std::invalid_argument("single class labels");
  }
  return std::log(pos / neg);
}

double lasso_lambda_max(const Eigen::MatrixXd& X, const Eigen::VectorXd& y) {
  const double b0 = intercept_only_optimum(y);
  const Eigen::VectorXd grad =
      logistic_gradient(X, y, Eigen::VectorXd::Zero(X.cols()), b0);
  return grad.cwiseAbs().maxCoeff();
}

double lasso_kkt_violation(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                           const Eigen::VectorXd& weights, double intercept,
                           double lambda) {
  const Eigen::VectorXd grad = logistic_gradient(X, y, weights, intercept);
  double v = std::abs(logistic_intercept_gradient(X, y, weights, intercept));
  for (Eigen::Index j = 0; j < weights.size(); ++j) {
    if (weights[j] != 0.0) {
      v = std::max(v, std::abs(grad[j] + lambda * (weights[j] > 0 ? 1. : -1.)));
    } else {
      v = std::max(v, std::abs(grad[j]) - lambda);
    }
  }
  return v;
}

LassoFit fit_l1_logistic(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                         double lambda, const LassoOptions& options,
                         const LassoFit* warm_start) {
  check_inputs(X, y, lambda);
  const int n = static_cast<int>(X.rows());
  const int p = static_cast<int>(X.cols());
  const double inv_n = 1.0 / n;

  LassoFit fit;
  fit.lambda = lambda;
  if (warm_start && warm_start->weights.size() == p) {
    fit.weights = warm_start->weights;
    fit.intercept = warm_start->intercept;
  } else {
    fit.weights = Eigen::VectorXd::Zero(p);
    fit.intercept = intercept_only_optimum(y);
  }

  // Per-coordinate curvature bound of the logistic loss: ||x_j||^2 / (4n).
  Eigen::VectorXd curvature(p);
  for (int j = 0; j < p; ++j) {
    curvature[j] = X.col(j).squaredNorm() * inv_n * 0.25;
    if (curvature[j] <= 0.0) fit.weights[j] = 0.0;  // zero column
  }

  Eigen::VectorXd margins =
      y.array() * ((X * fit.weights).array() + fit.intercept);
  Eigen::VectorXd yq;
  refresh_yq(y, margins, yq);

  auto update_intercept = [&]() {
    const double gb = -yq.sum() * inv_n;
    const double delta = -gb / 0.25;
    if (delta != 0.0) {
      fit.intercept += delta;
      margins.array() += y.array() * delta;
      refresh_yq(y, margins, yq);
    }
  };

  // One pass over the given coordinates; returns max coefficient change.
  auto sweep = [&](bool active_only) {
    double max_delta = 0.0;
    update_intercept();
    for (int j = 0; j < p; ++j) {
      if (curvature[j] <= 0.0) continue;
      if (active_only && fit.weights[j] == 0.0) continue;
      const double grad_j = -X.col(j).dot(yq) * inv_n;
      const double u = curvature[j] * fit.weights[j] - grad_j;
      const double updated = soft_threshold(u, lambda) / curvature[j];
      const double delta = updated - fit.weights[j];
      if (delta != 0.0) {
        fit.weights[j] = updated;
        margins.array() += y.array() * X.col(j).array() * delta;
        refresh_yq(y, margins, yq);
        max_delta = std::max(max_delta, std::abs(delta));
      }
    }
    ++fit.iterations;
    if (options.track_objective) {
      fit.objective_trace.push_back(
          l1_logistic_objective(X, y, fit.weights, fit.intercept, lambda));
    }
  return max_delta;
  };

  while (fit.iterations < options.max_sweeps) {
    sweep(/*active_only=*/false);
    if (lasso_kkt_violation(X, y, fit.weights, fit.intercept, lambda) <=
        options.kkt_tol) {
      fit.converged = true;
      break;
    }
    // Polish the current active set before the next full pass.
    for (int inner = 0; inner < 50 && fit.iterations < options.max_sweeps;
         ++inner) {
      if (sweep(/*active_only=*/true) < 1e-12) break;
    }
  }

  // Round-off dust from boundary comparisons (e.g. lambda == lambda_max)
  // is snapped to an exact zero; this moves the objective by at most
  // lambda * 1e-12 per coordinate, far below the KKT tolerance.
  for (int j = 0; j < p; ++j) {
    if (fit.weights[j] != 0.0 && std::abs(fit.weights[j]) < 1e-12) {
      fit.weights[j] = 0.0;
    }
  }
  fit.converged = lasso_kkt_violation(X, y, fit.weights, fit.intercept,
                                      lambda) <= options.kkt_tol;
  return fit;
}

SelectionPath lasso_path(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                         const LambdaGrid& grid, const LassoOptions& options) {
  SelectionPath path;
  path.grid = grid;
  path.active_sets.resize(grid.size());
  path.converged.resize(grid.size());

  std::vector<bool> entered(X.cols(), false);
  LassoFit fit;
  for (int k = 0; k < grid.size(); ++k) {
    fit = fit_l1_logistic(X, y, grid.values[k], options,
                          k == 0 ? nullptr : &fit);
    path.converged[k] = fit.converged;
    for (int j = 0; j < X.cols(); ++j) {
      if (std::abs(fit.weights[j]) > options.activation_tol) {
        path.active_sets[k].push_back(j);
        if (!entered[j]) {
          entered[j] = true;
          path.entries.push_back({j, k, std::abs(fit.weights[j])});
        }
      }
    }
  }
  rank_path_entries(path.entries);
  return path;
}

}  // namespace netsig
