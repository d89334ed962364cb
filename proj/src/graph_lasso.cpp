#include "netsig/graph_lasso.hpp"

#include <cmath>
#include <stdexcept>

namespace netsig {

namespace {

double softplus(double z) {
  return std::max(z, 0.0) + std::log1p(std::exp(-std::abs(z)));
}

void refresh_yq(const Eigen::VectorXd& y, const Eigen::VectorXd& margins,
                Eigen::VectorXd& yq) {
  yq = y.array() / (1.0 + margins.array().exp());
}

// Largest eigenvalue of the (tiny) block Gram matrix X_g^T X_g / (4n).
template <typename BlockType>
double block_curvature(const BlockType& block, double inv_n) {
  const int m = static_cast<int>(block.cols());
  if (m == 1) return block.col(0).squaredNorm() * inv_n * 0.25;
  if (m == 2) {
    const double a = block.col(0).squaredNorm();
    const double c = block.col(1).squaredNorm();
    const double b = block.col(0).dot(block.col(1));
    const double tr = a + c;
    const double disc = std::sqrt((a - c) * (a - c) + 4.0 * b * b);
    return 0.5 * (tr + disc) * inv_n * 0.25;
  }
  Eigen::MatrixXd gram = block.transpose() * block;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(gram);
  return es.eigenvalues().maxCoeff() * inv_n * 0.25;
}

Eigen::VectorXd block_curvatures(const ExpandedDesign& design, double ridge) {
  const double inv_n = 1.0 / static_cast<double>(design.matrix.rows());
  Eigen::VectorXd curvature(design.group_count());
  const Eigen::MatrixXd& M = design.matrix;
  for (int g = 0; g < design.group_count(); ++g) {
    curvature[g] = block_curvature(M.middleCols(design.group_begin[g],
                                                design.group_size(g)),
                                   inv_n) +
                   ridge;
  }
  return curvature;
}

GraphLassoFit fit_on_design(const ExpandedDesign& design,
                            const Eigen::VectorXd& curvature,
                            const Eigen::VectorXd& y, double lambda,
                            const GraphLassoOptions& options,
                            const GraphLassoFit* warm_start) {
  const int n = static_cast<int>(y.size());
  const int total = static_cast<int>(design.matrix.cols());
  const int G = design.group_count();
  const double inv_n = 1.0 / n;

  GraphLassoFit fit;
  fit.lambda = lambda;
  if (warm_start && warm_start->latent.size() == total) {
    fit.latent = warm_start->latent;
    fit.intercept = warm_start->intercept;
  } else {
    fit.latent = Eigen::VectorXd::Zero(total);
    fit.intercept = intercept_only_optimum(y);
  }

  Eigen::VectorXd margins =
      y.array() * ((design.matrix * fit.latent).array() + fit.intercept);
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

  auto block_is_active = [&](int g) {
    return fit.latent.segment(design.group_begin[g], design.group_size(g))
               .squaredNorm() > 0.0;
  };

  auto sweep = [&](bool active_only) {
    double max_delta = 0.0;
    update_intercept();
    for (int g = 0; g < G; ++g) {
      if (active_only && !block_is_active(g)) continue;
      const int begin = design.group_begin[g];
      const int size = design.group_size(g);
      const auto block = design.matrix.middleCols(begin, size);
      const Eigen::VectorXd grad_g = -(block.transpose() * yq) * inv_n;
      const Eigen::VectorXd v_g = fit.latent.segment(begin, size);
      const Eigen::VectorXd u = v_g - grad_g / curvature[g];
      const Eigen::VectorXd updated =
          group_soft_threshold(u, lambda / curvature[g]);
      const Eigen::VectorXd delta = updated - v_g;
      const double dn = delta.lpNorm<Eigen::Infinity>();
      if (dn > 0.0) {
        fit.latent.segment(begin, size) = updated;
        margins.array() += y.array() * (block * delta).array();
        refresh_yq(y, margins, yq);
        max_delta = std::max(max_delta, dn);
      }
    }
    ++fit.iterations;
    if (options.track_objective) {
      fit.objective_trace.push_back(graph_lasso_objective(
          design, y, fit.latent, fit.intercept, lambda));
    }
    return max_delta;
  };

  while (fit.iterations < options.max_sweeps) {
    sweep(/*active_only=*/false);
    if (graph_lasso_kkt_violation(design, y, fit.latent, fit.intercept,
                                  lambda) <= options.kkt_tol) {
      fit.converged = true;
      break;
    }
    for (int inner = 0; inner < 50 && fit.iterations < options.max_sweeps;
         ++inner) {
      if (sweep(/*active_only=*/true) < 1e-12) break;
    }
  }

  // Snap boundary round-off dust to exact zeros, block-wise.
  for (int g = 0; g < G; ++g) {
    auto seg = fit.latent.segment(design.group_begin[g], design.group_size(g));
    const double norm = seg.norm();
    if (norm != 0.0 && norm < 1e-12) seg.setZero();
  }
  fit.converged = graph_lasso_kkt_violation(design, y, fit.latent,
                                            fit.intercept, lambda) <=
                  options.kkt_tol;

  fit.weights = fold_back(fit.latent, design);
  for (int g = 0; g < G; ++g) {
    if (fit.latent.segment(design.group_begin[g], design.group_size(g))
            .norm() > options.activation_tol) {
      fit.selected_groups.push_back(g);
    }
  }
  return fit;
}

}  // namespace

ExpandedDesign expand_design(const Eigen::MatrixXd& X,
                             const GroupStructure& groups) {
  if (X.cols() != groups.column_count) {
    throw std::invalid_argument("design/group column count mismatch");
  }
  ExpandedDesign design;
  design.original_columns = groups.column_count;
  design.group_begin.push_back(0);
  for (const auto& g : groups.groups) {
    design.group_begin.push_back(design.group_begin.back() +
                                 static_cast<int>(g.size()));
  }
  const int total = design.group_begin.back();
  design.matrix.resize(X.rows(), total);
  design.column_map.reserve(total);
  int latent = 0;
  for (int g = 0; g < groups.group_count(); ++g) {
    for (int col : groups.groups[g]) {
      design.matrix.col(latent) = X.col(col);
      design.column_map.emplace_back(g, col);
      ++latent;
    }
  }
  return design;
}

Eigen::VectorXd group_soft_threshold(const Eigen::VectorXd& v, double step) {
  if (!(step >= 0.0)) throw std::invalid_argument("negative prox step");
  const double norm = v.norm();
  if (norm <= step) return Eigen::VectorXd::Zero(v.size());
  return v * (1.0 - step / norm);
}

Eigen::VectorXd fold_back(const Eigen::VectorXd& latent,
                          const ExpandedDesign& design) {
  Eigen::VectorXd w = Eigen::VectorXd::Zero(design.original_columns);
  for (std::size_t l = 0; l < design.column_map.size(); ++l) {
    w[design.column_map[l].second] += latent[static_cast<Eigen::Index>(l)];
  }
  return w;
}

double group_lambda_max(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                        const GroupStructure& groups) {
  const double b0 = intercept_only_optimum(y);
  const Eigen::VectorXd grad =
      logistic_gradient(X, y, Eigen::VectorXd::Zero(X.cols()), b0);
  double best = 0.0;
  for (const auto& g : groups.groups) {
    double sq = 0.0;
    for (int col : g) sq += grad[col] * grad[col];
    best = std::max(best, std::sqrt(sq));
  }
  return best;
}

double graph_lasso_objective(const ExpandedDesign& design,
                             const Eigen::VectorXd& y,
                             const Eigen::VectorXd& latent, double intercept,
                             double lambda) {
  const Eigen::VectorXd f = (design.matrix * latent).array() + intercept;
  double loss = 0.0;
  for (Eigen::Index i = 0; i < y.size(); ++i) loss += softplus(-y[i] * f[i]);
  loss /= static_cast<double>(y.size());
  double penalty = 0.0;
  for (int g = 0; g < design.group_count(); ++g) {
    penalty +=
        latent.segment(design.group_begin[g], design.group_size(g)).norm();
  }
  return loss + lambda * penalty;
}

double graph_lasso_kkt_violation(const ExpandedDesign& design,
                                 const Eigen::VectorXd& y,
                                 const Eigen::VectorXd& latent,
                                 double intercept, double lambda) {
  const double inv_n = 1.0 / static_cast<double>(y.size());
  const Eigen::VectorXd margins =
      y.array() * ((design.matrix * latent).array() + intercept);
  Eigen::VectorXd yq;
  refresh_yq(y, margins, yq);
  const Eigen::VectorXd grad = -(design.matrix.transpose() * yq) * inv_n;
  double v = std::abs(-yq.sum() * inv_n);
  for (int g = 0; g < design.group_count(); ++g) {
    const auto seg_grad =
        grad.segment(design.group_begin[g], design.group_size(g));
    const auto seg_v =
        latent.segment(design.group_begin[g], design.group_size(g));
    const double vnorm = seg_v.norm();
    if (vnorm > 0.0) {
      v = std::max(v, (seg_grad + lambda * seg_v / vnorm).norm());
    } else {
      v = std::max(v, seg_grad.norm() - lambda);
    }
  }
  return v;
}

GraphLassoFit fit_graph_lasso(const Eigen::MatrixXd& X,
                              const Eigen::VectorXd& y,
                              const GroupStructure& groups, double lambda,
                              const GraphLassoOptions& options,
                              const GraphLassoFit* warm_start) {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) {
    throw std::invalid_argument("lambda must be positive");
  }
  if (X.rows() != y.size()) throw std::invalid_argument("X/y size mismatch");
  const ExpandedDesign design = expand_design(X, groups);
  const Eigen::VectorXd curvature = block_curvatures(design, options.ridge);
  return fit_on_design(design, curvature, y, lambda, options, warm_start);
}

SelectionPath graph_lasso_path(const Eigen::MatrixXd& X,
                               const Eigen::VectorXd& y,
                               const GroupStructure& groups,
                               const LambdaGrid& grid,
                               const GraphLassoOptions& options) {
  SelectionPath path;
  path.grid = grid;
  path.active_sets.resize(grid.size());
  path.converged.resize(grid.size());

  const ExpandedDesign design = expand_design(X, groups);
  const Eigen::VectorXd curvature = block_curvatures(design, options.ridge);
  std::vector<bool> entered(groups.group_count(), false);
  GraphLassoFit fit;
  for (int k = 0; k < grid.size(); ++k) {
    fit = fit_on_design(design, curvature, y, grid.values[k], options,
                        k == 0 ? nullptr : &fit);
    path.converged[k] = fit.converged;
    for (int g = 0; g < groups.group_count(); ++g) {
      const double norm = fit.latent_block(design, g).norm();
      if (norm > options.activation_tol) {
        path.active_sets[k].push_back(g);
        if (!entered[g]) {
          entered[g] = true;
          path.entries.push_back({g, k, norm});
        }
      }
    }
  }
  rank_path_entries(path.entries);
  return path;
}

}  // namespace netsig
