#pragma once

#include "netsig/lasso.hpp"
#include "netsig/types.hpp"

namespace netsig {

/// Latent-variable expansion of a design matrix: one column block per group,
/// so that a column shared by k groups is replicated k times. The expanded
/// problem is a non-overlapping group lasso.
struct ExpandedDesign {
  Eigen::MatrixXd matrix;  // n x total_latent
  std::vector<std::pair<int, int>> column_map;  // latent -> (group, column)
  std::vector<int> group_begin;                 // size group_count + 1
  int original_columns = 0;

  int group_count() const {
    return static_cast<int>(group_begin.size()) - 1;
  }
  int group_size(int g) const { return group_begin[g + 1] - group_begin[g]; }
};

ExpandedDesign expand_design(const Eigen::MatrixXd& X,
                             const GroupStructure& groups);

/// Euclidean-norm proximal step: shrinks v toward 0 by step in norm,
/// returning 0 when ||v|| <= step.
Eigen::VectorXd group_soft_threshold(const Eigen::VectorXd& v, double step);

struct GraphLassoOptions {
  double kkt_tol = 1e-6;
  double activation_tol = 1e-8;  // ||v_g|| above this counts as selected
  int max_sweeps = 10000;
  double ridge = 1e-8;  // added to block curvature; degenerate-block guard
  bool track_objective = false;
};

struct GraphLassoFit {
  Eigen::VectorXd latent;   // concatenated v_g blocks (expanded coordinates)
  Eigen::VectorXd weights;  // fold-back sum over groups, original columns
  double intercept = 0.0;
  double lambda = 0.0;
  std::vector<int> selected_groups;  // ||v_g|| > activation tolerance
  bool converged = false;
  int iterations = 0;
  std::vector<double> objective_trace;

  Eigen::VectorXd latent_block(const ExpandedDesign& design, int g) const {
    return latent.segment(design.group_begin[g], design.group_size(g));
  }
};

/// Scatter-sum of the latent blocks back onto the original columns.
Eigen::VectorXd fold_back(const Eigen::VectorXd& latent,
                          const ExpandedDesign& design);

/// Smallest lambda at which all latent blocks are zero:
/// max_g ||grad_g|| at the intercept-only model.
double group_lambda_max(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                        const GroupStructure& groups);

double graph_lasso_objective(const ExpandedDesign& design,
                             const Eigen::VectorXd& y,
                             const Eigen::VectorXd& latent, double intercept,
                             double lambda);

/// Block coordinate descent on the expanded design for
///   min (1/n) sum log(1+exp(-y_i (x_i.sum_g v_g + b))) + lambda sum_g ||v_g||
GraphLassoFit fit_graph_lasso(const Eigen::MatrixXd& X,
                              const Eigen::VectorXd& y,
                              const GroupStructure& groups, double lambda,
                              const GraphLassoOptions& options = {},
                              const GraphLassoFit* warm_start = nullptr);

/// Max block-KKT violation on the expanded design.
double graph_lasso_kkt_violation(const ExpandedDesign& design,
                                 const Eigen::VectorXd& y,
                                 const Eigen::VectorXd& latent,
                                 double intercept, double lambda);

/// Warm-started fits along a decreasing grid; active sets are group indices.
SelectionPath graph_lasso_path(const Eigen::MatrixXd& X,
                               const Eigen::VectorXd& y,
                               const GroupStructure& groups,
                               const LambdaGrid& grid,
                               const GraphLassoOptions& options = {});

}  // namespace netsig
