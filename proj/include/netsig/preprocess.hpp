#pragma once

#include "netsig/types.hpp"

#include <string>
#include <vector>

namespace netsig {

/// Outlier rule for the robust correlation step: samples with scaled
/// expression magnitude above `threshold` are excluded from the correlation.
struct OutlierRule {
  double threshold = 1.96;
};

/// Training-fold statistics needed to reproduce the filtering on new data.
struct PreprocessModel {
  std::vector<std::string> kept_gene_ids;  // correlation-ranked order
  Eigen::VectorXd means;                   // training stats, aligned with kept
  Eigen::VectorXd stddevs;                 // population convention, all > 0
  int retention_count = 1500;              // n_g
};

bool operator==(const PreprocessModel& a, const PreprocessModel& b);

struct PreprocessConfig {
  int retention_count = 1500;  // n_g
  OutlierRule outlier;
};

struct ScaleResult {
  ExpressionDataset dataset;                 // constant genes dropped
  Eigen::VectorXd means;                     // stats of the kept columns
  Eigen::VectorXd stddevs;
  std::vector<std::string> dropped_constant;  // warning, not an error
};

/// Centers and scales each gene to mean zero, variance one (divisor n).
/// Constant genes are dropped and reported.
ScaleResult scale_genes(const ExpressionDataset& ds);

/// Pearson correlation between a scaled gene column and the labels after
/// removing samples with |value| > rule.threshold. Returns 0 when fewer than
/// 3 samples survive or the survivors are degenerate (zero variance on
/// either side).
double robust_correlation(const Eigen::VectorXd& scaled_column,
                          const Eigen::VectorXd& labels,
                          const OutlierRule& rule);

/// Gene ids ordered by |correlation| descending (ties: lower input index
/// first), truncated to min(n_g, p).
std::vector<std::string> select_top_correlated(
    const std::vector<std::string>& gene_ids,
    const std::vector<double>& correlations, int retention_count);

/// Keeps exactly the genes with at least one network neighbor inside the
/// input list, preserving order. Throws std::runtime_error when the result
/// is empty.
std::vector<std::string> drop_isolated(const std::vector<std::string>& genes,
                                       const GeneNetwork& network);

struct PreprocessResult {
  PreprocessModel model;
  ExpressionDataset dataset;          // = apply(model, training data)
  std::vector<std::string> warnings;  // dropped constant genes etc.
};

/// Full training-fold pipeline: scale, robust correlation, top-n_g by
/// |correlation|, drop network-isolated genes.
PreprocessResult fit_preprocess(const ExpressionDataset& train,
                                const GeneNetwork& network,
                                const PreprocessConfig& config = {});

/// Restricts a dataset to the kept genes and scales with the stored training
/// statistics. Throws when a kept gene is missing.
ExpressionDataset apply_preprocess(const PreprocessModel& model,
                                   const ExpressionDataset& ds);

}  // namespace netsig
