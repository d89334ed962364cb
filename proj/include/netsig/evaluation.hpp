#pragma once

#include "netsig/preprocess.hpp"
#include "netsig/stability.hpp"
#include "netsig/types.hpp"

#include <map>
#include <string>
#include <vector>

namespace netsig {

/// k folds of sample indices partitioning the dataset; per-fold class ratios
/// match the global ratio within one sample.
struct FoldPlan {
  std::vector<std::vector<int>> folds;
  int k() const { return static_cast<int>(folds.size()); }
};

FoldPlan stratified_kfold(const Eigen::VectorXd& labels, int k,
                          std::uint64_t seed);

struct RefitOptions {
  int max_iter = 200;
  double grad_tol = 1e-8;
};

/// Unpenalized maximum-likelihood logistic fit (Newton with line search).
/// On separable data the iteration cap is hit and the model comes back with
/// converged = false; predictions are still usable.
LogisticModel refit_logistic(const Eigen::MatrixXd& X,
                             const Eigen::VectorXd& y,
                             const RefitOptions& options = {});

/// (sensitivity + specificity) / 2 with +1 as the positive class.
double balanced_accuracy(const Eigen::VectorXd& predictions,
                         const Eigen::VectorXd& labels);

/// Largest connected component of the induced subgraph over the signature
/// genes, divided by the signature size.
double connectivity_score(const std::vector<std::string>& genes,
                          const GeneNetwork& network);

/// counts[c-1] = number of genes present in exactly c of the given fold
/// signatures, for c = 1..k.
std::vector<int> fold_overlap_histogram(
    const std::vector<std::vector<std::string>>& fold_signatures);

struct OverlapCurve {
  std::vector<std::pair<int, int>> points;  // (size, |top-m ∩ top-m|)
  bool truncated = false;  // some size exceeded a ranking length
};

OverlapCurve cross_dataset_overlap(const std::vector<std::string>& ranking_a,
                                   const std::vector<std::string>& ranking_b,
                                   const std::vector<int>& sizes);

enum class Method { lasso, lasso_ss, glasso, glasso_ss };
std::string method_name(Method m);
Method parse_method(const std::string& name);
bool uses_stability(Method m);
bool uses_graph(Method m);

struct ExperimentConfig {
  int k_folds = 5;
  std::uint64_t seed = 0;
  PreprocessConfig preprocess;
  int grid_count = 50;
  double grid_min_ratio = 1e-3;
  int ndraw = 100;
  bool stratified = true;
  ScoreRule score_rule = ScoreRule::sg;
  std::vector<int> sizes = {10, 20, 30, 40, 50, 60, 70, 80, 90, 100};
  int threads = 0;
  bool full_ranking = true;  // also rank genes on the full dataset
  LassoOptions lasso;
  GraphLassoOptions graph;
};

struct SizeCurve {
  int size = 0;
  std::vector<double> per_fold;
  double mean = 0.0;
};

struct EvaluationReport {
  std::string method;
  int k_folds = 0;
  std::uint64_t seed = 0;
  std::vector<int> sizes;
  std::vector<SizeCurve> accuracy;      // balanced accuracy per size
  std::vector<SizeCurve> connectivity;  // connectivity score per size
  // size -> counts[c-1] = genes in exactly c folds
  std::map<int, std::vector<int>> fold_overlap;
  // size -> per-fold signature gene lists
  std::map<int, std::vector<std::vector<std::string>>> fold_signatures;
  std::vector<std::string> full_data_ranking;
  OverlapCurve cross_overlap;  // filled by report comparison, empty otherwise
  std::vector<std::string> warnings;
  std::map<std::string, std::string> metadata;
};

/// Ranked selection units (genes or edges) produced by a method on one
/// preprocessed dataset; the building block for signatures of any size.
struct UnitRanking {
  GroupStructure groups;
  std::vector<std::string> gene_ids;
  std::vector<std::pair<int, double>> ranked;  // non-increasing scores
};

UnitRanking rank_units(const ExpressionDataset& preprocessed,
                       const GeneNetwork& network, Method method,
                       const ExperimentConfig& config,
                       std::uint64_t stability_seed);

/// Per fold: preprocess on the training split, rank genes with the method,
/// truncate to each size, refit an unpenalized logistic model on the training
/// split and score balanced accuracy on the held-out fold. Aggregates
/// connectivity and the fold-overlap histogram per size.
EvaluationReport run_experiment(const ExpressionDataset& dataset,
                                const GeneNetwork& network, Method method,
                                const ExperimentConfig& config = {});

/// Ranked gene list produced by a method on the full dataset (preprocessing
/// included); the basis for cross-dataset overlap curves.
std::vector<std::string> full_data_gene_ranking(
    const ExpressionDataset& dataset, const GeneNetwork& network,
    Method method, const ExperimentConfig& config = {});

}  // namespace netsig
