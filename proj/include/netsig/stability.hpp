#pragma once

#include "netsig/graph_lasso.hpp"
#include "netsig/lasso.hpp"
#include "netsig/rng.hpp"
#include "netsig/types.hpp"

#include <functional>
#include <string>

namespace netsig {

/// Base selector interface for stability selection: anything that maps a
/// (sub)sample to per-lambda active sets over a fixed group universe.
struct PathSelector {
  std::string id;
  int group_count = 0;
  std::function<SelectionPath(const Eigen::MatrixXd&, const Eigen::VectorXd&,
                              const LambdaGrid&)>
      run;
};

PathSelector make_lasso_selector(int n_features,
                                 const LassoOptions& options = {});
PathSelector make_graph_lasso_selector(GroupStructure groups,
                                       const GraphLassoOptions& options = {});

/// floor(n/2) distinct indices, uniform over subsets, sorted.
std::vector<int> half_subsample(int n, Rng& rng);

/// Same size as half_subsample but preserves the class ratio within one
/// sample; always contains both classes.
std::vector<int> stratified_half_subsample(const Eigen::VectorXd& labels,
                                           Rng& rng);

struct StabilityOptions {
  int ndraw = 100;
  std::uint64_t seed = 0;
  bool stratified = true;
  int threads = 0;       // 0: NETSIG_THREADS env / hardware
  int max_redraws = 100; // single-class redraw budget (unstratified only)
};

/// Selection-probability profile over groups x lambda grid. Counts are kept
/// alongside pi so that the 1/ndraw granularity is an exact integer fact.
struct StabilityProfile {
  LambdaGrid grid;
  Eigen::MatrixXi counts;  // group_count x grid size
  Eigen::MatrixXd pi;      // counts / ndraw
  int ndraw = 0;
  std::string selector_id;

  int group_count() const { return static_cast<int>(counts.rows()); }
};

bool operator==(const StabilityProfile& a, const StabilityProfile& b);

/// Repeated half-subsampling: pi[g][l] is the fraction of draws whose active
/// set at grid point l contains group g. Draws are independent given the
/// seed; the reduction over draws is order-independent.
StabilityProfile run_stability_selection(const Eigen::MatrixXd& X,
                                         const Eigen::VectorXd& y,
                                         const PathSelector& selector,
                                         const LambdaGrid& grid,
                                         const StabilityOptions& options = {});

enum class ScoreRule { sg, max_prob };
std::string score_rule_name(ScoreRule rule);
ScoreRule parse_score_rule(const std::string& name);

struct StabilityScores {
  Eigen::VectorXd sg;        // max over lambda of pi / column total
  Eigen::VectorXd max_prob;  // max over lambda of pi
  std::vector<int> ranking;  // by the chosen rule, descending; ties by index
  ScoreRule rule = ScoreRule::sg;
};

/// S_g = max over grid points with positive column total of the normalized
/// selection probability; grid points with zero total are skipped, and a
/// group with nothing to score gets 0.
StabilityScores sg_scores(const StabilityProfile& profile);
StabilityScores max_prob_scores(const StabilityProfile& profile);

/// Takes groups by descending score until the induced gene set first reaches
/// `size` genes. Zero-score groups never enter; if the ranking runs out the
/// signature is returned truncated with the warning flag set.
Signature signature_from_scores(const StabilityScores& scores,
                                const GroupStructure& groups,
                                const std::vector<std::string>& gene_ids,
                                int size);

/// Same construction from a plain regularization path, ranking groups in the
/// order they enter; scores are the entry lambdas.
Signature signature_from_path(const SelectionPath& path,
                              const GroupStructure& groups,
                              const std::vector<std::string>& gene_ids,
                              int size);

}  // namespace netsig
