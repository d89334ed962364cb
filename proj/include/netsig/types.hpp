#pragma once

#include <Eigen/Dense>

#include <string>
#include <utility>
#include <vector>

namespace netsig {

// ---------------------------------------------------------------------------
// Core data types. All of them are immutable after construction by convention
// and safe to share read-only across concurrent solver runs.
// ---------------------------------------------------------------------------

/// Sample-by-gene expression matrix with binary labels in {-1,+1}.
struct ExpressionDataset {
  std::vector<std::string> sample_ids;
  std::vector<std::string> gene_ids;
  Eigen::MatrixXd values;  // n x p
  Eigen::VectorXd labels;  // length n, entries in {-1,+1}

  int n_samples() const { return static_cast<int>(values.rows()); }
  int n_genes() const { return static_cast<int>(values.cols()); }
};

bool operator==(const ExpressionDataset& a, const ExpressionDataset& b);

/// Undirected gene graph. Edges are stored canonically (first < second,
/// sorted, unique); nodes are the sorted set of edge endpoints plus any
/// explicitly added isolated nodes.
struct GeneNetwork {
  std::vector<std::string> nodes;
  std::vector<std::pair<std::string, std::string>> edges;

  // Normalizes edge orientation, dedupes, rejects self-loops.
  static GeneNetwork from_edges(
      std::vector<std::pair<std::string, std::string>> raw_edges,
      std::vector<std::string> extra_nodes = {});

  bool has_node(const std::string& id) const;
};

bool operator==(const GeneNetwork& a, const GeneNetwork& b);

/// Ordered list of index-sets over the columns of a dataset. Every column in
/// [0, column_count) must be covered by at least one group.
struct GroupStructure {
  std::vector<std::vector<int>> groups;  // each sorted, non-empty
  int column_count = 0;

  static GroupStructure create(std::vector<std::vector<int>> groups,
                               int column_count);
  int group_count() const { return static_cast<int>(groups.size()); }
};

bool operator==(const GroupStructure& a, const GroupStructure& b);

/// One singleton group per column: the group structure under which group
/// selection degenerates to per-feature selection.
GroupStructure singleton_groups(int column_count);

/// Strictly decreasing positive regularization grid.
struct LambdaGrid {
  std::vector<double> values;

  static LambdaGrid create(std::vector<double> values);
  // count log-spaced values from lambda_max down to lambda_max * min_ratio.
  static LambdaGrid log_spaced(double lambda_max, int count,
                               double min_ratio = 1e-3);
  int size() const { return static_cast<int>(values.size()); }
};

bool operator==(const LambdaGrid& a, const LambdaGrid& b);

/// First-entry record for one group along a regularization path.
struct PathEntry {
  int group = 0;
  int grid_index = 0;         // position in the grid at first entry
  double norm_at_entry = 0.0;  // coefficient (group) norm at that point
};

bool operator==(const PathEntry& a, const PathEntry& b);

/// Per-lambda active sets plus the ranked entry order. Active sets are not
/// assumed monotone along the grid.
struct SelectionPath {
  LambdaGrid grid;
  std::vector<std::vector<int>> active_sets;  // per grid point, sorted
  std::vector<bool> converged;                // per grid point
  std::vector<PathEntry> entries;             // ranked, see rank_path_entries

  std::vector<int> entry_order() const;
};

bool operator==(const SelectionPath& a, const SelectionPath& b);

/// Orders entries by first grid point of entry; ties broken by larger norm at
/// entry, then by lower group index.
void rank_path_entries(std::vector<PathEntry>& entries);

/// A ranked unit is a gene or an edge together with its selection score.
struct RankedUnit {
  std::vector<std::string> genes;  // size 1 (gene) or 2 (edge)
  double score = 0.0;
};

bool operator==(const RankedUnit& a, const RankedUnit& b);

/// Ranked selection result: the units taken, in score order, and the
/// deduplicated gene set they induce.
struct Signature {
  std::vector<RankedUnit> ranked_units;  // scores non-increasing
  std::vector<std::string> genes;        // order of first appearance
  bool truncated = false;  // ranking exhausted before the requested size
};

bool operator==(const Signature& a, const Signature& b);

/// Takes units from ranked_groups (already sorted by non-increasing score;
/// entries with score <= 0 are never taken) until the induced gene set first
/// reaches `size` genes. Sets `truncated` when the ranking runs out first.
Signature build_signature(
    const std::vector<std::pair<int, double>>& ranked_groups,
    const GroupStructure& groups, const std::vector<std::string>& gene_ids,
    int size);

/// Unpenalized logistic model over a gene subset.
struct LogisticModel {
  std::vector<std::string> gene_ids;  // index-aligned with weights
  Eigen::VectorXd weights;
  double intercept = 0.0;
  bool converged = true;  // false when iteration-capped (e.g. separable data)

  Eigen::VectorXd decision_values(const Eigen::MatrixXd& X) const;
  Eigen::VectorXd predict(const Eigen::MatrixXd& X) const;  // entries +-1
};

bool operator==(const LogisticModel& a, const LogisticModel& b);

// ---------------------------------------------------------------------------
// Operations
// ---------------------------------------------------------------------------

/// Maps a two-valued raw label encoding onto {-1,+1}. Numeric encodings that
/// already equal {-1,+1} are kept as-is; otherwise the lexicographically
/// smaller raw label becomes -1.
Eigen::VectorXd canonicalize_labels(const std::vector<std::string>& raw);

/// Validates and assembles a dataset. Throws std::invalid_argument on
/// non-finite values, duplicate gene ids, labels outside {-1,+1}, or
/// single-class labels.
ExpressionDataset validate_dataset(Eigen::MatrixXd values,
                                   std::vector<std::string> gene_ids,
                                   std::vector<std::string> sample_ids,
                                   Eigen::VectorXd labels);

/// Row-major raw input; rows must be rectangular.
ExpressionDataset validate_dataset_rows(
    const std::vector<std::vector<double>>& rows,
    std::vector<std::string> gene_ids, std::vector<std::string> sample_ids,
    const std::vector<double>& labels);

/// Result of projecting a network onto a retained gene list: one size-2 group
/// per covered edge, indexed against kept_gene_ids (input order preserved).
struct EdgeGroups {
  GroupStructure groups;
  std::vector<std::string> kept_gene_ids;
  std::vector<std::string> removed_gene_ids;  // genes with no covered edge
};

/// Throws std::runtime_error("no covered genes") when no edge survives.
EdgeGroups edges_to_groups(const GeneNetwork& network,
                           const std::vector<std::string>& gene_ids);

// Dataset helpers shared by the fold machinery.
ExpressionDataset subset_rows(const ExpressionDataset& ds,
                              const std::vector<int>& rows);
std::vector<int> column_indices(const ExpressionDataset& ds,
                                const std::vector<std::string>& gene_ids);

}  // namespace netsig
