#pragma once

#include "netsig/evaluation.hpp"
#include "netsig/types.hpp"

#include <string>
#include <vector>

namespace netsig {

/// Expression TSV: header row "sample <gene ids...> label", one row per
/// sample with the sample id first and the label last. Values are rendered
/// with 9 significant digits, so a load/save cycle is byte-stable after one
/// normalization pass.
ExpressionDataset load_expression(const std::string& path);
void save_expression(const std::string& path, const ExpressionDataset& ds);

/// Two-column edge list; reversed duplicates are merged, self-loops rejected.
/// An empty file yields an empty network.
GeneNetwork load_network(const std::string& path);
void save_network(const std::string& path, const GeneNetwork& network);

/// Decimal rendering used by every TSV writer (9 significant digits).
std::string format_value(double v);

/// CLI-level configuration; one master seed derives every sub-stream.
struct RunConfig {
  std::string method = "glasso+ss";
  int ng = 1500;
  double outlier_threshold = 1.96;
  int grid_count = 50;
  double grid_min_ratio = 1e-3;
  int ndraw = 100;
  std::uint64_t seed = 0;
  bool stratified = true;
  std::string score_rule = "sg";
  std::vector<int> sizes = {10, 20, 30, 40, 50, 60, 70, 80, 90, 100};
  int folds = 5;
  int threads = 0;
  std::string expression_path;
  std::string network_path;
  std::string output_path;

  void validate() const;
  ExperimentConfig experiment() const;
};

}  // namespace netsig
