#include "netsig/preprocess.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

namespace netsig {

namespace {

bool exact_equal(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  if (a.size() != b.size()) return false;
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    if (a[i] != b[i]) return false;
  }
  return true;
}

}  // namespace

bool operator==(const PreprocessModel& a, const PreprocessModel& b) {
  return a.kept_gene_ids == b.kept_gene_ids && exact_equal(a.means, b.means) &&
         exact_equal(a.stddevs, b.stddevs) &&
         a.retention_count == b.retention_count;
}

ScaleResult scale_genes(const ExpressionDataset& ds) {
  const int n = ds.n_samples();
  const int p = ds.n_genes();
  std::vector<int> kept;
  kept.reserve(p);
  std::vector<double> means, sds;
  ScaleResult out;
  for (int j = 0; j < p; ++j) {
    const double mean = ds.values.col(j).mean();
    const double var =
        (ds.values.col(j).array() - mean).square().sum() / n;
    const double sd = std::sqrt(var);
    // Treat numerically constant columns as constant.
    if (sd <= 1e-12 * (std::abs(mean) + 1.0)) {
      out.dropped_constant.push_back(ds.gene_ids[j]);
      continue;
    }
    kept.push_back(j);
    means.push_back(mean);
    sds.push_back(sd);
  }
  const int pk = static_cast<int>(kept.size());
  out.dataset.sample_ids = ds.sample_ids;
  out.dataset.labels = ds.labels;
  out.dataset.values.resize(n, pk);
  out.means.resize(pk);
  out.stddevs.resize(pk);
  for (int k = 0; k < pk; ++k) {
    out.dataset.gene_ids.push_back(ds.gene_ids[kept[k]]);
    out.dataset.values.col(k) =
        (ds.values.col(kept[k]).array() - means[k]) / sds[k];
    out.means[k] = means[k];
    out.stddevs[k] = sds[k];
  }
  return out;
}

double robust_correlation(const Eigen::VectorXd& scaled_column,
                          const Eigen::VectorXd& labels,
                          const OutlierRule& rule) {
  if (scaled_column.size() != labels.size()) {
    throw std::invalid_argument("column/label length mismatch");
  }
  if (!(rule.threshold > 0.0)) {
    throw std::invalid_argument("outlier threshold must be positive");
  }
  double sx = 0.0, sy = 0.0;
  int m = 0;
  for (Eigen::Index i = 0; i < scaled_column.size(); ++i) {
    if (std::abs(scaled_column[i]) > rule.threshold) continue;
    sx += scaled_column[i];
    sy += labels[i];
    ++m;
  }
  if (m < 3) return 0.0;
  const double mx = sx / m, my = sy / m;
  double sxx = 0.0, syy = 0.0, sxy = 0.0;
  for (Eigen::Index i = 0; i < scaled_column.size(); ++i) {
    if (std::abs(scaled_column[i]) > rule.threshold) continue;
    const double dx = scaled_column[i] - mx;
    const double dy = labels[i] - my;
    sxx += dx * dx;
    syy += dy * dy;
    sxy += dx * dy;
  }
  if (sxx <= 0.0 || syy <= 0.0) return 0.0;
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

std::vector<std::string> select_top_correlated(
    const std::vector<std::string>& gene_ids,
    const std::vector<double>& correlations, int retention_count) {
  if (retention_count < 1) {
    throw std::invalid_argument("retention count must be >= 1");
  }
  if (gene_ids.size() != correlations.size()) {
    throw std::invalid_argument("gene/correlation length mismatch");
  }
  std::vector<int> order(gene_ids.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return std::abs(correlations[a]) > std::abs(correlations[b]);
  });
  const int keep = std::min<int>(retention_count,
                                 static_cast<int>(gene_ids.size()));
  std::vector<std::string> out;
  out.reserve(keep);
  for (int k = 0; k < keep; ++k) out.push_back(gene_ids[order[k]]);
  return out;
}

std::vector<std::string> drop_isolated(const std::vector<std::string>& genes,
                                       const GeneNetwork& network) {
  std::unordered_set<std::string> in_list(genes.begin(), genes.end());
  std::unordered_set<std::string> connected;
  for (const auto& [a, b] : network.edges) {
    if (in_list.count(a) && in_list.count(b)) {
      connected.insert(a);
      connected.insert(b);
    }
  }
  std::vector<std::string> out;
  out.reserve(connected.size());
  for (const auto& g : genes) {
    if (connected.count(g)) out.push_back(g);
  }
  if (out.empty()) {
    throw std::runtime_error("empty after connectivity filter");
  }
  return out;
}

PreprocessResult fit_preprocess(const ExpressionDataset& train,
                                const GeneNetwork& network,
                                const PreprocessConfig& config) {
  if (config.retention_count < 1) {
    throw std::invalid_argument("n_g must be >= 1");
  }
  PreprocessResult out;
  ScaleResult scaled = scale_genes(train);
  for (const auto& g : scaled.dropped_constant) {
    out.warnings.push_back("constant gene dropped: " + g);
  }
  if (scaled.dataset.n_genes() == 0) {
    throw std::runtime_error("all genes constant on the training data");
  }

  std::vector<double> corrs(scaled.dataset.n_genes());
  for (int j = 0; j < scaled.dataset.n_genes(); ++j) {
    corrs[j] = robust_correlation(scaled.dataset.values.col(j),
                                  scaled.dataset.labels, config.outlier);
  }
  std::vector<std::string> ranked = select_top_correlated(
      scaled.dataset.gene_ids, corrs, config.retention_count);
  std::vector<std::string> kept = drop_isolated(ranked, network);

  std::unordered_map<std::string, int> scaled_col;
  for (std::size_t j = 0; j < scaled.dataset.gene_ids.size(); ++j) {
    scaled_col.emplace(scaled.dataset.gene_ids[j], static_cast<int>(j));
  }
  PreprocessModel model;
  model.kept_gene_ids = kept;
  model.retention_count = config.retention_count;
  model.means.resize(static_cast<Eigen::Index>(kept.size()));
  model.stddevs.resize(static_cast<Eigen::Index>(kept.size()));
  for (std::size_t k = 0; k < kept.size(); ++k) {
    const int j = scaled_col.at(kept[k]);
    model.means[static_cast<Eigen::Index>(k)] = scaled.means[j];
    model.stddevs[static_cast<Eigen::Index>(k)] = scaled.stddevs[j];
  }
  out.dataset = apply_preprocess(model, train);
  out.model = std::move(model);
  return out;
}

ExpressionDataset apply_preprocess(const PreprocessModel& model,
                                   const ExpressionDataset& ds) {
  const std::vector<int> cols = column_indices(ds, model.kept_gene_ids);
  ExpressionDataset out;
  out.sample_ids = ds.sample_ids;
  out.labels = ds.labels;
  out.gene_ids = model.kept_gene_ids;
  out.values.resize(ds.n_samples(),
                    static_cast<Eigen::Index>(cols.size()));
  for (std::size_t k = 0; k < cols.size(); ++k) {
    const auto kk = static_cast<Eigen::Index>(k);
    out.values.col(kk) =
        (ds.values.col(cols[k]).array() - model.means[kk]) /
        model.stddevs[kk];
  }
  return out;
}

}  // namespace netsig
