#include "netsig/types.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <set>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

namespace netsig {

namespace {

bool exact_equal(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
  for (Eigen::Index j = 0; j < a.cols(); ++j) {
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
      if (a(i, j) != b(i, j)) return false;
    }
  }
  return true;
}

bool exact_equal(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  if (a.size() != b.size()) return false;
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    if (a[i] != b[i]) return false;
  }
  return true;
}

bool parse_number(const std::string& s, double& out) {
  const char* begin = s.data();
  const char* end = begin + s.size();
  if (begin != end && *begin == '+') ++begin;  // from_chars rejects '+'
  auto [ptr, ec] = std::from_chars(begin, end, out);
  return ec == std::errc{} && ptr == end && begin != end;
}

}  // namespace

bool operator==(const ExpressionDataset& a, const ExpressionDataset& b) {
  return a.sample_ids == b.sample_ids && a.gene_ids == b.gene_ids &&
         exact_equal(a.values, b.values) && exact_equal(a.labels, b.labels);
}

bool operator==(const GeneNetwork& a, const GeneNetwork& b) {
  return a.nodes == b.nodes && a.edges == b.edges;
}

bool operator==(const GroupStructure& a, const GroupStructure& b) {
  return a.column_count == b.column_count && a.groups == b.groups;
}

bool operator==(const LambdaGrid& a, const LambdaGrid& b) {
  if (a.values.size() != b.values.size()) return false;
  for (std::size_t i = 0; i < a.values.size(); ++i) {
    if (a.values[i] != b.values[i]) return false;
  }
  return true;
}

bool operator==(const PathEntry& a, const PathEntry& b) {
  return a.group == b.group && a.grid_index == b.grid_index &&
         a.norm_at_entry == b.norm_at_entry;
}

bool operator==(const SelectionPath& a, const SelectionPath& b) {
  return a.grid == b.grid && a.active_sets == b.active_sets &&
         a.converged == b.converged && a.entries == b.entries;
}

bool operator==(const RankedUnit& a, const RankedUnit& b) {
  return a.genes == b.genes && a.score == b.score;
}

bool operator==(const Signature& a, const Signature& b) {
  return a.ranked_units == b.ranked_units && a.genes == b.genes &&
         a.truncated == b.truncated;
}

bool operator==(const LogisticModel& a, const LogisticModel& b) {
  return a.gene_ids == b.gene_ids && exact_equal(a.weights, b.weights) &&
         a.intercept == b.intercept && a.converged == b.converged;
}

GeneNetwork GeneNetwork::from_edges(
    std::vector<std::pair<std::string, std::string>> raw_edges,
    std::vector<std::string> extra_nodes) {
  std::set<std::pair<std::string, std::string>> canon;
  std::set<std::string> node_set(extra_nodes.begin(), extra_nodes.end());
  for (auto& e : raw_edges) {
    if (e.first == e.second) {
      throw std::invalid_argument("self-loop on node '" + e.first + "'");
    }
    if (e.second < e.first) std::swap(e.first, e.second);
    canon.insert(e);
    node_set.insert(e.first);
    node_set.insert(e.second);
  }
  GeneNetwork net;
  net.edges.assign(canon.begin(), canon.end());
  net.nodes.assign(node_set.begin(), node_set.end());
  return net;
}

bool GeneNetwork::has_node(const std::string& id) const {
  return std::binary_search(nodes.begin(), nodes.end(), id);
}

GroupStructure GroupStructure::create(std::vector<std::vector<int>> groups,
                                      int column_count) {
  if (column_count <= 0) {
    throw std::invalid_argument("group structure needs a positive column count");
  }
  std::vector<bool> covered(column_count, false);
  for (auto& g : groups) {
    if (g.empty()) throw std::invalid_argument("empty group");
    std::sort(g.begin(), g.end());
    for (int idx : g) {
      if (idx < 0 || idx >= column_count) {
        throw std::invalid_argument("group index out of range");
      }
      covered[idx] = true;
    }
  }
  for (int j = 0; j < column_count; ++j) {
    if (!covered[j]) {
      throw std::invalid_argument(
          "column " + std::to_string(j) +
          " not covered by any group; drop it upstream");
    }
  }
  GroupStructure gs;
  gs.groups = std::move(groups);
  gs.column_count = column_count;
  return gs;
}

GroupStructure singleton_groups(int column_count) {
  std::vector<std::vector<int>> groups(column_count);
  for (int j = 0; j < column_count; ++j) groups[j] = {j};
  return GroupStructure::create(std::move(groups), column_count);
}

LambdaGrid LambdaGrid::create(std::vector<double> values) {
  if (values.empty()) throw std::invalid_argument("empty lambda grid");
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!(values[i] > 0.0) || !std::isfinite(values[i])) {
      throw std::invalid_argument("lambda grid values must be positive");
    }
    if (i > 0 && !(values[i] < values[i - 1])) {
      throw std::invalid_argument("lambda grid must be strictly decreasing");
    }
  }
  LambdaGrid grid;
  grid.values = std::move(values);
  return grid;
}

LambdaGrid LambdaGrid::log_spaced(double lambda_max, int count,
                                  double min_ratio) {
  if (!(lambda_max > 0.0) || !std::isfinite(lambda_max)) {
    throw std::invalid_argument("lambda_max must be positive");
  }
  if (count < 1) throw std::invalid_argument("grid count must be >= 1");
  if (!(min_ratio > 0.0) || !(min_ratio < 1.0)) {
    throw std::invalid_argument("grid min_ratio must lie in (0,1)");
  }
  std::vector<double> v(count);
  if (count == 1) {
    v[0] = lambda_max;
  } else {
    const double step = std::log(min_ratio) / (count - 1);
    for (int i = 0; i < count; ++i) v[i] = lambda_max * std::exp(step * i);
    v[0] = lambda_max;  // exact endpoint
  }
  return create(std::move(v));
}

std::vector<int> SelectionPath::entry_order() const {
  std::vector<int> order;
  order.reserve(entries.size());
  for (const auto& e : entries) order.push_back(e.group);
  return order;
}

void rank_path_entries(std::vector<PathEntry>& entries) {
  std::sort(entries.begin(), entries.end(),
            [](const PathEntry& a, const PathEntry& b) {
              if (a.grid_index != b.grid_index) {
                return a.grid_index < b.grid_index;
              }
              if (a.norm_at_entry != b.norm_at_entry) {
                return a.norm_at_entry > b.norm_at_entry;
              }
              return a.group < b.group;
            });
}

Signature build_signature(
    const std::vector<std::pair<int, double>>& ranked_groups,
    const GroupStructure& groups, const std::vector<std::string>& gene_ids,
    int size) {
  if (size < 1) {
    throw std::invalid_argument("signature size must be >= 1 (empty signature)");
  }
  if (static_cast<int>(gene_ids.size()) != groups.column_count) {
    throw std::invalid_argument("gene ids do not match group columns");
  }
  Signature sig;
  std::unordered_set<std::string> seen;
  for (const auto& [g, score] : ranked_groups) {
    if (static_cast<int>(sig.genes.size()) >= size) break;
    if (!(score > 0.0)) continue;  // zero-score groups never enter
    if (g < 0 || g >= groups.group_count()) {
      throw std::invalid_argument("ranked group index out of range");
    }
    RankedUnit unit;
    unit.score = score;
    for (int col : groups.groups[g]) {
      unit.genes.push_back(gene_ids[col]);
      if (seen.insert(gene_ids[col]).second) {
        sig.genes.push_back(gene_ids[col]);
      }
    }
    sig.ranked_units.push_back(std::move(unit));
  }
  sig.truncated = static_cast<int>(sig.genes.size()) < size;
  return sig;
}

Eigen::VectorXd LogisticModel::decision_values(const Eigen::MatrixXd& X) const {
  if (X.cols() != weights.size()) {
    throw std::invalid_argument("model/data dimension mismatch");
  }
  return (X * weights).array() + intercept;
}

Eigen::VectorXd LogisticModel::predict(const Eigen::MatrixXd& X) const {
  Eigen::VectorXd f = decision_values(X);
  for (Eigen::Index i = 0; i < f.size(); ++i) f[i] = f[i] >= 0.0 ? 1.0 : -1.0;
  return f;
}

Eigen::VectorXd canonicalize_labels(const std::vector<std::string>& raw) {
  if (raw.empty()) throw std::invalid_argument("no labels");
  std::set<std::string> distinct(raw.begin(), raw.end());
  if (distinct.size() == 1) {
    throw std::invalid_argument("single class labels");
  }
  if (distinct.size() > 2) {
    throw std::invalid_argument("more than two label values");
  }
  const std::string lo = *distinct.begin();
  const std::string hi = *std::next(distinct.begin());

  // Already-canonical numeric encodings keep their signs.
  double lo_num = 0.0, hi_num = 0.0;
  std::string neg = lo;
  if (parse_number(lo, lo_num) && parse_number(hi, hi_num)) {
    if ((lo_num == -1.0 && hi_num == 1.0)) neg = lo;
    if ((lo_num == 1.0 && hi_num == -1.0)) neg = hi;
  }

  Eigen::VectorXd labels(static_cast<Eigen::Index>(raw.size()));
  for (std::size_t i = 0; i < raw.size(); ++i) {
    labels[static_cast<Eigen::Index>(i)] = raw[i] == neg ? -1.0 : 1.0;
  }
  return labels;
}

ExpressionDataset validate_dataset(Eigen::MatrixXd values,
                                   std::vector<std::string> gene_ids,
                                   std::vector<std::string> sample_ids,
                                   Eigen::VectorXd labels) {
  const int n = static_cast<int>(values.rows());
  const int p = static_cast<int>(values.cols());
  if (static_cast<int>(gene_ids.size()) != p) {
    throw std::invalid_argument("gene id count does not match columns");
  }
  if (static_cast<int>(sample_ids.size()) != n) {
    throw std::invalid_argument("sample id count does not match rows");
  }
  if (labels.size() != n) {
    throw std::invalid_argument("label count does not match rows");
  }
  if (!values.allFinite()) {
    throw std::invalid_argument("non-finite value in expression matrix");
  }
  {
    std::unordered_set<std::string> seen;
    for (const auto& id : gene_ids) {
      if (!seen.insert(id).second) {
        throw std::invalid_argument("duplicate gene id '" + id + "'");
      }
    }
  }
  {
    std::unordered_set<std::string> seen;
    for (const auto& id : sample_ids) {
      if (!seen.insert(id).second) {
        throw std::invalid_argument("duplicate sample id '" + id + "'");
      }
    }
  }
  int pos = 0, neg = 0;
  for (int i = 0; i < n; ++i) {
    if (labels[i] == 1.0) {
      ++pos;
    } else if (labels[i] == -1.0) {
      ++neg;
    } else {
      throw std::invalid_argument("label not in {-1,+1}");
    }
  }
  if (pos == 0 || neg == 0) {
    throw std::invalid_argument("single class labels");
  }
  ExpressionDataset ds;
  ds.sample_ids = std::move(sample_ids);
  ds.gene_ids = std::move(gene_ids);
  ds.values = std::move(values);
  ds.labels = std::move(labels);
  return ds;
}

ExpressionDataset validate_dataset_rows(
    const std::vector<std::vector<double>>& rows,
    std::vector<std::string> gene_ids, std::vector<std::string> sample_ids,
    const std::vector<double>& labels) {
  if (rows.empty()) throw std::invalid_argument("no rows");
  const std::size_t p = rows.front().size();
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != p) {
      throw std::invalid_argument("ragged row " + std::to_string(i));
    }
  }
  Eigen::MatrixXd values(rows.size(), p);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < p; ++j) {
      values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          rows[i][j];
    }
  }
  Eigen::VectorXd y(static_cast<Eigen::Index>(labels.size()));
  for (std::size_t i = 0; i < labels.size(); ++i) {
    y[static_cast<Eigen::Index>(i)] = labels[i];
  }
  return validate_dataset(std::move(values), std::move(gene_ids),
                          std::move(sample_ids), std::move(y));
}

EdgeGroups edges_to_groups(const GeneNetwork& network,
                           const std::vector<std::string>& gene_ids) {
  std::unordered_map<std::string, int> col;
  col.reserve(gene_ids.size());
  for (std::size_t j = 0; j < gene_ids.size(); ++j) {
    col.emplace(gene_ids[j], static_cast<int>(j));
  }

  std::vector<std::pair<int, int>> edge_cols;
  std::vector<bool> covered(gene_ids.size(), false);
  for (const auto& [a, b] : network.edges) {
    auto ia = col.find(a);
    auto ib = col.find(b);
    if (ia == col.end() || ib == col.end()) continue;
    int u = ia->second, v = ib->second;
    if (v < u) std::swap(u, v);
    edge_cols.emplace_back(u, v);
    covered[u] = covered[v] = true;
  }
  if (edge_cols.empty()) {
    throw std::runtime_error("no covered genes: no network edge survives");
  }
  std::sort(edge_cols.begin(), edge_cols.end());

  EdgeGroups out;
  std::vector<int> new_index(gene_ids.size(), -1);
  for (std::size_t j = 0; j < gene_ids.size(); ++j) {
    if (covered[j]) {
      new_index[j] = static_cast<int>(out.kept_gene_ids.size());
      out.kept_gene_ids.push_back(gene_ids[j]);
    } else {
      out.removed_gene_ids.push_back(gene_ids[j]);
    }
  }
  std::vector<std::vector<int>> groups;
  groups.reserve(edge_cols.size());
  for (const auto& [u, v] : edge_cols) {
    groups.push_back({new_index[u], new_index[v]});
  }
  out.groups = GroupStructure::create(
      std::move(groups), static_cast<int>(out.kept_gene_ids.size()));
  return out;
}

ExpressionDataset subset_rows(const ExpressionDataset& ds,
                              const std::vector<int>& rows) {
  ExpressionDataset out;
  out.gene_ids = ds.gene_ids;
  out.sample_ids.reserve(rows.size());
  out.values.resize(static_cast<Eigen::Index>(rows.size()), ds.values.cols());
  out.labels.resize(static_cast<Eigen::Index>(rows.size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const int r = rows[i];
    if (r < 0 || r >= ds.n_samples()) {
      throw std::invalid_argument("row index out of range");
    }
    out.sample_ids.push_back(ds.sample_ids[r]);
    out.values.row(static_cast<Eigen::Index>(i)) = ds.values.row(r);
    out.labels[static_cast<Eigen::Index>(i)] = ds.labels[r];
  }
  return out;
}

std::vector<int> column_indices(const ExpressionDataset& ds,
                                const std::vector<std::string>& gene_ids) {
  std::unordered_map<std::string, int> col;
  col.reserve(ds.gene_ids.size());
  for (std::size_t j = 0; j < ds.gene_ids.size(); ++j) {
    col.emplace(ds.gene_ids[j], static_cast<int>(j));
  }
  std::vector<int> out;
  out.reserve(gene_ids.size());
  for (const auto& id : gene_ids) {
    auto it = col.find(id);
    if (it == col.end()) {
      throw std::invalid_argument("missing gene id '" + id + "'");
    }
    out.push_back(it->second);
  }
  return out;
}

}  // namespace netsig
