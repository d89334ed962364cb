#include "netsig/io.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

namespace netsig {

namespace {

std::vector<std::string> split_tabs(const std::string& line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (;;) {
    const std::size_t tab = line.find('\t', start);
    if (tab == std::string::npos) {
      out.push_back(line.substr(start));
      return out;
    }
    out.push_back(line.substr(start, tab - start));
    start = tab + 1;
  }
}

std::vector<std::string> split_whitespace(const std::string& line) {
  std::vector<std::string> out;
  std::istringstream ss(line);
  std::string tok;
  while (ss >> tok) out.push_back(tok);
  return out;
}

double parse_value(const std::string& tok, int line_no) {
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc{} || ptr != tok.data() + tok.size()) {
    throw std::runtime_error("line " + std::to_string(line_no) +
                             ": cannot parse value '" + tok + "'");
  }
  return v;
}

std::string strip_cr(std::string line) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
  return line;
}

}  // namespace

std::string format_value(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.9g", v);
  return buf;
}

ExpressionDataset load_expression(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  std::string line;
  if (!std::getline(in, line)) {
    throw std::runtime_error("empty expression file '" + path + "'");
  }
  const std::vector<std::string> header = split_tabs(strip_cr(line));
  if (header.size() < 3 || header.back() != "label") {
    throw std::runtime_error("no label column in '" + path + "'");
  }
  const std::size_t p = header.size() - 2;  // sample col + genes + label
  std::vector<std::string> gene_ids(header.begin() + 1, header.end() - 1);

  std::vector<std::string> sample_ids;
  std::vector<std::string> raw_labels;
  std::vector<std::vector<double>> rows;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    line = strip_cr(line);
    if (line.empty()) continue;
    const std::vector<std::string> fields = split_tabs(line);
    if (fields.size() != p + 2) {
      throw std::runtime_error("line " + std::to_string(line_no) +
                               ": expected " + std::to_string(p + 2) +
                               " fields, got " +
                               std::to_string(fields.size()));
    }
    sample_ids.push_back(fields.front());
    std::vector<double> row(p);
    for (std::size_t j = 0; j < p; ++j) {
      row[j] = parse_value(fields[j + 1], line_no);
    }
    rows.push_back(std::move(row));
    raw_labels.push_back(fields.back());
  }
  if (rows.empty()) {
    throw std::runtime_error("no samples in '" + path + "'");
  }
  Eigen::MatrixXd values(rows.size(), p);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < p; ++j) {
      values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          rows[i][j];
    }
  }
  return validate_dataset(std::move(values), std::move(gene_ids),
                          std::move(sample_ids), canonicalize_labels(raw_labels));
}

void save_expression(const std::string& path, const ExpressionDataset& ds) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << "sample";
  for (const auto& g : ds.gene_ids) out << '\t' << g;
  out << "\tlabel\n";
  for (int i = 0; i < ds.n_samples(); ++i) {
    out << ds.sample_ids[i];
    for (int j = 0; j < ds.n_genes(); ++j) {
      out << '\t' << format_value(ds.values(i, j));
    }
    out << '\t' << format_value(ds.labels[i]) << '\n';
  }
  if (!out) throw std::runtime_error("failed writing '" + path + "'");
}

GeneNetwork load_network(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  std::vector<std::pair<std::string, std::string>> edges;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    line = strip_cr(line);
    if (line.empty()) continue;
    const std::vector<std::string> fields = split_whitespace(line);
    if (fields.size() != 2) {
      throw std::runtime_error("line " + std::to_string(line_no) +
                               ": expected two columns");
    }
    if (fields[0] == fields[1]) {
      throw std::runtime_error("line " + std::to_string(line_no) +
                               ": self-loop on '" + fields[0] + "'");
    }
    edges.emplace_back(fields[0], fields[1]);
  }
  return GeneNetwork::from_edges(std::move(edges));
}

void save_network(const std::string& path, const GeneNetwork& network) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  for (const auto& [a, b] : network.edges) out << a << '\t' << b << '\n';
  if (!out) throw std::runtime_error("failed writing '" + path + "'");
}

void RunConfig::validate() const {
  parse_method(method);
  parse_score_rule(score_rule);
  if (ng < 1) throw std::invalid_argument("ng must be >= 1");
  if (!(outlier_threshold > 0.0)) {
    throw std::invalid_argument("outlier_threshold must be positive");
  }
  if (grid_count < 1) throw std::invalid_argument("grid_count must be >= 1");
  if (!(grid_min_ratio > 0.0) || !(grid_min_ratio < 1.0)) {
    throw std::invalid_argument("grid_min_ratio must lie in (0,1)");
  }
  if (ndraw < 2) throw std::invalid_argument("ndraw must be >= 2");
  if (folds < 2) throw std::invalid_argument("folds must be >= 2");
  if (sizes.empty()) throw std::invalid_argument("sizes must be non-empty");
  for (int m : sizes) {
    if (m < 1) throw std::invalid_argument("sizes must be >= 1");
  }
  std::set<std::string> paths;
  for (const std::string& p : {expression_path, network_path, output_path}) {
    if (p.empty()) continue;
    if (!paths.insert(p).second) {
      throw std::invalid_argument("paths must be distinct: '" + p + "'");
    }
  }
}

ExperimentConfig RunConfig::experiment() const {
  validate();
  ExperimentConfig cfg;
  cfg.k_folds = folds;
  cfg.seed = seed;
  cfg.preprocess.retention_count = ng;
  cfg.preprocess.outlier.threshold = outlier_threshold;
  cfg.grid_count = grid_count;
  cfg.grid_min_ratio = grid_min_ratio;
  cfg.ndraw = ndraw;
  cfg.stratified = stratified;
  cfg.score_rule = parse_score_rule(score_rule);
  cfg.sizes = sizes;
  cfg.threads = threads;
  return cfg;
}

}  // namespace netsig
