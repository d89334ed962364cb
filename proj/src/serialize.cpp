#include "netsig/serialize.hpp"

namespace netsig {

using nlohmann::json;

json matrix_to_json(const Eigen::MatrixXd& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  json j;
  j["rows"] = m.rows();
  j["cols"] = m.cols();
  j["data"] = std::move(rows);
  return j;
}

Eigen::MatrixXd matrix_from_json(const json& j) {
  const Eigen::Index rows = j.at("rows").get<Eigen::Index>();
  const Eigen::Index cols = j.at("cols").get<Eigen::Index>();
  Eigen::MatrixXd m(rows, cols);
  const json& data = j.at("data");
  for (Eigen::Index i = 0; i < rows; ++i) {
    for (Eigen::Index c = 0; c < cols; ++c) {
      m(i, c) = data.at(i).at(c).get<double>();
    }
  }
  return m;
}

json vector_to_json(const Eigen::VectorXd& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v[i]);
  return out;
}

Eigen::VectorXd vector_from_json(const json& j) {
  Eigen::VectorXd v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) {
    v[static_cast<Eigen::Index>(i)] = j.at(i).get<double>();
  }
  return v;
}

void to_json(json& j, const ExpressionDataset& v) {
  j = json{{"sample_ids", v.sample_ids},
           {"gene_ids", v.gene_ids},
           {"values", matrix_to_json(v.values)},
           {"labels", vector_to_json(v.labels)}};
}

void from_json(const json& j, ExpressionDataset& v) {
  v = validate_dataset(matrix_from_json(j.at("values")),
                       j.at("gene_ids").get<std::vector<std::string>>(),
                       j.at("sample_ids").get<std::vector<std::string>>(),
                       vector_from_json(j.at("labels")));
}

void to_json(json& j, const GeneNetwork& v) {
  json edges = json::array();
  for (const auto& [a, b] : v.edges) edges.push_back(json::array({a, b}));
  j = json{{"nodes", v.nodes}, {"edges", std::move(edges)}};
}

void from_json(const json& j, GeneNetwork& v) {
  std::vector<std::pair<std::string, std::string>> edges;
  for (const auto& e : j.at("edges")) {
    edges.emplace_back(e.at(0).get<std::string>(), e.at(1).get<std::string>());
  }
  v = GeneNetwork::from_edges(std::move(edges),
                              j.at("nodes").get<std::vector<std::string>>());
}

void to_json(json& j, const GroupStructure& v) {
  j = json{{"groups", v.groups}, {"column_count", v.column_count}};
}

void from_json(const json& j, GroupStructure& v) {
  v = GroupStructure::create(
      j.at("groups").get<std::vector<std::vector<int>>>(),
      j.at("column_count").get<int>());
}

void to_json(json& j, const LambdaGrid& v) { j = json{{"values", v.values}}; }

void from_json(const json& j, LambdaGrid& v) {
  v = LambdaGrid::create(j.at("values").get<std::vector<double>>());
}

void to_json(json& j, const PathEntry& v) {
  j = json{{"group", v.group},
           {"grid_index", v.grid_index},
           {"norm_at_entry", v.norm_at_entry}};
}

void from_json(const json& j, PathEntry& v) {
  j.at("group").get_to(v.group);
  j.at("grid_index").get_to(v.grid_index);
  j.at("norm_at_entry").get_to(v.norm_at_entry);
}

void to_json(json& j, const SelectionPath& v) {
  j = json{{"grid", v.grid},
           {"active_sets", v.active_sets},
           {"converged", v.converged},
           {"entries", v.entries}};
}

void from_json(const json& j, SelectionPath& v) {
  j.at("grid").get_to(v.grid);
  j.at("active_sets").get_to(v.active_sets);
  j.at("converged").get_to(v.converged);
  j.at("entries").get_to(v.entries);
}

void to_json(json& j, const RankedUnit& v) {
  j = json{{"genes", v.genes}, {"score", v.score}};
}

void from_json(const json& j, RankedUnit& v) {
  j.at("genes").get_to(v.genes);
  j.at("score").get_to(v.score);
}

void to_json(json& j, const Signature& v) {
  j = json{{"ranked_units", v.ranked_units},
           {"genes", v.genes},
           {"truncated", v.truncated}};
}

void from_json(const json& j, Signature& v) {
  j.at("ranked_units").get_to(v.ranked_units);
  j.at("genes").get_to(v.genes);
  j.at("truncated").get_to(v.truncated);
}

void to_json(json& j, const LogisticModel& v) {
  j = json{{"gene_ids", v.gene_ids},
           {"weights", vector_to_json(v.weights)},
           {"intercept", v.intercept},
           {"converged", v.converged}};
}

void from_json(const json& j, LogisticModel& v) {
  j.at("gene_ids").get_to(v.gene_ids);
  v.weights = vector_from_json(j.at("weights"));
  j.at("intercept").get_to(v.intercept);
  j.at("converged").get_to(v.converged);
}

void to_json(json& j, const PreprocessModel& v) {
  j = json{{"kept_gene_ids", v.kept_gene_ids},
           {"means", vector_to_json(v.means)},
           {"stddevs", vector_to_json(v.stddevs)},
           {"retention_count", v.retention_count}};
}

void from_json(const json& j, PreprocessModel& v) {
  j.at("kept_gene_ids").get_to(v.kept_gene_ids);
  v.means = vector_from_json(j.at("means"));
  v.stddevs = vector_from_json(j.at("stddevs"));
  j.at("retention_count").get_to(v.retention_count);
}

void to_json(json& j, const StabilityProfile& v) {
  json counts = json::array();
  for (Eigen::Index g = 0; g < v.counts.rows(); ++g) {
    json row = json::array();
    for (Eigen::Index l = 0; l < v.counts.cols(); ++l) {
      row.push_back(v.counts(g, l));
    }
    counts.push_back(std::move(row));
  }
  j = json{{"grid", v.grid},
           {"counts", std::move(counts)},
           {"ndraw", v.ndraw},
           {"selector_id", v.selector_id}};
}

void from_json(const json& j, StabilityProfile& v) {
  j.at("grid").get_to(v.grid);
  const json& counts = j.at("counts");
  const Eigen::Index rows = static_cast<Eigen::Index>(counts.size());
  const Eigen::Index cols =
      rows == 0 ? 0 : static_cast<Eigen::Index>(counts.at(0).size());
  v.counts.resize(rows, cols);
  for (Eigen::Index g = 0; g < rows; ++g) {
    for (Eigen::Index l = 0; l < cols; ++l) {
      v.counts(g, l) = counts.at(g).at(l).get<int>();
    }
  }
  j.at("ndraw").get_to(v.ndraw);
  j.at("selector_id").get_to(v.selector_id);
  v.pi = v.counts.cast<double>() / v.ndraw;
}

void to_json(json& j, const StabilityScores& v) {
  j = json{{"sg", vector_to_json(v.sg)},
           {"max_prob", vector_to_json(v.max_prob)},
           {"ranking", v.ranking},
           {"rule", score_rule_name(v.rule)}};
}

void from_json(const json& j, StabilityScores& v) {
  v.sg = vector_from_json(j.at("sg"));
  v.max_prob = vector_from_json(j.at("max_prob"));
  j.at("ranking").get_to(v.ranking);
  v.rule = parse_score_rule(j.at("rule").get<std::string>());
}

void to_json(json& j, const SizeCurve& v) {
  j = json{{"size", v.size}, {"per_fold", v.per_fold}, {"mean", v.mean}};
}

void from_json(const json& j, SizeCurve& v) {
  j.at("size").get_to(v.size);
  j.at("per_fold").get_to(v.per_fold);
  j.at("mean").get_to(v.mean);
}

void to_json(json& j, const OverlapCurve& v) {
  json points = json::array();
  for (const auto& [size, overlap] : v.points) {
    points.push_back(json{{"size", size}, {"overlap", overlap}});
  }
  j = json{{"points", std::move(points)}, {"truncated", v.truncated}};
}

void from_json(const json& j, OverlapCurve& v) {
  v.points.clear();
  for (const auto& pt : j.at("points")) {
    v.points.emplace_back(pt.at("size").get<int>(),
                          pt.at("overlap").get<int>());
  }
  j.at("truncated").get_to(v.truncated);
}

void to_json(json& j, const EvaluationReport& v) {
  json fold_overlap = json::object();
  for (const auto& [size, counts] : v.fold_overlap) {
    fold_overlap[std::to_string(size)] = counts;
  }
  json fold_signatures = json::object();
  for (const auto& [size, sigs] : v.fold_signatures) {
    fold_signatures[std::to_string(size)] = sigs;
  }
  j = json{{"method", v.method},
           {"k_folds", v.k_folds},
           {"seed", v.seed},
           {"sizes", v.sizes},
           {"accuracy", v.accuracy},
           {"connectivity", v.connectivity},
           {"fold_overlap", std::move(fold_overlap)},
           {"fold_signatures", std::move(fold_signatures)},
           {"full_data_ranking", v.full_data_ranking},
           {"cross_overlap", v.cross_overlap},
           {"warnings", v.warnings},
           {"metadata", v.metadata}};
}

void from_json(const json& j, EvaluationReport& v) {
  j.at("method").get_to(v.method);
  j.at("k_folds").get_to(v.k_folds);
  j.at("seed").get_to(v.seed);
  j.at("sizes").get_to(v.sizes);
  j.at("accuracy").get_to(v.accuracy);
  j.at("connectivity").get_to(v.connectivity);
  v.fold_overlap.clear();
  for (const auto& [key, counts] : j.at("fold_overlap").items()) {
    v.fold_overlap[std::stoi(key)] = counts.get<std::vector<int>>();
  }
  v.fold_signatures.clear();
  for (const auto& [key, sigs] : j.at("fold_signatures").items()) {
    v.fold_signatures[std::stoi(key)] =
        sigs.get<std::vector<std::vector<std::string>>>();
  }
  j.at("full_data_ranking").get_to(v.full_data_ranking);
  j.at("cross_overlap").get_to(v.cross_overlap);
  j.at("warnings").get_to(v.warnings);
  j.at("metadata").get_to(v.metadata);
}

void to_json(json& j, const GroundTruth& v) {
  j = json{{"support", v.support},
           {"coefficients", vector_to_json(v.coefficients)},
           {"component_genes", v.component_genes}};
}

void from_json(const json& j, GroundTruth& v) {
  j.at("support").get_to(v.support);
  v.coefficients = vector_from_json(j.at("coefficients"));
  j.at("component_genes").get_to(v.component_genes);
}

void to_json(json& j, const SyntheticSpec& v) {
  j = json{{"genes", v.genes},
           {"samples", v.samples},
           {"model", network_model_name(v.model)},
           {"mean_degree", v.mean_degree},
           {"components", v.components},
           {"component_size", v.component_size},
           {"effect_size", v.effect_size},
           {"label_noise", v.label_noise},
           {"within_correlation", v.within_correlation},
           {"seed", v.seed}};
}

void from_json(const json& j, SyntheticSpec& v) {
  j.at("genes").get_to(v.genes);
  j.at("samples").get_to(v.samples);
  v.model = parse_network_model(j.at("model").get<std::string>());
  j.at("mean_degree").get_to(v.mean_degree);
  j.at("components").get_to(v.components);
  j.at("component_size").get_to(v.component_size);
  j.at("effect_size").get_to(v.effect_size);
  j.at("label_noise").get_to(v.label_noise);
  j.at("within_correlation").get_to(v.within_correlation);
  j.at("seed").get_to(v.seed);
}

}  // namespace netsig
