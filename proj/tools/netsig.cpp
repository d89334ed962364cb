#include "netsig/evaluation.hpp"
#include "netsig/io.hpp"
#include "netsig/serialize.hpp"
#include "netsig/stability.hpp"
#include "netsig/synthetic.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

namespace {

using nlohmann::json;
using namespace netsig;

void write_json(const std::string& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << j.dump(2) << '\n';
  if (!out) throw std::runtime_error("failed writing '" + path + "'");
}

json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  return json::parse(in);
}

std::vector<int> parse_sizes(const std::string& csv) {
  std::vector<int> sizes;
  std::stringstream ss(csv);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (!tok.empty()) sizes.push_back(std::stoi(tok));
  }
  if (sizes.empty()) throw std::invalid_argument("no sizes given");
  return sizes;
}

// Flags shared by the pipeline subcommands, bound onto a RunConfig.
struct RunFlags {
  RunConfig cfg;
  std::string sizes_csv;

  void attach(CLI::App* cmd, bool with_method = true) {
    cmd->add_option("--expr", cfg.expression_path, "Expression TSV");
    cmd->add_option("--network", cfg.network_path, "Edge-list TSV");
    cmd->add_option("--out", cfg.output_path, "Output file");
    if (with_method) {
      cmd->add_option("--method", cfg.method,
                      "lasso | lasso+ss | glasso | glasso+ss");
    }
    cmd->add_option("--ng", cfg.ng, "Genes kept by preprocessing");
    cmd->add_option("--outlier-threshold", cfg.outlier_threshold,
                    "Scaled-value outlier cutoff");
    cmd->add_option("--grid-count", cfg.grid_count, "Lambda grid size");
    cmd->add_option("--grid-min-ratio", cfg.grid_min_ratio,
                    "Smallest lambda as a fraction of lambda_max");
    cmd->add_option("--ndraw", cfg.ndraw, "Stability subsample draws");
    cmd->add_option("--seed", cfg.seed, "Master seed");
    cmd->add_option("--stratified", cfg.stratified,
                    "Stratify subsamples by class");
    cmd->add_option("--score-rule", cfg.score_rule, "sg | max_prob");
    cmd->add_option("--sizes", sizes_csv, "Signature sizes, comma separated");
    cmd->add_option("--folds", cfg.folds, "Cross-validation folds");
    cmd->add_option("--threads", cfg.threads,
                    "Worker threads (0: NETSIG_THREADS or hardware)");
    cmd->set_config("--config", "", "Flat key=value config file");
  }

  RunConfig finalize() {
    if (!sizes_csv.empty()) cfg.sizes = parse_sizes(sizes_csv);
    cfg.validate();
    return cfg;
  }
};

ExpressionDataset require_expression(const RunConfig& cfg) {
  if (cfg.expression_path.empty()) {
    throw std::invalid_argument("expression file required (--expr)");
  }
  return load_expression(cfg.expression_path);
}

GeneNetwork require_network(const RunConfig& cfg) {
  if (cfg.network_path.empty()) {
    throw std::invalid_argument("network required (--network)");
  }
  return load_network(cfg.network_path);
}

std::string require_out(const RunConfig& cfg, const char* what) {
  if (cfg.output_path.empty()) {
    throw std::invalid_argument(std::string(what) + " output required (--out)");
  }
  return cfg.output_path;
}

void write_curve_tsv(const std::string& path,
                     const std::vector<SizeCurve>& curves) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << "size\tmean";
  if (!curves.empty()) {
    for (std::size_t f = 0; f < curves.front().per_fold.size(); ++f) {
      out << "\tfold" << f;
    }
  }
  out << '\n';
  for (const auto& c : curves) {
    out << c.size << '\t' << format_value(c.mean);
    for (double v : c.per_fold) out << '\t' << format_value(v);
    out << '\n';
  }
}

int cmd_synth(const SyntheticSpec& spec, const std::string& prefix) {
  const SyntheticData data = generate(spec);
  save_expression(prefix + "_expression.tsv", data.dataset);
  save_network(prefix + "_network.tsv", data.network);
  json truth;
  truth["spec"] = spec;
  truth["truth"] = data.truth;
  write_json(prefix + "_truth.json", truth);
  std::cout << "wrote " << prefix << "_expression.tsv (" << spec.samples
            << " x " << spec.genes << "), " << prefix << "_network.tsv ("
            << data.network.edges.size() << " edges), " << prefix
            << "_truth.json\n";
  return 0;
}

int cmd_preprocess(RunFlags& flags, const std::string& emit_data) {
  const RunConfig cfg = flags.finalize();
  const ExpressionDataset ds = require_expression(cfg);
  const GeneNetwork net = require_network(cfg);
  PreprocessConfig pc;
  pc.retention_count = cfg.ng;
  pc.outlier.threshold = cfg.outlier_threshold;
  const PreprocessResult res = fit_preprocess(ds, net, pc);
  json out;
  out["model"] = res.model;
  out["warnings"] = res.warnings;
  out["kept"] = res.model.kept_gene_ids.size();
  write_json(require_out(cfg, "preprocess model"), out);
  if (!emit_data.empty()) save_expression(emit_data, res.dataset);
  for (const auto& w : res.warnings) std::cerr << "warning: " << w << '\n';
  std::cout << "kept " << res.model.kept_gene_ids.size() << " of "
            << ds.n_genes() << " genes\n";
  return 0;
}

int cmd_select(RunFlags& flags) {
  const RunConfig cfg = flags.finalize();
  const ExpressionDataset ds = require_expression(cfg);
  const GeneNetwork net = require_network(cfg);
  const Method method = parse_method(cfg.method);
  const ExperimentConfig exp = cfg.experiment();

  const PreprocessResult prep = fit_preprocess(ds, net, exp.preprocess);
  const UnitRanking ranking = rank_units(
      prep.dataset, net, method, exp, derive_seed(cfg.seed, "stability-full"));

  json out;
  out["method"] = cfg.method;
  out["seed"] = cfg.seed;
  json per_size = json::object();
  for (int m : exp.sizes) {
    const Signature sig =
        build_signature(ranking.ranked, ranking.groups, ranking.gene_ids, m);
    per_size[std::to_string(m)] = sig;
  }
  out["signatures"] = std::move(per_size);
  const Signature full =
      build_signature(ranking.ranked, ranking.groups, ranking.gene_ids,
                      static_cast<int>(ranking.gene_ids.size()));
  out["full_ranking"] = full.genes;
  write_json(require_out(cfg, "signature"), out);
  std::cout << "ranked " << full.genes.size() << " genes with " << cfg.method
            << '\n';
  return 0;
}

int cmd_stability(RunFlags& flags) {
  const RunConfig cfg = flags.finalize();
  const ExpressionDataset ds = require_expression(cfg);
  const GeneNetwork net = require_network(cfg);
  const Method method = parse_method(cfg.method);
  if (method != Method::lasso_ss && method != Method::glasso_ss) {
    throw std::invalid_argument(
        "stability needs a +ss method (lasso+ss or glasso+ss)");
  }
  const ExperimentConfig exp = cfg.experiment();
  const PreprocessResult prep = fit_preprocess(ds, net, exp.preprocess);

  const Eigen::MatrixXd& X = prep.dataset.values;
  GroupStructure groups;
  std::vector<std::string> unit_ids;
  PathSelector selector;
  if (uses_graph(method)) {
    EdgeGroups eg = edges_to_groups(net, prep.dataset.gene_ids);
    groups = eg.groups;
    unit_ids = eg.kept_gene_ids;
    selector = make_graph_lasso_selector(groups, exp.graph);
  } else {
    groups = singleton_groups(prep.dataset.n_genes());
    unit_ids = prep.dataset.gene_ids;
    selector = make_lasso_selector(groups.group_count(), exp.lasso);
  }
  const double lmax = uses_graph(method)
                          ? group_lambda_max(X, prep.dataset.labels, groups)
                          : lasso_lambda_max(X, prep.dataset.labels);
  const LambdaGrid grid =
      LambdaGrid::log_spaced(lmax, exp.grid_count, exp.grid_min_ratio);

  StabilityOptions opts;
  opts.ndraw = exp.ndraw;
  opts.seed = derive_seed(cfg.seed, "stability-full");
  opts.stratified = exp.stratified;
  opts.threads = exp.threads;
  const StabilityProfile profile = run_stability_selection(
      X, prep.dataset.labels, selector, grid, opts);

  json out;
  out["profile"] = profile;
  out["sg_scores"] = sg_scores(profile);
  out["max_prob_scores"] = max_prob_scores(profile);
  out["unit_gene_ids"] = unit_ids;
  out["groups"] = groups;
  write_json(require_out(cfg, "stability profile"), out);
  std::cout << "profile over " << profile.group_count() << " groups x "
            << grid.size() << " lambdas, ndraw " << profile.ndraw << '\n';
  return 0;
}

int cmd_evaluate(RunFlags& flags) {
  const RunConfig cfg = flags.finalize();
  const ExpressionDataset ds = require_expression(cfg);
  const GeneNetwork net = require_network(cfg);
  const Method method = parse_method(cfg.method);
  const EvaluationReport report =
      run_experiment(ds, net, method, cfg.experiment());
  write_json(require_out(cfg, "report"), report);
  for (const auto& w : report.warnings) std::cerr << "warning: " << w << '\n';
  std::cout << "evaluated " << cfg.method << " over " << report.k_folds
            << " folds";
  if (!report.accuracy.empty()) {
    std::cout << "; balanced accuracy at size " << report.accuracy.back().size
              << ": " << format_value(report.accuracy.back().mean);
  }
  std::cout << '\n';
  return 0;
}

int cmd_report(const std::string& run_path, const std::string& compare_path,
               const std::string& out_dir, const std::string& format,
               const std::string& sizes_csv) {
  if (format != "tsv") {
    throw std::invalid_argument("unsupported report format '" + format + "'");
  }
  const EvaluationReport report = read_json(run_path).get<EvaluationReport>();
  std::filesystem::create_directories(out_dir);
  const auto path = [&](const char* name) {
    return (std::filesystem::path(out_dir) / name).string();
  };

  write_curve_tsv(path("accuracy.tsv"), report.accuracy);
  write_curve_tsv(path("connectivity.tsv"), report.connectivity);
  {
    std::ofstream out(path("fold_overlap.tsv"));
    out << "size";
    for (int c = 1; c <= report.k_folds; ++c) out << "\tin_" << c << "_folds";
    out << '\n';
    for (const auto& [size, counts] : report.fold_overlap) {
      out << size;
      for (int c : counts) out << '\t' << c;
      out << '\n';
    }
  }
  int files = 3;
  if (!compare_path.empty()) {
    const EvaluationReport other =
        read_json(compare_path).get<EvaluationReport>();
    if (report.full_data_ranking.empty() || other.full_data_ranking.empty()) {
      throw std::runtime_error(
          "cross-dataset overlap needs full_data_ranking in both reports");
    }
    const std::vector<int> sizes =
        sizes_csv.empty() ? report.sizes : parse_sizes(sizes_csv);
    const OverlapCurve curve = cross_dataset_overlap(
        report.full_data_ranking, other.full_data_ranking, sizes);
    std::ofstream out(path("cross_overlap.tsv"));
    out << "size\toverlap\n";
    for (const auto& [size, overlap] : curve.points) {
      out << size << '\t' << overlap << '\n';
    }
    if (curve.truncated) {
      std::cerr << "warning: some sizes exceeded a ranking length\n";
    }
    ++files;
  }
  std::cout << "wrote " << files << " curve files to " << out_dir << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"netsig: network-coherent molecular signature selection"};
  app.require_subcommand(1);

  // synth
  SyntheticSpec spec;
  std::string model_name = "regular";
  std::string prefix = "synth";
  CLI::App* synth = app.add_subcommand("synth", "Generate a benchmark dataset");
  synth->add_option("--p", spec.genes, "Genes");
  synth->add_option("--n", spec.samples, "Samples");
  synth->add_option("--model", model_name, "regular | pa");
  synth->add_option("--degree", spec.mean_degree, "Mean degree");
  synth->add_option("--components", spec.components, "Planted components");
  synth->add_option("--comp-size", spec.component_size, "Genes per component");
  synth->add_option("--effect", spec.effect_size, "Coefficient magnitude");
  synth->add_option("--noise", spec.label_noise, "Label flip fraction");
  synth->add_option("--corr", spec.within_correlation,
                    "Within-component feature correlation");
  synth->add_option("--seed", spec.seed, "Seed");
  synth->add_option("--out-prefix", prefix, "Output file prefix");
  synth->set_config("--config", "", "Flat key=value config file");

  RunFlags pre_flags;
  std::string emit_data;
  CLI::App* pre = app.add_subcommand("preprocess", "Fit the gene filter");
  pre_flags.attach(pre, /*with_method=*/false);
  pre->add_option("--emit-data", emit_data, "Also write the filtered TSV");

  RunFlags select_flags;
  CLI::App* select = app.add_subcommand("select", "Rank genes on a dataset");
  select_flags.attach(select);

  RunFlags stab_flags;
  CLI::App* stab = app.add_subcommand("stability",
                                      "Selection-probability profile");
  stab_flags.attach(stab);

  RunFlags eval_flags;
  CLI::App* eval = app.add_subcommand("evaluate",
                                      "Cross-validated benchmark run");
  eval_flags.attach(eval);

  std::string run_path, compare_path, out_dir = "report", format = "tsv";
  std::string report_sizes;
  CLI::App* rep = app.add_subcommand("report", "Emit curve files");
  rep->add_option("--run", run_path, "Report JSON")->required();
  rep->add_option("--compare-run", compare_path,
                  "Second report for cross-dataset overlap");
  rep->add_option("--out-dir", out_dir, "Output directory");
  rep->add_option("--format", format, "Output format (tsv)");
  rep->add_option("--sizes", report_sizes, "Overlap sizes, comma separated");

  CLI11_PARSE(app, argc, argv);

  try {
    if (synth->parsed()) {
      spec.model = parse_network_model(model_name);
      return cmd_synth(spec, prefix);
    }
    if (pre->parsed()) return cmd_preprocess(pre_flags, emit_data);
    if (select->parsed()) return cmd_select(select_flags);
    if (stab->parsed()) return cmd_stability(stab_flags);
    if (eval->parsed()) return cmd_evaluate(eval_flags);
    if (rep->parsed()) {
      return cmd_report(run_path, compare_path, out_dir, format, report_sizes);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}
