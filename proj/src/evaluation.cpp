#include "netsig/evaluation.hpp"

#include "netsig/rng.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

namespace netsig {

FoldPlan stratified_kfold(const Eigen::VectorXd& labels, int k,
                          std::uint64_t seed) {
  if (k < 2) throw std::invalid_argument("need at least 2 folds");
  std::vector<int> pos, neg;
  for (Eigen::Index i = 0; i < labels.size(); ++i) {
    if (labels[i] == 1.0) {
      pos.push_back(static_cast<int>(i));
    } else if (labels[i] == -1.0) {
      neg.push_back(static_cast<int>(i));
    } else {
      throw std::invalid_argument("label not in {-1,+1}");
    }
  }
  if (static_cast<int>(pos.size()) < k || static_cast<int>(neg.size()) < k) {
    throw std::invalid_argument("class smaller than k");
  }
  Rng rng(derive_seed(seed, "kfold"));
  shuffle(rng, pos);
  shuffle(rng, neg);

  FoldPlan plan;
  plan.folds.resize(k);
  for (std::size_t i = 0; i < pos.size(); ++i) {
    plan.folds[i % k].push_back(pos[i]);
  }
  // Offset the second class so remainders do not pile up in fold 0.
  const int offset = static_cast<int>(pos.size()) % k;
  for (std::size_t i = 0; i < neg.size(); ++i) {
    plan.folds[(i + offset) % k].push_back(neg[i]);
  }
  for (auto& fold : plan.folds) std::sort(fold.begin(), fold.end());
  return plan;
}

LogisticModel refit_logistic(const Eigen::MatrixXd& X,
                             const Eigen::VectorXd& y,
                             const RefitOptions& options) {
  const int n = static_cast<int>(X.rows());
  const int p = static_cast<int>(X.cols());
  if (p < 1) throw std::invalid_argument("empty signature");
  if (n != y.size()) throw std::invalid_argument("X/y size mismatch");

  Eigen::VectorXd w = Eigen::VectorXd::Zero(p);
  double b = intercept_only_optimum(y);
  const double inv_n = 1.0 / n;

  auto loss_at = [&](const Eigen::VectorXd& wt, double bt) {
    return mean_logistic_loss(X, y, wt, bt);
  };

  double gnorm = 0.0;
  for (int iter = 0; iter < options.max_iter; ++iter) {
    const Eigen::VectorXd f = (X * w).array() + b;
    const Eigen::VectorXd margins = y.array() * f.array();
    const Eigen::VectorXd q =
        (1.0 + margins.array().exp()).inverse();  // sigma(-margin)
    const Eigen::VectorXd yq = y.array() * q.array();
    Eigen::VectorXd grad(p + 1);
    grad.head(p) = -(X.transpose() * yq) * inv_n;
    grad[p] = -yq.sum() * inv_n;
    gnorm = grad.norm();
    if (gnorm <= options.grad_tol) break;

    // Newton direction with the logistic Hessian; fall back to the gradient
    // when the system is degenerate.
    const Eigen::VectorXd s = q.array() * (1.0 - q.array());
    Eigen::MatrixXd H(p + 1, p + 1);
    const Eigen::MatrixXd Xs = X.array().colwise() * s.array();
    H.topLeftCorner(p, p) = (X.transpose() * Xs) * inv_n;
    H.topRightCorner(p, 1) = Xs.colwise().sum().transpose() * inv_n;
    H.bottomLeftCorner(1, p) = H.topRightCorner(p, 1).transpose();
    H(p, p) = s.sum() * inv_n;
    H.diagonal().array() += 1e-12;

    Eigen::VectorXd step = H.ldlt().solve(grad);
    if (!step.allFinite() || grad.dot(step) <= 0.0) step = grad;

    const double base = loss_at(w, b);
    const double slope = grad.dot(step);
    double t = 1.0;
    bool moved = false;
    for (int ls = 0; ls < 60; ++ls) {
      const Eigen::VectorXd w_try = w - t * step.head(p);
      const double b_try = b - t * step[p];
      if (loss_at(w_try, b_try) <= base - 1e-4 * t * slope) {
        w = w_try;
        b = b_try;
        moved = true;
        break;
      }
      t *= 0.5;
    }
    if (!moved) break;
  }

  LogisticModel model;
  model.weights = w;
  model.intercept = b;
  const Eigen::VectorXd g_final = logistic_gradient(X, y, w, b);
  const double gb_final = logistic_intercept_gradient(X, y, w, b);
  // Perfectly separated training data has no finite optimum: the gradient
  // vanishes along a diverging weight path, so a small gradient alone is not
  // enough evidence of convergence.
  const Eigen::VectorXd margins = y.array() * ((X * w).array() + b);
  const bool separated = (margins.array() > 0.0).all();
  model.converged =
      !separated &&
      std::sqrt(g_final.squaredNorm() + gb_final * gb_final) <= 1e-6;
  return model;
}

double balanced_accuracy(const Eigen::VectorXd& predictions,
                         const Eigen::VectorXd& labels) {
  if (predictions.size() != labels.size()) {
    throw std::invalid_argument("prediction/label size mismatch");
  }
  int tp = 0, fn = 0, tn = 0, fp = 0;
  for (Eigen::Index i = 0; i < labels.size(); ++i) {
    if (labels[i] != 1.0 && labels[i] != -1.0) {
      throw std::invalid_argument("label not in {-1,+1}");
    }
    if (predictions[i] != 1.0 && predictions[i] != -1.0) {
      throw std::invalid_argument("prediction not in {-1,+1}");
    }
    if (labels[i] == 1.0) {
      (predictions[i] == 1.0 ? tp : fn)++;
    } else {
      (predictions[i] == -1.0 ? tn : fp)++;
    }
  }
  if (tp + fn == 0 || tn + fp == 0) {
    throw std::invalid_argument("single class labels");
  }
  const double sensitivity = static_cast<double>(tp) / (tp + fn);
  const double specificity = static_cast<double>(tn) / (tn + fp);
  return 0.5 * (sensitivity + specificity);
}

namespace {

int find_root(std::vector<int>& parent, int x) {
  while (parent[x] != x) {
    parent[x] = parent[parent[x]];
    x = parent[x];
  }
  return x;
}

}  // namespace

double connectivity_score(const std::vector<std::string>& genes,
                          const GeneNetwork& network) {
  std::unordered_map<std::string, int> index;
  for (const auto& g : genes) index.emplace(g, static_cast<int>(index.size()));
  const int m = static_cast<int>(index.size());
  if (m == 0) throw std::invalid_argument("empty signature");

  std::vector<int> parent(m);
  std::iota(parent.begin(), parent.end(), 0);
  for (const auto& [a, b] : network.edges) {
    auto ia = index.find(a);
    auto ib = index.find(b);
    if (ia == index.end() || ib == index.end()) continue;
    const int ra = find_root(parent, ia->second);
    const int rb = find_root(parent, ib->second);
    if (ra != rb) parent[ra] = rb;
  }
  std::vector<int> size(m, 0);
  int largest = 0;
  for (int i = 0; i < m; ++i) {
    largest = std::max(largest, ++size[find_root(parent, i)]);
  }
  return static_cast<double>(largest) / m;
}

std::vector<int> fold_overlap_histogram(
    const std::vector<std::vector<std::string>>& fold_signatures) {
  const int k = static_cast<int>(fold_signatures.size());
  if (k < 2) throw std::invalid_argument("need at least 2 fold signatures");
  std::unordered_map<std::string, int> multiplicity;
  for (const auto& sig : fold_signatures) {
    std::unordered_set<std::string> unique(sig.begin(), sig.end());
    for (const auto& g : unique) multiplicity[g]++;
  }
  std::vector<int> counts(k, 0);
  for (const auto& [gene, c] : multiplicity) counts[c - 1]++;
  return counts;
}

OverlapCurve cross_dataset_overlap(const std::vector<std::string>& ranking_a,
                                   const std::vector<std::string>& ranking_b,
                                   const std::vector<int>& sizes) {
  OverlapCurve curve;
  for (int m : sizes) {
    if (m < 1) throw std::invalid_argument("overlap size must be >= 1");
    const int ma = std::min<int>(m, static_cast<int>(ranking_a.size()));
    const int mb = std::min<int>(m, static_cast<int>(ranking_b.size()));
    if (ma < m || mb < m) curve.truncated = true;
    std::unordered_set<std::string> top_a(ranking_a.begin(),
                                          ranking_a.begin() + ma);
    int overlap = 0;
    for (int i = 0; i < mb; ++i) {
      if (top_a.count(ranking_b[i])) ++overlap;
    }
    curve.points.emplace_back(m, overlap);
  }
  return curve;
}

std::string method_name(Method m) {
  switch (m) {
    case Method::lasso: return "lasso";
    case Method::lasso_ss: return "lasso+ss";
    case Method::glasso: return "glasso";
    case Method::glasso_ss: return "glasso+ss";
  }
  throw std::logic_error("bad method");
}

Method parse_method(const std::string& name) {
  if (name == "lasso") return Method::lasso;
  if (name == "lasso+ss") return Method::lasso_ss;
  if (name == "glasso") return Method::glasso;
  if (name == "glasso+ss") return Method::glasso_ss;
  throw std::invalid_argument("unknown method '" + name + "'");
}

bool uses_stability(Method m) {
  return m == Method::lasso_ss || m == Method::glasso_ss;
}

bool uses_graph(Method m) {
  return m == Method::glasso || m == Method::glasso_ss;
}

UnitRanking rank_units(const ExpressionDataset& prep,
                       const GeneNetwork& network, Method method,
                       const ExperimentConfig& config,
                       std::uint64_t stability_seed) {
  UnitRanking out;
  Eigen::MatrixXd X;
  if (uses_graph(method)) {
    EdgeGroups eg = edges_to_groups(network, prep.gene_ids);
    out.groups = std::move(eg.groups);
    out.gene_ids = std::move(eg.kept_gene_ids);
    if (eg.removed_gene_ids.empty()) {
      X = prep.values;
    } else {
      const std::vector<int> cols = column_indices(prep, out.gene_ids);
      X.resize(prep.values.rows(), static_cast<Eigen::Index>(cols.size()));
      for (std::size_t j = 0; j < cols.size(); ++j) {
        X.col(static_cast<Eigen::Index>(j)) = prep.values.col(cols[j]);
      }
    }
  } else {
    out.groups = singleton_groups(prep.n_genes());
    out.gene_ids = prep.gene_ids;
    X = prep.values;
  }
  const Eigen::VectorXd& y = prep.labels;

  const double lambda_max = uses_graph(method)
                                ? group_lambda_max(X, y, out.groups)
                                : lasso_lambda_max(X, y);
  const LambdaGrid grid =
      LambdaGrid::log_spaced(lambda_max, config.grid_count,
                             config.grid_min_ratio);

  if (uses_stability(method)) {
    const PathSelector selector =
        uses_graph(method)
            ? make_graph_lasso_selector(out.groups, config.graph)
            : make_lasso_selector(out.groups.group_count(), config.lasso);
    StabilityOptions opts;
    opts.ndraw = config.ndraw;
    opts.seed = stability_seed;
    opts.stratified = config.stratified;
    opts.threads = config.threads;
    const StabilityProfile profile =
        run_stability_selection(X, y, selector, grid, opts);
    const StabilityScores scores = config.score_rule == ScoreRule::sg
                                       ? sg_scores(profile)
                                       : max_prob_scores(profile);
    const Eigen::VectorXd& score =
        scores.rule == ScoreRule::sg ? scores.sg : scores.max_prob;
    for (int g : scores.ranking) out.ranked.emplace_back(g, score[g]);
  } else {
    const SelectionPath path =
        uses_graph(method)
            ? graph_lasso_path(X, y, out.groups, grid, config.graph)
            : lasso_path(X, y, grid, config.lasso);
    for (const auto& e : path.entries) {
      out.ranked.emplace_back(e.group, path.grid.values[e.grid_index]);
    }
  }
  return out;
}

namespace {

Eigen::MatrixXd gather_columns(const ExpressionDataset& ds,
                               const std::vector<std::string>& gene_ids) {
  const std::vector<int> cols = column_indices(ds, gene_ids);
  Eigen::MatrixXd out(ds.values.rows(),
                      static_cast<Eigen::Index>(cols.size()));
  for (std::size_t j = 0; j < cols.size(); ++j) {
    out.col(static_cast<Eigen::Index>(j)) = ds.values.col(cols[j]);
  }
  return out;
}

}  // namespace

EvaluationReport run_experiment(const ExpressionDataset& dataset,
                                const GeneNetwork& network, Method method,
                                const ExperimentConfig& config) {
  if (config.k_folds < 2) throw std::invalid_argument("need at least 2 folds");
  if (config.sizes.empty()) throw std::invalid_argument("no signature sizes");
  for (int m : config.sizes) {
    if (m < 1) {
      throw std::invalid_argument(
          "signature size must be >= 1 (empty signature)");
    }
  }
  if (network.edges.empty()) {
    throw std::invalid_argument("network required: gene network has no edges");
  }

  EvaluationReport report;
  report.method = method_name(method);
  report.k_folds = config.k_folds;
  report.seed = config.seed;
  report.sizes = config.sizes;
  report.metadata["rescale_policy"] = "local";
  report.metadata["score_rule"] = score_rule_name(config.score_rule);
  report.metadata["ndraw"] = std::to_string(config.ndraw);
  report.metadata["grid_count"] = std::to_string(config.grid_count);

  const FoldPlan plan = stratified_kfold(dataset.labels, config.k_folds,
                                         derive_seed(config.seed, "folds"));

  for (int m : config.sizes) {
    report.accuracy.push_back({m, {}, 0.0});
    report.connectivity.push_back({m, {}, 0.0});
    report.fold_signatures[m] = {};
  }

  for (int f = 0; f < config.k_folds; ++f) {
    try {
      std::vector<int> train_rows;
      std::vector<char> in_test(dataset.n_samples(), 0);
      for (int r : plan.folds[f]) in_test[r] = 1;
      for (int r = 0; r < dataset.n_samples(); ++r) {
        if (!in_test[r]) train_rows.push_back(r);
      }
      const ExpressionDataset train = subset_rows(dataset, train_rows);
      const ExpressionDataset test = subset_rows(dataset, plan.folds[f]);

      const PreprocessResult prep =
          fit_preprocess(train, network, config.preprocess);
      for (const auto& w : prep.warnings) {
        report.warnings.push_back("fold " + std::to_string(f) + ": " + w);
      }
      const ExpressionDataset test_prep =
          apply_preprocess(prep.model, test);

      const UnitRanking ranking = rank_units(
          prep.dataset, network, method, config,
          derive_seed(config.seed, "stability", static_cast<std::uint64_t>(f)));

      for (std::size_t si = 0; si < config.sizes.size(); ++si) {
        const int m = config.sizes[si];
        const Signature sig = build_signature(ranking.ranked, ranking.groups,
                                              ranking.gene_ids, m);
        if (sig.genes.empty()) {
          throw std::runtime_error("empty signature at size " +
                                   std::to_string(m));
        }
        if (sig.truncated) {
          report.warnings.push_back("fold " + std::to_string(f) +
                                    ": ranking exhausted before size " +
                                    std::to_string(m));
        }
        const Eigen::MatrixXd Xtr = gather_columns(prep.dataset, sig.genes);
        LogisticModel model = refit_logistic(Xtr, prep.dataset.labels);
        model.gene_ids = sig.genes;
        if (!model.converged) {
          report.warnings.push_back("fold " + std::to_string(f) +
                                    ": separable refit at size " +
                                    std::to_string(m));
        }
        const Eigen::MatrixXd Xte = gather_columns(test_prep, sig.genes);
        const double ba =
            balanced_accuracy(model.predict(Xte), test_prep.labels);
        report.accuracy[si].per_fold.push_back(ba);
        report.connectivity[si].per_fold.push_back(
            connectivity_score(sig.genes, network));
        report.fold_signatures[m].push_back(sig.genes);
      }
    } catch (const std::exception& e) {
      throw std::runtime_error("fold " + std::to_string(f) + " failed: " +
                               e.what());
    }
  }

  for (std::size_t si = 0; si < config.sizes.size(); ++si) {
    auto mean_of = [](const std::vector<double>& v) {
      return std::accumulate(v.begin(), v.end(), 0.0) /
             static_cast<double>(v.size());
    };
    report.accuracy[si].mean = mean_of(report.accuracy[si].per_fold);
    report.connectivity[si].mean = mean_of(report.connectivity[si].per_fold);
    report.fold_overlap[config.sizes[si]] =
        fold_overlap_histogram(report.fold_signatures[config.sizes[si]]);
  }

  if (config.full_ranking) {
    report.full_data_ranking =
        full_data_gene_ranking(dataset, network, method, config);
  }
  return report;
}

std::vector<std::string> full_data_gene_ranking(
    const ExpressionDataset& dataset, const GeneNetwork& network,
    Method method, const ExperimentConfig& config) {
  const PreprocessResult prep =
      fit_preprocess(dataset, network, config.preprocess);
  const UnitRanking ranking =
      rank_units(prep.dataset, network, method, config,
                 derive_seed(config.seed, "stability-full"));
  const Signature sig =
      build_signature(ranking.ranked, ranking.groups, ranking.gene_ids,
                      static_cast<int>(ranking.gene_ids.size()));
  return sig.genes;
}

}  // namespace netsig
