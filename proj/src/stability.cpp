#include "netsig/stability.hpp"

#include "netsig/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

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

Eigen::MatrixXd select_rows(const Eigen::MatrixXd& X,
                            const std::vector<int>& rows) {
  Eigen::MatrixXd out(static_cast<Eigen::Index>(rows.size()), X.cols());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    out.row(static_cast<Eigen::Index>(i)) = X.row(rows[i]);
  }
  return out;
}

Eigen::VectorXd select_entries(const Eigen::VectorXd& v,
                               const std::vector<int>& rows) {
  Eigen::VectorXd out(static_cast<Eigen::Index>(rows.size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    out[static_cast<Eigen::Index>(i)] = v[rows[i]];
  }
  return out;
}

bool single_class(const Eigen::VectorXd& y) {
  bool pos = false, neg = false;
  for (Eigen::Index i = 0; i < y.size(); ++i) {
    (y[i] > 0.0 ? pos : neg) = true;
  }
  return !(pos && neg);
}

std::vector<int> ranking_by_score(const Eigen::VectorXd& score) {
  std::vector<int> order(score.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return score[a] > score[b]; });
  return order;
}

}  // namespace

bool operator==(const StabilityProfile& a, const StabilityProfile& b) {
  return a.grid == b.grid && a.counts == b.counts && exact_equal(a.pi, b.pi) &&
         a.ndraw == b.ndraw && a.selector_id == b.selector_id;
}

PathSelector make_lasso_selector(int n_features, const LassoOptions& options) {
  PathSelector s;
  s.id = "lasso";
  s.group_count = n_features;
  s.run = [options](const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                    const LambdaGrid& grid) {
    return lasso_path(X, y, grid, options);
  };
  return s;
}

PathSelector make_graph_lasso_selector(GroupStructure groups,
                                       const GraphLassoOptions& options) {
  PathSelector s;
  s.id = "glasso";
  s.group_count = groups.group_count();
  s.run = [groups = std::move(groups), options](const Eigen::MatrixXd& X,
                                                const Eigen::VectorXd& y,
                                                const LambdaGrid& grid) {
    return graph_lasso_path(X, y, groups, grid, options);
  };
  return s;
}

std::vector<int> half_subsample(int n, Rng& rng) {
  if (n < 4) throw std::invalid_argument("subsampling needs n >= 4");
  return sample_without_replacement(rng, n, n / 2);
}

std::vector<int> stratified_half_subsample(const Eigen::VectorXd& labels,
                                           Rng& rng) {
  const int n = static_cast<int>(labels.size());
  if (n < 4) throw std::invalid_argument("subsampling needs n >= 4");
  std::vector<int> pos, neg;
  for (int i = 0; i < n; ++i) (labels[i] > 0.0 ? pos : neg).push_back(i);
  if (pos.empty() || neg.empty()) {
    throw std::invalid_argument("single class labels");
  }
  const int target = n / 2;
  const int npos = static_cast<int>(pos.size());
  const int nneg = static_cast<int>(neg.size());
  // Class share rounded to the nearest sample, clamped so both classes stay
  // represented and both class pools suffice.
  int take_pos = static_cast<int>(std::lround(
      static_cast<double>(target) * npos / static_cast<double>(n)));
  take_pos = std::clamp(take_pos, std::max(1, target - nneg),
                        std::min(npos, target - 1));
  const int take_neg = target - take_pos;

  const std::vector<int> pick_pos =
      sample_without_replacement(rng, npos, take_pos);
  const std::vector<int> pick_neg =
      sample_without_replacement(rng, nneg, take_neg);
  std::vector<int> out;
  out.reserve(target);
  for (int i : pick_pos) out.push_back(pos[i]);
  for (int i : pick_neg) out.push_back(neg[i]);
  std::sort(out.begin(), out.end());
  return out;
}

StabilityProfile run_stability_selection(const Eigen::MatrixXd& X,
                                         const Eigen::VectorXd& y,
                                         const PathSelector& selector,
                                         const LambdaGrid& grid,
                                         const StabilityOptions& options) {
  if (options.ndraw < 2) throw std::invalid_argument("ndraw must be >= 2");
  if (selector.group_count < 1 || !selector.run) {
    throw std::invalid_argument("selector not configured");
  }
  if (X.rows() != y.size()) throw std::invalid_argument("X/y size mismatch");
  const int n = static_cast<int>(X.rows());
  if (n < 4) throw std::invalid_argument("stability selection needs n >= 4");

  const int L = grid.size();
  const int G = selector.group_count;

  // Per-draw active sets, merged in draw order afterwards: the reduction is
  // deterministic no matter how draws are scheduled.
  std::vector<std::vector<std::vector<int>>> draw_actives(options.ndraw);

  parallel_for(
      options.ndraw,
      [&](int draw) {
        Rng rng(derive_seed(options.seed, "stability-draw",
                            static_cast<std::uint64_t>(draw)));
        std::vector<int> rows;
        if (options.stratified) {
          rows = stratified_half_subsample(y, rng);
        } else {
          rows = half_subsample(n, rng);
          int tries = 0;
          while (single_class(select_entries(y, rows))) {
            if (++tries > options.max_redraws) {
              throw std::runtime_error(
                  "subsample kept producing a single class");
            }
            rows = half_subsample(n, rng);
          }
        }
        const SelectionPath path =
            selector.run(select_rows(X, rows), select_entries(y, rows), grid);
        if (static_cast<int>(path.active_sets.size()) != L) {
          throw std::runtime_error("selector returned a mismatched path");
        }
        draw_actives[draw] = path.active_sets;
      },
      options.threads);

  StabilityProfile profile;
  profile.grid = grid;
  profile.ndraw = options.ndraw;
  profile.selector_id = selector.id;
  profile.counts = Eigen::MatrixXi::Zero(G, L);
  for (int draw = 0; draw < options.ndraw; ++draw) {
    for (int l = 0; l < L; ++l) {
      for (int g : draw_actives[draw][l]) {
        if (g < 0 || g >= G) {
          throw std::runtime_error("selector returned a bad group index");
        }
        profile.counts(g, l) += 1;
      }
    }
  }
  profile.pi = profile.counts.cast<double>() / options.ndraw;
  return profile;
}

std::string score_rule_name(ScoreRule rule) {
  return rule == ScoreRule::sg ? "sg" : "max_prob";
}

ScoreRule parse_score_rule(const std::string& name) {
  if (name == "sg") return ScoreRule::sg;
  if (name == "max_prob") return ScoreRule::max_prob;
  throw std::invalid_argument("unknown score rule '" + name + "'");
}

namespace {

StabilityScores compute_scores(const StabilityProfile& profile,
                               ScoreRule rule) {
  const int G = profile.group_count();
  const int L = profile.grid.size();
  StabilityScores s;
  s.rule = rule;
  s.sg = Eigen::VectorXd::Zero(G);
  s.max_prob = Eigen::VectorXd::Zero(G);
  // Normalized probabilities are ratios of integer counts (the 1/ndraw
  // factors cancel), which keeps the scores exact under group permutations.
  const Eigen::VectorXi column_total = profile.counts.colwise().sum();
  for (int g = 0; g < G; ++g) {
    double best_sg = 0.0;
    double best_prob = 0.0;
    for (int l = 0; l < L; ++l) {
      best_prob = std::max(best_prob, profile.pi(g, l));
      if (column_total[l] > 0) {
        best_sg = std::max(best_sg, static_cast<double>(profile.counts(g, l)) /
                                        static_cast<double>(column_total[l]));
      }
    }
    s.sg[g] = best_sg;
    s.max_prob[g] = best_prob;
  }
  s.ranking = ranking_by_score(rule == ScoreRule::sg ? s.sg : s.max_prob);
  return s;
}

}  // namespace

StabilityScores sg_scores(const StabilityProfile& profile) {
  return compute_scores(profile, ScoreRule::sg);
}

StabilityScores max_prob_scores(const StabilityProfile& profile) {
  return compute_scores(profile, ScoreRule::max_prob);
}

Signature signature_from_scores(const StabilityScores& scores,
                                const GroupStructure& groups,
                                const std::vector<std::string>& gene_ids,
                                int size) {
  const Eigen::VectorXd& score =
      scores.rule == ScoreRule::sg ? scores.sg : scores.max_prob;
  if (static_cast<int>(score.size()) != groups.group_count()) {
    throw std::invalid_argument("scores do not match group count");
  }
  std::vector<std::pair<int, double>> ranked;
  ranked.reserve(scores.ranking.size());
  for (int g : scores.ranking) ranked.emplace_back(g, score[g]);
  return build_signature(ranked, groups, gene_ids, size);
}

Signature signature_from_path(const SelectionPath& path,
                              const GroupStructure& groups,
                              const std::vector<std::string>& gene_ids,
                              int size) {
  std::vector<std::pair<int, double>> ranked;
  ranked.reserve(path.entries.size());
  for (const auto& e : path.entries) {
    ranked.emplace_back(e.group, path.grid.values[e.grid_index]);
  }
  return build_signature(ranked, groups, gene_ids, size);
}

}  // namespace netsig
