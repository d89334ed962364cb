#include "netsig/synthetic.hpp"

#include "netsig/rng.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <set>
#include <stdexcept>
#include <unordered_set>

namespace netsig {

namespace {

std::string padded_id(char prefix, int index, int width = 5) {
  std::string digits = std::to_string(index + 1);
  return prefix + std::string(width - std::min<int>(width, digits.size()), '0') +
         digits;
}

using EdgeList = std::vector<std::pair<int, int>>;

bool simple_graph(const EdgeList& edges) {
  std::set<std::pair<int, int>> seen;
  for (auto [a, b] : edges) {
    if (a == b) return false;
    if (b < a) std::swap(a, b);
    if (!seen.emplace(a, b).second) return false;
  }
  return true;
}

// Configuration model: pair up d stubs per node, retry until simple.
EdgeList random_regular_edges(int p, int d, Rng& rng) {
  if ((static_cast<long long>(p) * d) % 2 != 0) {
    throw std::invalid_argument("p * mean_degree must be even for the regular model");
  }
  if (d >= p) throw std::invalid_argument("mean_degree must be below p");
  std::vector<int> stubs;
  stubs.reserve(static_cast<std::size_t>(p) * d);
  for (int v = 0; v < p; ++v) {
    for (int i = 0; i < d; ++i) stubs.push_back(v);
  }
  for (int attempt = 0; attempt < 5000; ++attempt) {
    shuffle(rng, stubs);
    EdgeList edges;
    edges.reserve(stubs.size() / 2);
    for (std::size_t i = 0; i + 1 < stubs.size(); i += 2) {
      edges.emplace_back(stubs[i], stubs[i + 1]);
    }
    if (simple_graph(edges)) return edges;
  }
  throw std::runtime_error("random regular graph generation kept colliding");
}

// Barabasi-Albert style growth: each new node attaches to `m` distinct
// existing nodes sampled proportionally to degree.
EdgeList preferential_attachment_edges(int p, int d, Rng& rng) {
  const int m = std::max(1, d / 2);
  if (p <= m + 1) throw std::invalid_argument("too few genes for this degree");
  EdgeList edges;
  std::vector<int> endpoint_pool;  // node repeated once per degree
  for (int v = 0; v <= m; ++v) {
    for (int u = v + 1; u <= m; ++u) {
      edges.emplace_back(v, u);
      endpoint_pool.push_back(v);
      endpoint_pool.push_back(u);
    }
  }
  for (int v = m + 1; v < p; ++v) {
    std::unordered_set<int> targets;
    while (static_cast<int>(targets.size()) < m) {
      targets.insert(
          endpoint_pool[uniform_index(rng, static_cast<int>(endpoint_pool.size()))]);
    }
    for (int u : targets) {
      edges.emplace_back(u, v);
      endpoint_pool.push_back(u);
      endpoint_pool.push_back(v);
    }
  }
  return edges;
}

std::vector<std::vector<int>> adjacency_from_edges(int p,
                                                   const EdgeList& edges) {
  std::vector<std::vector<int>> adj(p);
  for (auto [a, b] : edges) {
    adj[a].push_back(b);
    adj[b].push_back(a);
  }
  for (auto& nb : adj) std::sort(nb.begin(), nb.end());
  return adj;
}

// Breadth-first growth of one connected component of `size` unused nodes.
std::vector<int> grow_component(const std::vector<std::vector<int>>& adj,
                                std::vector<char>& used, int size, Rng& rng,
                                int attempts) {
  const int p = static_cast<int>(adj.size());
  for (int attempt = 0; attempt < attempts; ++attempt) {
    const int root = uniform_index(rng, p);
    if (used[root]) continue;
    std::vector<int> collected;
    std::unordered_set<int> visited;
    std::deque<int> frontier{root};
    visited.insert(root);
    while (!frontier.empty() && static_cast<int>(collected.size()) < size) {
      const int v = frontier.front();
      frontier.pop_front();
      collected.push_back(v);
      for (int u : adj[v]) {
        if (!used[u] && visited.insert(u).second) frontier.push_back(u);
      }
    }
    if (static_cast<int>(collected.size()) == size) {
      for (int v : collected) used[v] = 1;
      return collected;
    }
  }
  return {};
}

}  // namespace

std::string network_model_name(NetworkModel m) {
  return m == NetworkModel::random_regular ? "regular" : "pa";
}

NetworkModel parse_network_model(const std::string& name) {
  if (name == "regular") return NetworkModel::random_regular;
  if (name == "pa") return NetworkModel::preferential_attachment;
  throw std::invalid_argument("unknown network model '" + name + "'");
}

void validate_spec(const SyntheticSpec& spec) {
  if (spec.genes < 2) throw std::invalid_argument("need at least 2 genes");
  if (spec.samples < 4) throw std::invalid_argument("need at least 4 samples");
  if (spec.mean_degree < 1) throw std::invalid_argument("mean_degree must be >= 1");
  if (spec.components < 1 || spec.component_size < 1) {
    throw std::invalid_argument("components and component_size must be >= 1");
  }
  if (static_cast<long long>(spec.components) * spec.component_size >
      spec.genes) {
    throw std::invalid_argument("planted support larger than gene count");
  }
  if (!(spec.effect_size > 0.0)) {
    throw std::invalid_argument("effect_size must be positive");
  }
  if (spec.label_noise < 0.0 || spec.label_noise >= 0.5) {
    throw std::invalid_argument("label_noise must lie in [0, 0.5)");
  }
  if (spec.within_correlation < 0.0 || spec.within_correlation >= 1.0) {
    throw std::invalid_argument("within_correlation must lie in [0, 1)");
  }
}

SyntheticData generate(const SyntheticSpec& spec) {
  validate_spec(spec);
  const int p = spec.genes;
  const int n = spec.samples;

  Rng net_rng(derive_seed(spec.seed, "synthetic-network"));
  const EdgeList edges =
      spec.model == NetworkModel::random_regular
          ? random_regular_edges(p, spec.mean_degree, net_rng)
          : preferential_attachment_edges(p, spec.mean_degree, net_rng);
  const auto adj = adjacency_from_edges(p, edges);

  Rng plant_rng(derive_seed(spec.seed, "synthetic-plant"));
  std::vector<char> used(p, 0);
  std::vector<std::vector<int>> components;
  for (int c = 0; c < spec.components; ++c) {
    std::vector<int> comp =
        grow_component(adj, used, spec.component_size, plant_rng, 500);
    if (comp.empty()) {
      throw std::runtime_error(
          "failed to plant connected component " + std::to_string(c) +
          " of size " + std::to_string(spec.component_size) +
          ": network too sparse or fragmented");
    }
    components.push_back(std::move(comp));
  }

  Rng x_rng(derive_seed(spec.seed, "synthetic-x"));
  Eigen::MatrixXd X(n, p);
  for (int j = 0; j < p; ++j) {
    for (int i = 0; i < n; ++i) X(i, j) = standard_normal(x_rng);
  }
  // Shared per-sample factor inside each component gives pairwise
  // correlation within_correlation between its genes.
  const double rc = spec.within_correlation;
  for (const auto& comp : components) {
    Eigen::VectorXd factor(n);
    for (int i = 0; i < n; ++i) factor[i] = standard_normal(x_rng);
    for (int j : comp) {
      X.col(j) = std::sqrt(1.0 - rc) * X.col(j) + std::sqrt(rc) * factor;
    }
  }

  Eigen::VectorXd beta = Eigen::VectorXd::Zero(p);
  for (std::size_t c = 0; c < components.size(); ++c) {
    const double coef = (c % 2 == 0) ? spec.effect_size : -spec.effect_size;
    for (int j : components[c]) beta[j] = coef;
  }

  const Eigen::VectorXd signal = X * beta;
  Eigen::VectorXd labels(n);
  const int flips = static_cast<int>(std::lround(spec.label_noise * n));
  bool ok = false;
  for (std::uint64_t attempt = 0; attempt < 20 && !ok; ++attempt) {
    Rng y_rng(derive_seed(spec.seed, "synthetic-labels", attempt));
    for (int i = 0; i < n; ++i) {
      labels[i] = signal[i] + standard_normal(y_rng) >= 0.0 ? 1.0 : -1.0;
    }
    for (int i : sample_without_replacement(y_rng, n, flips)) {
      labels[i] = -labels[i];
    }
    ok = (labels.array() > 0).any() && (labels.array() < 0).any();
  }
  if (!ok) {
    throw std::runtime_error("label generation produced a single class");
  }

  std::vector<std::string> gene_ids(p), sample_ids(n);
  for (int j = 0; j < p; ++j) gene_ids[j] = padded_id('g', j);
  for (int i = 0; i < n; ++i) sample_ids[i] = padded_id('s', i);

  SyntheticData out;
  out.dataset = validate_dataset(std::move(X), gene_ids, sample_ids,
                                 std::move(labels));

  std::vector<std::pair<std::string, std::string>> id_edges;
  id_edges.reserve(edges.size());
  for (auto [a, b] : edges) id_edges.emplace_back(gene_ids[a], gene_ids[b]);
  out.network = GeneNetwork::from_edges(std::move(id_edges), gene_ids);

  out.truth.coefficients = std::move(beta);
  for (const auto& comp : components) {
    std::vector<std::string> names;
    for (int j : comp) names.push_back(gene_ids[j]);
    out.truth.component_genes.push_back(std::move(names));
  }
  std::vector<int> support_cols;
  for (const auto& comp : components) {
    support_cols.insert(support_cols.end(), comp.begin(), comp.end());
  }
  std::sort(support_cols.begin(), support_cols.end());
  for (int j : support_cols) out.truth.support.push_back(gene_ids[j]);
  return out;
}

RecoveryMetrics recovery_metrics(const std::vector<std::string>& signature,
                                 const GroundTruth& truth) {
  RecoveryMetrics m;
  if (signature.empty()) {
    m.empty_signature = true;
    return m;
  }
  std::unordered_set<std::string> support(truth.support.begin(),
                                          truth.support.end());
  std::unordered_set<std::string> sig(signature.begin(), signature.end());
  int hits = 0;
  for (const auto& g : sig) {
    if (support.count(g)) ++hits;
  }
  m.precision = static_cast<double>(hits) / static_cast<double>(sig.size());
  m.recall = support.empty()
                 ? 0.0
                 : static_cast<double>(hits) /
                       static_cast<double>(support.size());
  return m;
}

}  // namespace netsig
