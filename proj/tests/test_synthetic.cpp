#include "netsig/synthetic.hpp"

#include "netsig/evaluation.hpp"
#include "netsig/serialize.hpp"

#include <doctest.h>

#include <deque>
#include <set>
#include <unordered_map>
#include <unordered_set>

using namespace netsig;

namespace {

// Connectivity check by traversal, independent of the generator internals.
bool connected_in_network(const std::vector<std::string>& genes,
                          const GeneNetwork& network) {
  std::unordered_set<std::string> in_set(genes.begin(), genes.end());
  std::unordered_map<std::string, std::vector<std::string>> adj;
  for (const auto& [a, b] : network.edges) {
    if (in_set.count(a) && in_set.count(b)) {
      adj[a].push_back(b);
      adj[b].push_back(a);
    }
  }
  std::unordered_set<std::string> seen;
  std::deque<std::string> frontier{genes.front()};
  seen.insert(genes.front());
  while (!frontier.empty()) {
    const std::string v = frontier.front();
    frontier.pop_front();
    for (const auto& u : adj[v]) {
      if (seen.insert(u).second) frontier.push_back(u);
    }
  }
  return seen.size() == genes.size();
}

}  // namespace

TEST_CASE("generate plants the requested connected support") {
  SyntheticSpec spec;
  spec.genes = 100;
  spec.samples = 40;
  spec.components = 2;
  spec.component_size = 5;
  spec.seed = 3;
  const SyntheticData data = generate(spec);

  CHECK(data.truth.support.size() == 10);
  CHECK(data.truth.component_genes.size() == 2);
  int nonzero = 0;
  for (int j = 0; j < data.truth.coefficients.size(); ++j) {
    if (data.truth.coefficients[j] != 0.0) ++nonzero;
  }
  CHECK(nonzero == 10);
  for (const auto& comp : data.truth.component_genes) {
    CHECK(comp.size() == 5);
    CHECK(connected_in_network(comp, data.network));
  }
  // support equals the union of the components
  std::set<std::string> comp_union;
  for (const auto& comp : data.truth.component_genes) {
    comp_union.insert(comp.begin(), comp.end());
  }
  CHECK(comp_union == std::set<std::string>(data.truth.support.begin(),
                                            data.truth.support.end()));
}

TEST_CASE("generate is deterministic per seed") {
  SyntheticSpec spec;
  spec.genes = 60;
  spec.samples = 30;
  spec.components = 2;
  spec.component_size = 4;
  spec.seed = 11;
  const SyntheticData a = generate(spec);
  const SyntheticData b = generate(spec);
  CHECK(a.dataset == b.dataset);
  CHECK(a.network == b.network);
  CHECK(a.truth.support == b.truth.support);

  spec.seed = 12;
  const SyntheticData c = generate(spec);
  CHECK_FALSE(a.dataset == c.dataset);
}

TEST_CASE("strong noiseless effect: the true support separates well") {
  double total = 0.0;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    SyntheticSpec spec;
    spec.genes = 80;
    spec.samples = 60;
    spec.components = 2;
    spec.component_size = 4;
    spec.effect_size = 3.0;
    spec.label_noise = 0.0;
    spec.seed = seed + 1;
    const SyntheticData data = generate(spec);
    const std::vector<int> cols =
        column_indices(data.dataset, data.truth.support);
    Eigen::MatrixXd X(data.dataset.n_samples(),
                      static_cast<Eigen::Index>(cols.size()));
    for (std::size_t j = 0; j < cols.size(); ++j) {
      X.col(static_cast<Eigen::Index>(j)) = data.dataset.values.col(cols[j]);
    }
    const LogisticModel model = refit_logistic(X, data.dataset.labels);
    total += balanced_accuracy(model.predict(X), data.dataset.labels);
  }
  CHECK(total / 10.0 > 0.95);
}

TEST_CASE("labels follow sign(X beta) when noise is removed") {
  SyntheticSpec spec;
  spec.genes = 80;
  spec.samples = 100;
  spec.components = 2;
  spec.component_size = 4;
  spec.effect_size = 3.0;
  spec.label_noise = 0.0;
  spec.seed = 21;
  const SyntheticData data = generate(spec);
  const Eigen::VectorXd margin =
      data.dataset.values * data.truth.coefficients;
  int agree = 0;
  for (int i = 0; i < spec.samples; ++i) {
    const double s = margin[i] >= 0 ? 1.0 : -1.0;
    agree += s == data.dataset.labels[i] ? 1 : 0;
  }
  CHECK(agree >= 95);  // unit pre-sign noise flips almost nothing at a=3
}

TEST_CASE("label noise flips exactly the requested fraction") {
  SyntheticSpec spec;
  spec.genes = 60;
  spec.samples = 120;
  spec.components = 2;
  spec.component_size = 4;
  spec.seed = 33;
  spec.label_noise = 0.0;
  const SyntheticData clean = generate(spec);
  spec.label_noise = 0.2;
  const SyntheticData noisy = generate(spec);
  int differ = 0;
  for (int i = 0; i < 120; ++i) {
    differ += clean.dataset.labels[i] != noisy.dataset.labels[i] ? 1 : 0;
  }
  CHECK(differ == 24);
}

TEST_CASE("spec validation") {
  SyntheticSpec spec;
  spec.genes = 10;
  spec.components = 4;
  spec.component_size = 3;  // 12 > 10
  CHECK_THROWS_AS(validate_spec(spec), std::invalid_argument);
  spec.component_size = 2;
  spec.label_noise = 0.5;
  CHECK_THROWS_AS(validate_spec(spec), std::invalid_argument);
  spec.label_noise = 0.1;
  spec.effect_size = 0.0;
  CHECK_THROWS_AS(validate_spec(spec), std::invalid_argument);
}

TEST_CASE("preferential attachment model generates a usable network") {
  SyntheticSpec spec;
  spec.genes = 120;
  spec.samples = 30;
  spec.model = NetworkModel::preferential_attachment;
  spec.mean_degree = 4;
  spec.components = 2;
  spec.component_size = 5;
  spec.seed = 9;
  const SyntheticData data = generate(spec);
  CHECK_FALSE(data.network.edges.empty());
  for (const auto& comp : data.truth.component_genes) {
    CHECK(connected_in_network(comp, data.network));
  }
}

TEST_CASE("recovery metrics") {
  GroundTruth truth;
  truth.support = {"A", "B", "C", "D"};
  truth.coefficients = Eigen::VectorXd::Ones(4);
  SUBCASE("exact recovery") {
    const RecoveryMetrics m = recovery_metrics({"A", "B", "C", "D"}, truth);
    CHECK(m.precision == 1.0);
    CHECK(m.recall == 1.0);
    CHECK_FALSE(m.empty_signature);
  }
  SUBCASE("disjoint selection") {
    const RecoveryMetrics m = recovery_metrics({"X", "Y"}, truth);
    CHECK(m.precision == 0.0);
    CHECK(m.recall == 0.0);
  }
  SUBCASE("half the support, nothing else") {
    const RecoveryMetrics m = recovery_metrics({"A", "B"}, truth);
    CHECK(m.precision == 1.0);
    CHECK(m.recall == 0.5);
  }
  SUBCASE("empty signature is flagged") {
    const RecoveryMetrics m = recovery_metrics({}, truth);
    CHECK(m.empty_signature);
    CHECK(m.precision == 0.0);
  }
}
