#include "netsig/serialize.hpp"
#include "netsig/types.hpp"

#include "test_util.hpp"

#include <doctest.h>

#include <cmath>
#include <limits>

using namespace netsig;

TEST_CASE("validate_dataset accepts a minimal well-formed input") {
  const ExpressionDataset ds = validate_dataset_rows(
      {{1.0, 2.0}, {3.0, 4.0}}, {"gA", "gB"}, {"s1", "s2"}, {-1.0, 1.0});
  CHECK(ds.n_samples() == 2);
  CHECK(ds.n_genes() == 2);
  CHECK(ds.labels[0] == -1.0);
}

TEST_CASE("validate_dataset rejects bad inputs") {
  const double nan = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_WITH_AS(
      validate_dataset_rows({{1.0, nan}, {3.0, 4.0}}, {"gA", "gB"}, {"s1", "s2"},
                       {-1.0, 1.0}),
      doctest::Contains("non-finite"), std::invalid_argument);
  CHECK_THROWS_WITH_AS(
      validate_dataset_rows({{1.0, 2.0}, {3.0, 4.0}}, {"gA", "gA"}, {"s1", "s2"},
                       {-1.0, 1.0}),
      doctest::Contains("duplicate gene id"), std::invalid_argument);
  CHECK_THROWS_WITH_AS(
      validate_dataset_rows({{1.0, 2.0}, {3.0, 4.0}}, {"gA", "gB"}, {"s1", "s2"},
                       {1.0, 1.0}),
      doctest::Contains("single class"), std::invalid_argument);
  CHECK_THROWS_WITH_AS(
      validate_dataset_rows({{1.0, 2.0}, {3.0, 4.0}}, {"gA", "gB"}, {"s1", "s2"},
                       {-1.0, 0.5}),
      doctest::Contains("label"), std::invalid_argument);
  CHECK_THROWS_AS(validate_dataset_rows({{1.0, 2.0}, {3.0}}, {"gA", "gB"},
                                   {"s1", "s2"}, {-1.0, 1.0}),
                  std::invalid_argument);
}

TEST_CASE("label canonicalization") {
  SUBCASE("arbitrary strings map the lexicographically smaller one to -1") {
    const Eigen::VectorXd y = canonicalize_labels({"poor", "good", "good"});
    CHECK(y[0] == 1.0);
    CHECK(y[1] == -1.0);
  }
  SUBCASE("numeric {-1,+1} encodings keep their signs") {
    const Eigen::VectorXd a = canonicalize_labels({"-1", "1"});
    CHECK(a[0] == -1.0);
    CHECK(a[1] == 1.0);
    const Eigen::VectorXd b = canonicalize_labels({"+1", "-1"});
    CHECK(b[0] == 1.0);
    CHECK(b[1] == -1.0);
  }
  SUBCASE("degenerate label sets are rejected") {
    CHECK_THROWS_AS(canonicalize_labels({"x", "x"}), std::invalid_argument);
    CHECK_THROWS_AS(canonicalize_labels({"a", "b", "c"}),
                    std::invalid_argument);
  }
}

TEST_CASE("edges_to_groups maps covered edges and reports removals") {
  SUBCASE("all genes covered") {
    const GeneNetwork net =
        GeneNetwork::from_edges({{"A", "B"}, {"B", "C"}});
    const EdgeGroups eg = edges_to_groups(net, {"A", "B", "C"});
    CHECK(eg.groups.group_count() == 2);
    CHECK(eg.kept_gene_ids == std::vector<std::string>{"A", "B", "C"});
    CHECK(eg.removed_gene_ids.empty());
    CHECK(eg.groups.groups[0] == std::vector<int>{0, 1});
    CHECK(eg.groups.groups[1] == std::vector<int>{1, 2});
  }
  SUBCASE("isolated gene is reported for removal") {
    const GeneNetwork net = GeneNetwork::from_edges({{"A", "B"}});
    const EdgeGroups eg = edges_to_groups(net, {"A", "B", "C"});
    CHECK(eg.kept_gene_ids == std::vector<std::string>{"A", "B"});
    CHECK(eg.removed_gene_ids == std::vector<std::string>{"C"});
    CHECK(eg.groups.group_count() == 1);
  }
  SUBCASE("no covered edge is an error") {
    const GeneNetwork net = GeneNetwork::from_edges({{"C", "D"}});
    CHECK_THROWS_WITH_AS(edges_to_groups(net, {"A", "B"}),
                         doctest::Contains("no covered genes"),
                         std::runtime_error);
  }
  SUBCASE("groups are always pairs and cover the kept genes") {
    netsig::Rng rng(7);
    for (int trial = 0; trial < 20; ++trial) {
      std::vector<std::pair<std::string, std::string>> edges;
      const int p = 4 + uniform_index(rng, 8);
      const auto names = testutil::gene_names(p);
      for (int e = 0; e < p; ++e) {
        const int a = uniform_index(rng, p);
        const int b = uniform_index(rng, p);
        if (a != b) edges.emplace_back(names[a], names[b]);
      }
      if (edges.empty()) continue;
      const GeneNetwork net = GeneNetwork::from_edges(edges);
      const EdgeGroups eg = edges_to_groups(net, names);
      std::vector<bool> covered(eg.kept_gene_ids.size(), false);
      for (const auto& g : eg.groups.groups) {
        CHECK(g.size() == 2);
        for (int c : g) covered[c] = true;
      }
      for (bool c : covered) CHECK(c);
      CHECK(eg.kept_gene_ids.size() + eg.removed_gene_ids.size() ==
            names.size());
    }
  }
}

TEST_CASE("GeneNetwork normalization") {
  const GeneNetwork net =
      GeneNetwork::from_edges({{"B", "A"}, {"A", "B"}, {"C", "A"}});
  CHECK(net.edges.size() == 2);
  CHECK(net.edges[0] == std::pair<std::string, std::string>{"A", "B"});
  CHECK_THROWS_AS(GeneNetwork::from_edges({{"A", "A"}}),
                  std::invalid_argument);
}

TEST_CASE("GroupStructure validation") {
  CHECK_THROWS_AS(GroupStructure::create({{0, 3}}, 3), std::invalid_argument);
  CHECK_THROWS_AS(GroupStructure::create({{}}, 1), std::invalid_argument);
  CHECK_THROWS_WITH_AS(GroupStructure::create({{0}}, 2),
                       doctest::Contains("not covered"),
                       std::invalid_argument);
  const GroupStructure gs = singleton_groups(3);
  CHECK(gs.group_count() == 3);
  CHECK(gs.groups[2] == std::vector<int>{2});
}

TEST_CASE("LambdaGrid invariants") {
  CHECK_THROWS_AS(LambdaGrid::create({}), std::invalid_argument);
  CHECK_THROWS_AS(LambdaGrid::create({1.0, 1.0}), std::invalid_argument);
  CHECK_THROWS_AS(LambdaGrid::create({1.0, -0.5}), std::invalid_argument);
  const LambdaGrid grid = LambdaGrid::log_spaced(2.0, 5, 1e-2);
  CHECK(grid.size() == 5);
  CHECK(grid.values.front() == 2.0);
  CHECK(grid.values.back() == doctest::Approx(0.02).epsilon(1e-12));
  for (int i = 1; i < grid.size(); ++i) {
    CHECK(grid.values[i] < grid.values[i - 1]);
  }
}

TEST_CASE("path entry ranking ties") {
  std::vector<PathEntry> entries = {
      {3, 2, 0.5}, {1, 1, 0.2}, {2, 1, 0.9}, {0, 1, 0.2}};
  rank_path_entries(entries);
  // grid index first, then larger norm, then lower group index
  CHECK(entries[0].group == 2);
  CHECK(entries[1].group == 0);
  CHECK(entries[2].group == 1);
  CHECK(entries[3].group == 3);
}

TEST_CASE("build_signature grows the gene set until the requested size") {
  const GroupStructure groups = GroupStructure::create({{0, 1}, {1, 2}}, 3);
  const std::vector<std::string> ids = {"A", "B", "C"};
  SUBCASE("union growth") {
    const Signature sig =
        build_signature({{0, 0.9}, {1, 0.8}}, groups, ids, 3);
    CHECK(sig.genes == std::vector<std::string>{"A", "B", "C"});
    CHECK(sig.ranked_units.size() == 2);
    CHECK_FALSE(sig.truncated);
  }
  SUBCASE("early stop") {
    const Signature sig =
        build_signature({{0, 0.9}, {1, 0.8}}, groups, ids, 2);
    CHECK(sig.genes == std::vector<std::string>{"A", "B"});
    CHECK(sig.ranked_units.size() == 1);
  }
  SUBCASE("zero scores never enter") {
    const Signature sig = build_signature({{0, 0.0}, {1, 0.0}}, groups, ids, 1);
    CHECK(sig.genes.empty());
    CHECK(sig.truncated);
  }
  SUBCASE("size zero is rejected") {
    CHECK_THROWS_WITH_AS(build_signature({{0, 1.0}}, groups, ids, 0),
                         doctest::Contains("empty signature"),
                         std::invalid_argument);
  }
}

TEST_CASE("logistic model prediction convention") {
  LogisticModel model;
  model.weights = Eigen::VectorXd::Ones(1);
  model.intercept = -1.0;
  Eigen::MatrixXd X(3, 1);
  X << 0.5, 1.0, 2.0;
  const Eigen::VectorXd preds = model.predict(X);
  CHECK(preds[0] == -1.0);
  CHECK(preds[1] == 1.0);  // decision value exactly zero goes positive
  CHECK(preds[2] == 1.0);
}

TEST_CASE("core types round-trip through JSON exactly") {
  using nlohmann::json;
  netsig::Rng rng(11);
  Eigen::MatrixXd X(3, 2);
  X << 1.0 / 3.0, 0.1, -2.5e-7, standard_normal(rng), 4.0, 1e17;
  const ExpressionDataset ds = testutil::make_dataset(
      X, (Eigen::VectorXd(3) << 1.0, -1.0, 1.0).finished());
  CHECK(json(ds).get<ExpressionDataset>() == ds);

  const GeneNetwork net =
      GeneNetwork::from_edges({{"A", "B"}, {"B", "C"}}, {"Z"});
  CHECK(json(net).get<GeneNetwork>() == net);

  const GroupStructure gs = GroupStructure::create({{0, 1}, {1, 2}}, 3);
  CHECK(json(gs).get<GroupStructure>() == gs);

  const LambdaGrid grid = LambdaGrid::log_spaced(0.37, 7);
  CHECK(json(grid).get<LambdaGrid>() == grid);

  SelectionPath path;
  path.grid = grid;
  path.active_sets.assign(7, {});
  path.active_sets[3] = {0, 2};
  path.converged.assign(7, true);
  path.converged[6] = false;
  path.entries = {{0, 3, 0.25}, {2, 3, 0.125}};
  CHECK(json(path).get<SelectionPath>() == path);

  Signature sig;
  sig.ranked_units = {{{"A", "B"}, 0.75}, {{"C"}, 0.5}};
  sig.genes = {"A", "B", "C"};
  CHECK(json(sig).get<Signature>() == sig);

  LogisticModel model;
  model.gene_ids = {"A", "B"};
  model.weights = (Eigen::VectorXd(2) << 0.1, -1.0 / 7.0).finished();
  model.intercept = 0.3;
  model.converged = false;
  CHECK(json(model).get<LogisticModel>() == model);
}

TEST_CASE("row subsetting and column lookup") {
  Eigen::MatrixXd X(3, 2);
  X << 1, 2, 3, 4, 5, 6;
  const ExpressionDataset ds = testutil::make_dataset(
      X, (Eigen::VectorXd(3) << 1.0, -1.0, 1.0).finished());
  const ExpressionDataset sub = subset_rows(ds, {2, 0});
  CHECK(sub.sample_ids == std::vector<std::string>{"s2", "s0"});
  CHECK(sub.values(0, 0) == 5.0);
  CHECK(sub.labels[1] == 1.0);
  CHECK(column_indices(ds, {"g1"}) == std::vector<int>{1});
  CHECK_THROWS_WITH_AS(column_indices(ds, {"missing"}),
                       doctest::Contains("missing gene id"),
                       std::invalid_argument);
}
