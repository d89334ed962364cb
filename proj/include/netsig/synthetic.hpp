#pragma once

#include "netsig/types.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace netsig {

enum class NetworkModel { random_regular, preferential_attachment };
std::string network_model_name(NetworkModel m);
NetworkModel parse_network_model(const std::string& name);

struct SyntheticSpec {
  int genes = 200;    // p
  int samples = 120;  // n
  NetworkModel model = NetworkModel::random_regular;
  int mean_degree = 4;              // d
  int components = 3;               // c, planted connected components
  int component_size = 5;           // s, genes per component
  double effect_size = 0.8;         // a, coefficient magnitude
  double label_noise = 0.05;        // rho, fraction of labels flipped
  double within_correlation = 0.4;  // feature correlation inside a component
  std::uint64_t seed = 1;
};

void validate_spec(const SyntheticSpec& spec);

struct GroundTruth {
  std::vector<std::string> support;  // genes with nonzero coefficients
  Eigen::VectorXd coefficients;      // length p
  std::vector<std::vector<std::string>> component_genes;
};

struct SyntheticData {
  ExpressionDataset dataset;
  GeneNetwork network;
  GroundTruth truth;
};

/// Generates a network, plants c connected components of size s by
/// breadth-first growth from random roots, draws correlated normal features
/// and labels y = sign(X beta + noise) with a fraction of labels flipped.
/// Deterministic per seed.
SyntheticData generate(const SyntheticSpec& spec);

struct RecoveryMetrics {
  double precision = 0.0;
  double recall = 0.0;
  bool empty_signature = false;
};

RecoveryMetrics recovery_metrics(const std::vector<std::string>& signature,
                                 const GroundTruth& truth);

}  // namespace netsig
