#pragma once

#include "netsig/rng.hpp"
#include "netsig/types.hpp"

#include <Eigen/Dense>

#include <string>
#include <vector>

namespace testutil {

struct Instance {
  Eigen::MatrixXd X;
  Eigen::VectorXd y;
};

// Random Gaussian design with labels driven by the first feature; both
// classes guaranteed by construction.
inline Instance random_instance(int n, int p, std::uint64_t seed,
                                double signal = 1.0, double noise = 1.0) {
  netsig::Rng rng(netsig::derive_seed(seed, "test-instance"));
  Instance inst;
  inst.X.resize(n, p);
  for (int j = 0; j < p; ++j) {
    for (int i = 0; i < n; ++i) inst.X(i, j) = netsig::standard_normal(rng);
  }
  inst.y.resize(n);
  for (int i = 0; i < n; ++i) {
    const double f = signal * inst.X(i, 0) + noise * netsig::standard_normal(rng);
    inst.y[i] = f >= 0.0 ? 1.0 : -1.0;
  }
  // Force both classes.
  bool pos = false, neg = false;
  for (int i = 0; i < n; ++i) (inst.y[i] > 0 ? pos : neg) = true;
  if (!pos) inst.y[0] = 1.0;
  if (!neg) inst.y[n - 1] = -1.0;
  return inst;
}

inline std::vector<std::string> gene_names(int p) {
  std::vector<std::string> out;
  out.reserve(p);
  for (int j = 0; j < p; ++j) out.push_back("g" + std::to_string(j));
  return out;
}

inline std::vector<std::string> sample_names(int n) {
  std::vector<std::string> out;
  out.reserve(n);
  for (int i = 0; i < n; ++i) out.push_back("s" + std::to_string(i));
  return out;
}

inline netsig::ExpressionDataset make_dataset(const Eigen::MatrixXd& X,
                                              const Eigen::VectorXd& y) {
  return netsig::validate_dataset(X, gene_names(static_cast<int>(X.cols())),
                                  sample_names(static_cast<int>(X.rows())), y);
}

}  // namespace testutil
