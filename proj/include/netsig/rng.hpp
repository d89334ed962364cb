#pragma once

#include <cstdint>
#include <random>
#include <string_view>
#include <vector>

namespace netsig {

using Rng = std::mt19937_64;

// Seed derivation scheme: every random stream in a run is seeded as
// derive_seed(master, stream_name, index), so whole runs are reproducible
// from the single master seed and streams stay independent of evaluation
// order (fold plans, subsample draws, synthetic generation).
std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b);
std::uint64_t derive_seed(std::uint64_t master, std::string_view stream,
                          std::uint64_t index = 0);

// Distribution helpers are hand-rolled on top of the engine so that a given
// seed produces the same stream on every standard library.
double uniform_real(Rng& rng);              // [0, 1)
int uniform_index(Rng& rng, int n);         // {0, ..., n-1}, unbiased
double standard_normal(Rng& rng);           // Box-Muller, one value per call

// First k elements of a random permutation of {0,...,n-1}, returned sorted.
std::vector<int> sample_without_replacement(Rng& rng, int n, int k);

template <typename T>
void shuffle(Rng& rng, std::vector<T>& v) {
  for (int i = static_cast<int>(v.size()) - 1; i > 0; --i) {
    std::swap(v[i], v[uniform_index(rng, i + 1)]);
  }
}

}  // namespace netsig
