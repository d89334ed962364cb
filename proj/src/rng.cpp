#include "netsig/rng.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace netsig {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b) {
  return splitmix64(splitmix64(a) ^ (0x9e3779b97f4a7c15ULL + b));
}

std::uint64_t derive_seed(std::uint64_t master, std::string_view stream,
                          std::uint64_t index) {
  std::uint64_t h = master;
  for (unsigned char c : stream) h = mix_seed(h, c);
  return mix_seed(h, index);
}

double uniform_real(Rng& rng) {
  // 53 random bits into [0,1)
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

int uniform_index(Rng& rng, int n) {
  if (n <= 0) throw std::invalid_argument("uniform_index: n must be positive");
  const std::uint64_t un = static_cast<std::uint64_t>(n);
  const std::uint64_t limit = (UINT64_MAX / un) * un;
  std::uint64_t r = rng();
  while (r >= limit) r = rng();
  return static_cast<int>(r % un);
}

double standard_normal(Rng& rng) {
  double u1 = uniform_real(rng);
  while (u1 <= 0.0) u1 = uniform_real(rng);
  const double u2 = uniform_real(rng);
  return std::sqrt(-2.0 * std::log(u1)) *
         std::cos(2.0 * std::numbers::pi * u2);
}

std::vector<int> sample_without_replacement(Rng& rng, int n, int k) {
  if (k < 0 || k > n) {
    throw std::invalid_argument("sample_without_replacement: bad k");
  }
  std::vector<int> pool(n);
  for (int i = 0; i < n; ++i) pool[i] = i;
  for (int i = 0; i < k; ++i) {
    std::swap(pool[i], pool[i + uniform_index(rng, n - i)]);
  }
  std::vector<int> out(pool.begin(), pool.begin() + k);
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace netsig
