#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <vector>

namespace topicbench {

// Every stream in the toolkit is a std::mt19937_64 seeded from a 64-bit value
// derived with `derive_seed`. The engine's output sequence is fixed by the
// C++ standard, so non-bursty corpora are portable across toolchains. Gamma
// variates (burstiness) go through std::gamma_distribution, whose algorithm
// is library-defined.
using Engine = std::mt19937_64;

// SplitMix64 finalizer (Steele, Lea, Flood 2014):
//   z += 0x9e3779b97f4a7c15
//   z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9
//   z = (z ^ (z >> 27)) * 0x94d049bb133111eb
//   z ^= z >> 31
std::uint64_t splitmix64(std::uint64_t z);

// derive_seed(s, a)     = splitmix64(splitmix64(s) ^ a)
// derive_seed(s, a, b)  = splitmix64(derive_seed(s, a) ^ b)
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t a);
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b);

// Substream tags; a substream is derive_seed(seed, tag, index).
namespace stream {
inline constexpr std::uint64_t kVocabulary = 1;
inline constexpr std::uint64_t kDocument = 2;
inline constexpr std::uint64_t kInference = 3;
inline constexpr std::uint64_t kRealization = 4;
}  // namespace stream

// Uniform double in [0, 1) from the top 53 bits of one engine draw.
inline double uniform01(Engine& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Uniform integer in [0, n) by Lemire's multiply-shift rejection method.
std::uint64_t uniform_index(Engine& rng, std::uint64_t n);

// Fisher-Yates shuffle driven by `uniform_index` (std::shuffle's consumption
// of the engine is implementation-defined).
template <typename T>
void shuffle(std::span<T> values, Engine& rng) {
  for (std::size_t i = values.size(); i > 1; --i) {
    const std::size_t j = uniform_index(rng, i);
    std::swap(values[i - 1], values[j]);
  }
}

// Categorical sampler over a fixed weight vector: cumulative sums plus binary
// search, O(log n) per draw. Zero-weight entries are never drawn.
class CumulativeTable {
 public:
  CumulativeTable() = default;
  explicit CumulativeTable(std::span<const double> weights);

  std::size_t sample(Engine& rng) const;
  std::size_t size() const { return cumulative_.size(); }
  double total() const { return cumulative_.empty() ? 0.0 : cumulative_.back(); }

 private:
  std::vector<double> cumulative_;
};

// Draw log(X) for X ~ Gamma(shape, 1). For shape < 1 the boost
// X = Gamma(shape + 1) * U^(1/shape) is taken in log space so that tiny
// shapes do not underflow to zero.
double log_gamma_variate(Engine& rng, double shape);

// Dirichlet(concentration) via normalized Gamma variates. Components with
// zero concentration stay exactly zero.
std::vector<double> sample_dirichlet(Engine& rng, std::span<const double> concentration);

}  // namespace topicbench
