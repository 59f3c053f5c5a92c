#include "topicbench/rng.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "topicbench/error.hpp"

namespace topicbench {

std::uint64_t splitmix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t a) {
  return splitmix64(splitmix64(seed) ^ a);
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b) {
  return splitmix64(derive_seed(seed, a) ^ b);
}

std::uint64_t uniform_index(Engine& rng, std::uint64_t n) {
  __extension__ using u128 = unsigned __int128;
  u128 m = static_cast<u128>(rng()) * n;
  auto low = static_cast<std::uint64_t>(m);
  if (low < n) {
    const std::uint64_t threshold = (0 - n) % n;
    while (low < threshold) {
      m = static_cast<u128>(rng()) * n;
      low = static_cast<std::uint64_t>(m);
    }
  }
  return static_cast<std::uint64_t>(m >> 64);
}

CumulativeTable::CumulativeTable(std::span<const double> weights) {
  cumulative_.reserve(weights.size());
  double running = 0.0;
  for (double w : weights) {
    if (!(w >= 0.0) || !std::isfinite(w)) {
      throw InvalidArgument("categorical weights must be finite and nonnegative");
    }
    running += w;
    cumulative_.push_back(running);
  }
  if (!(running > 0.0)) throw InvalidArgument("categorical weights sum to zero");
}

std::size_t CumulativeTable::sample(Engine& rng) const {
  const double u = uniform01(rng) * cumulative_.back();
  auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
  if (it == cumulative_.end()) {
    // u rounded up to the total; step back to the last positive-weight entry.
    it = std::lower_bound(cumulative_.begin(), cumulative_.end(), cumulative_.back());
  }
  return static_cast<std::size_t>(it - cumulative_.begin());
}

double log_gamma_variate(Engine& rng, double shape) {
  if (shape >= 1.0) {
    std::gamma_distribution<double> gamma(shape, 1.0);
    return std::log(gamma(rng));
  }
  std::gamma_distribution<double> gamma(shape + 1.0, 1.0);
  const double u = 1.0 - uniform01(rng);  // (0, 1]
  return std::log(gamma(rng)) + std::log(u) / shape;
}

std::vector<double> sample_dirichlet(Engine& rng, std::span<const double> concentration) {
  std::vector<double> out(concentration.size(), 0.0);
  double max_log = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < concentration.size(); ++i) {
    if (concentration[i] > 0.0) {
      out[i] = log_gamma_variate(rng, concentration[i]);
      max_log = std::max(max_log, out[i]);
    }
  }
  if (max_log == -std::numeric_limits<double>::infinity()) {
    throw InvalidArgument("Dirichlet concentration has no positive component");
  }
  double total = 0.0;
  for (std::size_t i = 0; i < concentration.size(); ++i) {
    if (concentration[i] > 0.0) {
      out[i] = std::exp(out[i] - max_log);
      total += out[i];
    }
  }
  for (double& x : out) x /= total;
  return out;
}

}  // namespace topicbench
