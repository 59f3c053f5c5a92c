#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "topicbench/corpus.hpp"
#include "topicbench/rng.hpp"

namespace topicbench {

// Collapsed Gibbs sampling for LDA with symmetric Dirichlet priors. No
// hyperparameter re-estimation; the final state is read out.
struct GibbsConfig {
  std::size_t assumed_topics = 10;  // K_a
  double alpha = 0.5;               // document-topic prior
  double beta = 0.01;               // topic-word prior
  std::size_t sweeps = 1000;
  std::uint64_t seed = 0;

  void validate() const;
};

struct Hyperparams {
  double alpha = 0.0;
  double beta = 0.0;
};

// "ldags_default" -> (5/K_a, 0.01); "ldavb_default" -> (1/K_a, 1/K_a).
Hyperparams hyperparam_preset(std::string_view name, std::size_t assumed_topics);

class GibbsSampler {
 public:
  // Draws the initial assignment uniformly at random from `config.seed`.
  GibbsSampler(const DocumentSet& docs, const GibbsConfig& config);

  // One pass over every token in document order.
  void sweep();
  void run(std::size_t sweeps) {
    for (std::size_t s = 0; s < sweeps; ++s) sweep();
  }

  std::size_t iterations() const { return iterations_; }
  std::span<const std::uint32_t> assignments() const { return z_; }

  std::uint32_t doc_topic_count(std::size_t d, std::size_t t) const { return ndt_[d * k_ + t]; }
  std::uint32_t topic_word_count(std::size_t t, std::size_t w) const { return nwt_[w * k_ + t]; }
  std::uint32_t topic_count(std::size_t t) const { return nt_[t]; }

  // True when every count table equals a fresh tally of the assignments.
  bool counts_consistent() const;

  TopicModelResult result() const;

 private:
  const DocumentSet* docs_;
  GibbsConfig config_;
  std::size_t k_;
  Engine rng_;
  std::size_t iterations_ = 0;
  std::vector<std::uint32_t> z_;
  std::vector<std::uint32_t> ndt_;  // D x K
  std::vector<std::uint32_t> nwt_;  // V x K, word-major for the inner loop
  std::vector<std::uint32_t> nt_;
  std::vector<double> inv_denominator_;  // 1 / (n(t) + V beta)
  std::vector<double> cumulative_;
};

// Initializes, performs config.sweeps sweeps and returns
//   P(t|d) = (n(d,t) + alpha) / (m_d + K_a alpha)
//   P(w|t) = (n(t,w) + beta) / (n(t) + V beta)
// with the final assignments as token labels.
TopicModelResult run_gibbs(const DocumentSet& docs, const GibbsConfig& config);

}  // namespace topicbench
