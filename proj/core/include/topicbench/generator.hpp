#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "topicbench/corpus.hpp"
#include "topicbench/matrix.hpp"
#include "topicbench/rng.hpp"

namespace topicbench {

// Global word marginal P(w). Word id r-1 carries frequency rank r, so under a
// power law P(w) decreases with the id.
std::vector<double> build_word_marginal(const Distribution& shape, std::size_t vocabulary_size);

// Integer topic sizes V_t summing to `num_topical_words`, each >= 1.
// Uniform sizes give the remainder one word each to the lowest-indexed
// topics. Power-law sizes reserve one word per topic and apportion the rest
// by largest remainder of (V_T - K) * r^-gamma / sum, ties to the lower index.
std::vector<std::size_t> topic_sizes(const Distribution& shape, std::size_t num_topical_words,
                                     std::size_t num_topics);

struct VocabularyAssignment {
  std::vector<std::uint32_t> stopwords;      // sorted
  std::vector<std::uint32_t> topical_words;  // sorted
  std::vector<std::size_t> topic_sizes;
  std::vector<std::int32_t> word_topic;  // kNoTopic for stopwords
};

// Splits the vocabulary into round(P_s V) stopwords and topical words, then
// partitions the topical words uniformly at random into topics of the sizes
// given by `topic_sizes`. Stopwords are a uniform random subset unless
// spec.stopwords_by_rank, in which case they are the most frequent ids.
VocabularyAssignment assign_vocabulary(const CorpusSpec& spec, Engine& rng);

// Per-document word-topic rows P_d(w|t) ~ Dir(a_c P(w|t)), drawn the first
// time a topic is used in the document.
class BurstyDocDistribution {
 public:
  BurstyDocDistribution(const Matrix& global_word_topic, double concentration);

  // Row t of P_d(w|t); draws it from `rng` on first access.
  std::span<const double> row(std::size_t topic, Engine& rng);
  std::size_t sample_word(std::size_t topic, Engine& rng);
  bool materialized(std::size_t topic) const { return tables_[topic].has_value(); }

 private:
  void materialize(std::size_t topic, Engine& rng);

  const Matrix* global_;
  double concentration_;
  std::vector<std::vector<double>> rows_;
  std::vector<std::optional<CumulativeTable>> tables_;
  std::vector<double> scratch_;
};

struct GenerateOptions {
  // Worker threads for document generation; 0 picks hardware concurrency.
  // The corpus does not depend on this value.
  std::size_t threads = 0;
};

// Runs the four-step generative process. A pure function of the spec
// (including its seed): the vocabulary is drawn from substream
// (seed, kVocabulary) and document d from substream (seed, kDocument, d).
SyntheticCorpus generate_corpus(const CorpusSpec& spec, const GenerateOptions& options = {});

}  // namespace topicbench
