#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "topicbench/matrix.hpp"

namespace topicbench {

// Functional form of the word marginal P(w) or of the topic sizes V_t.
// power_law weights rank r (1-based) by r^-exponent; exponent must exceed 1.
struct Distribution {
  enum class Shape { uniform, power_law };

  Shape shape = Shape::uniform;
  double exponent = 0.0;

  static Distribution uniform() { return {}; }
  static Distribution power_law(double exponent) { return {Shape::power_law, exponent}; }

  friend bool operator==(const Distribution&, const Distribution&) = default;
};

// All knobs of the generative process. Word, topic and document ids are dense
// 0-based integers.
struct CorpusSpec {
  std::size_t num_topics = 10;
  std::size_t num_documents = 1000;
  // Uniform document length, used unless `doc_lengths` is non-empty.
  std::size_t doc_length = 100;
  // Optional per-document lengths; when set, must hold num_documents entries.
  std::vector<std::size_t> doc_lengths;
  std::size_t vocabulary_size = 1000;
  // Fraction of unique words that are stopwords.
  double stopword_fraction = 0.0;
  double structure_word = 1.0;  // c_w
  double structure_doc = 1.0;   // c_d
  Distribution word_dist;
  Distribution topic_size_dist;
  // Dirichlet concentration a_c of per-document word-topic rows; nullopt is
  // the non-bursty limit a_c -> infinity.
  std::optional<double> burstiness;
  // Take the most frequent words as stopwords instead of a random subset.
  bool stopwords_by_rank = false;
  std::uint64_t seed = 0;

  // Sets c_w = c_d = c.
  void set_structure(double c) { structure_word = structure_doc = c; }

  std::size_t length_of(std::size_t doc) const {
    return doc_lengths.empty() ? doc_length : doc_lengths[doc];
  }
  std::size_t total_tokens() const;
  // round(P_s * V)
  std::size_t num_stopwords() const;
  std::size_t num_topical_words() const { return vocabulary_size - num_stopwords(); }

  // Throws InvalidArgument naming the first violated constraint.
  void validate() const;

  friend bool operator==(const CorpusSpec&, const CorpusSpec&) = default;
};

inline constexpr std::int32_t kNoTopic = -1;

// Closed-form ground truth of a synthetic corpus.
struct GroundTruth {
  std::vector<double> word_marginal;         // P(w), length V
  std::vector<std::uint32_t> stopwords;      // sorted ids
  std::vector<std::uint32_t> topical_words;  // sorted ids
  std::vector<std::int32_t> word_topic;      // t_w, kNoTopic for stopwords
  std::vector<double> topic_marginal;        // P(t), length K
  std::vector<std::uint32_t> doc_topic;      // t_d, length D
  std::vector<std::size_t> topic_sizes;      // V_t, length K

  std::size_t num_topics() const { return topic_marginal.size(); }
  std::size_t vocabulary_size() const { return word_marginal.size(); }
  std::size_t num_documents() const { return doc_topic.size(); }
  bool is_stopword(std::size_t word) const { return word_topic[word] == kNoTopic; }

  friend bool operator==(const GroundTruth&, const GroundTruth&) = default;
};

// P(t) = sum_{w in V_T} delta(t_w, t) P(w) / sum_{w in V_T} P(w).
// `word_topic` holds kNoTopic for stopwords. Throws InvalidArgument with
// "no topical mass" when no topical word carries probability.
std::vector<double> topic_marginal(std::span<const double> word_marginal,
                                   std::span<const std::int32_t> word_topic,
                                   std::size_t num_topics);

// P(w|t) = c_w delta(t_w, t) P(w)/P(t) + (1 - c_w) P(w) for topical words,
// P(w) for stopwords.
double word_given_topic(const GroundTruth& truth, double structure_word, std::size_t word,
                        std::size_t topic);

// P(t|d) = c_d delta(t_d, t) + (1 - c_d) P(t).
double topic_given_doc(const GroundTruth& truth, double structure_doc, std::size_t topic,
                       std::size_t doc);

// K x V matrix of P(w|t).
Matrix word_topic_matrix(const GroundTruth& truth, double structure_word);
// D x K matrix of P(t|d).
Matrix topic_doc_matrix(const GroundTruth& truth, double structure_doc);

// Bag-of-words documents in compressed row form: document d owns
// tokens()[offsets()[d], offsets()[d+1]).
class DocumentSet {
 public:
  DocumentSet() : offsets_{0} {}
  DocumentSet(std::vector<std::uint32_t> tokens, std::vector<std::size_t> offsets,
              std::size_t vocabulary_size);

  static DocumentSet from_documents(const std::vector<std::vector<std::uint32_t>>& docs,
                                    std::size_t vocabulary_size);

  std::size_t num_documents() const { return offsets_.size() - 1; }
  std::size_t num_tokens() const { return tokens_.size(); }
  std::size_t vocabulary_size() const { return vocabulary_size_; }
  std::size_t doc_length(std::size_t doc) const { return offsets_[doc + 1] - offsets_[doc]; }

  std::span<const std::uint32_t> doc(std::size_t d) const {
    return std::span(tokens_).subspan(offsets_[d], doc_length(d));
  }
  std::span<const std::uint32_t> tokens() const { return tokens_; }
  std::span<const std::size_t> offsets() const { return offsets_; }

  friend bool operator==(const DocumentSet&, const DocumentSet&) = default;

 private:
  std::vector<std::uint32_t> tokens_;
  std::vector<std::size_t> offsets_;
  std::size_t vocabulary_size_ = 0;
};

// One topic id per token in document-major order.
class TokenLabeling {
 public:
  TokenLabeling() = default;
  // Label space is [0, max label + 1).
  explicit TokenLabeling(std::vector<std::uint32_t> labels);
  // Throws InvalidArgument if any label is >= num_labels.
  TokenLabeling(std::vector<std::uint32_t> labels, std::size_t num_labels);

  std::size_t size() const { return labels_.size(); }
  bool empty() const { return labels_.empty(); }
  std::size_t num_labels() const { return num_labels_; }
  std::span<const std::uint32_t> labels() const { return labels_; }
  std::uint32_t operator[](std::size_t i) const { return labels_[i]; }

  // Number of label ids that occur at least once.
  std::size_t num_labels_used() const;

  friend bool operator==(const TokenLabeling&, const TokenLabeling&) = default;

 private:
  std::vector<std::uint32_t> labels_;
  std::size_t num_labels_ = 0;
};

struct SyntheticCorpus {
  CorpusSpec spec;
  GroundTruth truth;
  DocumentSet documents;
  TokenLabeling planted_labels;
};

// Output of any inference backend.
struct TopicModelResult {
  Matrix topic_doc;   // D x K'
  Matrix word_topic;  // K' x V
  TokenLabeling token_labels;
  std::string algorithm_tag;
  std::map<std::string, std::string> hyperparams;

  std::size_t num_topics() const { return word_topic.rows(); }

  // Checks matrix shapes, row sums within `tolerance`, and label range.
  void validate(double tolerance = 1e-9) const;
};

}  // namespace topicbench
