#include "topicbench/corpus.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <numeric>

#include "topicbench/error.hpp"

namespace topicbench {

namespace {

bool in_unit_interval(double x) { return x >= 0.0 && x <= 1.0; }

void check_distribution(const Distribution& dist, const char* what) {
  if (dist.shape == Distribution::Shape::power_law && !(dist.exponent > 1.0 && std::isfinite(dist.exponent))) {
    throw InvalidArgument(std::string(what) + ": power-law exponent must be > 1");
  }
}

}  // namespace

std::size_t CorpusSpec::total_tokens() const {
  if (doc_lengths.empty()) return num_documents * doc_length;
  return std::accumulate(doc_lengths.begin(), doc_lengths.end(), std::size_t{0});
}

std::size_t CorpusSpec::num_stopwords() const {
  return static_cast<std::size_t>(std::llround(stopword_fraction * static_cast<double>(vocabulary_size)));
}

void CorpusSpec::validate() const {
  if (num_topics < 1) throw InvalidArgument("num_topics must be >= 1");
  if (num_documents < 1) throw InvalidArgument("num_documents must be >= 1");
  if (vocabulary_size < 2) throw InvalidArgument("vocabulary_size must be >= 2");
  if (doc_lengths.empty()) {
    if (doc_length < 1) throw InvalidArgument("doc_length must be >= 1");
  } else {
    if (doc_lengths.size() != num_documents) {
      throw InvalidArgument("doc_lengths has " + std::to_string(doc_lengths.size()) +
                            " entries, expected num_documents = " + std::to_string(num_documents));
    }
    for (std::size_t d = 0; d < doc_lengths.size(); ++d) {
      if (doc_lengths[d] < 1) {
        throw InvalidArgument("doc_lengths[" + std::to_string(d) + "] must be >= 1");
      }
    }
  }
  if (!in_unit_interval(stopword_fraction)) throw InvalidArgument("stopword_fraction must lie in [0, 1]");
  if (!in_unit_interval(structure_word)) throw InvalidArgument("structure_word (c_w) must lie in [0, 1]");
  if (!in_unit_interval(structure_doc)) throw InvalidArgument("structure_doc (c_d) must lie in [0, 1]");
  check_distribution(word_dist, "word_dist");
  check_distribution(topic_size_dist, "topic_size_dist");
  if (burstiness && !(*burstiness > 0.0 && std::isfinite(*burstiness))) {
    throw InvalidArgument("burstiness must be a positive finite concentration");
  }
  if (num_stopwords() > vocabulary_size || num_topical_words() < num_topics) {
    throw InvalidArgument("topical vocabulary (" + std::to_string(num_topical_words()) +
                          " words) must hold at least one word per topic (K = " +
                          std::to_string(num_topics) + ")");
  }
}

std::vector<double> topic_marginal(std::span<const double> word_marginal,
                                   std::span<const std::int32_t> word_topic,
                                   std::size_t num_topics) {
  if (word_marginal.size() != word_topic.size()) {
    throw InvalidArgument("word marginal and word-topic map differ in length");
  }
  std::vector<double> mass(num_topics, 0.0);
  double topical = 0.0;
  for (std::size_t w = 0; w < word_marginal.size(); ++w) {
    const std::int32_t t = word_topic[w];
    if (t == kNoTopic) continue;
    if (t < 0 || static_cast<std::size_t>(t) >= num_topics) {
      throw InvalidArgument("word " + std::to_string(w) + " mapped to topic out of range");
    }
    mass[static_cast<std::size_t>(t)] += word_marginal[w];
    topical += word_marginal[w];
  }
  if (!(topical > 0.0)) throw InvalidArgument("no topical mass");
  for (double& m : mass) m /= topical;
  return mass;
}

double word_given_topic(const GroundTruth& truth, double structure_word, std::size_t word,
                        std::size_t topic) {
  assert(word < truth.vocabulary_size() && topic < truth.num_topics());
  const double pw = truth.word_marginal[word];
  const std::int32_t tw = truth.word_topic[word];
  if (tw == kNoTopic) return pw;
  const double structured =
      static_cast<std::size_t>(tw) == topic ? pw / truth.topic_marginal[topic] : 0.0;
  assert(static_cast<std::size_t>(tw) != topic || truth.topic_marginal[topic] > 0.0);
  return structure_word * structured + (1.0 - structure_word) * pw;
}

double topic_given_doc(const GroundTruth& truth, double structure_doc, std::size_t topic,
                       std::size_t doc) {
  assert(topic < truth.num_topics() && doc < truth.num_documents());
  const double delta = truth.doc_topic[doc] == topic ? 1.0 : 0.0;
  return structure_doc * delta + (1.0 - structure_doc) * truth.topic_marginal[topic];
}

Matrix word_topic_matrix(const GroundTruth& truth, double structure_word) {
  Matrix m(truth.num_topics(), truth.vocabulary_size());
  for (std::size_t t = 0; t < m.rows(); ++t) {
    for (std::size_t w = 0; w < m.cols(); ++w) m(t, w) = word_given_topic(truth, structure_word, w, t);
  }
  return m;
}

Matrix topic_doc_matrix(const GroundTruth& truth, double structure_doc) {
  Matrix m(truth.num_documents(), truth.num_topics());
  for (std::size_t d = 0; d < m.rows(); ++d) {
    for (std::size_t t = 0; t < m.cols(); ++t) m(d, t) = topic_given_doc(truth, structure_doc, t, d);
  }
  return m;
}

DocumentSet::DocumentSet(std::vector<std::uint32_t> tokens, std::vector<std::size_t> offsets,
                         std::size_t vocabulary_size)
    : tokens_(std::move(tokens)), offsets_(std::move(offsets)), vocabulary_size_(vocabulary_size) {
  if (offsets_.empty() || offsets_.front() != 0 || offsets_.back() != tokens_.size() ||
      !std::is_sorted(offsets_.begin(), offsets_.end())) {
    throw InvalidArgument("document offsets do not partition the token array");
  }
  for (std::uint32_t w : tokens_) {
    if (w >= vocabulary_size_) {
      throw InvalidArgument("word id " + std::to_string(w) + " outside vocabulary of size " +
                            std::to_string(vocabulary_size_));
    }
  }
}

DocumentSet DocumentSet::from_documents(const std::vector<std::vector<std::uint32_t>>& docs,
                                        std::size_t vocabulary_size) {
  std::vector<std::uint32_t> tokens;
  std::vector<std::size_t> offsets{0};
  offsets.reserve(docs.size() + 1);
  for (const auto& doc : docs) {
    tokens.insert(tokens.end(), doc.begin(), doc.end());
    offsets.push_back(tokens.size());
  }
  return DocumentSet(std::move(tokens), std::move(offsets), vocabulary_size);
}

TokenLabeling::TokenLabeling(std::vector<std::uint32_t> labels) : labels_(std::move(labels)) {
  if (!labels_.empty()) num_labels_ = *std::max_element(labels_.begin(), labels_.end()) + std::size_t{1};
}

TokenLabeling::TokenLabeling(std::vector<std::uint32_t> labels, std::size_t num_labels)
    : labels_(std::move(labels)), num_labels_(num_labels) {
  for (std::size_t i = 0; i < labels_.size(); ++i) {
    if (labels_[i] >= num_labels_) {
      throw InvalidArgument("label " + std::to_string(labels_[i]) + " at token " + std::to_string(i) +
                            " is outside [0, " + std::to_string(num_labels_) + ")");
    }
  }
}

std::size_t TokenLabeling::num_labels_used() const {
  std::vector<bool> seen(num_labels_, false);
  std::size_t used = 0;
  for (std::uint32_t l : labels_) {
    if (!seen[l]) {
      seen[l] = true;
      ++used;
    }
  }
  return used;
}

namespace {

void check_row_stochastic(const Matrix& m, const char* name, double tolerance) {
  for (std::size_t r = 0; r < m.rows(); ++r) {
    double sum = 0.0;
    for (double x : m.row(r)) {
      if (!(x >= 0.0) || !std::isfinite(x)) {
        throw InvalidArgument(std::string(name) + " row " + std::to_string(r) +
                              " has a negative or non-finite entry");
      }
      sum += x;
    }
    if (std::abs(sum - 1.0) > tolerance) {
      throw InvalidArgument(std::string(name) + " row " + std::to_string(r) + " sums to " +
                            std::to_string(sum));
    }
  }
}

}  // namespace

void TopicModelResult::validate(double tolerance) const {
  if (word_topic.rows() == 0) throw InvalidArgument("result has no topics");
  if (topic_doc.cols() != word_topic.rows()) {
    throw InvalidArgument("topic_doc has " + std::to_string(topic_doc.cols()) +
                          " columns but word_topic has " + std::to_string(word_topic.rows()) + " rows");
  }
  check_row_stochastic(topic_doc, "topic_doc", tolerance);
  check_row_stochastic(word_topic, "word_topic", tolerance);
  if (token_labels.num_labels() > num_topics()) {
    throw InvalidArgument("token labels reference topic " + std::to_string(token_labels.num_labels() - 1) +
                          " but the result has " + std::to_string(num_topics()) + " topics");
  }
}

}  // namespace topicbench
