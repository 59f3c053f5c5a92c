#include "topicbench/generator.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <thread>

#include "topicbench/error.hpp"

namespace topicbench {

namespace {

std::vector<double> normalized_power_law(std::size_t n, double exponent) {
  std::vector<double> weights(n);
  for (std::size_t r = 0; r < n; ++r) weights[r] = std::pow(static_cast<double>(r + 1), -exponent);
  // Sum smallest-first to limit rounding in long tails.
  double total = 0.0;
  for (std::size_t r = n; r-- > 0;) total += weights[r];
  for (double& w : weights) w /= total;
  return weights;
}

}  // namespace

std::vector<double> build_word_marginal(const Distribution& shape, std::size_t vocabulary_size) {
  if (vocabulary_size < 2) throw InvalidArgument("vocabulary_size must be >= 2");
  if (shape.shape == Distribution::Shape::uniform) {
    return std::vector<double>(vocabulary_size, 1.0 / static_cast<double>(vocabulary_size));
  }
  if (!(shape.exponent > 1.0 && std::isfinite(shape.exponent))) {
    throw InvalidArgument("power-law exponent must be > 1, got " + std::to_string(shape.exponent));
  }
  return normalized_power_law(vocabulary_size, shape.exponent);
}

std::vector<std::size_t> topic_sizes(const Distribution& shape, std::size_t num_topical_words,
                                     std::size_t num_topics) {
  if (num_topics == 0) throw InvalidArgument("num_topics must be >= 1");
  if (num_topical_words < num_topics) {
    throw InvalidArgument("topical vocabulary of " + std::to_string(num_topical_words) +
                          " words cannot cover " + std::to_string(num_topics) + " topics");
  }
  std::vector<std::size_t> sizes(num_topics);
  if (shape.shape == Distribution::Shape::uniform) {
    const std::size_t base = num_topical_words / num_topics;
    const std::size_t extra = num_topical_words % num_topics;
    for (std::size_t t = 0; t < num_topics; ++t) sizes[t] = base + (t < extra ? 1 : 0);
    return sizes;
  }
  if (!(shape.exponent > 1.0 && std::isfinite(shape.exponent))) {
    throw InvalidArgument("topic-size power-law exponent must be > 1");
  }
  const std::vector<double> weights = normalized_power_law(num_topics, shape.exponent);
  const std::size_t spare = num_topical_words - num_topics;
  std::vector<double> remainder(num_topics);
  std::size_t assigned = 0;
  for (std::size_t t = 0; t < num_topics; ++t) {
    const double ideal = static_cast<double>(spare) * weights[t];
    const auto whole = static_cast<std::size_t>(std::floor(ideal));
    sizes[t] = 1 + whole;
    remainder[t] = ideal - static_cast<double>(whole);
    assigned += whole;
  }
  std::vector<std::size_t> order(num_topics);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return remainder[a] > remainder[b]; });
  for (std::size_t i = 0; assigned < spare; ++i, ++assigned) ++sizes[order[i % num_topics]];
  return sizes;
}

VocabularyAssignment assign_vocabulary(const CorpusSpec& spec, Engine& rng) {
  spec.validate();
  const std::size_t vocab = spec.vocabulary_size;
  const std::size_t num_stop = spec.num_stopwords();

  std::vector<std::uint32_t> ids(vocab);
  std::iota(ids.begin(), ids.end(), 0u);
  if (!spec.stopwords_by_rank) shuffle(std::span(ids), rng);

  VocabularyAssignment out;
  out.stopwords.assign(ids.begin(), ids.begin() + static_cast<std::ptrdiff_t>(num_stop));
  std::vector<std::uint32_t> topical(ids.begin() + static_cast<std::ptrdiff_t>(num_stop), ids.end());

  out.topic_sizes = topic_sizes(spec.topic_size_dist, topical.size(), spec.num_topics);
  // Random partition respecting V_t: shuffle, then cut into consecutive blocks.
  shuffle(std::span(topical), rng);
  out.word_topic.assign(vocab, kNoTopic);
  std::size_t pos = 0;
  for (std::size_t t = 0; t < out.topic_sizes.size(); ++t) {
    for (std::size_t i = 0; i < out.topic_sizes[t]; ++i) {
      out.word_topic[topical[pos++]] = static_cast<std::int32_t>(t);
    }
  }
  std::sort(out.stopwords.begin(), out.stopwords.end());
  std::sort(topical.begin(), topical.end());
  out.topical_words = std::move(topical);
  return out;
}

BurstyDocDistribution::BurstyDocDistribution(const Matrix& global_word_topic, double concentration)
    : global_(&global_word_topic),
      concentration_(concentration),
      rows_(global_word_topic.rows()),
      tables_(global_word_topic.rows()),
      scratch_(global_word_topic.cols()) {
  if (!(concentration > 0.0 && std::isfinite(concentration))) {
    throw InvalidArgument("burstiness concentration must be positive and finite");
  }
}

void BurstyDocDistribution::materialize(std::size_t topic, Engine& rng) {
  const auto global_row = global_->row(topic);
  for (std::size_t w = 0; w < scratch_.size(); ++w) scratch_[w] = concentration_ * global_row[w];
  rows_[topic] = sample_dirichlet(rng, scratch_);
  tables_[topic].emplace(rows_[topic]);
}

std::span<const double> BurstyDocDistribution::row(std::size_t topic, Engine& rng) {
  if (!tables_[topic]) materialize(topic, rng);
  return rows_[topic];
}

std::size_t BurstyDocDistribution::sample_word(std::size_t topic, Engine& rng) {
  if (!tables_[topic]) materialize(topic, rng);
  return tables_[topic]->sample(rng);
}

SyntheticCorpus generate_corpus(const CorpusSpec& spec, const GenerateOptions& options) {
  spec.validate();
  SyntheticCorpus corpus;
  corpus.spec = spec;

  GroundTruth& truth = corpus.truth;
  truth.word_marginal = build_word_marginal(spec.word_dist, spec.vocabulary_size);
  {
    Engine vocab_rng(derive_seed(spec.seed, stream::kVocabulary));
    VocabularyAssignment vocab = assign_vocabulary(spec, vocab_rng);
    truth.stopwords = std::move(vocab.stopwords);
    truth.topical_words = std::move(vocab.topical_words);
    truth.topic_sizes = std::move(vocab.topic_sizes);
    truth.word_topic = std::move(vocab.word_topic);
  }
  truth.topic_marginal = topic_marginal(truth.word_marginal, truth.word_topic, spec.num_topics);

  const std::size_t num_topics = spec.num_topics;
  const std::size_t num_docs = spec.num_documents;
  const Matrix word_topic = word_topic_matrix(truth, spec.structure_word);

  std::vector<CumulativeTable> word_tables;
  word_tables.reserve(num_topics);
  for (std::size_t t = 0; t < num_topics; ++t) word_tables.emplace_back(word_topic.row(t));

  // P(t|d) depends on d only through t_d, so K tables cover every document.
  const CumulativeTable doc_topic_table(truth.topic_marginal);
  std::vector<CumulativeTable> topic_tables;
  topic_tables.reserve(num_topics);
  {
    std::vector<double> row(num_topics);
    for (std::size_t td = 0; td < num_topics; ++td) {
      for (std::size_t t = 0; t < num_topics; ++t) {
        row[t] = spec.structure_doc * (t == td ? 1.0 : 0.0) +
                 (1.0 - spec.structure_doc) * truth.topic_marginal[t];
      }
      topic_tables.emplace_back(row);
    }
  }

  std::vector<std::size_t> offsets(num_docs + 1, 0);
  for (std::size_t d = 0; d < num_docs; ++d) offsets[d + 1] = offsets[d] + spec.length_of(d);
  std::vector<std::uint32_t> tokens(offsets.back());
  std::vector<std::uint32_t> labels(offsets.back());
  truth.doc_topic.assign(num_docs, 0);

  auto generate_range = [&](std::size_t begin, std::size_t end) {
    std::optional<BurstyDocDistribution> bursty;
    for (std::size_t d = begin; d < end; ++d) {
      Engine rng(derive_seed(spec.seed, stream::kDocument, d));
      const std::size_t td = doc_topic_table.sample(rng);
      truth.doc_topic[d] = static_cast<std::uint32_t>(td);
      if (spec.burstiness) bursty.emplace(word_topic, *spec.burstiness);
      for (std::size_t i = offsets[d]; i < offsets[d + 1]; ++i) {
        const std::size_t z = topic_tables[td].sample(rng);
        const std::size_t w = bursty ? bursty->sample_word(z, rng) : word_tables[z].sample(rng);
        labels[i] = static_cast<std::uint32_t>(z);
        tokens[i] = static_cast<std::uint32_t>(w);
      }
    }
  };

  std::size_t threads = options.threads == 0 ? std::thread::hardware_concurrency() : options.threads;
  threads = std::clamp<std::size_t>(threads, 1, num_docs);
  if (threads == 1) {
    generate_range(0, num_docs);
  } else {
    std::vector<std::jthread> workers;
    workers.reserve(threads);
    for (std::size_t k = 0; k < threads; ++k) {
      workers.emplace_back(generate_range, num_docs * k / threads, num_docs * (k + 1) / threads);
    }
  }

  corpus.documents = DocumentSet(std::move(tokens), std::move(offsets), spec.vocabulary_size);
  corpus.planted_labels = TokenLabeling(std::move(labels), num_topics);
  return corpus;
}

}  // namespace topicbench
