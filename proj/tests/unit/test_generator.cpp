#include <gtest/gtest.h>

#include <cmath>
#include <numeric>
#include <set>

#include "topicbench/error.hpp"
#include "topicbench/generator.hpp"

using namespace topicbench;

namespace {

// Upper p-quantile of chi-square with k degrees of freedom (Wilson-Hilferty).
double chi2_critical(double k, double z) {
  const double a = 2.0 / (9.0 * k);
  return k * std::pow(1.0 - a + z * std::sqrt(a), 3.0);
}

}  // namespace

TEST(WordMarginal, UniformAndPowerLaw) {
  for (double p : build_word_marginal(Distribution::uniform(), 4)) EXPECT_EQ(p, 0.25);
  const auto z = build_word_marginal(Distribution::power_law(2.0), 3);
  EXPECT_NEAR(z[0], 36.0 / 49.0, 1e-15);
  EXPECT_NEAR(z[1], 9.0 / 49.0, 1e-15);
  EXPECT_NEAR(z[2], 4.0 / 49.0, 1e-15);
  EXPECT_THROW(build_word_marginal(Distribution::power_law(1.0), 3), InvalidArgument);
  EXPECT_THROW(build_word_marginal(Distribution::power_law(0.5), 3), InvalidArgument);
}

TEST(TopicSizes, UniformRemainderGoesToLowTopics) {
  EXPECT_EQ(topic_sizes(Distribution::uniform(), 100, 5), (std::vector<std::size_t>{20, 20, 20, 20, 20}));
  EXPECT_EQ(topic_sizes(Distribution::uniform(), 7, 5), (std::vector<std::size_t>{2, 2, 1, 1, 1}));
  EXPECT_THROW(topic_sizes(Distribution::uniform(), 4, 5), InvalidArgument);
}

TEST(TopicSizes, PowerLawSumsAndCoversEveryTopic) {
  for (std::size_t total : {10u, 57u, 350u, 1000u}) {
    const auto sizes = topic_sizes(Distribution::power_law(1.5), total, 10);
    EXPECT_EQ(std::accumulate(sizes.begin(), sizes.end(), std::size_t{0}), total);
    for (std::size_t t = 0; t < sizes.size(); ++t) {
      EXPECT_GE(sizes[t], 1u);
      if (t > 0) EXPECT_LE(sizes[t], sizes[t - 1]);
    }
  }
}

TEST(AssignVocabulary, StopwordCountAndPartition) {
  CorpusSpec spec;
  spec.vocabulary_size = 1000;
  spec.stopword_fraction = 0.65;
  Engine rng(3);
  const auto v = assign_vocabulary(spec, rng);
  EXPECT_EQ(v.stopwords.size(), 650u);
  EXPECT_EQ(v.topical_words.size(), 350u);
  std::set<std::uint32_t> all(v.stopwords.begin(), v.stopwords.end());
  all.insert(v.topical_words.begin(), v.topical_words.end());
  EXPECT_EQ(all.size(), 1000u);
  std::vector<std::size_t> counted(10, 0);
  for (auto w : v.stopwords) EXPECT_EQ(v.word_topic[w], kNoTopic);
  for (auto w : v.topical_words) {
    ASSERT_GE(v.word_topic[w], 0);
    ++counted[v.word_topic[w]];
  }
  EXPECT_EQ(counted, v.topic_sizes);
  // Random membership should not simply take the lowest ids.
  EXPECT_NE(v.stopwords.back(), 649u);
}

TEST(AssignVocabulary, StopwordsByRankTakeMostFrequentIds) {
  CorpusSpec spec;
  spec.vocabulary_size = 100;
  spec.stopword_fraction = 0.2;
  spec.stopwords_by_rank = true;
  Engine rng(3);
  const auto v = assign_vocabulary(spec, rng);
  for (std::uint32_t i = 0; i < 20; ++i) EXPECT_EQ(v.stopwords[i], i);
}

TEST(Generate, CorpusShapeAndPlantedLabels) {
  CorpusSpec spec;
  spec.num_documents = 50;
  spec.doc_length = 30;
  spec.vocabulary_size = 200;
  spec.set_structure(0.6);
  spec.seed = 17;
  const auto corpus = generate_corpus(spec);
  EXPECT_EQ(corpus.documents.num_documents(), 50u);
  EXPECT_EQ(corpus.documents.num_tokens(), 1500u);
  EXPECT_EQ(corpus.planted_labels.size(), 1500u);
  EXPECT_EQ(corpus.planted_labels.num_labels(), 10u);
  EXPECT_EQ(corpus.truth.num_documents(), 50u);
  EXPECT_NEAR(std::accumulate(corpus.truth.topic_marginal.begin(), corpus.truth.topic_marginal.end(), 0.0), 1.0,
              1e-12);
}

TEST(Generate, PaperScaleStructureSweepSpecHasMillionTokens) {
  CorpusSpec spec;
  spec.num_topics = 10;
  spec.num_documents = 10000;
  spec.doc_length = 100;
  spec.vocabulary_size = 1000;
  spec.set_structure(0.5);
  const auto corpus = generate_corpus(spec);
  EXPECT_EQ(corpus.documents.num_tokens(), 1000000u);
}

TEST(Generate, StructuredLimitKeepsDocumentsPure) {
  CorpusSpec spec;
  spec.num_documents = 200;
  spec.doc_length = 50;
  spec.vocabulary_size = 300;
  spec.word_dist = Distribution::power_law(1.3);
  spec.seed = 5;
  const auto corpus = generate_corpus(spec);
  for (std::size_t d = 0; d < 200; ++d) {
    const auto td = static_cast<std::int32_t>(corpus.truth.doc_topic[d]);
    const std::size_t begin = corpus.documents.offsets()[d];
    for (std::size_t i = 0; i < corpus.documents.doc_length(d); ++i) {
      ASSERT_EQ(corpus.truth.word_topic[corpus.documents.doc(d)[i]], td);
      ASSERT_EQ(static_cast<std::int32_t>(corpus.planted_labels[begin + i]), td);
    }
  }
}

TEST(Generate, PureDocumentsCarryDocTopicLabelsEvenWhenWordsAreRandom) {
  CorpusSpec spec;
  spec.num_documents = 100;
  spec.structure_word = 0.0;
  spec.structure_doc = 1.0;
  spec.stopword_fraction = 0.3;
  const auto corpus = generate_corpus(spec);
  for (std::size_t d = 0; d < 100; ++d) {
    const std::size_t begin = corpus.documents.offsets()[d];
    for (std::size_t i = 0; i < corpus.documents.doc_length(d); ++i) {
      ASSERT_EQ(corpus.planted_labels[begin + i], corpus.truth.doc_topic[d]);
    }
  }
}

TEST(Generate, RandomLimitWordFrequenciesFitMarginal) {
  CorpusSpec spec;
  spec.num_documents = 10000;
  spec.doc_length = 100;
  spec.vocabulary_size = 1000;
  spec.stopword_fraction = 0.3;
  spec.word_dist = Distribution::power_law(1.2);
  spec.set_structure(0.0);
  spec.seed = 2024;
  const auto corpus = generate_corpus(spec);
  std::vector<double> counts(spec.vocabulary_size, 0.0);
  for (auto w : corpus.documents.tokens()) counts[w] += 1.0;
  const double n = static_cast<double>(corpus.documents.num_tokens());
  double chi2 = 0.0;
  for (std::size_t w = 0; w < counts.size(); ++w) {
    const double expected = n * corpus.truth.word_marginal[w];
    ASSERT_GT(expected, 5.0);
    chi2 += (counts[w] - expected) * (counts[w] - expected) / expected;
  }
  // p > 0.001 with V - 1 degrees of freedom
  EXPECT_LT(chi2, chi2_critical(static_cast<double>(counts.size() - 1), 3.090232));
}

TEST(Generate, StopwordTokenFractionConverges) {
  CorpusSpec spec;
  spec.num_documents = 2000;
  spec.doc_length = 100;
  spec.stopword_fraction = 0.4;
  spec.word_dist = Distribution::power_law(1.5);
  spec.set_structure(0.7);
  spec.seed = 8;
  const auto corpus = generate_corpus(spec);
  double expected = 0.0;
  for (auto w : corpus.truth.stopwords) expected += corpus.truth.word_marginal[w];
  std::size_t stop_tokens = 0;
  for (auto w : corpus.documents.tokens()) stop_tokens += corpus.truth.is_stopword(w);
  const double n = static_cast<double>(corpus.documents.num_tokens());
  const double se = std::sqrt(expected * (1.0 - expected) / n);
  EXPECT_NEAR(stop_tokens / n, expected, 3.0 * se);
}

TEST(Generate, DocTopicsFollowTopicMarginal) {
  CorpusSpec spec;
  spec.num_documents = 20000;
  spec.doc_length = 1;
  spec.num_topics = 4;
  spec.vocabulary_size = 400;
  spec.word_dist = Distribution::power_law(1.5);
  spec.seed = 77;
  const auto corpus = generate_corpus(spec);
  std::vector<double> freq(4, 0.0);
  for (auto t : corpus.truth.doc_topic) freq[t] += 1.0 / 20000.0;
  for (std::size_t t = 0; t < 4; ++t) {
    const double p = corpus.truth.topic_marginal[t];
    EXPECT_NEAR(freq[t], p, 4.0 * std::sqrt(p * (1 - p) / 20000.0));
  }
}

TEST(Generate, DeterministicAndIndependentOfThreadCount) {
  CorpusSpec spec;
  spec.num_documents = 300;
  spec.stopword_fraction = 0.2;
  spec.burstiness = 5.0;
  spec.set_structure(0.5);
  spec.seed = 99;
  const auto a = generate_corpus(spec, {.threads = 1});
  const auto b = generate_corpus(spec, {.threads = 4});
  EXPECT_EQ(a.documents, b.documents);
  EXPECT_EQ(a.planted_labels, b.planted_labels);
  EXPECT_EQ(a.truth, b.truth);
  spec.seed = 100;
  const auto c = generate_corpus(spec, {.threads = 1});
  EXPECT_NE(a.documents, c.documents);
}

TEST(Generate, InvalidSpecIsRejected) {
  CorpusSpec spec;
  spec.structure_word = 2.0;
  EXPECT_THROW(generate_corpus(spec), InvalidArgument);
}

TEST(Burstiness, LargeConcentrationRecoversGlobalRows) {
  // Mean TV of a Dirichlet draw around its mean scales like sqrt(V / a_c);
  // V = 100 keeps a_c = 1e6 well inside the 1e-2 budget.
  CorpusSpec spec;
  spec.num_topics = 4;
  spec.vocabulary_size = 100;
  spec.stopword_fraction = 0.1;
  spec.word_dist = Distribution::power_law(1.4);
  spec.set_structure(0.8);
  Engine vocab_rng(1);
  auto v = assign_vocabulary(spec, vocab_rng);
  GroundTruth truth;
  truth.word_marginal = build_word_marginal(spec.word_dist, spec.vocabulary_size);
  truth.word_topic = v.word_topic;
  truth.topic_marginal = topic_marginal(truth.word_marginal, truth.word_topic, spec.num_topics);
  const Matrix global = word_topic_matrix(truth, spec.structure_word);

  Engine rng(12);
  double tv_sum = 0.0;
  int rows = 0;
  for (int doc = 0; doc < 50; ++doc) {
    BurstyDocDistribution bursty(global, 1e6);
    for (std::size_t t = 0; t < spec.num_topics; ++t) {
      const auto row = bursty.row(t, rng);
      double tv = 0.0;
      for (std::size_t w = 0; w < row.size(); ++w) tv += 0.5 * std::abs(row[w] - global(t, w));
      tv_sum += tv;
      ++rows;
      double sum = 0.0;
      for (double x : row) sum += x;
      EXPECT_NEAR(sum, 1.0, 1e-9);
    }
  }
  EXPECT_LT(tv_sum / rows, 1e-2);
}

TEST(Burstiness, RowsAreDrawnLazilyAndRespectZeros) {
  Matrix global(2, 3);
  global(0, 0) = 0.5;
  global(0, 1) = 0.5;
  global(1, 2) = 1.0;
  BurstyDocDistribution bursty(global, 2.0);
  Engine rng(1);
  EXPECT_FALSE(bursty.materialized(0));
  EXPECT_FALSE(bursty.materialized(1));
  const auto row = bursty.row(0, rng);
  EXPECT_EQ(row[2], 0.0);
  EXPECT_TRUE(bursty.materialized(0));
  EXPECT_FALSE(bursty.materialized(1));
  for (int i = 0; i < 100; ++i) EXPECT_EQ(bursty.sample_word(1, rng), 2u);
}

TEST(Burstiness, SmallConcentrationRepeatsWordsWithinDocuments) {
  CorpusSpec spec;
  spec.num_documents = 200;
  spec.doc_length = 100;
  spec.set_structure(0.5);
  spec.seed = 3;
  auto distinct_words = [](const SyntheticCorpus& c) {
    double total = 0.0;
    for (std::size_t d = 0; d < c.documents.num_documents(); ++d) {
      const auto doc = c.documents.doc(d);
      total += static_cast<double>(std::set<std::uint32_t>(doc.begin(), doc.end()).size());
    }
    return total / static_cast<double>(c.documents.num_documents());
  };
  const double plain = distinct_words(generate_corpus(spec));
  spec.burstiness = 10.0;
  const double bursty = distinct_words(generate_corpus(spec));
  EXPECT_LT(bursty, 0.8 * plain);
}
