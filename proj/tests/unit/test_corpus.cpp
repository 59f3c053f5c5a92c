#include <gtest/gtest.h>

#include <numeric>

#include "oracles.hpp"
#include "topicbench/corpus.hpp"
#include "topicbench/error.hpp"

using namespace topicbench;

namespace {

GroundTruth four_word_truth() {
  GroundTruth t;
  t.word_marginal = {0.4, 0.3, 0.2, 0.1};
  t.word_topic = {0, 0, 1, 1};
  t.topic_marginal = topic_marginal(t.word_marginal, t.word_topic, 2);
  t.topical_words = {0, 1, 2, 3};
  t.doc_topic = {1};
  t.topic_sizes = {2, 2};
  return t;
}

}  // namespace

TEST(TopicMarginal, UniformVocabularyGivesUniformTopics) {
  std::vector<double> pw(100, 0.01);
  std::vector<std::int32_t> tw(100);
  for (int w = 0; w < 100; ++w) tw[w] = w % 5;
  for (double p : topic_marginal(pw, tw, 5)) EXPECT_NEAR(p, 0.2, 1e-15);
}

TEST(TopicMarginal, FourWordExample) {
  const auto pt = topic_marginal(std::vector<double>{0.4, 0.3, 0.2, 0.1}, std::vector<std::int32_t>{0, 0, 1, 1}, 2);
  EXPECT_NEAR(pt[0], 0.7, 1e-15);
  EXPECT_NEAR(pt[1], 0.3, 1e-15);
}

TEST(TopicMarginal, StopwordsAreRenormalizedAway) {
  const auto pt =
      topic_marginal(std::vector<double>{0.4, 0.3, 0.2, 0.1}, std::vector<std::int32_t>{0, 1, kNoTopic, kNoTopic}, 2);
  EXPECT_NEAR(pt[0], 0.4 / 0.7, 1e-15);
  EXPECT_NEAR(pt[1], 0.3 / 0.7, 1e-15);
}

TEST(TopicMarginal, NoTopicalMassIsAnError) {
  try {
    topic_marginal(std::vector<double>{0.5, 0.5}, std::vector<std::int32_t>{kNoTopic, kNoTopic}, 1);
    FAIL() << "expected an error";
  } catch (const InvalidArgument& e) {
    EXPECT_NE(std::string(e.what()).find("no topical mass"), std::string::npos);
  }
}

TEST(WordGivenTopic, LimitsAndWorkedValue) {
  const GroundTruth t = four_word_truth();
  EXPECT_NEAR(word_given_topic(t, 0.5, 0, 0), 0.5 * (0.4 / 0.7) + 0.5 * 0.4, 1e-15);
  EXPECT_NEAR(word_given_topic(t, 0.5, 0, 0), 0.4857, 1e-4);
  for (std::size_t w = 0; w < 4; ++w) {
    for (std::size_t k = 0; k < 2; ++k) EXPECT_DOUBLE_EQ(word_given_topic(t, 0.0, w, k), t.word_marginal[w]);
  }
  EXPECT_EQ(word_given_topic(t, 1.0, 0, 1), 0.0);
  EXPECT_EQ(word_given_topic(t, 1.0, 3, 0), 0.0);
}

TEST(WordGivenTopic, StopwordsIgnoreStructure) {
  GroundTruth t = four_word_truth();
  t.word_topic = {0, 1, kNoTopic, kNoTopic};
  t.topic_marginal = topic_marginal(t.word_marginal, t.word_topic, 2);
  EXPECT_DOUBLE_EQ(word_given_topic(t, 1.0, 2, 0), 0.2);
  EXPECT_DOUBLE_EQ(word_given_topic(t, 0.3, 3, 1), 0.1);
}

TEST(WordGivenTopic, MatchesDefinitionOracleAndNormalizes) {
  GroundTruth t = four_word_truth();
  t.word_topic = {0, 1, kNoTopic, 1};
  t.topic_marginal = topic_marginal(t.word_marginal, t.word_topic, 2);
  for (double c : {0.0, 0.25, 0.7, 1.0}) {
    const auto want = oracle::word_given_topic(t.word_marginal, {0, 1, -1, 1}, 2, c);
    const Matrix m = word_topic_matrix(t, c);
    for (std::size_t k = 0; k < 2; ++k) {
      double sum = 0.0;
      for (std::size_t w = 0; w < 4; ++w) {
        EXPECT_NEAR(m(k, w), want[k][w], 1e-15);
        sum += m(k, w);
      }
      EXPECT_NEAR(sum, 1.0, 1e-12);
    }
    for (std::size_t w = 0; w < 4; ++w) {
      const double mix = m(0, w) * t.topic_marginal[0] + m(1, w) * t.topic_marginal[1];
      EXPECT_NEAR(mix, t.word_marginal[w], 1e-12);
    }
  }
}

TEST(WordGivenTopic, MonotoneInStructure) {
  const GroundTruth t = four_word_truth();
  double own = 0.0, other = 1.0;
  for (int i = 0; i <= 20; ++i) {
    const double c = i / 20.0;
    const double a = word_given_topic(t, c, 1, 0);
    const double b = word_given_topic(t, c, 1, 1);
    EXPECT_GE(a, own);
    EXPECT_LE(b, other);
    own = a;
    other = b;
  }
}

TEST(TopicGivenDoc, WorkedValueAndLimits) {
  const GroundTruth t = four_word_truth();
  EXPECT_NEAR(topic_given_doc(t, 0.5, 0, 0), 0.35, 1e-15);
  EXPECT_NEAR(topic_given_doc(t, 0.5, 1, 0), 0.65, 1e-15);
  EXPECT_EQ(topic_given_doc(t, 1.0, 0, 0), 0.0);
  EXPECT_EQ(topic_given_doc(t, 1.0, 1, 0), 1.0);
  EXPECT_DOUBLE_EQ(topic_given_doc(t, 0.0, 0, 0), 0.7);
  const Matrix m = topic_doc_matrix(t, 0.37);
  EXPECT_NEAR(m(0, 0) + m(0, 1), 1.0, 1e-12);
}

TEST(CorpusSpec, ValidationCatchesEachConstraint) {
  CorpusSpec ok;
  EXPECT_NO_THROW(ok.validate());
  auto bad = [&](auto mutate) {
    CorpusSpec s;
    mutate(s);
    EXPECT_THROW(s.validate(), InvalidArgument);
  };
  bad([](CorpusSpec& s) { s.num_topics = 0; });
  bad([](CorpusSpec& s) { s.num_documents = 0; });
  bad([](CorpusSpec& s) { s.vocabulary_size = 1; });
  bad([](CorpusSpec& s) { s.doc_length = 0; });
  bad([](CorpusSpec& s) { s.doc_lengths = {1, 2}; });
  bad([](CorpusSpec& s) { s.stopword_fraction = 1.5; });
  bad([](CorpusSpec& s) { s.structure_word = -0.1; });
  bad([](CorpusSpec& s) { s.structure_doc = 1.1; });
  bad([](CorpusSpec& s) { s.word_dist = Distribution::power_law(1.0); });
  bad([](CorpusSpec& s) { s.topic_size_dist = Distribution::power_law(0.5); });
  bad([](CorpusSpec& s) { s.burstiness = 0.0; });
  // 995 stopwords leave 5 topical words for 10 topics
  bad([](CorpusSpec& s) { s.stopword_fraction = 0.995; });
}

TEST(CorpusSpec, StopwordCountRounds) {
  CorpusSpec s;
  s.vocabulary_size = 1000;
  s.stopword_fraction = 0.65;
  EXPECT_EQ(s.num_stopwords(), 650u);
  EXPECT_EQ(s.num_topical_words(), 350u);
  s.vocabulary_size = 7;
  s.stopword_fraction = 0.5;
  EXPECT_EQ(s.num_stopwords(), 4u);  // round(3.5)
}

TEST(CorpusSpec, PerDocumentLengths) {
  CorpusSpec s;
  s.num_documents = 3;
  s.doc_lengths = {1, 5, 2};
  EXPECT_EQ(s.total_tokens(), 8u);
  EXPECT_EQ(s.length_of(1), 5u);
}

TEST(DocumentSet, OffsetsAndBounds) {
  const auto docs = DocumentSet::from_documents({{0, 1}, {2}, {1, 1, 0}}, 3);
  EXPECT_EQ(docs.num_documents(), 3u);
  EXPECT_EQ(docs.num_tokens(), 6u);
  EXPECT_EQ(docs.doc_length(2), 3u);
  EXPECT_EQ(docs.doc(1)[0], 2u);
  EXPECT_THROW(DocumentSet::from_documents({{0, 3}}, 3), InvalidArgument);
  EXPECT_THROW(DocumentSet({0, 1}, {0, 3}, 2), InvalidArgument);
}

TEST(TokenLabeling, LabelSpaceAndUsage) {
  TokenLabeling a({0, 3, 3});
  EXPECT_EQ(a.num_labels(), 4u);
  EXPECT_EQ(a.num_labels_used(), 2u);
  EXPECT_THROW(TokenLabeling({0, 5}, 5), InvalidArgument);
}

TEST(TopicModelResult, ValidationChecksShapesSumsAndLabels) {
  TopicModelResult r;
  r.topic_doc = Matrix(1, 2, 0.5);
  r.word_topic = Matrix(2, 2, 0.5);
  r.token_labels = TokenLabeling({0, 1}, 2);
  EXPECT_NO_THROW(r.validate());
  r.topic_doc(0, 0) = 0.4;
  EXPECT_THROW(r.validate(), InvalidArgument);
  r.topic_doc(0, 0) = 0.5;
  r.token_labels = TokenLabeling({0, 2}, 3);
  EXPECT_THROW(r.validate(), InvalidArgument);
}
