#include <gtest/gtest.h>

#include <cmath>
#include <numeric>

#include "oracles.hpp"
#include "topicbench/error.hpp"
#include "topicbench/metrics.hpp"
#include "topicbench/rng.hpp"

using namespace topicbench;

namespace {

TokenLabeling labels(std::vector<std::uint32_t> v) { return TokenLabeling(std::move(v)); }

// Builds a confusion matrix with the given integer counts.
ConfusionMatrix from_counts(const std::vector<std::vector<std::uint64_t>>& counts) {
  ConfusionMatrix cm(counts.size(), counts[0].size());
  for (std::size_t i = 0; i < counts.size(); ++i) {
    for (std::size_t j = 0; j < counts[i].size(); ++j) {
      if (counts[i][j]) cm.add(static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(j), counts[i][j]);
    }
  }
  return cm;
}

std::vector<std::uint32_t> random_labels(Engine& rng, std::size_t n, std::uint64_t k) {
  std::vector<std::uint32_t> out(n);
  for (auto& x : out) x = static_cast<std::uint32_t>(uniform_index(rng, k));
  return out;
}

}  // namespace

TEST(Confusion, RelabeledIdentity) {
  const auto cm = confusion(labels({0, 0, 1, 1}), labels({1, 1, 0, 0}));
  EXPECT_EQ(cm.joint(0, 0), 0.0);
  EXPECT_EQ(cm.joint(0, 1), 0.5);
  EXPECT_EQ(cm.joint(1, 0), 0.5);
  EXPECT_EQ(cm.joint(1, 1), 0.0);
}

TEST(Confusion, IdenticalLabelingsAreDiagonal) {
  const auto a = labels({0, 2, 2, 1, 2});
  const auto cm = confusion(a, a);
  for (std::size_t i = 0; i < 3; ++i) {
    for (std::size_t j = 0; j < 3; ++j) {
      if (i != j) EXPECT_EQ(cm.count(i, j), 0u);
    }
  }
  EXPECT_EQ(cm.joint(2, 2), 0.6);
}

TEST(Confusion, SplitClassKeepsIndependentDimensions) {
  const auto cm = confusion(labels({0, 0, 0, 0, 1, 1, 1, 1}), labels({0, 0, 0, 0, 1, 1, 2, 2}));
  EXPECT_EQ(cm.planted_labels(), 2u);
  EXPECT_EQ(cm.inferred_labels(), 3u);
  EXPECT_EQ(cm.joint(0, 0), 0.5);
  EXPECT_EQ(cm.joint(1, 1), 0.25);
  EXPECT_EQ(cm.joint(1, 2), 0.25);
}

TEST(Confusion, ErrorsOnMismatchAndEmpty) {
  EXPECT_THROW(confusion(labels({0, 1}), labels({0})), InvalidArgument);
  EXPECT_THROW(confusion(TokenLabeling{}, TokenLabeling{}), InvalidArgument);
  const std::vector<std::uint8_t> none{0, 0};
  EXPECT_THROW(confusion(labels({0, 1}), labels({0, 1}), none), InvalidArgument);
}

TEST(Confusion, ShardedAccumulationEqualsSerial) {
  Engine rng(4);
  const auto a = TokenLabeling(random_labels(rng, 300000, 7), 7);
  const auto b = TokenLabeling(random_labels(rng, 300000, 11), 11);
  EXPECT_EQ(confusion(a, b, {}, 1), confusion(a, b, {}, 4));
}

TEST(Confusion, MergeIsCommutative) {
  const auto x = from_counts({{1, 2}, {3, 4}});
  const auto y = from_counts({{5, 0}, {0, 7}});
  auto xy = x;
  xy.merge(y);
  auto yx = y;
  yx.merge(x);
  EXPECT_EQ(xy, yx);
  EXPECT_EQ(xy.total(), 22u);
  EXPECT_THROW(xy.merge(ConfusionMatrix(3, 2)), InvalidArgument);
}

TEST(Nmi, IllustrativeCases) {
  const auto perfect = nmi(from_counts({{1, 0}, {0, 1}}));
  EXPECT_NEAR(perfect.mutual_information, 1.0, 1e-12);
  EXPECT_NEAR(perfect.nmi, 1.0, 1e-12);

  const auto split = nmi(from_counts({{2, 0, 0}, {0, 1, 1}}));
  EXPECT_NEAR(split.mutual_information, 1.0, 1e-12);
  EXPECT_NEAR(split.entropy_planted, 1.0, 1e-12);
  EXPECT_NEAR(split.entropy_inferred, 1.5, 1e-12);
  EXPECT_NEAR(split.nmi, 0.8, 1e-12);

  const auto independent = nmi(from_counts({{1, 1}, {1, 1}}));
  EXPECT_NEAR(independent.mutual_information, 0.0, 1e-12);
  EXPECT_NEAR(independent.nmi, 0.0, 1e-12);
}

TEST(Nmi, DegenerateSingleLabelIsOne) {
  const auto s = nmi(confusion(labels({0, 0, 0}), labels({0, 0, 0})));
  EXPECT_EQ(s.entropy_planted, 0.0);
  EXPECT_EQ(s.entropy_inferred, 0.0);
  EXPECT_EQ(s.nmi, 1.0);
  EXPECT_EQ(s.voi, 0.0);
}

TEST(Nmi, MatchesDirectEvaluationOnRandomLabelings) {
  Engine rng(31);
  for (int rep = 0; rep < 200; ++rep) {
    const std::size_t n = 1 + uniform_index(rng, 400);
    const auto a = random_labels(rng, n, 1 + uniform_index(rng, 6));
    const auto b = random_labels(rng, n, 1 + uniform_index(rng, 6));
    const auto s = nmi(confusion(TokenLabeling(a), TokenLabeling(b)));
    const auto o = oracle::from_labels(std::vector<int>(a.begin(), a.end()), std::vector<int>(b.begin(), b.end()));
    ASSERT_NEAR(s.mutual_information, o.I, 1e-12);
    ASSERT_NEAR(s.entropy_planted, o.H, 1e-12);
    ASSERT_NEAR(s.entropy_inferred, o.Hp, 1e-12);
    ASSERT_NEAR(s.nmi, o.nmi, 1e-12);
  }
}

TEST(Nmi, PermutationInvarianceAndSymmetry) {
  Engine rng(8);
  const auto a = random_labels(rng, 5000, 5);
  auto b = a;
  for (std::size_t i = 0; i < b.size(); i += 3) b[i] = static_cast<std::uint32_t>(uniform_index(rng, 5));
  const std::uint32_t perm[] = {3, 0, 4, 1, 2};
  auto pb = b;
  for (auto& x : pb) x = perm[x];
  const auto base = nmi(confusion(TokenLabeling(a), TokenLabeling(b)));
  const auto permuted = nmi(confusion(TokenLabeling(a), TokenLabeling(pb)));
  const auto swapped = nmi(confusion(TokenLabeling(b), TokenLabeling(a)));
  EXPECT_NEAR(base.nmi, permuted.nmi, 1e-12);
  EXPECT_NEAR(base.mutual_information, permuted.mutual_information, 1e-12);
  EXPECT_NEAR(base.nmi, swapped.nmi, 1e-12);
  EXPECT_NEAR(base.voi, swapped.voi, 1e-12);
}

TEST(Nmi, RangeBoundsAndVoiIdentity) {
  Engine rng(13);
  for (int rep = 0; rep < 300; ++rep) {
    const std::size_t n = 1 + uniform_index(rng, 60);
    const auto s = nmi(confusion(TokenLabeling(random_labels(rng, n, 4)), TokenLabeling(random_labels(rng, n, 3))));
    ASSERT_GE(s.nmi, 0.0);
    ASSERT_LE(s.nmi, 1.0);
    ASSERT_LE(s.mutual_information, std::min(s.entropy_planted, s.entropy_inferred) + 1e-12);
    ASSERT_NEAR(s.voi, s.entropy_planted + s.entropy_inferred - 2.0 * s.mutual_information, 1e-12);
  }
}

TEST(Nmi, OneExactlyForPermutationSupport) {
  EXPECT_NEAR(nmi(from_counts({{0, 3, 0}, {0, 0, 5}, {2, 0, 0}})).nmi, 1.0, 1e-12);
  EXPECT_LT(nmi(from_counts({{0, 3, 1}, {0, 0, 5}, {2, 0, 0}})).nmi, 1.0 - 1e-6);
}

TEST(Nmi, IndependentRandomLabelingsScoreNearZero) {
  Engine rng(2);
  const auto a = TokenLabeling(random_labels(rng, 100000, 10), 10);
  const auto b = TokenLabeling(random_labels(rng, 100000, 10), 10);
  EXPECT_LT(reproducibility(a, b).nmi, 0.01);
  EXPECT_NEAR(reproducibility(a, a).nmi, 1.0, 1e-12);
}

TEST(Nmi, StopwordMaskRestrictsTokens) {
  SyntheticCorpus corpus;
  corpus.truth.word_topic = {0, kNoTopic};
  corpus.documents = DocumentSet::from_documents({{0, 1, 0, 1}}, 2);
  corpus.planted_labels = labels({0, 1, 1, 0});
  const auto inferred = labels({0, 0, 1, 1});
  ScoreOptions opt;
  EXPECT_EQ(token_confusion(corpus, inferred, opt).total(), 4u);
  opt.exclude_stopword_tokens = true;
  const auto cm = token_confusion(corpus, inferred, opt);
  EXPECT_EQ(cm.total(), 2u);
  EXPECT_NEAR(nmi(cm).nmi, 1.0, 1e-12);
}

TEST(DocClassification, ArgmaxWithLowestIndexTies) {
  Matrix m(3, 3);
  m(0, 0) = 0.2, m(0, 1) = 0.5, m(0, 2) = 0.3;
  m(1, 0) = 0.5, m(1, 1) = 0.5;
  m(2, 2) = 1.0;
  EXPECT_EQ(doc_classification_labels(m), (std::vector<std::uint32_t>{1, 0, 2}));
}

TEST(DocClassification, NmiExamples) {
  const std::vector<std::uint32_t> r{0, 0, 1, 1};
  EXPECT_NEAR(doc_classification_nmi(std::vector<std::uint32_t>{0, 0, 1, 2}, r).nmi, 0.8, 1e-12);
  EXPECT_NEAR(doc_classification_nmi(std::vector<std::uint32_t>{1, 1, 0, 0}, r).nmi, 1.0, 1e-12);
  EXPECT_NEAR(doc_classification_nmi(std::vector<std::uint32_t>{0, 0, 0, 0}, r).nmi, 0.0, 1e-12);
  EXPECT_THROW(doc_classification_nmi(std::vector<std::uint32_t>{}, std::vector<std::uint32_t>{}), InvalidArgument);
}

TEST(Distances, EntropyAndTotalVariation) {
  EXPECT_NEAR(entropy_bits(std::vector<double>{0.5, 0.25, 0.25, 0.0}), 1.5, 1e-15);
  EXPECT_NEAR(total_variation(std::vector<double>{0.5, 0.5}, std::vector<double>{1.0}), 0.5, 1e-15);
  EXPECT_NEAR(total_variation(std::vector<double>{0.2, 0.8}, std::vector<double>{0.2, 0.8}), 0.0, 1e-15);
  Matrix m(2, 2, 0.5);
  m(1, 0) = 1.0;
  m(1, 1) = 0.0;
  EXPECT_NEAR(mean_row_entropy(m), 0.5, 1e-15);
}
