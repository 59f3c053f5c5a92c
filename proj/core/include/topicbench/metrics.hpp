#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "topicbench/corpus.hpp"
#include "topicbench/matrix.hpp"

namespace topicbench {

// Joint label distribution p_{t,t'} kept as exact integer counts; fractions
// are formed by a single division on access. Rows index the planted (or
// first) labeling, columns the inferred (or second); the two label spaces are
// independent in size.
class ConfusionMatrix {
 public:
  ConfusionMatrix() = default;
  ConfusionMatrix(std::size_t planted_labels, std::size_t inferred_labels);

  void add(std::uint32_t planted, std::uint32_t inferred, std::uint64_t count = 1);
  // Count matrices form a commutative monoid under merge; shapes must agree.
  ConfusionMatrix& merge(const ConfusionMatrix& other);

  std::size_t planted_labels() const { return rows_.size(); }
  std::size_t inferred_labels() const { return cols_.size(); }
  std::uint64_t total() const { return total_; }

  std::uint64_t count(std::size_t t, std::size_t tp) const { return counts_[t * cols_.size() + tp]; }
  std::uint64_t planted_count(std::size_t t) const { return rows_[t]; }
  std::uint64_t inferred_count(std::size_t tp) const { return cols_[tp]; }

  double joint(std::size_t t, std::size_t tp) const;
  double planted_marginal(std::size_t t) const;
  double inferred_marginal(std::size_t tp) const;

  // Label ids with nonzero mass on each side.
  std::size_t planted_labels_used() const;
  std::size_t inferred_labels_used() const;

  friend bool operator==(const ConfusionMatrix&, const ConfusionMatrix&) = default;

 private:
  std::vector<std::uint64_t> counts_;
  std::vector<std::uint64_t> rows_;
  std::vector<std::uint64_t> cols_;
  std::uint64_t total_ = 0;
};

// Information-theoretic overlap of two labelings, all in bits.
struct OverlapScore {
  double mutual_information = 0.0;  // I
  double entropy_planted = 0.0;     // H
  double entropy_inferred = 0.0;    // H'
  double nmi = 0.0;                 // 2I / (H + H'); 1 when H + H' = 0
  double voi = 0.0;                 // H + H' - 2I
};

struct ScoreOptions {
  // Restrict the confusion matrix to tokens whose word is topical.
  bool exclude_stopword_tokens = false;
  // Shards for confusion accumulation; the result does not depend on it.
  std::size_t threads = 1;
};

// p_{t,t'} over tokens where `mask` is nonzero (all tokens if `mask` is
// empty). Throws InvalidArgument on length mismatch or when no token counts.
ConfusionMatrix confusion(const TokenLabeling& planted, const TokenLabeling& inferred,
                          std::span<const std::uint8_t> mask = {}, std::size_t threads = 1);

// 1 for tokens of topical words, 0 for stopword tokens.
std::vector<std::uint8_t> topical_token_mask(const SyntheticCorpus& corpus);

// Token-level confusion of `inferred` against the corpus's planted labels.
ConfusionMatrix token_confusion(const SyntheticCorpus& corpus, const TokenLabeling& inferred,
                                const ScoreOptions& options = {});

OverlapScore nmi(const ConfusionMatrix& cm);

// s_d = argmax_t P(t|d), ties to the lowest topic index.
std::vector<std::uint32_t> doc_classification_labels(const Matrix& topic_doc);
inline std::vector<std::uint32_t> doc_classification_labels(const TopicModelResult& result) {
  return doc_classification_labels(result.topic_doc);
}

// NMI of the document confusion p_{s,r} = (1/D) sum_d delta(s, s_d) delta(r, r_d).
OverlapScore doc_classification_nmi(std::span<const std::uint32_t> predicted,
                                    std::span<const std::uint32_t> reference);

// Overlap of two inferred labelings of the same corpus.
OverlapScore reproducibility(const TokenLabeling& run_a, const TokenLabeling& run_b);

// Shannon entropy in bits, 0 log 0 = 0.
double entropy_bits(std::span<const double> p);
// Average row entropy in bits.
double mean_row_entropy(const Matrix& m);
// 0.5 * sum |p - q|; the shorter vector is padded with zeros.
double total_variation(std::span<const double> p, std::span<const double> q);

}  // namespace topicbench
