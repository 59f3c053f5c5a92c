#include "topicbench/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

#include "topicbench/error.hpp"

namespace topicbench {

ConfusionMatrix::ConfusionMatrix(std::size_t planted_labels, std::size_t inferred_labels)
    : counts_(planted_labels * inferred_labels, 0), rows_(planted_labels, 0), cols_(inferred_labels, 0) {}

void ConfusionMatrix::add(std::uint32_t planted, std::uint32_t inferred, std::uint64_t count) {
  counts_[planted * cols_.size() + inferred] += count;
  rows_[planted] += count;
  cols_[inferred] += count;
  total_ += count;
}

ConfusionMatrix& ConfusionMatrix::merge(const ConfusionMatrix& other) {
  if (other.rows_.size() != rows_.size() || other.cols_.size() != cols_.size()) {
    throw InvalidArgument("cannot merge confusion matrices of different shape");
  }
  for (std::size_t i = 0; i < counts_.size(); ++i) counts_[i] += other.counts_[i];
  for (std::size_t i = 0; i < rows_.size(); ++i) rows_[i] += other.rows_[i];
  for (std::size_t i = 0; i < cols_.size(); ++i) cols_[i] += other.cols_[i];
  total_ += other.total_;
  return *this;
}

double ConfusionMatrix::joint(std::size_t t, std::size_t tp) const {
  return static_cast<double>(count(t, tp)) / static_cast<double>(total_);
}
double ConfusionMatrix::planted_marginal(std::size_t t) const {
  return static_cast<double>(rows_[t]) / static_cast<double>(total_);
}
double ConfusionMatrix::inferred_marginal(std::size_t tp) const {
  return static_cast<double>(cols_[tp]) / static_cast<double>(total_);
}

std::size_t ConfusionMatrix::planted_labels_used() const {
  return static_cast<std::size_t>(std::count_if(rows_.begin(), rows_.end(), [](auto c) { return c > 0; }));
}
std::size_t ConfusionMatrix::inferred_labels_used() const {
  return static_cast<std::size_t>(std::count_if(cols_.begin(), cols_.end(), [](auto c) { return c > 0; }));
}

ConfusionMatrix confusion(const TokenLabeling& planted, const TokenLabeling& inferred,
                          std::span<const std::uint8_t> mask, std::size_t threads) {
  const std::size_t n = planted.size();
  if (inferred.size() != n) {
    throw InvalidArgument("labelings differ in length: " + std::to_string(n) + " vs " +
                          std::to_string(inferred.size()));
  }
  if (!mask.empty() && mask.size() != n) throw InvalidArgument("token mask length differs from labeling");
  if (n == 0) throw InvalidArgument("cannot compare empty labelings");

  const auto a = planted.labels();
  const auto b = inferred.labels();
  auto accumulate = [&](std::size_t begin, std::size_t end) {
    ConfusionMatrix cm(planted.num_labels(), inferred.num_labels());
    for (std::size_t i = begin; i < end; ++i) {
      if (mask.empty() || mask[i]) cm.add(a[i], b[i]);
    }
    return cm;
  };

  threads = std::clamp<std::size_t>(threads, 1, std::max<std::size_t>(1, n / 65536));
  ConfusionMatrix result;
  if (threads == 1) {
    result = accumulate(0, n);
  } else {
    std::vector<ConfusionMatrix> shards(threads);
    {
      std::vector<std::jthread> workers;
      for (std::size_t k = 0; k < threads; ++k) {
        workers.emplace_back([&, k] { shards[k] = accumulate(n * k / threads, n * (k + 1) / threads); });
      }
    }
    result = std::move(shards[0]);
    for (std::size_t k = 1; k < threads; ++k) result.merge(shards[k]);
  }
  if (result.total() == 0) throw InvalidArgument("no tokens selected for comparison");
  return result;
}

std::vector<std::uint8_t> topical_token_mask(const SyntheticCorpus& corpus) {
  const auto tokens = corpus.documents.tokens();
  std::vector<std::uint8_t> mask(tokens.size());
  for (std::size_t i = 0; i < tokens.size(); ++i) mask[i] = corpus.truth.is_stopword(tokens[i]) ? 0 : 1;
  return mask;
}

ConfusionMatrix token_confusion(const SyntheticCorpus& corpus, const TokenLabeling& inferred,
                                const ScoreOptions& options) {
  if (options.exclude_stopword_tokens) {
    const auto mask = topical_token_mask(corpus);
    return confusion(corpus.planted_labels, inferred, mask, options.threads);
  }
  return confusion(corpus.planted_labels, inferred, {}, options.threads);
}

OverlapScore nmi(const ConfusionMatrix& cm) {
  if (cm.total() == 0) throw InvalidArgument("confusion matrix is empty");
  const double log_n = std::log2(static_cast<double>(cm.total()));
  const double n = static_cast<double>(cm.total());

  auto marginal_entropy = [&](auto count_of, std::size_t size) {
    double h = 0.0;
    for (std::size_t i = 0; i < size; ++i) {
      const auto c = count_of(i);
      if (c == 0) continue;
      const double cd = static_cast<double>(c);
      h -= (cd / n) * (std::log2(cd) - log_n);
    }
    return h;
  };

  OverlapScore s;
  s.entropy_planted = marginal_entropy([&](std::size_t t) { return cm.planted_count(t); }, cm.planted_labels());
  s.entropy_inferred =
      marginal_entropy([&](std::size_t t) { return cm.inferred_count(t); }, cm.inferred_labels());

  double mi = 0.0;
  for (std::size_t t = 0; t < cm.planted_labels(); ++t) {
    const auto row = cm.planted_count(t);
    if (row == 0) continue;
    const double log_row = std::log2(static_cast<double>(row));
    for (std::size_t tp = 0; tp < cm.inferred_labels(); ++tp) {
      const auto c = cm.count(t, tp);
      if (c == 0) continue;
      const double cd = static_cast<double>(c);
      mi += (cd / n) * (std::log2(cd) + log_n - log_row - std::log2(static_cast<double>(cm.inferred_count(tp))));
    }
  }
  s.mutual_information = std::max(0.0, mi);

  const double h_sum = s.entropy_planted + s.entropy_inferred;
  s.nmi = h_sum > 0.0 ? std::clamp(2.0 * s.mutual_information / h_sum, 0.0, 1.0) : 1.0;
  s.voi = std::max(0.0, h_sum - 2.0 * s.mutual_information);
  return s;
}

std::vector<std::uint32_t> doc_classification_labels(const Matrix& topic_doc) {
  std::vector<std::uint32_t> out(topic_doc.rows(), 0);
  for (std::size_t d = 0; d < topic_doc.rows(); ++d) {
    const auto row = topic_doc.row(d);
    // max_element returns the first maximum, so ties go to the lowest index.
    out[d] = static_cast<std::uint32_t>(std::max_element(row.begin(), row.end()) - row.begin());
  }
  return out;
}

OverlapScore doc_classification_nmi(std::span<const std::uint32_t> predicted,
                                    std::span<const std::uint32_t> reference) {
  if (predicted.empty() && reference.empty()) throw InvalidArgument("no documents to classify");
  const TokenLabeling s(std::vector<std::uint32_t>(predicted.begin(), predicted.end()));
  const TokenLabeling r(std::vector<std::uint32_t>(reference.begin(), reference.end()));
  // Rows hold the reference categories so the score reads like the token case.
  return nmi(confusion(r, s));
}

OverlapScore reproducibility(const TokenLabeling& run_a, const TokenLabeling& run_b) {
  return nmi(confusion(run_a, run_b));
}

double entropy_bits(std::span<const double> p) {
  double h = 0.0;
  for (double x : p) {
    if (x > 0.0) h -= x * std::log2(x);
  }
  return h;
}

double mean_row_entropy(const Matrix& m) {
  if (m.rows() == 0) return 0.0;
  double sum = 0.0;
  for (std::size_t r = 0; r < m.rows(); ++r) sum += entropy_bits(m.row(r));
  return sum / static_cast<double>(m.rows());
}

double total_variation(std::span<const double> p, std::span<const double> q) {
  const std::size_t n = std::max(p.size(), q.size());
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double a = i < p.size() ? p[i] : 0.0;
    const double b = i < q.size() ? q[i] : 0.0;
    sum += std::abs(a - b);
  }
  return 0.5 * sum;
}

}  // namespace topicbench
