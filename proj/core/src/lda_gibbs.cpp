#include "topicbench/lda_gibbs.hpp"

#include <cmath>
#include <cstdio>
#include <string>

#include "topicbench/error.hpp"

namespace topicbench {

namespace {

std::string format_double(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace

void GibbsConfig::validate() const {
  if (assumed_topics < 1) throw InvalidArgument("assumed_topics (K_a) must be >= 1");
  if (!(alpha > 0.0 && std::isfinite(alpha))) throw InvalidArgument("alpha must be positive");
  if (!(beta > 0.0 && std::isfinite(beta))) throw InvalidArgument("beta must be positive");
  if (sweeps < 1) throw InvalidArgument("sweeps must be >= 1");
}

Hyperparams hyperparam_preset(std::string_view name, std::size_t assumed_topics) {
  if (assumed_topics < 1) throw InvalidArgument("assumed_topics (K_a) must be >= 1");
  const double ka = static_cast<double>(assumed_topics);
  if (name == "ldags_default") return {5.0 / ka, 0.01};
  if (name == "ldavb_default") return {1.0 / ka, 1.0 / ka};
  throw InvalidArgument("unknown hyperparameter preset '" + std::string(name) +
                        "' (expected ldags_default or ldavb_default)");
}

GibbsSampler::GibbsSampler(const DocumentSet& docs, const GibbsConfig& config)
    : docs_(&docs), config_(config), k_(config.assumed_topics), rng_(config.seed) {
  config_.validate();
  if (docs.num_tokens() == 0) throw InvalidArgument("cannot run Gibbs sampling on an empty corpus");

  const std::size_t num_docs = docs.num_documents();
  const std::size_t vocab = docs.vocabulary_size();
  z_.resize(docs.num_tokens());
  ndt_.assign(num_docs * k_, 0);
  nwt_.assign(vocab * k_, 0);
  nt_.assign(k_, 0);
  cumulative_.resize(k_);

  const auto tokens = docs.tokens();
  for (std::size_t d = 0; d < num_docs; ++d) {
    for (std::size_t i = docs.offsets()[d]; i < docs.offsets()[d + 1]; ++i) {
      const auto t = static_cast<std::uint32_t>(uniform_index(rng_, k_));
      z_[i] = t;
      ++ndt_[d * k_ + t];
      ++nwt_[tokens[i] * k_ + t];
      ++nt_[t];
    }
  }
  const double vbeta = static_cast<double>(vocab) * config_.beta;
  inv_denominator_.resize(k_);
  for (std::size_t t = 0; t < k_; ++t) inv_denominator_[t] = 1.0 / (nt_[t] + vbeta);
}

void GibbsSampler::sweep() {
  const auto tokens = docs_->tokens();
  const auto offsets = docs_->offsets();
  const double alpha = config_.alpha;
  const double beta = config_.beta;
  const double vbeta = static_cast<double>(docs_->vocabulary_size()) * beta;
  const std::size_t k = k_;
  double* cumulative = cumulative_.data();
  double* inv = inv_denominator_.data();

  for (std::size_t d = 0; d < docs_->num_documents(); ++d) {
    std::uint32_t* nd = ndt_.data() + d * k;
    for (std::size_t i = offsets[d]; i < offsets[d + 1]; ++i) {
      std::uint32_t* nw = nwt_.data() + static_cast<std::size_t>(tokens[i]) * k;
      std::uint32_t t = z_[i];
      --nd[t];
      --nw[t];
      --nt_[t];
      inv[t] = 1.0 / (nt_[t] + vbeta);

      double total = 0.0;
      for (std::size_t j = 0; j < k; ++j) {
        total += (nd[j] + alpha) * (nw[j] + beta) * inv[j];
        cumulative[j] = total;
      }
      const double u = uniform01(rng_) * total;
      t = 0;
      while (t + 1 < k && cumulative[t] <= u) ++t;

      z_[i] = t;
      ++nd[t];
      ++nw[t];
      ++nt_[t];
      inv[t] = 1.0 / (nt_[t] + vbeta);
    }
  }
  ++iterations_;
}

bool GibbsSampler::counts_consistent() const {
  std::vector<std::uint32_t> ndt(ndt_.size(), 0), nwt(nwt_.size(), 0), nt(k_, 0);
  const auto tokens = docs_->tokens();
  for (std::size_t d = 0; d < docs_->num_documents(); ++d) {
    for (std::size_t i = docs_->offsets()[d]; i < docs_->offsets()[d + 1]; ++i) {
      ++ndt[d * k_ + z_[i]];
      ++nwt[tokens[i] * k_ + z_[i]];
      ++nt[z_[i]];
    }
  }
  return ndt == ndt_ && nwt == nwt_ && nt == nt_;
}

TopicModelResult GibbsSampler::result() const {
  const std::size_t num_docs = docs_->num_documents();
  const std::size_t vocab = docs_->vocabulary_size();
  const double alpha = config_.alpha;
  const double beta = config_.beta;

  TopicModelResult out;
  out.topic_doc = Matrix(num_docs, k_);
  for (std::size_t d = 0; d < num_docs; ++d) {
    const double denom = static_cast<double>(docs_->doc_length(d)) + static_cast<double>(k_) * alpha;
    for (std::size_t t = 0; t < k_; ++t) out.topic_doc(d, t) = (ndt_[d * k_ + t] + alpha) / denom;
  }
  out.word_topic = Matrix(k_, vocab);
  for (std::size_t t = 0; t < k_; ++t) {
    const double denom = nt_[t] + static_cast<double>(vocab) * beta;
    for (std::size_t w = 0; w < vocab; ++w) out.word_topic(t, w) = (nwt_[w * k_ + t] + beta) / denom;
  }
  out.token_labels = TokenLabeling(z_, k_);
  out.algorithm_tag = "lda-gibbs";
  out.hyperparams = {
      {"K_a", std::to_string(k_)},
      {"alpha", format_double(alpha)},
      {"beta", format_double(beta)},
      {"sweeps", std::to_string(iterations_)},
      {"seed", std::to_string(config_.seed)},
  };
  return out;
}

TopicModelResult run_gibbs(const DocumentSet& docs, const GibbsConfig& config) {
  GibbsSampler sampler(docs, config);
  sampler.run(config.sweeps);
  return sampler.result();
}

}  // namespace topicbench
