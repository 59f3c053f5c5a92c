#include <benchmark/benchmark.h>

#include <vector>

#include "topicbench/generator.hpp"
#include "topicbench/lda_gibbs.hpp"
#include "topicbench/metrics.hpp"
#include "topicbench/rng.hpp"

using namespace topicbench;

namespace {

CorpusSpec bench_spec(std::size_t docs, double c) {
  CorpusSpec spec;
  spec.num_topics = 10;
  spec.num_documents = docs;
  spec.doc_length = 100;
  spec.vocabulary_size = 1000;
  spec.set_structure(c);
  spec.seed = 7;
  return spec;
}

}  // namespace

static void BM_Generate(benchmark::State& state) {
  auto spec = bench_spec(static_cast<std::size_t>(state.range(0)), 0.7);
  GenerateOptions opt;
  opt.threads = 1;
  for (auto _ : state) benchmark::DoNotOptimize(generate_corpus(spec, opt));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(spec.total_tokens()));
}
BENCHMARK(BM_Generate)->Arg(200)->Arg(2000)->Unit(benchmark::kMillisecond);

static void BM_GenerateBursty(benchmark::State& state) {
  auto spec = bench_spec(500, 0.7);
  spec.burstiness = 10.0;
  GenerateOptions opt;
  opt.threads = 1;
  for (auto _ : state) benchmark::DoNotOptimize(generate_corpus(spec, opt));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(spec.total_tokens()));
}
BENCHMARK(BM_GenerateBursty)->Unit(benchmark::kMillisecond);

// One Gibbs sweep over 2*10^4 tokens for several K_a.
static void BM_GibbsSweep(benchmark::State& state) {
  const auto corpus = generate_corpus(bench_spec(200, 0.7));
  GibbsConfig cfg;
  cfg.assumed_topics = static_cast<std::size_t>(state.range(0));
  cfg.alpha = 5.0 / static_cast<double>(cfg.assumed_topics);
  cfg.beta = 0.01;
  GibbsSampler sampler(corpus.documents, cfg);
  for (auto _ : state) sampler.sweep();
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(corpus.documents.num_tokens()));
}
BENCHMARK(BM_GibbsSweep)->Arg(5)->Arg(10)->Arg(100)->Unit(benchmark::kMillisecond);

static void BM_ConfusionAndNmi(benchmark::State& state) {
  const auto corpus = generate_corpus(bench_spec(2000, 0.7));
  Engine rng(3);
  std::vector<std::uint32_t> guess(corpus.documents.num_tokens());
  for (auto& g : guess) g = static_cast<std::uint32_t>(uniform_index(rng, 10));
  const TokenLabeling inferred(std::move(guess), 10);
  for (auto _ : state) benchmark::DoNotOptimize(nmi(token_confusion(corpus, inferred)));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(corpus.documents.num_tokens()));
}
BENCHMARK(BM_ConfusionAndNmi)->Unit(benchmark::kMillisecond);

static void BM_CategoricalSample(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  std::vector<double> w(n);
  for (std::size_t i = 0; i < n; ++i) w[i] = 1.0 / static_cast<double>(i + 1);
  const CumulativeTable table(w);
  Engine rng(1);
  for (auto _ : state) benchmark::DoNotOptimize(table.sample(rng));
}
BENCHMARK(BM_CategoricalSample)->Arg(10)->Arg(1000)->Arg(100000);
BENCHMARK_MAIN();
