#include <benchmark/benchmark.h>

#include <vector>

#include "scriptcausal/conditional_model.hpp"
#include "scriptcausal/corpus_io.hpp"
#include "scriptcausal/gru.hpp"
#include "scriptcausal/interventions.hpp"
#include "scriptcausal/pmi.hpp"
#include "scriptcausal/rng.hpp"
#include "scriptcausal/synth.hpp"

using namespace scriptcausal;

namespace {

std::vector<std::vector<EventId>> popcorn_ids(std::size_t chains, Vocabulary& vocab) {
  const auto corpus = sample_chains(build_fixture("F-POPCORN"), chains, 1, false);
  vocab = build_vocab_from(corpus, 1);
  std::vector<std::vector<EventId>> ids;
  for (const auto& c : corpus.chains) ids.push_back(chain_ids(c, vocab));
  return ids;
}

void BM_GruStep(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  Rng rng(1);
  const auto p = GruParams::random(n, n, rng);
  std::vector<double> x(n, 0.1), h(n, 0.0);
  for (auto _ : state) {
    h = gru_step(p, x, h);
    benchmark::DoNotOptimize(h.data());
  }
}
BENCHMARK(BM_GruStep)->Arg(64)->Arg(300);

void BM_ConditionalLossGrad(benchmark::State& state) {
  const auto dim = static_cast<std::size_t>(state.range(0));
  const auto corpus = sample_chains(build_fixture("F-ZIPF"), 64, 1, false);
  const auto vocab = build_vocab_from(corpus, 1);
  const auto inst = extract_training_instances(corpus, vocab, TokenVocabulary(), 3);
  const ConditionalModel m(vocab.size(), {"<unk>"}, dim, dim, TextMode::mean, 1);
  ConditionalParams grad = m.params();
  for (auto _ : state) {
    grad.visit("", [](const std::string&, Tensor& t) { t.zero(); });
    benchmark::DoNotOptimize(m.loss(inst, &grad));
  }
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * inst.size()));
}
BENCHMARK(BM_ConditionalLossGrad)->Arg(32)->Arg(128);

void BM_EstimateInterventions(benchmark::State& state) {
  const auto samples = static_cast<std::size_t>(state.range(0));
  const auto corpus = sample_chains(build_fixture("F-ZIPF"), 2000, 1, false);
  const auto vocab = build_vocab_from(corpus, 1);
  const auto inst = extract_training_instances(corpus, vocab, TokenVocabulary(), 3);
  const ConditionalModel m(vocab.size(), {"<unk>"}, 32, 64, TextMode::mean, 1);
  const auto set = sample_adjustment_set(inst, samples, 1);
  for (auto _ : state) benchmark::DoNotOptimize(estimate_interventions(m, set, "bench").effect.values.data());
}
BENCHMARK(BM_EstimateInterventions)->Arg(100)->Unit(benchmark::kMillisecond);

void BM_SkipBigramCounts(benchmark::State& state) {
  Vocabulary vocab;
  const auto ids = popcorn_ids(20000, vocab);
  const auto threads = static_cast<std::size_t>(state.range(0));
  for (auto _ : state)
    benchmark::DoNotOptimize(count_skip_bigrams(ids, vocab.size(), 2, true, threads).grand_total);
}
BENCHMARK(BM_SkipBigramCounts)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
