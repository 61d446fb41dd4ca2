// Copyright 2026 The lexstyle Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Serial reference vs OpenMP kernels. Run with --benchmark_filter to pick a
// pair; OMP_NUM_THREADS controls the parallel side.

#include <benchmark/benchmark.h>

#include <random>
#include <string>
#include <unordered_map>
#include <vector>

#include "lexstyle/classifier.h"
#include "lexstyle/doc_classifier.h"
#include "lexstyle/embedding.h"
#include "lexstyle/ngram.h"
#include "lexstyle/stemmer.h"
#include "lexstyle/synthetic.h"
#include "lexstyle/token_classifier.h"
#include "lexstyle/transfer.h"

namespace lexstyle {
namespace {

EmbeddingStore RandomStore(std::size_t vocab, std::size_t dim) {
  std::mt19937_64 rng(7);
  std::normal_distribution<double> normal;
  EmbeddingStore store(dim);
  std::vector<double> v(dim);
  for (std::size_t i = 0; i < vocab; ++i) {
    for (auto& x : v) x = normal(rng);
    store.Add("w" + std::to_string(i), v);
  }
  return store;
}

std::vector<std::vector<std::string>> RandomSequences(std::size_t count, std::size_t length) {
  std::mt19937_64 rng(11);
  std::vector<std::vector<std::string>> out(count);
  for (auto& seq : out) {
    seq.push_back("<START>");
    for (std::size_t i = 0; i < length; ++i) seq.push_back("w" + std::to_string(rng() % 5000));
    seq.push_back("<END>");
  }
  return out;
}

const EmbeddingStore& BigStore() {
  static const EmbeddingStore store = RandomStore(50000, 100);
  return store;
}

// The synthetic corpus scaled up, with both classifiers trained once.
struct Fixture {
  SyntheticData data;
  std::vector<Document> docs;
  NGramTable table;
  LexiconTagger tagger;
  SuffixStemmer stemmer = SuffixStemmer::English();
  std::optional<DocClassifierModel> doc_model;
  std::optional<CharTokenModel> token_model;

  Fixture() {
    SyntheticConfig config;
    config.train_per_label = 600;
    config.test_per_label = 400;
    data = GenerateSynthetic(config);
    StopwordSet stop(data.stopwords.begin(), data.stopwords.end());
    std::vector<Document> train;
    for (const auto& d : data.docs) {
      docs.push_back(Preprocess(d, stop));
      if (d.split == Split::kTrain) train.push_back(docs.back());
    }
    table = NGramTable::Build(train);
    tagger = LexiconTagger(
        std::unordered_map<std::string, PosTag>(data.lexicon.begin(), data.lexicon.end()));
    auto doc_config = nn::TrainConfig::DocClassifier(true);
    doc_config.epochs = 2;
    doc_model = DocClassifierModel::Train(train, doc_config);
    auto token_config = nn::TrainConfig::TokenClassifier(true);
    token_config.epochs = 2;
    token_model = CharTokenModel::Train(data.token_train, token_config);
  }

  TransferEngine Engine() const {
    TransferConfig config;
    return TransferEngine({&table, &data.embeddings, &*token_model, &tagger, &stemmer}, config);
  }
};

const Fixture& SharedFixture() {
  static const Fixture fixture;
  return fixture;
}

void BM_ScoreAll(benchmark::State& state) {
  const auto& store = BigStore();
  for (auto _ : state) benchmark::DoNotOptimize(store.ScoreAll(17));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(store.size()));
}

void BM_ScoreAllSerial(benchmark::State& state) {
  const auto& store = BigStore();
  for (auto _ : state) benchmark::DoNotOptimize(store.ScoreAllSerial(17));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(store.size()));
}

void BM_MostSimilar(benchmark::State& state) {
  const auto& store = BigStore();
  for (auto _ : state) benchmark::DoNotOptimize(store.MostSimilar("w17"));
}

void BM_MostSimilarSerial(benchmark::State& state) {
  const auto& store = BigStore();
  for (auto _ : state) benchmark::DoNotOptimize(store.MostSimilarSerial("w17"));
}

void BM_FromSequences(benchmark::State& state) {
  const auto seqs = RandomSequences(5000, 30);
  for (auto _ : state) benchmark::DoNotOptimize(NGramTable::FromSequences(seqs));
}

void BM_FromSequencesSerial(benchmark::State& state) {
  const auto seqs = RandomSequences(5000, 30);
  for (auto _ : state) benchmark::DoNotOptimize(NGramTable::FromSequencesSerial(seqs));
}

void BM_PredictAll(benchmark::State& state) {
  const auto& f = SharedFixture();
  for (auto _ : state) benchmark::DoNotOptimize(PredictAll(*f.doc_model, f.docs));
}

void BM_PredictAllSerial(benchmark::State& state) {
  const auto& f = SharedFixture();
  for (auto _ : state) benchmark::DoNotOptimize(PredictAllSerial(*f.doc_model, f.docs));
}

void BM_TransferCorpus(benchmark::State& state) {
  const auto& f = SharedFixture();
  const auto engine = f.Engine();
  for (auto _ : state) benchmark::DoNotOptimize(engine.TransferCorpus(f.docs, std::nullopt));
}

void BM_TransferCorpusSerial(benchmark::State& state) {
  const auto& f = SharedFixture();
  const auto engine = f.Engine();
  for (auto _ : state) {
    benchmark::DoNotOptimize(engine.TransferCorpusSerial(f.docs, std::nullopt));
  }
}

BENCHMARK(BM_ScoreAll)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_ScoreAllSerial)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_MostSimilar)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_MostSimilarSerial)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_FromSequences)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_FromSequencesSerial)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_PredictAll)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_PredictAllSerial)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_TransferCorpus)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_TransferCorpusSerial)->Unit(benchmark::kMillisecond)->UseRealTime();

}  // namespace
}  // namespace lexstyle

BENCHMARK_MAIN();
