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

// Each OpenMP kernel against its single-threaded reference, across thread
// counts. Equality is exact: the parallel paths only partition work.

#include <gtest/gtest.h>
#include <omp.h>

#include <random>

#include "lexstyle/doc_classifier.h"
#include "lexstyle/embedding.h"
#include "lexstyle/errors.h"
#include "lexstyle/ngram.h"
#include "lexstyle/synthetic.h"
#include "lexstyle/transfer.h"

namespace lexstyle {
namespace {

class ParallelTest : public ::testing::TestWithParam<int> {
 protected:
  void SetUp() override {
    saved_ = omp_get_max_threads();
    omp_set_num_threads(GetParam());
  }
  void TearDown() override { omp_set_num_threads(saved_); }

  static const SyntheticData& Data() {
    static const SyntheticData* data = [] {
      SyntheticConfig config;
      config.train_per_label = 30;
      config.dev_per_label = 2;
      config.test_per_label = 30;
      return new SyntheticData(GenerateSynthetic(config));
    }();
    return *data;
  }

 private:
  int saved_ = 1;
};

TEST_P(ParallelTest, ScoreAllMatchesSerialBitwise) {
  const auto& store = Data().embeddings;
  for (std::size_t row = 0; row < store.size(); row += 7) {
    const auto a = store.ScoreAll(row);
    const auto b = store.ScoreAllSerial(row);
    ASSERT_EQ(a.size(), b.size());
    for (std::size_t i = 0; i < a.size(); ++i) EXPECT_EQ(a[i], b[i]);
    EXPECT_EQ(store.MostSimilar(store.token(row)), store.MostSimilarSerial(store.token(row)));
  }
}

TEST_P(ParallelTest, NGramCountsMatchSerial) {
  std::vector<std::vector<std::string>> seqs;
  for (const auto& d : Data().docs) seqs.push_back(WithBoundaries(d.tokens));
  EXPECT_EQ(NGramTable::FromSequences(seqs), NGramTable::FromSequencesSerial(seqs));
}

TEST_P(ParallelTest, PredictAllMatchesSerial) {
  const auto train = FilterSplit(Data().docs, Split::kTrain);
  auto config = nn::TrainConfig::DocClassifier(true);
  config.hidden_units = 8;
  config.filters = 8;
  config.embedding_dim = 8;
  const auto model = DocClassifierModel::Create(train, config);
  EXPECT_EQ(PredictAll(model, Data().docs), PredictAllSerial(model, Data().docs));
}

TEST_P(ParallelTest, ExceptionsLeaveParallelRegionsAsErrors) {
  auto docs = FilterSplit(Data().docs, Split::kTrain);
  const auto model = DocClassifierModel::Create(docs, nn::TrainConfig::DocClassifier(true));
  docs[docs.size() / 2].tokens.clear();
  EXPECT_THROW(PredictAll(model, docs), ContractError);
}

class SuffixRule : public TokenClassifier {
 public:
  Prediction Classify(std::string_view token) const override {
    return Prediction::FromProbability(token.find("ell") != std::string_view::npos ? 0.9 : 0.1);
  }
};

TEST_P(ParallelTest, TransferCorpusMatchesSerial) {
  const auto& data = Data();
  const auto table = NGramTable::Build(FilterSplit(data.docs, Split::kTrain));
  const LexiconTagger tagger({data.lexicon.begin(), data.lexicon.end()});
  const SuffixRule classifier;
  const auto stemmer = SuffixStemmer::English();
  const TransferEngine engine({&table, &data.embeddings, &classifier, &tagger, &stemmer},
                              TransferConfig{});
  const auto test = FilterSplit(data.docs, Split::kTest);
  TransferEvents parallel_events, serial_events;
  EXPECT_EQ(engine.TransferCorpus(test, std::nullopt, &parallel_events),
            engine.TransferCorpusSerial(test, std::nullopt, &serial_events));
  EXPECT_EQ(parallel_events.replacements, serial_events.replacements);
  EXPECT_EQ(parallel_events.documents, serial_events.documents);
  EXPECT_EQ(parallel_events.oov_tokens, serial_events.oov_tokens);
}

INSTANTIATE_TEST_SUITE_P(Threads, ParallelTest, ::testing::Values(1, 2, 4, 7));

}  // namespace
}  // namespace lexstyle
