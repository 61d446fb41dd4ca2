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

// Seeded generator for small separable corpora. Gender is carried only by
// styled adjectives and adverbs: female forms end in "elle" / "elly", male
// forms in "ork" / "orkly", and each female word has a male counterpart on
// the same stem. Nouns, verbs and stopwords are shared by both labels.

#ifndef LEXSTYLE_SYNTHETIC_H_
#define LEXSTYLE_SYNTHETIC_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "lexstyle/corpus.h"
#include "lexstyle/embedding.h"
#include "lexstyle/pos.h"
#include "lexstyle/token_classifier.h"

namespace lexstyle {

struct SyntheticConfig {
  std::size_t train_per_label = 150;
  std::size_t dev_per_label = 25;
  std::size_t test_per_label = 50;
  std::size_t min_length = 10;
  std::size_t max_length = 20;
  std::size_t min_styled = 3;  // styled tokens per document, at least
  double styled_rate = 0.25;
  std::size_t adjective_pairs = 20;
  std::size_t adverb_pairs = 12;
  std::size_t nouns = 30;
  std::size_t verb_stems = 15;
  std::size_t embedding_dim = 24;
  // Separate token corpus for the character classifier.
  std::size_t token_train_per_label = 200;
  std::size_t token_test_per_label = 100;
  std::uint64_t seed = 20240611;
};

struct SyntheticData {
  std::vector<Document> docs;
  EmbeddingStore embeddings;
  std::vector<std::pair<std::string, PosTag>> lexicon;
  std::vector<std::string> stopwords;
  TokenTrainingSet token_train;
  TokenTrainingSet token_test;  // stems never seen in token_train
};

SyntheticData GenerateSynthetic(const SyntheticConfig& config = {});

// Writes corpus.jsonl, vectors.vec, lexicon.tsv, stopwords.txt,
// tokens_train.tsv and tokens_test.tsv into `dir`.
void WriteSynthetic(const SyntheticData& data, const std::filesystem::path& dir);

// "token<TAB>label" per line.
void WriteTokenSet(std::ostream& out, const TokenTrainingSet& set);
TokenTrainingSet ReadTokenSet(std::istream& in);
TokenTrainingSet LoadTokenSet(const std::filesystem::path& path);

}  // namespace lexstyle

#endif  // LEXSTYLE_SYNTHETIC_H_
