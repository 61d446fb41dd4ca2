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

#ifndef LEXSTYLE_NGRAM_H_
#define LEXSTYLE_NGRAM_H_

#include <array>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "lexstyle/corpus.h"

namespace lexstyle {

// Exact 1..4-gram counts over training documents.
//
// Grams are keyed by their exact token tuple; there is no hashing of the
// gram into a fixed-width id, so two distinct grams never share a count.
class NGramTable {
 public:
  static constexpr int kMaxOrder = 4;

  NGramTable() = default;

  // Counts every contiguous window of length 1..4 in each sequence, as given.
  // Throws ContractError on an empty corpus.
  static NGramTable FromSequences(std::span<const std::vector<std::string>> sequences);
  // Reference implementation of FromSequences; single-threaded.
  static NGramTable FromSequencesSerial(std::span<const std::vector<std::string>> sequences);

  // Brackets each document with <START>/<END> and counts it. Every document
  // must be in the Train split.
  static NGramTable Build(std::span<const Document> train_docs);

  static NGramTable ReadTsv(std::istream& in);
  static NGramTable LoadTsv(const std::filesystem::path& path);
  // order<TAB>space-joined tokens<TAB>count, sorted by (order, token tuple).
  void WriteTsv(std::ostream& out) const;

  std::uint64_t count(std::span<const std::string> gram) const;
  std::uint64_t max_count(int order) const;
  std::uint64_t total_unigrams() const { return total_unigrams_; }
  // Unigram statistics with <START>/<END> excluded.
  std::uint64_t word_tokens() const { return word_tokens_; }
  std::size_t word_types() const { return word_types_; }
  std::size_t distinct(int order) const;

  // count / max_count at the gram's order; 0 for unseen grams or empty orders.
  double NormalizedCount(std::span<const std::string> gram) const;

  // Gram-wise sum; used for additivity checks and per-thread merges.
  void Merge(const NGramTable& other);

  bool operator==(const NGramTable& other) const;

  // Sorted (gram, count) pairs for one order.
  std::vector<std::pair<std::vector<std::string>, std::uint64_t>> Entries(int order) const;

 private:
  void AddSequence(std::span<const std::string> tokens);
  void Add(int order, std::string key, std::uint64_t n);
  void RecomputeStats();

  std::array<std::unordered_map<std::string, std::uint64_t>, kMaxOrder> counts_;
  std::array<std::uint64_t, kMaxOrder> max_count_{};
  std::uint64_t total_unigrams_ = 0;
  std::uint64_t word_tokens_ = 0;
  std::size_t word_types_ = 0;
};

// exp(-mean log P(w_i | context)) over the document's tokens, with <START>
// as the initial context. P uses the longest context (up to three tokens)
// the table has seen, add-one smoothed over V = |table word types ∪ document
// types| (boundary tags excluded from V); an unseen context at every order
// falls back to the add-one unigram estimate.
double Perplexity(const NGramTable& table, std::span<const std::string> tokens);
double Perplexity(const NGramTable& table, const Document& doc);

}  // namespace lexstyle

#endif  // LEXSTYLE_NGRAM_H_
