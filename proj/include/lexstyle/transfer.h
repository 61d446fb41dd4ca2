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

#ifndef LEXSTYLE_TRANSFER_H_
#define LEXSTYLE_TRANSFER_H_

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "lexstyle/classifier.h"
#include "lexstyle/corpus.h"
#include "lexstyle/embedding.h"
#include "lexstyle/ngram.h"
#include "lexstyle/pos.h"
#include "lexstyle/stemmer.h"

namespace lexstyle {

struct Candidate {
  std::string token;
  double similarity = 0.0;
  bool is_original = false;

  bool operator==(const Candidate&) const = default;
};

// One row per document token. Decoding starts from <START> and closes with
// an implicit <END> row.
struct SuggestionGrid {
  std::vector<std::vector<Candidate>> rows;

  // Number of complete paths through the grid.
  double path_count() const;
};

// When the original token joins a representative position's row.
enum class FallbackPolicy {
  kAlways,     // every row ends with the original at similarity 1 - epsilon
  kWhenEmpty,  // only rows left empty by filtering
};

struct TransferConfig {
  std::size_t top_n = kDefaultTopN;
  std::size_t beam_width = 5;
  TagScope scope = {PosTag::kAdjective, PosTag::kAdverb, PosTag::kVerb, PosTag::kNoun};
  double epsilon = 0.01;
  FallbackPolicy fallback = FallbackPolicy::kWhenEmpty;

  // Throws ContractError.
  void Validate() const;
};

// Score of appending `token` after `context` (the decoded path so far, only
// the last three tokens are used):
//
//   (4 f + 3 t + 2 b + u) / (40 (1 - sim))
//
// where u, b, t, f are the normalized counts of the 1- to 4-grams ending at
// `token`. Orders longer than the available context contribute 0. `sim` is
// clamped to [0, 1 - epsilon]; NaN is a ContractError.
double BeamScore(const NGramTable& table, std::span<const std::string> context,
                 const std::string& token, double similarity, double epsilon = 0.01);

struct Beam {
  std::vector<std::string> path;    // <START>, one token per row, then <END>
  std::vector<std::size_t> choices;  // chosen candidate index per grid row
  double score = 0.0;
};

// Beams surviving every row plus <END>, best first. Each step extends every
// beam by every candidate, adds BeamScore over the beam's last three tokens,
// and keeps the top `beam_width` by (score desc, path asc). Throws
// ContractError on an empty grid, an empty row, or a zero width.
std::vector<Beam> BeamSearch(const SuggestionGrid& grid, const NGramTable& table,
                             std::size_t beam_width, double epsilon = 0.01);

// Counters for events a transfer run skips over instead of failing.
struct TransferEvents {
  std::size_t documents = 0;
  std::size_t transferred = 0;
  std::size_t passed_through = 0;  // already in the target style
  std::size_t degenerate = 0;
  std::size_t oov_tokens = 0;
  std::size_t replacements = 0;

  void Add(const TransferEvents& other);
};

// Shared, read-only inputs of a transfer run. Every member must outlive the
// engine; all are used concurrently.
struct TransferResources {
  const NGramTable* table = nullptr;
  const EmbeddingStore* store = nullptr;
  const TokenClassifier* token_classifier = nullptr;
  const Tagger* tagger = nullptr;
  const SuffixStemmer* stemmer = nullptr;
};

class TransferEngine {
 public:
  // Throws ContractError on a missing resource or invalid config.
  TransferEngine(TransferResources resources, TransferConfig config);

  // Candidate rows for every token. Positions outside the representative
  // set get only their original token; so does an out-of-vocabulary
  // representative (counted in events->oov_tokens).
  SuggestionGrid Suggest(const Document& doc, std::span<const PosTag> tags, GenderLabel target,
                         TransferEvents* events = nullptr) const;

  // Rewrites `doc` toward `target`. The result keeps the original label and
  // token count. Degenerate documents are returned unchanged. Throws
  // ContractError on a document that is not in the source state.
  Document Transfer(const Document& doc, GenderLabel target,
                    TransferEvents* events = nullptr) const;

  // Transfers each document toward `target`, or toward its opposite label
  // when unset. Documents already labeled with the target pass through.
  // OpenMP over documents; output order is input order.
  std::vector<Document> TransferCorpus(std::span<const Document> docs,
                                       std::optional<GenderLabel> target,
                                       TransferEvents* events = nullptr) const;
  std::vector<Document> TransferCorpusSerial(std::span<const Document> docs,
                                             std::optional<GenderLabel> target,
                                             TransferEvents* events = nullptr) const;

  const TransferConfig& config() const { return config_; }

 private:
  std::vector<Candidate> SuggestRow(const std::string& token, PosTag tag, GenderLabel target,
                                    TransferEvents* events) const;
  Document TransferOne(const Document& doc, std::optional<GenderLabel> target,
                       TransferEvents* events) const;

  TransferResources res_;
  TransferConfig config_;
};

}  // namespace lexstyle

#endif  // LEXSTYLE_TRANSFER_H_
