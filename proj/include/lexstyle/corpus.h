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

// Gender-labeled corpora: JSONL loading, tokenization, preprocessing and
// subdocument splitting.
//
// Corpus record (one per line, UTF-8):
//   {"id": "...", "text": "...", "label": "male"|"female",
//    "split": "train"|"dev"|"test"}
// Transferred corpora add "style_state": "transferred", "replacements",
// "tokens" and "seed"; the loader accepts those keys and nothing else.

#ifndef LEXSTYLE_CORPUS_H_
#define LEXSTYLE_CORPUS_H_

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

namespace lexstyle {

enum class GenderLabel { kMale = 0, kFemale = 1 };
enum class Split { kTrain = 0, kDev = 1, kTest = 2 };
enum class StyleState { kSource = 0, kTransferred = 1 };

std::string_view ToString(GenderLabel label);
std::string_view ToString(Split split);
std::string_view ToString(StyleState state);
std::optional<GenderLabel> ParseGenderLabel(std::string_view text);
std::optional<Split> ParseSplit(std::string_view text);
GenderLabel Opposite(GenderLabel label);

inline constexpr std::string_view kStartTag = "<START>";
inline constexpr std::string_view kEndTag = "<END>";
inline constexpr std::size_t kDefaultMaxSubdocumentLength = 256;

struct Replacement {
  std::size_t position = 0;
  std::string original;
  std::string chosen;
  double similarity = 0.0;

  bool operator==(const Replacement&) const = default;
};

struct Document {
  std::string id;
  std::string raw_text;
  std::vector<std::string> tokens;
  GenderLabel label = GenderLabel::kMale;
  Split split = Split::kTrain;
  StyleState style_state = StyleState::kSource;
  // Only populated on transferred documents.
  std::vector<Replacement> replacements;

  // A document preprocessed down to nothing stays in the corpus, flagged.
  bool degenerate() const { return tokens.empty(); }

  bool operator==(const Document&) const = default;
};

struct CorpusStats {
  // counts[label][split]
  std::array<std::array<std::size_t, 3>, 2> counts{};

  std::size_t count(GenderLabel label, Split split) const {
    return counts[static_cast<int>(label)][static_cast<int>(split)];
  }
  std::size_t total(GenderLabel label) const;
};

CorpusStats ComputeStats(std::span<const Document> docs);

// Whitespace split, with every punctuation character its own token.
// Apostrophes and hyphens flanked by letters/digits stay inside the word.
std::vector<std::string> Tokenize(std::string_view text);

std::vector<Document> ParseJsonl(std::istream& in);
std::vector<Document> LoadJsonl(const std::filesystem::path& path);

// "tokens" is only emitted when it differs from Tokenize(raw_text), so a
// plain source corpus round-trips to the four-field schema.
std::string ToJsonLine(const Document& doc, std::optional<std::uint64_t> seed = std::nullopt);
void WriteJsonl(std::ostream& out, std::span<const Document> docs,
                std::optional<std::uint64_t> seed = std::nullopt);

using StopwordSet = std::unordered_set<std::string>;

// One token per line; '#' lines and blank lines skipped; entries lowercased.
StopwordSet ParseStopwords(std::istream& in);
StopwordSet LoadStopwords(const std::filesystem::path& path);

// Lowercases, then drops punctuation-only tokens and stopwords.
Document Preprocess(const Document& doc, const StopwordSet& stopwords);

// Partitions tokens into consecutive chunks of at most max_len. Ids get a
// "#<ordinal>" suffix.
std::vector<Document> SplitLongDocument(const Document& doc,
                                        std::size_t max_len = kDefaultMaxSubdocumentLength);

std::vector<Document> FilterSplit(std::span<const Document> docs, Split split);

std::string JoinTokens(std::span<const std::string> tokens);

// Returns tokens bracketed by <START>/<END>, unless already bracketed.
std::vector<std::string> WithBoundaries(std::span<const std::string> tokens);

}  // namespace lexstyle

#endif  // LEXSTYLE_CORPUS_H_
