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

// Part-of-speech tagging used to find the tokens that carry gendered style.

#ifndef LEXSTYLE_POS_H_
#define LEXSTYLE_POS_H_

#include <cstddef>
#include <filesystem>
#include <initializer_list>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace lexstyle {

enum class PosTag { kAdjective, kAdverb, kVerb, kNoun, kOther };

std::string_view ToString(PosTag tag);
// Accepts ADJ/ADV/VERB/NOUN in any case, plus adj/adv/verb/noun long forms.
std::optional<PosTag> ParsePosTag(std::string_view text);

// A non-empty set of content tags; Other is never a member.
class TagScope {
 public:
  // Throws ContractError when empty or when Other is requested.
  TagScope(std::initializer_list<PosTag> tags);
  explicit TagScope(std::span<const PosTag> tags);

  // "adj,adv,verb,noun" (case-insensitive, order irrelevant).
  static TagScope Parse(std::string_view text);

  bool contains(PosTag tag) const;
  std::vector<PosTag> tags() const;
  std::string ToString() const;
  bool operator==(const TagScope&) const = default;

 private:
  unsigned mask_ = 0;
};

class Tagger {
 public:
  virtual ~Tagger() = default;
  // Output has exactly one tag per input token.
  virtual std::vector<PosTag> Tag(std::span<const std::string> tokens) const = 0;
};

// Dictionary lookup; unknown tokens are Other. Lookup tries the token as-is,
// then lowercased.
class LexiconTagger : public Tagger {
 public:
  LexiconTagger() = default;
  explicit LexiconTagger(std::unordered_map<std::string, PosTag> lexicon);

  // token<TAB>tag lines; '#' comments and blank lines ignored.
  static LexiconTagger Read(std::istream& in);
  static LexiconTagger Load(const std::filesystem::path& path);

  std::vector<PosTag> Tag(std::span<const std::string> tokens) const override;
  PosTag Lookup(std::string_view token) const;
  std::size_t size() const { return lexicon_.size(); }

 private:
  std::unordered_map<std::string, PosTag> lexicon_;
};

// Ascending positions whose tag is in scope.
std::vector<std::size_t> DetectRepresentatives(std::span<const PosTag> tags,
                                               const TagScope& scope);

}  // namespace lexstyle

#endif  // LEXSTYLE_POS_H_
