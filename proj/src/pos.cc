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

#include "lexstyle/pos.h"

#include <fstream>
#include <istream>

#include "lexstyle/errors.h"
#include "lexstyle/utf8.h"

namespace lexstyle {

namespace {

constexpr PosTag kContentTags[] = {PosTag::kAdjective, PosTag::kAdverb, PosTag::kVerb,
                                   PosTag::kNoun};

unsigned Bit(PosTag tag) { return 1u << static_cast<unsigned>(tag); }

std::string Trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

}  // namespace

std::string_view ToString(PosTag tag) {
  switch (tag) {
    case PosTag::kAdjective:
      return "ADJ";
    case PosTag::kAdverb:
      return "ADV";
    case PosTag::kVerb:
      return "VERB";
    case PosTag::kNoun:
      return "NOUN";
    case PosTag::kOther:
      return "OTHER";
  }
  return "OTHER";
}

std::optional<PosTag> ParsePosTag(std::string_view text) {
  const std::string t = utf8::ToLower(Trim(text));
  if (t == "adj" || t == "adjective") return PosTag::kAdjective;
  if (t == "adv" || t == "adverb") return PosTag::kAdverb;
  if (t == "verb" || t == "v") return PosTag::kVerb;
  if (t == "noun" || t == "n") return PosTag::kNoun;
  return std::nullopt;
}

TagScope::TagScope(std::initializer_list<PosTag> tags)
    : TagScope(std::span<const PosTag>(tags.begin(), tags.size())) {}

TagScope::TagScope(std::span<const PosTag> tags) {
  for (PosTag t : tags) {
    if (t == PosTag::kOther) throw ContractError("tag scope cannot include Other");
    mask_ |= Bit(t);
  }
  if (mask_ == 0) throw ContractError("tag scope must not be empty");
}

TagScope TagScope::Parse(std::string_view text) {
  std::vector<PosTag> tags;
  std::size_t begin = 0;
  while (begin <= text.size()) {
    const auto comma = text.find(',', begin);
    const auto item = Trim(text.substr(begin, comma == std::string_view::npos
                                                  ? std::string_view::npos
                                                  : comma - begin));
    if (!item.empty()) {
      const auto tag = ParsePosTag(item);
      if (!tag) throw ContractError("unknown part-of-speech tag \"" + item + "\"");
      tags.push_back(*tag);
    }
    if (comma == std::string_view::npos) break;
    begin = comma + 1;
  }
  return TagScope(tags);
}

bool TagScope::contains(PosTag tag) const { return (mask_ & Bit(tag)) != 0; }

std::vector<PosTag> TagScope::tags() const {
  std::vector<PosTag> out;
  for (PosTag t : kContentTags) {
    if (contains(t)) out.push_back(t);
  }
  return out;
}

std::string TagScope::ToString() const {
  std::string out;
  for (PosTag t : tags()) {
    if (!out.empty()) out.push_back(',');
    out += utf8::ToLower(lexstyle::ToString(t));
  }
  return out;
}

LexiconTagger::LexiconTagger(std::unordered_map<std::string, PosTag> lexicon)
    : lexicon_(std::move(lexicon)) {}

LexiconTagger LexiconTagger::Read(std::istream& in) {
  std::unordered_map<std::string, PosTag> lexicon;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const std::string trimmed = Trim(line);
    if (trimmed.empty() || trimmed[0] == '#') continue;
    const auto tab = line.find('\t');
    if (tab == std::string::npos) throw ParseError("expected token<TAB>tag", line_no);
    const std::string token = Trim(line.substr(0, tab));
    const std::string tag_text = Trim(line.substr(tab + 1));
    const auto tag = ParsePosTag(tag_text);
    if (token.empty() || !tag) {
      throw ValidationError("bad lexicon entry (tag must be ADJ, ADV, VERB or NOUN)", line_no);
    }
    lexicon[token] = *tag;
  }
  return LexiconTagger(std::move(lexicon));
}

LexiconTagger LexiconTagger::Load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open lexicon " + path.string());
  return Read(in);
}

PosTag LexiconTagger::Lookup(std::string_view token) const {
  auto it = lexicon_.find(std::string(token));
  if (it != lexicon_.end()) return it->second;
  it = lexicon_.find(utf8::ToLower(token));
  return it == lexicon_.end() ? PosTag::kOther : it->second;
}

std::vector<PosTag> LexiconTagger::Tag(std::span<const std::string> tokens) const {
  std::vector<PosTag> tags;
  tags.reserve(tokens.size());
  for (const auto& t : tokens) tags.push_back(Lookup(t));
  return tags;
}

std::vector<std::size_t> DetectRepresentatives(std::span<const PosTag> tags,
                                               const TagScope& scope) {
  std::vector<std::size_t> positions;
  for (std::size_t i = 0; i < tags.size(); ++i) {
    if (tags[i] != PosTag::kOther && scope.contains(tags[i])) positions.push_back(i);
  }
  return positions;
}

}  // namespace lexstyle
