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

#include "lexstyle/stemmer.h"

#include <algorithm>

#include "lexstyle/errors.h"

namespace lexstyle {

SuffixStemmer::SuffixStemmer(std::vector<std::string> suffixes, std::size_t min_stem_length)
    : suffixes_(std::move(suffixes)), min_stem_length_(min_stem_length) {
  std::stable_sort(suffixes_.begin(), suffixes_.end(),
                   [](const std::string& a, const std::string& b) { return a.size() > b.size(); });
}

SuffixStemmer SuffixStemmer::English() { return SuffixStemmer({"ing", "ed", "es", "s"}); }

SuffixStemmer SuffixStemmer::Persian() { return SuffixStemmer({}); }

SuffixStemmer SuffixStemmer::ForLanguage(std::string_view language) {
  if (language == "en") return English();
  if (language == "fa") return Persian();
  throw ContractError("no stemmer for language \"" + std::string(language) + "\"");
}

StemResult SuffixStemmer::Stem(std::string_view token) const {
  for (const auto& suffix : suffixes_) {
    if (token.size() >= suffix.size() + min_stem_length_ && token.ends_with(suffix)) {
      return {std::string(token.substr(0, token.size() - suffix.size())), suffix};
    }
  }
  return {std::string(token), ""};
}

bool SuffixStemmer::SameStem(std::string_view a, std::string_view b) const {
  return Stem(a).stem == Stem(b).stem;
}

std::string SuffixStemmer::Reinflect(std::string_view candidate, std::string_view original) const {
  const StemResult target = Stem(original);
  if (target.suffix.empty()) return std::string(candidate);
  return Stem(candidate).stem + target.suffix;
}

}  // namespace lexstyle
