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

#ifndef LEXSTYLE_STEMMER_H_
#define LEXSTYLE_STEMMER_H_

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace lexstyle {

struct StemResult {
  std::string stem;
  std::string suffix;  // empty when no suffix was recognized
};

// Strips the longest matching inflectional suffix, provided at least
// `min_stem_length` bytes remain.
class SuffixStemmer {
 public:
  explicit SuffixStemmer(std::vector<std::string> suffixes, std::size_t min_stem_length = 3);

  // "ing", "ed", "es", "s".
  static SuffixStemmer English();
  // No suffixes yet; every token is its own stem.
  static SuffixStemmer Persian();
  // "en" or "fa"; throws ContractError otherwise.
  static SuffixStemmer ForLanguage(std::string_view language);

  StemResult Stem(std::string_view token) const;
  bool SameStem(std::string_view a, std::string_view b) const;
  // The candidate's stem plus the original's suffix. Returns the candidate
  // unchanged when the original carries no recognized suffix.
  std::string Reinflect(std::string_view candidate, std::string_view original) const;

  const std::vector<std::string>& suffixes() const { return suffixes_; }

 private:
  std::vector<std::string> suffixes_;  // longest first
  std::size_t min_stem_length_;
};

}  // namespace lexstyle

#endif  // LEXSTYLE_STEMMER_H_
