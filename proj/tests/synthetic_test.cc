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

#include "lexstyle/synthetic.h"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "lexstyle/errors.h"

namespace lexstyle {
namespace {

namespace fs = std::filesystem;

std::string Slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

TEST(SyntheticTest, ShippedDataMatchesRegeneration) {
  const fs::path shipped = LEXSTYLE_DATA_DIR "/synthetic";
  const fs::path fresh = fs::temp_directory_path() / "lexstyle_synthetic_regen";
  fs::remove_all(fresh);
  WriteSynthetic(GenerateSynthetic(), fresh);
  for (const char* name : {"corpus.jsonl", "vectors.vec", "lexicon.tsv", "stopwords.txt",
                           "tokens_train.tsv", "tokens_test.tsv"}) {
    ASSERT_TRUE(fs::exists(shipped / name)) << name;
    EXPECT_EQ(Slurp(shipped / name), Slurp(fresh / name)) << name;
  }
  fs::remove_all(fresh);
}

TEST(SyntheticTest, CorpusShape) {
  SyntheticConfig config;
  const auto data = GenerateSynthetic(config);
  const auto stats = ComputeStats(data.docs);
  for (auto label : {GenderLabel::kMale, GenderLabel::kFemale}) {
    EXPECT_EQ(stats.count(label, Split::kTrain), config.train_per_label);
    EXPECT_EQ(stats.count(label, Split::kDev), config.dev_per_label);
    EXPECT_EQ(stats.count(label, Split::kTest), config.test_per_label);
  }
  EXPECT_EQ(data.token_train.size(), 2 * config.token_train_per_label);
  EXPECT_EQ(data.token_test.size(), 2 * config.token_test_per_label);
}

TEST(SyntheticTest, GenderIsCarriedOnlyByStyledTokens) {
  const auto data = GenerateSynthetic();
  const std::unordered_map<std::string, PosTag> lexicon(data.lexicon.begin(), data.lexicon.end());
  for (const auto& doc : data.docs) {
    std::size_t styled = 0;
    for (const auto& t : doc.tokens) {
      const bool female = t.ends_with("elle") || t.ends_with("elly");
      const bool male = t.ends_with("ork") || t.ends_with("orkly");
      if (!female && !male) continue;
      ++styled;
      EXPECT_EQ(female, doc.label == GenderLabel::kFemale) << doc.id << " " << t;
      const auto it = lexicon.find(t);
      ASSERT_NE(it, lexicon.end()) << t;
      EXPECT_TRUE(it->second == PosTag::kAdjective || it->second == PosTag::kAdverb);
    }
    EXPECT_GE(styled, 3u) << doc.id;
  }
}

TEST(SyntheticTest, CounterpartIsNearestNeighbour) {
  const auto data = GenerateSynthetic();
  std::size_t checked = 0;
  for (const auto& [token, tag] : data.lexicon) {
    if (tag != PosTag::kAdjective || !token.ends_with("elle")) continue;
    const std::string male = token.substr(0, token.size() - 4) + "ork";
    EXPECT_EQ(data.embeddings.MostSimilar(token, 1).front().token, male);
    ++checked;
  }
  EXPECT_GT(checked, 0u);
}

TEST(SyntheticTest, HeldOutTokensUseUnseenStems) {
  const auto data = GenerateSynthetic();
  auto stem = [](const std::string& t) {
    for (const char* s : {"orkly", "elly", "elle", "ork"}) {
      if (t.ends_with(s)) return t.substr(0, t.size() - std::string(s).size());
    }
    return t;
  };
  std::unordered_set<std::string> train;
  for (const auto& ex : data.token_train) train.insert(stem(ex.token));
  for (const auto& ex : data.token_test) EXPECT_FALSE(train.contains(stem(ex.token))) << ex.token;
}

TEST(SyntheticTest, SeedChangesOutputAndTokenSetRoundTrips) {
  SyntheticConfig other;
  other.seed = 7;
  const auto a = GenerateSynthetic();
  EXPECT_NE(a.docs, GenerateSynthetic(other).docs);
  EXPECT_EQ(a.docs, GenerateSynthetic().docs);

  std::ostringstream out;
  WriteTokenSet(out, a.token_test);
  std::istringstream in(out.str());
  EXPECT_EQ(ReadTokenSet(in), a.token_test);
  std::istringstream bad("zork\tunknown\n");
  EXPECT_THROW(ReadTokenSet(bad), ParseError);
}

}  // namespace
}  // namespace lexstyle
