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

#include "lexstyle/ngram.h"

#include <gtest/gtest.h>

#include <cmath>
#include <map>
#include <random>
#include <sstream>

#include "lexstyle/errors.h"

namespace lexstyle {
namespace {

using Tokens = std::vector<std::string>;
using Gram = std::vector<std::string>;

// Independent recount: a sorted map over explicit tuples, no shared code
// with the table's keyed storage.
std::map<Gram, std::uint64_t> BruteCounts(const std::vector<Tokens>& seqs, std::size_t order) {
  std::map<Gram, std::uint64_t> out;
  for (const auto& s : seqs) {
    for (std::size_t i = 0; i + order <= s.size(); ++i) {
      ++out[Gram(s.begin() + static_cast<std::ptrdiff_t>(i),
                 s.begin() + static_cast<std::ptrdiff_t>(i + order))];
    }
  }
  return out;
}

std::vector<Tokens> RandomSequences(std::uint64_t seed, int n, int vocab) {
  std::mt19937_64 rng(seed);
  std::vector<Tokens> seqs;
  for (int i = 0; i < n; ++i) {
    Tokens s{"<START>"};
    const int len = static_cast<int>(rng() % 12);
    for (int k = 0; k < len; ++k) s.push_back("w" + std::to_string(rng() % vocab));
    s.push_back("<END>");
    seqs.push_back(std::move(s));
  }
  return seqs;
}

Document TrainDoc(Tokens tokens) {
  Document d;
  d.id = "d";
  d.tokens = std::move(tokens);
  d.raw_text = JoinTokens(d.tokens);
  return d;
}

TEST(NGramTableTest, CountsEveryWindow) {
  const std::vector<Tokens> seqs = {{"<START>", "a", "b", "<END>"}};
  const auto t = NGramTable::FromSequences(seqs);
  for (const char* u : {"<START>", "a", "b", "<END>"}) {
    EXPECT_EQ(t.count(Gram{u}), 1u) << u;
  }
  EXPECT_EQ(t.count(Gram{"<START>", "a"}), 1u);
  EXPECT_EQ(t.count(Gram{"a", "b"}), 1u);
  EXPECT_EQ(t.count(Gram{"b", "<END>"}), 1u);
  EXPECT_EQ(t.distinct(2), 3u);
  EXPECT_EQ(t.distinct(4), 1u);
  EXPECT_EQ(t.total_unigrams(), 4u);
  EXPECT_EQ(t.word_tokens(), 2u);
  EXPECT_EQ(t.word_types(), 2u);
}

TEST(NGramTableTest, DuplicateCorpusDoublesCounts) {
  const std::vector<Tokens> one = {{"<START>", "a", "b", "<END>"}};
  const std::vector<Tokens> two = {one[0], one[0]};
  const auto t1 = NGramTable::FromSequences(one);
  const auto t2 = NGramTable::FromSequences(two);
  for (int order = 1; order <= 4; ++order) {
    for (const auto& [gram, c] : t1.Entries(order)) EXPECT_EQ(t2.count(gram), 2 * c);
  }
}

TEST(NGramTableTest, ShortDocumentStoresNoFourGrams) {
  const std::vector<Tokens> seqs = {{"a", "b", "c"}};
  EXPECT_EQ(NGramTable::FromSequences(seqs).distinct(4), 0u);
}

TEST(NGramTableTest, BuildBracketsAndRequiresTrainSplit) {
  const auto t = NGramTable::Build(std::vector<Document>{TrainDoc({"a", "b"})});
  EXPECT_EQ(t.count(Gram{"<START>", "a", "b", "<END>"}), 1u);
  Document dev = TrainDoc({"a"});
  dev.split = Split::kDev;
  EXPECT_THROW(NGramTable::Build(std::vector<Document>{dev}), ContractError);
  EXPECT_THROW(NGramTable::Build(std::vector<Document>{}), ContractError);
}

TEST(NGramTableTest, MatchesBruteForceRecount) {
  const auto seqs = RandomSequences(17, 60, 6);
  const auto t = NGramTable::FromSequences(seqs);
  for (std::size_t order = 1; order <= 4; ++order) {
    const auto expected = BruteCounts(seqs, order);
    const auto entries = t.Entries(static_cast<int>(order));
    ASSERT_EQ(entries.size(), expected.size());
    std::uint64_t max = 0;
    for (const auto& [gram, c] : entries) {
      EXPECT_EQ(expected.at(gram), c);
      max = std::max(max, c);
    }
    EXPECT_EQ(t.max_count(static_cast<int>(order)), max);
  }
}

TEST(NGramTableTest, Additivity) {
  const auto a = RandomSequences(1, 30, 5);
  const auto b = RandomSequences(2, 30, 5);
  std::vector<Tokens> both = a;
  both.insert(both.end(), b.begin(), b.end());
  auto merged = NGramTable::FromSequences(a);
  merged.Merge(NGramTable::FromSequences(b));
  EXPECT_EQ(merged, NGramTable::FromSequences(both));
  EXPECT_EQ(NGramTable::FromSequences(both), NGramTable::FromSequencesSerial(both));
}

TEST(NormalizedCountTest, HandValues) {
  const std::vector<Tokens> seqs = {{"a", "a", "a", "a", "b", "b"}};
  const auto t = NGramTable::FromSequences(seqs);
  EXPECT_DOUBLE_EQ(t.NormalizedCount(Gram{"a"}), 1.0);
  EXPECT_DOUBLE_EQ(t.NormalizedCount(Gram{"b"}), 0.5);
  EXPECT_DOUBLE_EQ(t.NormalizedCount(Gram{"x", "y", "z", "w"}), 0.0);
  EXPECT_THROW(t.NormalizedCount(Gram{}), ContractError);
  EXPECT_THROW(t.NormalizedCount(Gram{"a", "a", "a", "a", "a"}), ContractError);
}

TEST(NormalizedCountTest, EmptyOrderIsZero) {
  const std::vector<Tokens> seqs = {{"a"}};
  EXPECT_DOUBLE_EQ(NGramTable::FromSequences(seqs).NormalizedCount(Gram{"a", "a"}), 0.0);
}

TEST(NormalizedCountTest, BoundedAndMonotone) {
  const auto seqs = RandomSequences(23, 80, 8);
  const auto t = NGramTable::FromSequences(seqs);
  for (int order = 1; order <= 4; ++order) {
    const auto entries = t.Entries(order);
    for (const auto& [g1, c1] : entries) {
      const double n1 = t.NormalizedCount(g1);
      EXPECT_GT(n1, 0.0);
      EXPECT_LE(n1, 1.0);
      for (const auto& [g2, c2] : entries) {
        if (c1 < c2) EXPECT_LT(n1, t.NormalizedCount(g2));
      }
    }
  }
}

TEST(NGramTsvTest, RoundTripIsSortedAndExact) {
  const auto t = NGramTable::FromSequences(RandomSequences(5, 20, 4));
  std::ostringstream out;
  t.WriteTsv(out);
  std::istringstream in(out.str());
  const auto back = NGramTable::ReadTsv(in);
  EXPECT_EQ(back, t);
  std::ostringstream again;
  back.WriteTsv(again);
  EXPECT_EQ(again.str(), out.str());
  EXPECT_EQ(out.str().rfind("1\t<END>\t", 0), 0u);
}

TEST(NGramTsvTest, MalformedLinesNameTheLine) {
  auto expect_line = [](const std::string& text, std::size_t line) {
    std::istringstream in(text);
    try {
      NGramTable::ReadTsv(in);
      FAIL() << "expected ParseError for: " << text;
    } catch (const ParseError& e) {
      EXPECT_EQ(e.line(), line);
    }
  };
  expect_line("1\ta\t3\n2\ta\t1\n", 2);
  expect_line("5\ta b c d e\t1\n", 1);
  expect_line("1\ta\tx\n", 1);
  expect_line("1\ta\n", 1);
}

TEST(PerplexityTest, SingleTokenVocabularyHandOracle) {
  // History <START> a a a a a. The first three steps hit a context seen once
  // whose continuation was seen once: (1+1)/(1+1). The last two use the
  // trigram context "a a a" (8 times) followed by "a" (7 times): (7+1)/(8+1).
  Tokens train(10, "a");
  const auto t = NGramTable::Build(std::vector<Document>{TrainDoc(train)});
  const double expected = std::pow(9.0 / 8.0, 2.0 / 5.0);
  EXPECT_NEAR(Perplexity(t, Tokens(5, "a")), expected, 1e-12);
  EXPECT_LT(std::abs(Perplexity(t, Tokens(5, "a")) - 1.0), 0.05);
}

TEST(PerplexityTest, EmptyTableIsUniform) {
  const NGramTable empty;
  const Tokens doc = {"p", "q", "r", "s", "p"};
  EXPECT_NEAR(Perplexity(empty, doc), 4.0, 1e-12);
}

TEST(PerplexityTest, SeenTextBeatsRandomText) {
  std::mt19937_64 rng(29);
  Tokens vocab;
  for (int i = 0; i < 12; ++i) vocab.push_back("v" + std::to_string(i));
  Tokens train;
  for (int i = 0; i < 40; ++i) train.push_back(vocab[rng() % vocab.size()]);
  const auto t = NGramTable::Build(std::vector<Document>{TrainDoc(train)});
  Tokens random;
  for (int i = 0; i < 40; ++i) random.push_back(vocab[rng() % vocab.size()]);
  EXPECT_LT(Perplexity(t, train), Perplexity(t, random));
}

TEST(PerplexityTest, AtLeastOneAndRejectsEmpty) {
  const auto seqs = RandomSequences(31, 40, 5);
  const auto t = NGramTable::FromSequences(seqs);
  for (const auto& s : RandomSequences(32, 40, 7)) {
    Tokens words(s.begin() + 1, s.end() - 1);
    if (words.empty()) continue;
    EXPECT_GE(Perplexity(t, words), 1.0);
  }
  EXPECT_THROW(Perplexity(t, Tokens{}), ContractError);
}

}  // namespace
}  // namespace lexstyle
