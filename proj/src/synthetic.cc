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

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <unordered_set>

#include "lexstyle/errors.h"
#include "lexstyle/io.h"
#include "lexstyle/nn.h"

namespace lexstyle {

namespace {

// Draws straight from the engine so output does not depend on the standard
// library's distribution implementations.
class Draw {
 public:
  explicit Draw(std::uint64_t seed) : rng_(seed) {}
  std::size_t Index(std::size_t n) { return static_cast<std::size_t>(rng_() % n); }
  double Uniform() { return static_cast<double>(rng_() >> 11) * 0x1.0p-53; }
  double Symmetric() { return 2.0 * Uniform() - 1.0; }
  bool Chance(double p) { return Uniform() < p; }

 private:
  nn::Rng rng_;
};

constexpr std::string_view kConsonants = "bdfgklmnprstvz";
constexpr std::string_view kVowels = "aiou";  // no 'e': keeps suffixes unambiguous

class StemPool {
 public:
  explicit StemPool(Draw& draw) : draw_(draw) {}

  std::string Next() {
    for (;;) {
      std::string stem;
      const std::size_t syllables = 2 + draw_.Index(2);
      for (std::size_t s = 0; s < syllables; ++s) {
        stem += kConsonants[draw_.Index(kConsonants.size())];
        stem += kVowels[draw_.Index(kVowels.size())];
      }
      if (used_.insert(stem).second) return stem;
    }
  }

 private:
  Draw& draw_;
  std::unordered_set<std::string> used_;
};

struct Lexeme {
  std::string female;
  std::string male;
};

using Vector = std::vector<double>;

Vector RandomUnit(Draw& draw, std::size_t dim) {
  Vector v(dim);
  double norm = 0.0;
  for (auto& x : v) {
    x = draw.Symmetric();
    norm += x * x;
  }
  norm = std::sqrt(norm);
  for (auto& x : v) x /= norm;
  return v;
}

Vector Combine(std::initializer_list<std::pair<double, const Vector*>> parts, Draw& draw,
               double noise) {
  const std::size_t dim = parts.begin()->second->size();
  Vector out(dim, 0.0);
  for (const auto& [w, v] : parts) {
    for (std::size_t i = 0; i < dim; ++i) out[i] += w * (*v)[i];
  }
  for (auto& x : out) x += noise * draw.Symmetric();
  return out;
}

}  // namespace

SyntheticData GenerateSynthetic(const SyntheticConfig& c) {
  if (c.min_length < c.min_styled || c.min_length > c.max_length || c.adjective_pairs == 0 ||
      c.adverb_pairs == 0 || c.nouns == 0 || c.verb_stems == 0 || c.embedding_dim < 2) {
    throw ContractError("inconsistent synthetic corpus config");
  }
  Draw draw(c.seed);
  StemPool stems(draw);
  SyntheticData data;

  std::vector<Lexeme> adjectives, adverbs;
  for (std::size_t i = 0; i < c.adjective_pairs; ++i) {
    const std::string s = stems.Next();
    adjectives.push_back({s + "elle", s + "ork"});
  }
  for (std::size_t i = 0; i < c.adverb_pairs; ++i) {
    const std::string s = stems.Next();
    adverbs.push_back({s + "elly", s + "orkly"});
  }
  std::vector<std::string> nouns;
  for (std::size_t i = 0; i < c.nouns; ++i) nouns.push_back(stems.Next() + "n");
  std::vector<std::vector<std::string>> verbs;  // forms per stem
  for (std::size_t i = 0; i < c.verb_stems; ++i) {
    const std::string s = stems.Next() + "t";
    verbs.push_back({s + "ed", s + "ing", s + "s"});
  }
  data.stopwords = {"the", "a", "of", "and", "to", "in", "was", "it", "we", "they"};

  // Embeddings: a shared direction per part of speech, one vector per stem,
  // and a small signed gender component.
  const std::size_t dim = c.embedding_dim;
  const Vector adj_dir = RandomUnit(draw, dim);
  const Vector adv_dir = RandomUnit(draw, dim);
  const Vector noun_dir = RandomUnit(draw, dim);
  const Vector verb_dir = RandomUnit(draw, dim);
  const Vector stop_dir = RandomUnit(draw, dim);
  const Vector gender_dir = RandomUnit(draw, dim);
  data.embeddings = EmbeddingStore(dim);
  auto add_pairs = [&](const std::vector<Lexeme>& lexemes, const Vector& pos_dir) {
    for (const auto& lx : lexemes) {
      const Vector stem = RandomUnit(draw, dim);
      data.embeddings.Add(lx.female,
                          Combine({{1.0, &stem}, {0.35, &pos_dir}, {0.15, &gender_dir}}, draw, 0.05));
      data.embeddings.Add(lx.male,
                          Combine({{1.0, &stem}, {0.35, &pos_dir}, {-0.15, &gender_dir}}, draw, 0.05));
    }
  };
  add_pairs(adjectives, adj_dir);
  add_pairs(adverbs, adv_dir);
  for (const auto& n : nouns) {
    const Vector stem = RandomUnit(draw, dim);
    data.embeddings.Add(n, Combine({{1.0, &stem}, {0.35, &noun_dir}}, draw, 0.05));
  }
  for (const auto& forms : verbs) {
    const Vector stem = RandomUnit(draw, dim);
    for (const auto& f : forms) {
      data.embeddings.Add(f, Combine({{1.0, &stem}, {0.35, &verb_dir}}, draw, 0.05));
    }
  }
  for (const auto& s : data.stopwords) {
    const Vector stem = RandomUnit(draw, dim);
    data.embeddings.Add(s, Combine({{1.0, &stem}, {0.35, &stop_dir}}, draw, 0.05));
  }

  for (const auto& lx : adjectives) {
    data.lexicon.emplace_back(lx.female, PosTag::kAdjective);
    data.lexicon.emplace_back(lx.male, PosTag::kAdjective);
  }
  for (const auto& lx : adverbs) {
    data.lexicon.emplace_back(lx.female, PosTag::kAdverb);
    data.lexicon.emplace_back(lx.male, PosTag::kAdverb);
  }
  for (const auto& n : nouns) data.lexicon.emplace_back(n, PosTag::kNoun);
  for (const auto& forms : verbs) {
    for (const auto& f : forms) data.lexicon.emplace_back(f, PosTag::kVerb);
  }

  auto styled = [&](GenderLabel label) {
    const auto& pool = draw.Chance(0.6) ? adjectives : adverbs;
    const Lexeme& lx = pool[draw.Index(pool.size())];
    return label == GenderLabel::kFemale ? lx.female : lx.male;
  };
  auto neutral = [&]() -> std::string {
    const double r = draw.Uniform();
    if (r < 0.3) return data.stopwords[draw.Index(data.stopwords.size())];
    if (r < 0.65) return nouns[draw.Index(nouns.size())];
    const auto& forms = verbs[draw.Index(verbs.size())];
    return forms[draw.Index(forms.size())];
  };

  std::size_t serial = 0;
  auto make_docs = [&](Split split, std::size_t per_label) {
    for (std::size_t k = 0; k < per_label; ++k) {
      for (GenderLabel label : {GenderLabel::kMale, GenderLabel::kFemale}) {
        const std::size_t len = c.min_length + draw.Index(c.max_length - c.min_length + 1);
        std::vector<std::string> tokens;
        std::size_t styled_count = 0;
        for (std::size_t t = 0; t < len; ++t) {
          // Force styled tokens when the remaining slots are needed for them.
          const bool must = c.min_styled > styled_count &&
                            len - t <= c.min_styled - styled_count;
          if (must || draw.Chance(c.styled_rate)) {
            tokens.push_back(styled(label));
            ++styled_count;
          } else {
            tokens.push_back(neutral());
          }
        }
        Document doc;
        doc.id = "syn-" + std::to_string(serial++);
        doc.label = label;
        doc.split = split;
        doc.raw_text = JoinTokens(tokens);
        doc.tokens = std::move(tokens);
        data.docs.push_back(std::move(doc));
      }
    }
  };
  make_docs(Split::kTrain, c.train_per_label);
  make_docs(Split::kDev, c.dev_per_label);
  make_docs(Split::kTest, c.test_per_label);

  auto make_tokens = [&](TokenTrainingSet& out, std::size_t per_label) {
    for (std::size_t k = 0; k < per_label; ++k) {
      const std::string s = stems.Next();
      const bool adverb = draw.Chance(0.4);
      out.push_back({s + (adverb ? "orkly" : "ork"), GenderLabel::kMale});
      const std::string f = stems.Next();
      out.push_back({f + (adverb ? "elly" : "elle"), GenderLabel::kFemale});
    }
  };
  make_tokens(data.token_train, c.token_train_per_label);
  make_tokens(data.token_test, c.token_test_per_label);
  return data;
}

void WriteSynthetic(const SyntheticData& data, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  WriteFileAtomically(dir / "corpus.jsonl", [&](std::ostream& out) { WriteJsonl(out, data.docs); });
  WriteFileAtomically(dir / "vectors.vec",
                  [&](std::ostream& out) { data.embeddings.WriteVecText(out); });
  WriteFileAtomically(dir / "lexicon.tsv", [&](std::ostream& out) {
    for (const auto& [token, tag] : data.lexicon) out << token << '\t' << ToString(tag) << '\n';
  });
  WriteFileAtomically(dir / "stopwords.txt", [&](std::ostream& out) {
    for (const auto& s : data.stopwords) out << s << '\n';
  });
  WriteFileAtomically(dir / "tokens_train.tsv",
                  [&](std::ostream& out) { WriteTokenSet(out, data.token_train); });
  WriteFileAtomically(dir / "tokens_test.tsv",
                  [&](std::ostream& out) { WriteTokenSet(out, data.token_test); });
}

void WriteTokenSet(std::ostream& out, const TokenTrainingSet& set) {
  for (const auto& ex : set) out << ex.token << '\t' << ToString(ex.label) << '\n';
}

TokenTrainingSet ReadTokenSet(std::istream& in) {
  TokenTrainingSet set;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    const auto tab = line.find('\t');
    if (tab == std::string::npos || tab == 0) throw ParseError("expected token<TAB>label", line_no);
    const auto label = ParseGenderLabel(std::string_view(line).substr(tab + 1));
    if (!label) throw ValidationError("unknown label", line_no);
    set.push_back({line.substr(0, tab), *label});
  }
  return set;
}

TokenTrainingSet LoadTokenSet(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path.string());
  return ReadTokenSet(in);
}

}  // namespace lexstyle
