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

#include <omp.h>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <unordered_set>

#include "lexstyle/errors.h"

namespace lexstyle {

namespace {

// Internal key separator; cannot appear in a whitespace-free token that the
// TSV writer accepts, and keeps keys exact even for programmatic tokens.
constexpr char kSep = '\x1f';

std::string MakeKey(std::span<const std::string> gram) {
  std::string key;
  for (std::size_t i = 0; i < gram.size(); ++i) {
    if (i) key.push_back(kSep);
    key += gram[i];
  }
  return key;
}

std::vector<std::string> SplitKey(const std::string& key) {
  std::vector<std::string> out;
  std::size_t begin = 0;
  while (true) {
    const auto pos = key.find(kSep, begin);
    out.push_back(key.substr(begin, pos - begin));
    if (pos == std::string::npos) break;
    begin = pos + 1;
  }
  return out;
}

std::vector<std::string> SplitSpaces(const std::string& text) {
  std::vector<std::string> out;
  std::size_t begin = 0;
  while (begin <= text.size()) {
    const auto pos = text.find(' ', begin);
    const auto end = pos == std::string::npos ? text.size() : pos;
    if (end > begin) out.push_back(text.substr(begin, end - begin));
    if (pos == std::string::npos) break;
    begin = pos + 1;
  }
  return out;
}

bool IsBoundary(const std::string& tok) { return tok == kStartTag || tok == kEndTag; }

}  // namespace

NGramTable NGramTable::FromSequencesSerial(std::span<const std::vector<std::string>> sequences) {
  if (sequences.empty()) throw ContractError("cannot build an n-gram table from an empty corpus");
  NGramTable table;
  for (const auto& seq : sequences) table.AddSequence(seq);
  table.RecomputeStats();
  return table;
}

NGramTable NGramTable::FromSequences(std::span<const std::vector<std::string>> sequences) {
  if (sequences.empty()) throw ContractError("cannot build an n-gram table from an empty corpus");
  const int threads = std::max(1, omp_get_max_threads());
  std::vector<NGramTable> partial(static_cast<std::size_t>(threads));
  const auto n = static_cast<std::ptrdiff_t>(sequences.size());
#pragma omp parallel num_threads(threads)
  {
    NGramTable& local = partial[static_cast<std::size_t>(omp_get_thread_num())];
#pragma omp for schedule(static)
    for (std::ptrdiff_t i = 0; i < n; ++i) local.AddSequence(sequences[static_cast<std::size_t>(i)]);
  }
  // Integer counts: the merged result does not depend on the partition.
  NGramTable table = std::move(partial[0]);
  for (std::size_t t = 1; t < partial.size(); ++t) table.Merge(partial[t]);
  table.RecomputeStats();
  return table;
}

NGramTable NGramTable::Build(std::span<const Document> train_docs) {
  if (train_docs.empty()) throw ContractError("cannot build an n-gram table from an empty corpus");
  std::vector<std::vector<std::string>> sequences;
  sequences.reserve(train_docs.size());
  for (const auto& d : train_docs) {
    if (d.split != Split::kTrain) {
      throw ContractError("n-gram counts come from the train split only; got document " + d.id);
    }
    sequences.push_back(WithBoundaries(d.tokens));
  }
  return FromSequences(sequences);
}

void NGramTable::AddSequence(std::span<const std::string> tokens) {
  for (int order = 1; order <= kMaxOrder; ++order) {
    const auto k = static_cast<std::size_t>(order);
    if (tokens.size() < k) break;
    for (std::size_t i = 0; i + k <= tokens.size(); ++i) {
      Add(order, MakeKey(tokens.subspan(i, k)), 1);
    }
  }
}

void NGramTable::Add(int order, std::string key, std::uint64_t n) {
  counts_[static_cast<std::size_t>(order - 1)][std::move(key)] += n;
}

void NGramTable::RecomputeStats() {
  for (int k = 0; k < kMaxOrder; ++k) {
    std::uint64_t m = 0;
    for (const auto& [key, c] : counts_[static_cast<std::size_t>(k)]) m = std::max(m, c);
    max_count_[static_cast<std::size_t>(k)] = m;
  }
  total_unigrams_ = 0;
  word_tokens_ = 0;
  word_types_ = 0;
  for (const auto& [key, c] : counts_[0]) {
    total_unigrams_ += c;
    if (IsBoundary(key)) continue;
    word_tokens_ += c;
    ++word_types_;
  }
}

void NGramTable::Merge(const NGramTable& other) {
  for (std::size_t k = 0; k < counts_.size(); ++k) {
    for (const auto& [key, c] : other.counts_[k]) counts_[k][key] += c;
  }
  RecomputeStats();
}

std::uint64_t NGramTable::count(std::span<const std::string> gram) const {
  if (gram.empty() || gram.size() > kMaxOrder) {
    throw ContractError("gram order must be in 1..4, got " + std::to_string(gram.size()));
  }
  const auto& map = counts_[gram.size() - 1];
  auto it = map.find(MakeKey(gram));
  return it == map.end() ? 0 : it->second;
}

std::uint64_t NGramTable::max_count(int order) const {
  if (order < 1 || order > kMaxOrder) throw ContractError("order must be in 1..4");
  return max_count_[static_cast<std::size_t>(order - 1)];
}

std::size_t NGramTable::distinct(int order) const {
  if (order < 1 || order > kMaxOrder) throw ContractError("order must be in 1..4");
  return counts_[static_cast<std::size_t>(order - 1)].size();
}

double NGramTable::NormalizedCount(std::span<const std::string> gram) const {
  const std::uint64_t c = count(gram);
  const std::uint64_t m = max_count_[gram.size() - 1];
  if (c == 0 || m == 0) return 0.0;
  return static_cast<double>(c) / static_cast<double>(m);
}

bool NGramTable::operator==(const NGramTable& other) const {
  return counts_ == other.counts_;
}

std::vector<std::pair<std::vector<std::string>, std::uint64_t>> NGramTable::Entries(
    int order) const {
  if (order < 1 || order > kMaxOrder) throw ContractError("order must be in 1..4");
  std::vector<std::pair<std::vector<std::string>, std::uint64_t>> out;
  const auto& map = counts_[static_cast<std::size_t>(order - 1)];
  out.reserve(map.size());
  for (const auto& [key, c] : map) out.emplace_back(SplitKey(key), c);
  std::sort(out.begin(), out.end());
  return out;
}

void NGramTable::WriteTsv(std::ostream& out) const {
  for (int order = 1; order <= kMaxOrder; ++order) {
    for (const auto& [gram, c] : Entries(order)) {
      out << order << '\t';
      for (std::size_t i = 0; i < gram.size(); ++i) {
        if (gram[i].empty() || gram[i].find_first_of(" \t\n\r") != std::string::npos) {
          throw ContractError("token not representable in TSV: \"" + gram[i] + "\"");
        }
        if (i) out << ' ';
        out << gram[i];
      }
      out << '\t' << c << '\n';
    }
  }
}

NGramTable NGramTable::ReadTsv(std::istream& in) {
  NGramTable table;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto tab1 = line.find('\t');
    const auto tab2 = tab1 == std::string::npos ? tab1 : line.find('\t', tab1 + 1);
    if (tab2 == std::string::npos || line.find('\t', tab2 + 1) != std::string::npos) {
      throw ParseError("expected order<TAB>gram<TAB>count", line_no);
    }
    int order = 0;
    std::uint64_t c = 0;
    const char* b = line.data();
    auto r1 = std::from_chars(b, b + tab1, order);
    auto r2 = std::from_chars(b + tab2 + 1, b + line.size(), c);
    if (r1.ec != std::errc() || r1.ptr != b + tab1 || order < 1 || order > kMaxOrder) {
      throw ParseError("bad order field", line_no);
    }
    if (r2.ec != std::errc() || r2.ptr != b + line.size()) {
      throw ParseError("bad count field", line_no);
    }
    const auto gram = SplitSpaces(line.substr(tab1 + 1, tab2 - tab1 - 1));
    if (gram.size() != static_cast<std::size_t>(order)) {
      throw ParseError("gram length does not match its order", line_no);
    }
    table.Add(order, MakeKey(gram), c);
  }
  table.RecomputeStats();
  return table;
}

NGramTable NGramTable::LoadTsv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open n-gram table " + path.string());
  return ReadTsv(in);
}

double Perplexity(const NGramTable& table, std::span<const std::string> tokens) {
  if (tokens.empty()) throw ContractError("perplexity of an empty document is undefined");

  std::unordered_set<std::string> novel;
  for (const auto& t : tokens) {
    if (!IsBoundary(t) && table.count(std::span<const std::string>(&t, 1)) == 0) novel.insert(t);
  }
  const auto v = static_cast<double>(table.word_types() + novel.size());
  const auto words = table.word_tokens();

  std::vector<std::string> history{std::string(kStartTag)};
  history.insert(history.end(), tokens.begin(), tokens.end());

  double log_sum = 0.0;
  for (std::size_t i = 1; i < history.size(); ++i) {
    double p = 0.0;
    bool found = false;
    const std::size_t max_context = std::min<std::size_t>(NGramTable::kMaxOrder - 1, i);
    for (std::size_t ctx = max_context; ctx >= 1 && !found; --ctx) {
      std::span<const std::string> context(history.data() + i - ctx, ctx);
      const std::uint64_t ch = table.count(context);
      if (ch == 0) continue;
      std::span<const std::string> gram(history.data() + i - ctx, ctx + 1);
      p = (static_cast<double>(table.count(gram)) + 1.0) / (static_cast<double>(ch) + v);
      found = true;
    }
    if (!found) {
      std::span<const std::string> unigram(history.data() + i, 1);
      p = (static_cast<double>(table.count(unigram)) + 1.0) / (static_cast<double>(words) + v);
    }
    log_sum += std::log(std::min(1.0, p));
  }
  return std::exp(-log_sum / static_cast<double>(tokens.size()));
}

double Perplexity(const NGramTable& table, const Document& doc) {
  return Perplexity(table, doc.tokens);
}

}  // namespace lexstyle
