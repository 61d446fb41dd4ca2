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

#include "lexstyle/embedding.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

#include "lexstyle/errors.h"

namespace lexstyle {

namespace {

double Dot(const double* a, const double* b, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += a[i] * b[i];
  return s;
}

double Clamp(double c) { return std::clamp(c, -1.0, 1.0); }

bool ParseDouble(std::string_view field, double& out) {
  const char* end = field.data() + field.size();
  auto r = std::from_chars(field.data(), end, out);
  return r.ec == std::errc() && r.ptr == end && std::isfinite(out);
}

}  // namespace

double Cosine(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw ContractError("cosine of vectors with different dimensions");
  const double na = std::sqrt(Dot(a.data(), a.data(), a.size()));
  const double nb = std::sqrt(Dot(b.data(), b.data(), b.size()));
  if (na == 0.0 || nb == 0.0) throw DomainError("cosine with a zero vector is undefined");
  return Clamp(Dot(a.data(), b.data(), a.size()) / (na * nb));
}

void EmbeddingStore::Add(std::string token, std::span<const double> vector) {
  if (vector.size() != dim_) {
    throw ContractError("vector for \"" + token + "\" has dimension " +
                        std::to_string(vector.size()) + ", expected " + std::to_string(dim_));
  }
  if (index_.contains(token)) throw ContractError("duplicate token \"" + token + "\"");
  index_.emplace(token, tokens_.size());
  tokens_.push_back(std::move(token));
  vectors_.insert(vectors_.end(), vector.begin(), vector.end());
  norms_.push_back(std::sqrt(Dot(vector.data(), vector.data(), vector.size())));
}

bool EmbeddingStore::contains(std::string_view token) const {
  return index_.contains(std::string(token));
}

std::optional<std::size_t> EmbeddingStore::index(std::string_view token) const {
  auto it = index_.find(std::string(token));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::span<const double> EmbeddingStore::vector(std::size_t row) const {
  return {vectors_.data() + row * dim_, dim_};
}

EmbeddingStore EmbeddingStore::ReadVecText(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw ParseError("missing \"V D\" header", 1);
  std::size_t vocab = 0, dim = 0;
  {
    std::istringstream header(line);
    std::string extra;
    if (!(header >> vocab >> dim) || (header >> extra) || dim == 0) {
      throw ParseError("header must be \"V D\" with D > 0", 1);
    }
  }
  EmbeddingStore store(dim);
  std::vector<double> values(dim);
  std::size_t line_no = 1;
  while (store.size() < vocab) {
    if (!std::getline(in, line)) {
      throw ParseError("expected " + std::to_string(vocab) + " vectors, found " +
                           std::to_string(store.size()),
                       line_no + 1);
    }
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::vector<std::string_view> fields;
    std::string_view rest(line);
    while (!rest.empty()) {
      const auto begin = rest.find_first_not_of(' ');
      if (begin == std::string_view::npos) break;
      rest.remove_prefix(begin);
      const auto end = rest.find(' ');
      fields.push_back(rest.substr(0, end));
      if (end == std::string_view::npos) break;
      rest.remove_prefix(end);
    }
    if (fields.empty()) throw ParseError("empty vector line", line_no);
    if (fields.size() - 1 != dim) {
      throw ParseError("\"" + std::string(fields[0]) + "\" has " +
                           std::to_string(fields.size() - 1) + " components, header says " +
                           std::to_string(dim),
                       line_no);
    }
    for (std::size_t i = 0; i < dim; ++i) {
      if (!ParseDouble(fields[i + 1], values[i])) {
        throw ParseError("non-numeric component \"" + std::string(fields[i + 1]) + "\"", line_no);
      }
    }
    std::string token(fields[0]);
    if (store.contains(token)) throw ParseError("duplicate token \"" + token + "\"", line_no);
    store.Add(std::move(token), values);
  }
  return store;
}

EmbeddingStore EmbeddingStore::LoadVecText(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open vector file " + path.string());
  return ReadVecText(in);
}

void EmbeddingStore::WriteVecText(std::ostream& out) const {
  out << size() << ' ' << dim_ << '\n';
  const auto old_precision = out.precision(std::numeric_limits<double>::max_digits10);
  for (std::size_t r = 0; r < size(); ++r) {
    out << tokens_[r];
    for (double v : vector(r)) out << ' ' << v;
    out << '\n';
  }
  out.precision(old_precision);
}

double EmbeddingStore::RowCosine(std::size_t query, std::size_t row) const {
  const double denom = norms_[query] * norms_[row];
  if (denom == 0.0) return std::numeric_limits<double>::quiet_NaN();
  return Clamp(Dot(vectors_.data() + query * dim_, vectors_.data() + row * dim_, dim_) / denom);
}

std::vector<double> EmbeddingStore::ScoreAllSerial(std::size_t row) const {
  std::vector<double> scores(size());
  for (std::size_t r = 0; r < size(); ++r) scores[r] = RowCosine(row, r);
  return scores;
}

std::vector<double> EmbeddingStore::ScoreAll(std::size_t row) const {
  std::vector<double> scores(size());
  const auto n = static_cast<std::ptrdiff_t>(size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t r = 0; r < n; ++r) {
    scores[static_cast<std::size_t>(r)] = RowCosine(row, static_cast<std::size_t>(r));
  }
  return scores;
}

std::vector<Suggestion> EmbeddingStore::SelectTop(std::size_t query,
                                                  const std::vector<double>& scores,
                                                  std::size_t top_n) const {
  std::vector<std::size_t> rows;
  rows.reserve(scores.size());
  for (std::size_t r = 0; r < scores.size(); ++r) {
    if (r != query && !std::isnan(scores[r])) rows.push_back(r);
  }
  auto better = [&](std::size_t a, std::size_t b) {
    if (scores[a] != scores[b]) return scores[a] > scores[b];
    return tokens_[a] < tokens_[b];
  };
  const std::size_t k = std::min(top_n, rows.size());
  std::partial_sort(rows.begin(), rows.begin() + static_cast<std::ptrdiff_t>(k), rows.end(),
                    better);
  std::vector<Suggestion> out;
  out.reserve(k);
  for (std::size_t i = 0; i < k; ++i) out.push_back({tokens_[rows[i]], scores[rows[i]]});
  return out;
}

std::vector<Suggestion> EmbeddingStore::MostSimilar(std::string_view token,
                                                    std::size_t top_n) const {
  const auto row = index(token);
  if (!row) throw OovError(std::string(token));
  if (norms_[*row] == 0.0) throw DomainError("query vector for \"" + std::string(token) + "\" is zero");
  return SelectTop(*row, ScoreAll(*row), top_n);
}

std::vector<Suggestion> EmbeddingStore::MostSimilarSerial(std::string_view token,
                                                          std::size_t top_n) const {
  const auto row = index(token);
  if (!row) throw OovError(std::string(token));
  if (norms_[*row] == 0.0) throw DomainError("query vector for \"" + std::string(token) + "\" is zero");
  return SelectTop(*row, ScoreAllSerial(*row), top_n);
}

}  // namespace lexstyle
