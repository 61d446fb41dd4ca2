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

#ifndef LEXSTYLE_EMBEDDING_H_
#define LEXSTYLE_EMBEDDING_H_

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace lexstyle {

inline constexpr std::size_t kDefaultTopN = 10;

struct Suggestion {
  std::string token;
  double similarity = 0.0;

  bool operator==(const Suggestion&) const = default;
};

// Σ a_i b_i / (‖a‖‖b‖), clamped to [-1, 1]. Throws DomainError on a zero
// vector and ContractError on a length mismatch.
double Cosine(std::span<const double> a, std::span<const double> b);

// Dense word vectors with precomputed L2 norms, answering exact
// nearest-neighbour queries by full scan.
class EmbeddingStore {
 public:
  EmbeddingStore() = default;
  explicit EmbeddingStore(std::size_t dim) : dim_(dim) {}

  // Text format: header "V D", then V lines "token v1 ... vD".
  static EmbeddingStore ReadVecText(std::istream& in);
  static EmbeddingStore LoadVecText(const std::filesystem::path& path);
  void WriteVecText(std::ostream& out) const;

  // Throws ContractError on a duplicate token or wrong dimension.
  void Add(std::string token, std::span<const double> vector);

  std::size_t dim() const { return dim_; }
  std::size_t size() const { return tokens_.size(); }
  bool contains(std::string_view token) const;
  std::optional<std::size_t> index(std::string_view token) const;
  const std::string& token(std::size_t row) const { return tokens_[row]; }
  std::span<const double> vector(std::size_t row) const;
  double norm(std::size_t row) const { return norms_[row]; }

  // The top_n tokens most similar to `token`, the token itself excluded,
  // ordered by (-similarity, token). Zero-norm rows never appear. Throws
  // OovError when `token` is not in the vocabulary.
  std::vector<Suggestion> MostSimilar(std::string_view token,
                                      std::size_t top_n = kDefaultTopN) const;
  // Single-threaded reference for MostSimilar; identical output.
  std::vector<Suggestion> MostSimilarSerial(std::string_view token,
                                            std::size_t top_n = kDefaultTopN) const;

  // Cosine of `row` against every row (NaN for zero-norm rows), OpenMP over
  // rows. Each entry is computed by the same sequential dot product as the
  // serial path, so results are bitwise equal for any thread count.
  std::vector<double> ScoreAll(std::size_t row) const;
  std::vector<double> ScoreAllSerial(std::size_t row) const;

 private:
  double RowCosine(std::size_t query, std::size_t row) const;
  std::vector<Suggestion> SelectTop(std::size_t query, const std::vector<double>& scores,
                                    std::size_t top_n) const;

  std::size_t dim_ = 0;
  std::vector<std::string> tokens_;
  std::unordered_map<std::string, std::size_t> index_;
  std::vector<double> vectors_;  // row-major, size() x dim()
  std::vector<double> norms_;
};

}  // namespace lexstyle

#endif  // LEXSTYLE_EMBEDDING_H_
