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

#ifndef LEXSTYLE_CLASSIFIER_H_
#define LEXSTYLE_CLASSIFIER_H_

#include <array>
#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "lexstyle/corpus.h"
#include "lexstyle/nn.h"

namespace lexstyle {

// `probability` is always P(Female); label is Female iff probability >= 0.5.
struct Prediction {
  GenderLabel label = GenderLabel::kMale;
  double probability = 0.5;

  static Prediction FromProbability(double p_female) {
    return {p_female >= 0.5 ? GenderLabel::kFemale : GenderLabel::kMale, p_female};
  }
  // Probability assigned to `label`.
  double ProbabilityOf(GenderLabel label) const {
    return label == GenderLabel::kFemale ? probability : 1.0 - probability;
  }
  bool operator==(const Prediction&) const = default;
};

// Implementations must be safe to call concurrently.
class DocumentClassifier {
 public:
  virtual ~DocumentClassifier() = default;
  virtual Prediction Predict(std::span<const std::string> tokens) const = 0;
  Prediction Predict(const Document& doc) const { return Predict(doc.tokens); }
};

class TokenClassifier {
 public:
  virtual ~TokenClassifier() = default;
  virtual Prediction Classify(std::string_view token) const = 0;
};

struct EvalReport {
  std::size_t total = 0;
  std::size_t correct = 0;
  double accuracy = 0.0;
  // confusion[true label][predicted label]
  std::array<std::array<std::size_t, 2>, 2> confusion{};
};

// OpenMP over documents; output order is input order.
std::vector<Prediction> PredictAll(const DocumentClassifier& model, std::span<const Document> docs);
std::vector<Prediction> PredictAllSerial(const DocumentClassifier& model,
                                         std::span<const Document> docs);

// Throws ContractError on an empty document list.
EvalReport Evaluate(const DocumentClassifier& model, std::span<const Document> docs);
EvalReport MakeReport(std::span<const Document> docs, std::span<const Prediction> predictions);

// Conv1d -> ReLU -> dropout -> max-pool -> (input dropout) -> LSTM, returning
// the final hidden state. One of these per document-classifier channel, and
// one for the token classifier.
struct ConvLstmChannel {
  nn::ConvLayerParams conv;
  nn::LstmCellParams lstm;
  std::size_t pool_size = 2;

  static ConvLstmChannel Zeros(std::size_t input_channels, std::size_t filters,
                               std::size_t kernel_size, std::size_t pool_size,
                               std::size_t hidden);
  void Initialize(nn::Rng& rng);
  std::vector<nn::ParamRef> Refs(const std::string& prefix, ConvLstmChannel& grads);

  struct Cache {
    nn::Matrix input;
    nn::Matrix activated;
    nn::Matrix dropout_mask;
    nn::PoolResult pool;
    nn::Matrix lstm_mask;
    nn::LstmSequenceCache lstm;
  };

  // Dropout is active only when `rng` is non-null.
  nn::Vec Forward(const nn::Matrix& input, double dropout, double input_dropout, nn::Rng* rng,
                  Cache* cache) const;
  // Accumulates into grads; returns dL/dinput.
  nn::Matrix Backward(const Cache& cache, std::span<const double> dh, ConvLstmChannel& grads) const;
};

}  // namespace lexstyle

#endif  // LEXSTYLE_CLASSIFIER_H_
