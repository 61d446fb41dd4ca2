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

#ifndef LEXSTYLE_DOC_CLASSIFIER_H_
#define LEXSTYLE_DOC_CLASSIFIER_H_

#include <filesystem>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "lexstyle/classifier.h"
#include "lexstyle/corpus.h"
#include "lexstyle/model_io.h"
#include "lexstyle/nn.h"

namespace lexstyle {

// Multi-channel document gender classifier.
//
// Each channel embeds the token ids with its own table, then runs
// conv (kernel 4, 6 or 8) -> ReLU -> dropout -> max-pool -> LSTM. The
// channels' final hidden states are concatenated and fed to a one-unit
// dense layer with a sigmoid, read as P(Female).
//
// Token ids: 0 is PAD, 1 is UNK, the training vocabulary follows in order of
// first appearance. Sequences are truncated to max_length and padded with
// PAD up to the largest kernel size.
class DocClassifierModel : public DocumentClassifier {
 public:
  static constexpr int kPadId = 0;
  static constexpr int kUnkId = 1;

  // Builds the vocabulary and initializes weights without training.
  static DocClassifierModel Create(std::span<const Document> train_docs,
                                   const nn::TrainConfig& config);
  // Throws TrainingError when only one label is present or the loss
  // diverges; ContractError on an invalid config or empty corpus.
  static DocClassifierModel Train(std::span<const Document> train_docs,
                                  const nn::TrainConfig& config);

  using DocumentClassifier::Predict;
  Prediction Predict(std::span<const std::string> tokens) const override;

  std::vector<int> Encode(std::span<const std::string> tokens) const;

  const nn::TrainConfig& config() const { return config_; }
  const std::vector<double>& epoch_losses() const { return epoch_losses_; }
  std::size_t vocab_size() const { return id_to_token_.size(); }

  ModelFile ToModelFile() const;
  static DocClassifierModel FromModelFile(const ModelFile& file);
  void Save(const std::filesystem::path& path) const;
  static DocClassifierModel Load(const std::filesystem::path& path);

 private:
  struct Net {
    std::vector<nn::Embedding> embeddings;
    std::vector<ConvLstmChannel> channels;
    nn::Dense head;

    std::vector<nn::ParamRef> Refs(Net& grads);
  };

  DocClassifierModel() = default;
  static Net MakeNet(const nn::TrainConfig& config, std::size_t vocab);
  // Returns the loss; accumulates gradients into `grads` when rng is set.
  double ForwardBackward(std::span<const int> ids, int target, nn::Rng* rng, Net* grads) const;
  double ProbabilityFemale(std::span<const int> ids) const;

  nn::TrainConfig config_;
  std::unordered_map<std::string, int> vocab_;
  std::vector<std::string> id_to_token_;
  Net net_;
  std::vector<double> epoch_losses_;
};

}  // namespace lexstyle

#endif  // LEXSTYLE_DOC_CLASSIFIER_H_
