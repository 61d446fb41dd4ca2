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

#ifndef LEXSTYLE_TOKEN_CLASSIFIER_H_
#define LEXSTYLE_TOKEN_CLASSIFIER_H_

#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "lexstyle/classifier.h"
#include "lexstyle/corpus.h"
#include "lexstyle/model_io.h"
#include "lexstyle/nn.h"
#include "lexstyle/pos.h"

namespace lexstyle {

struct TokenExample {
  std::string token;
  GenderLabel label = GenderLabel::kMale;

  bool operator==(const TokenExample&) const = default;
};

using TokenTrainingSet = std::vector<TokenExample>;

// Every token whose tag is in `scope`, paired with its document's label.
// Duplicates are kept. Throws ContractError if nothing matches or a document
// is outside the train split.
TokenTrainingSet BuildTokenTrainingSet(std::span<const Document> docs, const Tagger& tagger,
                                       const TagScope& scope);

// Character-level token gender classifier: one-hot characters, a single
// conv -> ReLU -> max-pool -> LSTM channel, and a sigmoid head.
//
// Character ids: 0 is PAD, then the training alphabet in order of first
// appearance, then UNK. Tokens are truncated to max_length characters and
// padded with PAD up to the kernel size.
class CharTokenModel : public TokenClassifier {
 public:
  static CharTokenModel Create(std::span<const TokenExample> examples,
                               const nn::TrainConfig& config);
  static CharTokenModel Train(std::span<const TokenExample> examples,
                              const nn::TrainConfig& config);

  // Throws ContractError on an empty token.
  Prediction Classify(std::string_view token) const override;

  std::vector<int> Encode(std::string_view token) const;
  // PAD + alphabet + UNK.
  std::size_t one_hot_dim() const { return alphabet_.size() + 2; }
  std::size_t alphabet_size() const { return alphabet_.size(); }
  int unk_id() const { return static_cast<int>(alphabet_.size()) + 1; }

  const nn::TrainConfig& config() const { return config_; }
  const std::vector<double>& epoch_losses() const { return epoch_losses_; }

  ModelFile ToModelFile() const;
  static CharTokenModel FromModelFile(const ModelFile& file);
  void Save(const std::filesystem::path& path) const;
  static CharTokenModel Load(const std::filesystem::path& path);

 private:
  struct Net {
    ConvLstmChannel channel;
    nn::Dense head;

    std::vector<nn::ParamRef> Refs(Net& grads);
  };

  CharTokenModel() = default;
  static Net MakeNet(const nn::TrainConfig& config, std::size_t one_hot_dim);
  nn::Matrix OneHot(std::span<const int> ids) const;
  double ForwardBackward(std::span<const int> ids, int target, nn::Rng* rng, Net* grads) const;

  nn::TrainConfig config_;
  std::u32string alphabet_;
  std::unordered_map<char32_t, int> char_ids_;
  Net net_;
  std::vector<double> epoch_losses_;
};

}  // namespace lexstyle

#endif  // LEXSTYLE_TOKEN_CLASSIFIER_H_
