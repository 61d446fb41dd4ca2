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

#include "lexstyle/token_classifier.h"

#include <algorithm>

#include "lexstyle/errors.h"
#include "lexstyle/utf8.h"

namespace lexstyle {

namespace {

constexpr char kModelKind[] = "char_token_classifier";

void ValidateTokenConfig(const nn::TrainConfig& config) {
  config.Validate();
  if (config.kernel_sizes.size() != 1) {
    throw ContractError("token classifier takes a single kernel size");
  }
}

}  // namespace

TokenTrainingSet BuildTokenTrainingSet(std::span<const Document> docs, const Tagger& tagger,
                                       const TagScope& scope) {
  TokenTrainingSet out;
  for (const auto& doc : docs) {
    if (doc.split != Split::kTrain) {
      throw ContractError("document " + doc.id + " is not in the train split");
    }
    const auto tags = tagger.Tag(doc.tokens);
    for (std::size_t i = 0; i < doc.tokens.size(); ++i) {
      if (scope.contains(tags[i]) && !doc.tokens[i].empty()) {
        out.push_back({doc.tokens[i], doc.label});
      }
    }
  }
  if (out.empty()) {
    throw ContractError("no tokens tagged " + scope.ToString() + " in the training corpus");
  }
  return out;
}

std::vector<nn::ParamRef> CharTokenModel::Net::Refs(Net& grads) {
  auto refs = channel.Refs("channel0", grads.channel);
  auto h = head.Refs("head", grads.head);
  refs.insert(refs.end(), h.begin(), h.end());
  return refs;
}

CharTokenModel::Net CharTokenModel::MakeNet(const nn::TrainConfig& config,
                                            std::size_t one_hot_dim) {
  Net net;
  net.channel = ConvLstmChannel::Zeros(one_hot_dim, config.filters, config.kernel_sizes[0],
                                       config.max_pool_size, config.hidden_units);
  net.head = nn::Dense::Zeros(config.hidden_units, 1);
  return net;
}

CharTokenModel CharTokenModel::Create(std::span<const TokenExample> examples,
                                      const nn::TrainConfig& config) {
  ValidateTokenConfig(config);
  if (examples.empty()) throw ContractError("token training set is empty");
  CharTokenModel model;
  model.config_ = config;
  for (const auto& ex : examples) {
    if (ex.token.empty()) throw ContractError("token training set contains an empty token");
    for (char32_t cp : utf8::Decode(ex.token)) {
      if (model.char_ids_.emplace(cp, static_cast<int>(model.alphabet_.size()) + 1).second) {
        model.alphabet_.push_back(cp);
      }
    }
  }
  model.net_ = MakeNet(config, model.one_hot_dim());
  nn::Rng rng(config.seed);
  model.net_.channel.Initialize(rng);
  model.net_.head.Initialize(rng);
  return model;
}

CharTokenModel CharTokenModel::Train(std::span<const TokenExample> examples,
                                     const nn::TrainConfig& config) {
  bool seen[2] = {false, false};
  for (const auto& ex : examples) seen[static_cast<int>(ex.label)] = true;
  if (!examples.empty() && (!seen[0] || !seen[1])) {
    throw TrainingError("token training set must contain both labels");
  }
  CharTokenModel model = Create(examples, config);

  std::vector<std::vector<int>> encoded;
  std::vector<int> targets;
  encoded.reserve(examples.size());
  for (const auto& ex : examples) {
    encoded.push_back(model.Encode(ex.token));
    targets.push_back(ex.label == GenderLabel::kFemale ? 1 : 0);
  }

  Net grads = MakeNet(config, model.one_hot_dim());
  const auto params = model.net_.Refs(grads);
  nn::Rng rng(config.seed ^ 0x9E3779B97F4A7C15ULL);
  model.epoch_losses_ = nn::TrainMinibatches(
      encoded.size(), config, params, rng,
      [&](std::size_t i) { return model.ForwardBackward(encoded[i], targets[i], &rng, &grads); });
  return model;
}

std::vector<int> CharTokenModel::Encode(std::string_view token) const {
  const std::u32string chars = utf8::Decode(token);
  const std::size_t n = std::min(chars.size(), config_.max_length);
  std::vector<int> ids;
  ids.reserve(std::max(n, config_.kernel_sizes[0]));
  for (std::size_t i = 0; i < n; ++i) {
    auto it = char_ids_.find(chars[i]);
    ids.push_back(it == char_ids_.end() ? unk_id() : it->second);
  }
  while (ids.size() < config_.kernel_sizes[0]) ids.push_back(0);
  return ids;
}

nn::Matrix CharTokenModel::OneHot(std::span<const int> ids) const {
  nn::Matrix m(ids.size(), one_hot_dim());
  for (std::size_t t = 0; t < ids.size(); ++t) m(t, static_cast<std::size_t>(ids[t])) = 1.0;
  return m;
}

double CharTokenModel::ForwardBackward(std::span<const int> ids, int target, nn::Rng* rng,
                                       Net* grads) const {
  ConvLstmChannel::Cache cache;
  const nn::Vec h = net_.channel.Forward(OneHot(ids), config_.dropout_rate,
                                         config_.recurrent_dropout, rng, &cache);
  const double p = nn::Sigmoid(net_.head.Forward(h)[0]);
  const nn::BceResult bce = nn::BinaryCrossEntropy(p, target);
  if (grads == nullptr) return bce.loss;
  const double dlogit[1] = {bce.grad * p * (1.0 - p)};
  const nn::Vec dh = net_.head.Backward(h, dlogit, grads->head);
  net_.channel.Backward(cache, dh, grads->channel);
  return bce.loss;
}

Prediction CharTokenModel::Classify(std::string_view token) const {
  if (token.empty()) throw ContractError("cannot classify an empty token");
  const nn::Vec h = net_.channel.Forward(OneHot(Encode(token)), 0.0, 0.0, nullptr, nullptr);
  return Prediction::FromProbability(nn::Sigmoid(net_.head.Forward(h)[0]));
}

ModelFile CharTokenModel::ToModelFile() const {
  std::vector<std::string> alphabet;
  for (char32_t cp : alphabet_) alphabet.push_back(utf8::Encode(std::u32string(1, cp)));
  ModelFile file;
  file.kind = kModelKind;
  file.meta = {{"train_config", ToJson(config_)},
               {"seed", config_.seed},
               {"alphabet", alphabet},
               {"epoch_losses", epoch_losses_}};
  Net values = net_;
  Net scratch = MakeNet(config_, one_hot_dim());
  file.tensors = TensorsFromParams(values.Refs(scratch));
  return file;
}

CharTokenModel CharTokenModel::FromModelFile(const ModelFile& file) {
  if (file.kind != kModelKind) {
    throw ParseError("expected a " + std::string(kModelKind) + " model, got " + file.kind, 0);
  }
  CharTokenModel model;
  std::vector<std::string> alphabet;
  try {
    model.config_ = TrainConfigFromJson(file.meta.at("train_config"));
    alphabet = file.meta.at("alphabet").get<std::vector<std::string>>();
    model.epoch_losses_ = file.meta.value("epoch_losses", std::vector<double>{});
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("bad token classifier metadata: ") + e.what(), 0);
  }
  ValidateTokenConfig(model.config_);
  for (const auto& s : alphabet) {
    const std::u32string cp = utf8::Decode(s);
    if (cp.size() != 1) throw ParseError("alphabet entry is not a single character", 0);
    if (!model.char_ids_.emplace(cp[0], static_cast<int>(model.alphabet_.size()) + 1).second) {
      throw ParseError("duplicate alphabet entry", 0);
    }
    model.alphabet_.push_back(cp[0]);
  }
  model.net_ = MakeNet(model.config_, model.one_hot_dim());
  Net scratch = MakeNet(model.config_, model.one_hot_dim());
  LoadParams(file, model.net_.Refs(scratch));
  return model;
}

void CharTokenModel::Save(const std::filesystem::path& path) const {
  SaveModel(path, ToModelFile());
}

CharTokenModel CharTokenModel::Load(const std::filesystem::path& path) {
  return FromModelFile(LoadModel(path));
}

}  // namespace lexstyle
