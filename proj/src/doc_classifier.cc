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

#include "lexstyle/doc_classifier.h"

#include <algorithm>
#include <set>

#include "lexstyle/errors.h"

namespace lexstyle {

namespace {

constexpr char kModelKind[] = "doc_classifier";
constexpr char kPadToken[] = "<PAD>";
constexpr char kUnkToken[] = "<UNK>";

void ValidateDocConfig(const nn::TrainConfig& config) {
  config.Validate();
  if (config.kernel_sizes.size() != 3) {
    throw ContractError("document classifier needs exactly three channels");
  }
  std::set<std::size_t> distinct(config.kernel_sizes.begin(), config.kernel_sizes.end());
  if (distinct.size() != 3) throw ContractError("channel kernel sizes must be distinct");
}

void CheckTrainingCorpus(std::span<const Document> docs) {
  if (docs.empty()) throw ContractError("training corpus is empty");
  bool seen[2] = {false, false};
  for (const auto& doc : docs) {
    if (doc.split != Split::kTrain) {
      throw ContractError("document " + doc.id + " is not in the train split");
    }
    if (!doc.degenerate()) seen[static_cast<int>(doc.label)] = true;
  }
  if (!seen[0] || !seen[1]) throw TrainingError("training corpus must contain both labels");
}

}  // namespace

std::vector<nn::ParamRef> DocClassifierModel::Net::Refs(Net& grads) {
  std::vector<nn::ParamRef> refs;
  for (std::size_t k = 0; k < channels.size(); ++k) {
    const std::string prefix = "channel" + std::to_string(k);
    auto e = embeddings[k].Refs(prefix + ".embedding", grads.embeddings[k]);
    auto c = channels[k].Refs(prefix, grads.channels[k]);
    refs.insert(refs.end(), e.begin(), e.end());
    refs.insert(refs.end(), c.begin(), c.end());
  }
  auto h = head.Refs("head", grads.head);
  refs.insert(refs.end(), h.begin(), h.end());
  return refs;
}

DocClassifierModel::Net DocClassifierModel::MakeNet(const nn::TrainConfig& config,
                                                    std::size_t vocab) {
  Net net;
  for (std::size_t kernel : config.kernel_sizes) {
    net.embeddings.push_back(nn::Embedding::Zeros(vocab, config.embedding_dim));
    net.channels.push_back(ConvLstmChannel::Zeros(config.embedding_dim, config.filters, kernel,
                                                  config.max_pool_size, config.hidden_units));
  }
  net.head = nn::Dense::Zeros(config.hidden_units * config.kernel_sizes.size(), 1);
  return net;
}

DocClassifierModel DocClassifierModel::Create(std::span<const Document> train_docs,
                                              const nn::TrainConfig& config) {
  ValidateDocConfig(config);
  if (train_docs.empty()) throw ContractError("training corpus is empty");

  DocClassifierModel model;
  model.config_ = config;
  model.id_to_token_ = {kPadToken, kUnkToken};
  for (const auto& doc : train_docs) {
    for (const auto& token : doc.tokens) {
      if (model.vocab_.emplace(token, static_cast<int>(model.id_to_token_.size())).second) {
        model.id_to_token_.push_back(token);
      }
    }
  }

  model.net_ = MakeNet(config, model.id_to_token_.size());
  nn::Rng rng(config.seed);
  for (auto& e : model.net_.embeddings) e.Initialize(rng);
  for (auto& c : model.net_.channels) c.Initialize(rng);
  model.net_.head.Initialize(rng);
  return model;
}

DocClassifierModel DocClassifierModel::Train(std::span<const Document> train_docs,
                                             const nn::TrainConfig& config) {
  CheckTrainingCorpus(train_docs);
  DocClassifierModel model = Create(train_docs, config);

  std::vector<std::vector<int>> encoded;
  std::vector<int> targets;
  for (const auto& doc : train_docs) {
    if (doc.degenerate()) continue;
    encoded.push_back(model.Encode(doc.tokens));
    targets.push_back(doc.label == GenderLabel::kFemale ? 1 : 0);
  }

  Net grads = MakeNet(config, model.id_to_token_.size());
  const auto params = model.net_.Refs(grads);
  // Shuffle and dropout stream, independent of the initialization draws.
  nn::Rng rng(config.seed ^ 0x9E3779B97F4A7C15ULL);
  model.epoch_losses_ = nn::TrainMinibatches(
      encoded.size(), config, params, rng,
      [&](std::size_t i) { return model.ForwardBackward(encoded[i], targets[i], &rng, &grads); });
  return model;
}

std::vector<int> DocClassifierModel::Encode(std::span<const std::string> tokens) const {
  const std::size_t min_len =
      *std::max_element(config_.kernel_sizes.begin(), config_.kernel_sizes.end());
  const std::size_t n = std::min(tokens.size(), config_.max_length);
  std::vector<int> ids;
  ids.reserve(std::max(n, min_len));
  for (std::size_t t = 0; t < n; ++t) {
    auto it = vocab_.find(tokens[t]);
    ids.push_back(it == vocab_.end() ? kUnkId : it->second);
  }
  while (ids.size() < min_len) ids.push_back(kPadId);
  return ids;
}

double DocClassifierModel::ForwardBackward(std::span<const int> ids, int target, nn::Rng* rng,
                                           Net* grads) const {
  const std::size_t channels = net_.channels.size();
  const std::size_t hidden = config_.hidden_units;
  std::vector<ConvLstmChannel::Cache> caches(channels);
  std::vector<nn::Matrix> inputs(channels);
  nn::Vec merged;
  merged.reserve(channels * hidden);
  for (std::size_t k = 0; k < channels; ++k) {
    inputs[k] = net_.embeddings[k].Forward(ids);
    const nn::Vec h = net_.channels[k].Forward(inputs[k], config_.dropout_rate,
                                               config_.recurrent_dropout, rng, &caches[k]);
    merged.insert(merged.end(), h.begin(), h.end());
  }
  const double p = nn::Sigmoid(net_.head.Forward(merged)[0]);
  const nn::BceResult bce = nn::BinaryCrossEntropy(p, target);
  if (grads == nullptr) return bce.loss;

  const double dlogit[1] = {bce.grad * p * (1.0 - p)};
  const nn::Vec dmerged = net_.head.Backward(merged, dlogit, grads->head);
  for (std::size_t k = 0; k < channels; ++k) {
    std::span<const double> dh(dmerged.data() + k * hidden, hidden);
    const nn::Matrix dx = net_.channels[k].Backward(caches[k], dh, grads->channels[k]);
    net_.embeddings[k].Backward(ids, dx, grads->embeddings[k]);
  }
  return bce.loss;
}

double DocClassifierModel::ProbabilityFemale(std::span<const int> ids) const {
  nn::Vec merged;
  for (std::size_t k = 0; k < net_.channels.size(); ++k) {
    const nn::Vec h =
        net_.channels[k].Forward(net_.embeddings[k].Forward(ids), 0.0, 0.0, nullptr, nullptr);
    merged.insert(merged.end(), h.begin(), h.end());
  }
  return nn::Sigmoid(net_.head.Forward(merged)[0]);
}

Prediction DocClassifierModel::Predict(std::span<const std::string> tokens) const {
  if (tokens.empty()) throw ContractError("cannot classify a document with no tokens");
  return Prediction::FromProbability(ProbabilityFemale(Encode(tokens)));
}

ModelFile DocClassifierModel::ToModelFile() const {
  ModelFile file;
  file.kind = kModelKind;
  file.meta = {{"train_config", ToJson(config_)},
               {"seed", config_.seed},
               {"vocab", id_to_token_},
               {"epoch_losses", epoch_losses_}};
  // Refs need mutable storage; the copies are discarded.
  Net values = net_;
  Net scratch = MakeNet(config_, id_to_token_.size());
  file.tensors = TensorsFromParams(values.Refs(scratch));
  return file;
}

DocClassifierModel DocClassifierModel::FromModelFile(const ModelFile& file) {
  if (file.kind != kModelKind) {
    throw ParseError("expected a " + std::string(kModelKind) + " model, got " + file.kind, 0);
  }
  DocClassifierModel model;
  try {
    model.config_ = TrainConfigFromJson(file.meta.at("train_config"));
    model.id_to_token_ = file.meta.at("vocab").get<std::vector<std::string>>();
    model.epoch_losses_ = file.meta.value("epoch_losses", std::vector<double>{});
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("bad document classifier metadata: ") + e.what(), 0);
  }
  ValidateDocConfig(model.config_);
  if (model.id_to_token_.size() < 2) throw ParseError("vocabulary lacks PAD and UNK", 0);
  for (std::size_t i = 2; i < model.id_to_token_.size(); ++i) {
    model.vocab_.emplace(model.id_to_token_[i], static_cast<int>(i));
  }
  model.net_ = MakeNet(model.config_, model.id_to_token_.size());
  Net scratch = MakeNet(model.config_, model.id_to_token_.size());
  LoadParams(file, model.net_.Refs(scratch));
  return model;
}

void DocClassifierModel::Save(const std::filesystem::path& path) const {
  SaveModel(path, ToModelFile());
}

DocClassifierModel DocClassifierModel::Load(const std::filesystem::path& path) {
  return FromModelFile(LoadModel(path));
}

}  // namespace lexstyle
