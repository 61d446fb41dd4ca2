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

#include "lexstyle/classifier.h"

#include <exception>

#include "lexstyle/errors.h"

namespace lexstyle {

std::vector<Prediction> PredictAll(const DocumentClassifier& model,
                                   std::span<const Document> docs) {
  std::vector<Prediction> out(docs.size());
  std::vector<std::exception_ptr> errors(docs.size());
  const auto n = static_cast<std::ptrdiff_t>(docs.size());
#pragma omp parallel for schedule(dynamic, 4)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const auto k = static_cast<std::size_t>(i);
    try {
      out[k] = model.Predict(docs[k]);
    } catch (...) {
      errors[k] = std::current_exception();
    }
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return out;
}

std::vector<Prediction> PredictAllSerial(const DocumentClassifier& model,
                                         std::span<const Document> docs) {
  std::vector<Prediction> out;
  out.reserve(docs.size());
  for (const auto& doc : docs) out.push_back(model.Predict(doc));
  return out;
}

EvalReport MakeReport(std::span<const Document> docs, std::span<const Prediction> predictions) {
  if (docs.empty()) throw ContractError("cannot evaluate an empty document list");
  if (docs.size() != predictions.size()) {
    throw ContractError("prediction count does not match document count");
  }
  EvalReport report;
  report.total = docs.size();
  for (std::size_t i = 0; i < docs.size(); ++i) {
    const int truth = static_cast<int>(docs[i].label);
    const int guess = static_cast<int>(predictions[i].label);
    ++report.confusion[truth][guess];
    if (truth == guess) ++report.correct;
  }
  report.accuracy = static_cast<double>(report.correct) / static_cast<double>(report.total);
  return report;
}

EvalReport Evaluate(const DocumentClassifier& model, std::span<const Document> docs) {
  if (docs.empty()) throw ContractError("cannot evaluate an empty document list");
  const auto predictions = PredictAll(model, docs);
  return MakeReport(docs, predictions);
}

ConvLstmChannel ConvLstmChannel::Zeros(std::size_t input_channels, std::size_t filters,
                                       std::size_t kernel_size, std::size_t pool_size,
                                       std::size_t hidden) {
  ConvLstmChannel ch;
  ch.conv = nn::ConvLayerParams::Zeros(filters, kernel_size, input_channels);
  ch.lstm = nn::LstmCellParams::Zeros(filters, hidden);
  ch.pool_size = pool_size;
  return ch;
}

void ConvLstmChannel::Initialize(nn::Rng& rng) {
  conv.Initialize(rng);
  lstm.Initialize(rng);
}

std::vector<nn::ParamRef> ConvLstmChannel::Refs(const std::string& prefix,
                                                ConvLstmChannel& grads) {
  auto refs = conv.Refs(prefix + ".conv", grads.conv);
  auto lstm_refs = lstm.Refs(prefix + ".lstm", grads.lstm);
  refs.insert(refs.end(), lstm_refs.begin(), lstm_refs.end());
  return refs;
}

nn::Vec ConvLstmChannel::Forward(const nn::Matrix& input, double dropout, double input_dropout,
                                 nn::Rng* rng, Cache* cache) const {
  nn::Matrix activated = nn::Conv1dForward(conv, input);
  nn::ReluInPlace(activated);

  nn::Matrix dropped = activated;
  nn::Matrix dropout_mask;
  if (rng != nullptr && dropout > 0.0) {
    dropout_mask = nn::DropoutMask(dropped.rows, dropped.cols, dropout, *rng);
    nn::MultiplyInPlace(dropped, dropout_mask);
  }

  nn::PoolResult pool = nn::MaxPool1d(dropped, pool_size);

  nn::Matrix lstm_in = pool.out;
  nn::Matrix lstm_mask;
  if (rng != nullptr && input_dropout > 0.0) {
    lstm_mask = nn::DropoutMask(lstm_in.rows, lstm_in.cols, input_dropout, *rng);
    nn::MultiplyInPlace(lstm_in, lstm_mask);
  }

  if (cache == nullptr) return nn::LstmForward(lstm, lstm_in, nullptr);

  nn::Vec h = nn::LstmForward(lstm, lstm_in, &cache->lstm);
  cache->input = input;
  cache->activated = std::move(activated);
  cache->dropout_mask = std::move(dropout_mask);
  cache->pool = std::move(pool);
  cache->lstm_mask = std::move(lstm_mask);
  return h;
}

nn::Matrix ConvLstmChannel::Backward(const Cache& cache, std::span<const double> dh,
                                     ConvLstmChannel& grads) const {
  nn::Matrix d = nn::LstmBackward(lstm, cache.lstm, dh, grads.lstm);
  if (!cache.lstm_mask.data.empty()) nn::MultiplyInPlace(d, cache.lstm_mask);
  d = nn::MaxPool1dBackward(cache.pool, d);
  if (!cache.dropout_mask.data.empty()) nn::MultiplyInPlace(d, cache.dropout_mask);
  nn::ReluBackwardInPlace(cache.activated, d);
  return nn::Conv1dBackward(conv, cache.input, d, grads.conv);
}

}  // namespace lexstyle
