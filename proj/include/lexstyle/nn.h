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

// Minimal neural-network primitives for the two classifiers.
//
// Every layer pairs a hand-written forward with its backward; there is no
// autodiff graph. Parameters are float64 throughout. Backward functions
// *accumulate* into gradient buffers, so a minibatch is a sequence of
// backward calls between ZeroGrads() and an optimizer step.

#ifndef LEXSTYLE_NN_H_
#define LEXSTYLE_NN_H_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <random>
#include <span>
#include <string>
#include <vector>

namespace lexstyle::nn {

using Vec = std::vector<double>;
using Rng = std::mt19937_64;

struct Matrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> data;

  Matrix() = default;
  Matrix(std::size_t r, std::size_t c, double fill = 0.0) : rows(r), cols(c), data(r * c, fill) {}

  double& operator()(std::size_t r, std::size_t c) { return data[r * cols + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data[r * cols + c]; }
  std::span<double> row(std::size_t r) { return {data.data() + r * cols, cols}; }
  std::span<const double> row(std::size_t r) const { return {data.data() + r * cols, cols}; }

  bool operator==(const Matrix&) const = default;
};

// A named view of one trainable array and its gradient buffer.
struct ParamRef {
  std::string name;
  std::span<double> value;
  std::span<double> grad;
  std::string layer;                 // "embedding", "conv1d", "lstm", "dense"
  std::vector<std::uint64_t> shape;  // row-major
};

void ZeroGrads(std::span<const ParamRef> params);
void ScaleGrads(std::span<const ParamRef> params, double factor);

// Uniform in ±sqrt(6 / (fan_in + fan_out)).
void GlorotUniform(std::span<double> values, std::size_t fan_in, std::size_t fan_out, Rng& rng);

double Sigmoid(double x);

// ---------------------------------------------------------------------------
// LSTM cell
//
//   f_t = σ(W_f x_t + U_f h_{t-1} + b_f)
//   i_t = σ(W_i x_t + U_i h_{t-1} + b_i)
//   o_t = σ(W_o x_t + U_o h_{t-1} + b_o)
//   c̃_t = tanh(W_c x_t + U_c h_{t-1} + b_c)
//   c_t = f_t ∘ c_{t-1} + i_t ∘ c̃_t
//   h_t = o_t ∘ tanh(c_t)

struct LstmCellParams {
  std::size_t input_size = 0;
  std::size_t hidden_size = 0;
  Matrix w_f, w_i, w_o, w_c;  // hidden x input
  Matrix u_f, u_i, u_o, u_c;  // hidden x hidden
  Vec b_f, b_i, b_o, b_c;     // hidden

  static LstmCellParams Zeros(std::size_t input_size, std::size_t hidden_size);
  void Validate() const;
  // Weights Glorot-uniform, b_f = 1, other biases 0.
  void Initialize(Rng& rng);
  std::vector<ParamRef> Refs(const std::string& prefix, LstmCellParams& grads);
};

struct LstmStepCache {
  Vec x, h_prev, c_prev;
  Vec f, i, o, g;  // g is the candidate cell c̃_t
  Vec c, tanh_c, h;
};

LstmStepCache LstmStep(const LstmCellParams& params, std::span<const double> x,
                       std::span<const double> h_prev, std::span<const double> c_prev);

struct LstmStepInputGrads {
  Vec dx, dh_prev, dc_prev;
};

// Given dL/dh_t and dL/dc_t (the latter from step t+1), accumulates parameter
// gradients into `grads` and returns gradients for the step's inputs.
LstmStepInputGrads LstmStepBackward(const LstmCellParams& params, const LstmStepCache& cache,
                                    std::span<const double> dh, std::span<const double> dc,
                                    LstmCellParams& grads);

// Runs the cell over every row of `xs` from zero state.
struct LstmSequenceCache {
  std::vector<LstmStepCache> steps;
};
Vec LstmForward(const LstmCellParams& params, const Matrix& xs, LstmSequenceCache* cache);
// Backprop from dL/dh_T of the final step. Returns dL/dxs.
Matrix LstmBackward(const LstmCellParams& params, const LstmSequenceCache& cache,
                    std::span<const double> dh_final, LstmCellParams& grads);

// ---------------------------------------------------------------------------
// 1-D convolution, valid padding, stride 1 (cross-correlation):
//   out[t][f] = bias[f] + Σ_k Σ_c weights[f][k][c] · in[t + k][c]

struct ConvLayerParams {
  std::size_t filters = 0;
  std::size_t kernel_size = 0;
  std::size_t input_channels = 0;
  Vec weights;  // filters x kernel_size x input_channels, row-major
  Vec bias;     // filters

  static ConvLayerParams Zeros(std::size_t filters, std::size_t kernel_size,
                               std::size_t input_channels);
  void Validate() const;
  void Initialize(Rng& rng);
  double& weight(std::size_t f, std::size_t k, std::size_t c) {
    return weights[(f * kernel_size + k) * input_channels + c];
  }
  double weight(std::size_t f, std::size_t k, std::size_t c) const {
    return weights[(f * kernel_size + k) * input_channels + c];
  }
  std::vector<ParamRef> Refs(const std::string& prefix, ConvLayerParams& grads);
};

// Pre-activation output, (len - kernel_size + 1) x filters. Throws
// ContractError when the sequence is shorter than the kernel.
Matrix Conv1dForward(const ConvLayerParams& params, const Matrix& sequence);
// Accumulates into grads; returns dL/dsequence.
Matrix Conv1dBackward(const ConvLayerParams& params, const Matrix& sequence,
                      const Matrix& d_out, ConvLayerParams& grads);

// Non-overlapping max pooling along time (stride = size). A trailing
// partial window is kept, so output length is ceil(len / size).
struct PoolResult {
  Matrix out;
  std::vector<std::size_t> argmax;  // input row chosen for each out element
  std::size_t input_rows = 0;
};
PoolResult MaxPool1d(const Matrix& in, std::size_t size);
Matrix MaxPool1dBackward(const PoolResult& pool, const Matrix& d_out);

void ReluInPlace(Matrix& m);
// Zeroes d where the forward output was not positive.
void ReluBackwardInPlace(const Matrix& activated, Matrix& d);

// Inverted dropout mask: each entry 0 with probability `rate`, otherwise
// 1 / (1 - rate).
Matrix DropoutMask(std::size_t rows, std::size_t cols, double rate, Rng& rng);
void MultiplyInPlace(Matrix& m, const Matrix& mask);

// ---------------------------------------------------------------------------

struct Dense {
  Matrix w;  // out x in
  Vec b;     // out

  static Dense Zeros(std::size_t in, std::size_t out);
  void Initialize(Rng& rng);
  Vec Forward(std::span<const double> x) const;
  // Accumulates into grads; returns dL/dx.
  Vec Backward(std::span<const double> x, std::span<const double> dy, Dense& grads) const;
  std::vector<ParamRef> Refs(const std::string& prefix, Dense& grads);
};

struct Embedding {
  Matrix table;  // vocab x dim

  static Embedding Zeros(std::size_t vocab, std::size_t dim);
  void Initialize(Rng& rng);
  Matrix Forward(std::span<const int> ids) const;
  void Backward(std::span<const int> ids, const Matrix& d_out, Embedding& grads) const;
  std::vector<ParamRef> Refs(const std::string& prefix, Embedding& grads);
};

// ---------------------------------------------------------------------------

// Probabilities are clamped into [kProbabilityClamp, 1 - kProbabilityClamp].
inline constexpr double kProbabilityClamp = 1e-7;

struct BceResult {
  double loss = 0.0;
  double grad = 0.0;  // dL/dp at the clamped p
};

// -[y ln p + (1 - y) ln(1 - p)], gradient (p - y) / (p (1 - p)).
BceResult BinaryCrossEntropy(double p, int y);

// ---------------------------------------------------------------------------

struct AdamState {
  double learning_rate = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  std::vector<Vec> m;
  std::vector<Vec> v;
  std::uint64_t step = 0;

  // Bias-corrected Adam step over `params` (same list, same order, every
  // call). Throws TrainingError naming the first non-finite gradient; no
  // parameter is modified in that case.
  void Update(std::span<const ParamRef> params);
};

// ---------------------------------------------------------------------------

struct TrainConfig {
  int epochs = 10;
  double learning_rate = 1e-3;
  std::size_t batch_size = 32;
  double dropout_rate = 0.5;
  double recurrent_dropout = 0.2;
  std::size_t max_pool_size = 2;
  std::size_t hidden_units = 256;
  std::size_t embedding_dim = 100;
  std::size_t filters = 32;
  std::vector<std::size_t> kernel_sizes = {4, 6, 8};
  std::size_t max_length = 256;
  std::uint64_t seed = 42;

  // Throws ContractError on out-of-range fields.
  void Validate() const;

  // Document classifier: embedding 100, 32 filters, kernels 4/6/8, pool 2,
  // 256 hidden units, dropout 0.5, recurrent dropout 0.2. Desk scale shrinks
  // the widths (16 / 16 / 32) and raises the learning rate for short runs.
  static TrainConfig DocClassifier(bool desk_scale);
  // Token classifier: 32 filters, kernel 8, pool 2, 125 hidden units, no
  // dropout, tokens capped at 30 characters.
  static TrainConfig TokenClassifier(bool desk_scale);

  bool operator==(const TrainConfig&) const = default;
};

// Shuffled minibatch loop shared by both classifiers. `accumulate(index)`
// runs forward+backward for one example, adds its gradients, and returns its
// loss. Gradients are averaged over the batch before each Adam step.
// Returns the mean training loss of each epoch.
std::vector<double> TrainMinibatches(std::size_t n_examples, const TrainConfig& config,
                                     std::span<const ParamRef> params, Rng& rng,
                                     const std::function<double(std::size_t)>& accumulate);

// Fisher-Yates driven directly by the engine's output, independent of the
// standard library's distribution implementations.
void Shuffle(std::vector<std::size_t>& items, Rng& rng);

}  // namespace lexstyle::nn

#endif  // LEXSTYLE_NN_H_
