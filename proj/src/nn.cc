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

#include "lexstyle/nn.h"

#include <algorithm>
#include <cmath>

#include "lexstyle/errors.h"

namespace lexstyle::nn {

namespace {

void Require(bool ok, const std::string& what) {
  if (!ok) throw ContractError(what);
}

// 53-bit uniform in [0, 1) straight from the engine bits.
double Uniform01(Rng& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

// y += M x
void MatVecAdd(const Matrix& m, std::span<const double> x, std::span<double> y) {
  for (std::size_t r = 0; r < m.rows; ++r) {
    const double* row = m.data.data() + r * m.cols;
    double s = 0.0;
    for (std::size_t c = 0; c < m.cols; ++c) s += row[c] * x[c];
    y[r] += s;
  }
}

// y += Mᵀ d
void MatTVecAdd(const Matrix& m, std::span<const double> d, std::span<double> y) {
  for (std::size_t r = 0; r < m.rows; ++r) {
    const double* row = m.data.data() + r * m.cols;
    const double dr = d[r];
    if (dr == 0.0) continue;
    for (std::size_t c = 0; c < m.cols; ++c) y[c] += row[c] * dr;
  }
}

// G += d xᵀ
void OuterAdd(Matrix& g, std::span<const double> d, std::span<const double> x) {
  for (std::size_t r = 0; r < g.rows; ++r) {
    const double dr = d[r];
    if (dr == 0.0) continue;
    double* row = g.data.data() + r * g.cols;
    for (std::size_t c = 0; c < g.cols; ++c) row[c] += dr * x[c];
  }
}

ParamRef Ref(const std::string& layer, const std::string& name, Matrix& value, Matrix& grad) {
  return {name, value.data, grad.data, layer, {value.rows, value.cols}};
}

ParamRef Ref(const std::string& layer, const std::string& name, Vec& value, Vec& grad,
             std::vector<std::uint64_t> shape = {}) {
  if (shape.empty()) shape = {value.size()};
  return {name, value, grad, layer, std::move(shape)};
}

}  // namespace

void ZeroGrads(std::span<const ParamRef> params) {
  for (const auto& p : params) std::fill(p.grad.begin(), p.grad.end(), 0.0);
}

void ScaleGrads(std::span<const ParamRef> params, double factor) {
  for (const auto& p : params) {
    for (double& g : p.grad) g *= factor;
  }
}

void GlorotUniform(std::span<double> values, std::size_t fan_in, std::size_t fan_out, Rng& rng) {
  const double limit = std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
  for (double& v : values) v = (2.0 * Uniform01(rng) - 1.0) * limit;
}

double Sigmoid(double x) {
  if (x >= 0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

// ---------------------------------------------------------------------------
// LSTM

LstmCellParams LstmCellParams::Zeros(std::size_t input_size, std::size_t hidden_size) {
  LstmCellParams p;
  p.input_size = input_size;
  p.hidden_size = hidden_size;
  for (Matrix* w : {&p.w_f, &p.w_i, &p.w_o, &p.w_c}) *w = Matrix(hidden_size, input_size);
  for (Matrix* u : {&p.u_f, &p.u_i, &p.u_o, &p.u_c}) *u = Matrix(hidden_size, hidden_size);
  for (Vec* b : {&p.b_f, &p.b_i, &p.b_o, &p.b_c}) b->assign(hidden_size, 0.0);
  return p;
}

void LstmCellParams::Validate() const {
  Require(input_size > 0 && hidden_size > 0, "LSTM sizes must be positive");
  for (const Matrix* w : {&w_f, &w_i, &w_o, &w_c}) {
    Require(w->rows == hidden_size && w->cols == input_size && w->data.size() == hidden_size * input_size,
            "LSTM input weights must be hidden x input");
  }
  for (const Matrix* u : {&u_f, &u_i, &u_o, &u_c}) {
    Require(u->rows == hidden_size && u->cols == hidden_size &&
                u->data.size() == hidden_size * hidden_size,
            "LSTM recurrent weights must be hidden x hidden");
  }
  for (const Vec* b : {&b_f, &b_i, &b_o, &b_c}) {
    Require(b->size() == hidden_size, "LSTM biases must have hidden entries");
  }
}

void LstmCellParams::Initialize(Rng& rng) {
  for (Matrix* w : {&w_f, &w_i, &w_o, &w_c}) GlorotUniform(w->data, input_size, hidden_size, rng);
  for (Matrix* u : {&u_f, &u_i, &u_o, &u_c}) GlorotUniform(u->data, hidden_size, hidden_size, rng);
  std::fill(b_f.begin(), b_f.end(), 1.0);
  for (Vec* b : {&b_i, &b_o, &b_c}) std::fill(b->begin(), b->end(), 0.0);
}

std::vector<ParamRef> LstmCellParams::Refs(const std::string& prefix, LstmCellParams& g) {
  return {Ref("lstm", prefix + ".w_f", w_f, g.w_f), Ref("lstm", prefix + ".w_i", w_i, g.w_i),
          Ref("lstm", prefix + ".w_o", w_o, g.w_o), Ref("lstm", prefix + ".w_c", w_c, g.w_c),
          Ref("lstm", prefix + ".u_f", u_f, g.u_f), Ref("lstm", prefix + ".u_i", u_i, g.u_i),
          Ref("lstm", prefix + ".u_o", u_o, g.u_o), Ref("lstm", prefix + ".u_c", u_c, g.u_c),
          Ref("lstm", prefix + ".b_f", b_f, g.b_f), Ref("lstm", prefix + ".b_i", b_i, g.b_i),
          Ref("lstm", prefix + ".b_o", b_o, g.b_o), Ref("lstm", prefix + ".b_c", b_c, g.b_c)};
}

LstmStepCache LstmStep(const LstmCellParams& p, std::span<const double> x,
                       std::span<const double> h_prev, std::span<const double> c_prev) {
  const std::size_t h = p.hidden_size;
  if (x.size() != p.input_size || h_prev.size() != h || c_prev.size() != h) {
    throw ContractError("lstm_step dimension mismatch");
  }
  LstmStepCache s;
  s.x.assign(x.begin(), x.end());
  s.h_prev.assign(h_prev.begin(), h_prev.end());
  s.c_prev.assign(c_prev.begin(), c_prev.end());

  auto gate = [&](const Matrix& w, const Matrix& u, const Vec& b) {
    Vec z = b;
    MatVecAdd(w, x, z);
    MatVecAdd(u, h_prev, z);
    return z;
  };
  s.f = gate(p.w_f, p.u_f, p.b_f);
  s.i = gate(p.w_i, p.u_i, p.b_i);
  s.o = gate(p.w_o, p.u_o, p.b_o);
  s.g = gate(p.w_c, p.u_c, p.b_c);
  s.c.resize(h);
  s.tanh_c.resize(h);
  s.h.resize(h);
  for (std::size_t j = 0; j < h; ++j) {
    s.f[j] = Sigmoid(s.f[j]);
    s.i[j] = Sigmoid(s.i[j]);
    s.o[j] = Sigmoid(s.o[j]);
    s.g[j] = std::tanh(s.g[j]);
    s.c[j] = s.f[j] * c_prev[j] + s.i[j] * s.g[j];
    s.tanh_c[j] = std::tanh(s.c[j]);
    s.h[j] = s.o[j] * s.tanh_c[j];
  }
  return s;
}

LstmStepInputGrads LstmStepBackward(const LstmCellParams& p, const LstmStepCache& s,
                                    std::span<const double> dh, std::span<const double> dc,
                                    LstmCellParams& g) {
  const std::size_t h = p.hidden_size;
  if (dh.size() != h || dc.size() != h) throw ContractError("lstm backward dimension mismatch");
  Vec dzf(h), dzi(h), dzo(h), dzg(h);
  LstmStepInputGrads out;
  out.dc_prev.resize(h);
  for (std::size_t j = 0; j < h; ++j) {
    const double d_o = dh[j] * s.tanh_c[j];
    const double dct = dc[j] + dh[j] * s.o[j] * (1.0 - s.tanh_c[j] * s.tanh_c[j]);
    const double d_f = dct * s.c_prev[j];
    const double d_i = dct * s.g[j];
    const double d_g = dct * s.i[j];
    out.dc_prev[j] = dct * s.f[j];
    dzf[j] = d_f * s.f[j] * (1.0 - s.f[j]);
    dzi[j] = d_i * s.i[j] * (1.0 - s.i[j]);
    dzo[j] = d_o * s.o[j] * (1.0 - s.o[j]);
    dzg[j] = d_g * (1.0 - s.g[j] * s.g[j]);
  }
  out.dx.assign(p.input_size, 0.0);
  out.dh_prev.assign(h, 0.0);
  auto backprop_gate = [&](const Vec& dz, const Matrix& w, const Matrix& u, Matrix& gw,
                           Matrix& gu, Vec& gb) {
    OuterAdd(gw, dz, s.x);
    OuterAdd(gu, dz, s.h_prev);
    for (std::size_t j = 0; j < h; ++j) gb[j] += dz[j];
    MatTVecAdd(w, dz, out.dx);
    MatTVecAdd(u, dz, out.dh_prev);
  };
  backprop_gate(dzf, p.w_f, p.u_f, g.w_f, g.u_f, g.b_f);
  backprop_gate(dzi, p.w_i, p.u_i, g.w_i, g.u_i, g.b_i);
  backprop_gate(dzo, p.w_o, p.u_o, g.w_o, g.u_o, g.b_o);
  backprop_gate(dzg, p.w_c, p.u_c, g.w_c, g.u_c, g.b_c);
  return out;
}

Vec LstmForward(const LstmCellParams& params, const Matrix& xs, LstmSequenceCache* cache) {
  if (xs.cols != params.input_size) throw ContractError("LSTM input width mismatch");
  Vec h(params.hidden_size, 0.0), c(params.hidden_size, 0.0);
  if (cache) cache->steps.clear();
  for (std::size_t t = 0; t < xs.rows; ++t) {
    LstmStepCache step = LstmStep(params, xs.row(t), h, c);
    h = step.h;
    c = step.c;
    if (cache) cache->steps.push_back(std::move(step));
  }
  return h;
}

Matrix LstmBackward(const LstmCellParams& params, const LstmSequenceCache& cache,
                    std::span<const double> dh_final, LstmCellParams& grads) {
  Matrix dxs(cache.steps.size(), params.input_size);
  Vec dh(dh_final.begin(), dh_final.end());
  Vec dc(params.hidden_size, 0.0);
  for (std::size_t t = cache.steps.size(); t-- > 0;) {
    LstmStepInputGrads step = LstmStepBackward(params, cache.steps[t], dh, dc, grads);
    std::copy(step.dx.begin(), step.dx.end(), dxs.row(t).begin());
    dh = std::move(step.dh_prev);
    dc = std::move(step.dc_prev);
  }
  return dxs;
}

// ---------------------------------------------------------------------------
// Convolution and pooling

ConvLayerParams ConvLayerParams::Zeros(std::size_t filters, std::size_t kernel_size,
                                       std::size_t input_channels) {
  ConvLayerParams p;
  p.filters = filters;
  p.kernel_size = kernel_size;
  p.input_channels = input_channels;
  p.weights.assign(filters * kernel_size * input_channels, 0.0);
  p.bias.assign(filters, 0.0);
  return p;
}

void ConvLayerParams::Validate() const {
  Require(filters > 0 && kernel_size >= 1 && input_channels > 0,
          "conv filters, kernel_size and input_channels must be positive");
  Require(weights.size() == filters * kernel_size * input_channels,
          "conv weights must be filters x kernel_size x input_channels");
  Require(bias.size() == filters, "conv bias must have one entry per filter");
}

void ConvLayerParams::Initialize(Rng& rng) {
  GlorotUniform(weights, kernel_size * input_channels, kernel_size * filters, rng);
  std::fill(bias.begin(), bias.end(), 0.0);
}

std::vector<ParamRef> ConvLayerParams::Refs(const std::string& prefix, ConvLayerParams& g) {
  return {Ref("conv1d", prefix + ".weights", weights, g.weights,
              {filters, kernel_size, input_channels}),
          Ref("conv1d", prefix + ".bias", bias, g.bias)};
}

Matrix Conv1dForward(const ConvLayerParams& p, const Matrix& seq) {
  if (seq.cols != p.input_channels) throw ContractError("conv input channel mismatch");
  if (seq.rows < p.kernel_size) {
    throw ContractError("sequence of length " + std::to_string(seq.rows) +
                        " is shorter than kernel " + std::to_string(p.kernel_size) +
                        "; pad the input first");
  }
  const std::size_t out_len = seq.rows - p.kernel_size + 1;
  const std::size_t span = p.kernel_size * p.input_channels;
  Matrix out(out_len, p.filters);
  for (std::size_t t = 0; t < out_len; ++t) {
    // Rows t..t+k-1 are contiguous in a row-major matrix.
    const double* window = seq.data.data() + t * seq.cols;
    for (std::size_t f = 0; f < p.filters; ++f) {
      const double* w = p.weights.data() + f * span;
      double s = p.bias[f];
      for (std::size_t q = 0; q < span; ++q) s += w[q] * window[q];
      out(t, f) = s;
    }
  }
  return out;
}

Matrix Conv1dBackward(const ConvLayerParams& p, const Matrix& seq, const Matrix& d_out,
                      ConvLayerParams& g) {
  const std::size_t span = p.kernel_size * p.input_channels;
  if (d_out.cols != p.filters || d_out.rows + p.kernel_size - 1 != seq.rows) {
    throw ContractError("conv backward shape mismatch");
  }
  Matrix d_seq(seq.rows, seq.cols);
  for (std::size_t t = 0; t < d_out.rows; ++t) {
    const double* window = seq.data.data() + t * seq.cols;
    double* d_window = d_seq.data.data() + t * seq.cols;
    for (std::size_t f = 0; f < p.filters; ++f) {
      const double d = d_out(t, f);
      if (d == 0.0) continue;
      g.bias[f] += d;
      const double* w = p.weights.data() + f * span;
      double* gw = g.weights.data() + f * span;
      for (std::size_t q = 0; q < span; ++q) {
        gw[q] += d * window[q];
        d_window[q] += d * w[q];
      }
    }
  }
  return d_seq;
}

PoolResult MaxPool1d(const Matrix& in, std::size_t size) {
  if (size == 0) throw ContractError("pool size must be positive");
  PoolResult r;
  r.input_rows = in.rows;
  const std::size_t out_len = (in.rows + size - 1) / size;
  r.out = Matrix(out_len, in.cols);
  r.argmax.resize(out_len * in.cols);
  for (std::size_t t = 0; t < out_len; ++t) {
    const std::size_t begin = t * size;
    const std::size_t end = std::min(in.rows, begin + size);
    for (std::size_t c = 0; c < in.cols; ++c) {
      std::size_t best = begin;
      for (std::size_t s = begin + 1; s < end; ++s) {
        if (in(s, c) > in(best, c)) best = s;
      }
      r.out(t, c) = in(best, c);
      r.argmax[t * in.cols + c] = best;
    }
  }
  return r;
}

Matrix MaxPool1dBackward(const PoolResult& pool, const Matrix& d_out) {
  Matrix d_in(pool.input_rows, d_out.cols);
  for (std::size_t t = 0; t < d_out.rows; ++t) {
    for (std::size_t c = 0; c < d_out.cols; ++c) {
      d_in(pool.argmax[t * d_out.cols + c], c) += d_out(t, c);
    }
  }
  return d_in;
}

void ReluInPlace(Matrix& m) {
  for (double& v : m.data) v = v > 0.0 ? v : 0.0;
}

void ReluBackwardInPlace(const Matrix& activated, Matrix& d) {
  for (std::size_t i = 0; i < d.data.size(); ++i) {
    if (activated.data[i] <= 0.0) d.data[i] = 0.0;
  }
}

Matrix DropoutMask(std::size_t rows, std::size_t cols, double rate, Rng& rng) {
  Matrix mask(rows, cols, 1.0);
  if (rate <= 0.0) return mask;
  const double keep = 1.0 / (1.0 - rate);
  for (double& v : mask.data) v = Uniform01(rng) < rate ? 0.0 : keep;
  return mask;
}

void MultiplyInPlace(Matrix& m, const Matrix& mask) {
  for (std::size_t i = 0; i < m.data.size(); ++i) m.data[i] *= mask.data[i];
}

// ---------------------------------------------------------------------------
// Dense, embedding

Dense Dense::Zeros(std::size_t in, std::size_t out) {
  Dense d;
  d.w = Matrix(out, in);
  d.b.assign(out, 0.0);
  return d;
}

void Dense::Initialize(Rng& rng) {
  GlorotUniform(w.data, w.cols, w.rows, rng);
  std::fill(b.begin(), b.end(), 0.0);
}

Vec Dense::Forward(std::span<const double> x) const {
  if (x.size() != w.cols) throw ContractError("dense input width mismatch");
  Vec y = b;
  MatVecAdd(w, x, y);
  return y;
}

Vec Dense::Backward(std::span<const double> x, std::span<const double> dy, Dense& g) const {
  OuterAdd(g.w, dy, x);
  for (std::size_t j = 0; j < b.size(); ++j) g.b[j] += dy[j];
  Vec dx(w.cols, 0.0);
  MatTVecAdd(w, dy, dx);
  return dx;
}

std::vector<ParamRef> Dense::Refs(const std::string& prefix, Dense& g) {
  return {Ref("dense", prefix + ".w", w, g.w), Ref("dense", prefix + ".b", b, g.b)};
}

Embedding Embedding::Zeros(std::size_t vocab, std::size_t dim) {
  Embedding e;
  e.table = Matrix(vocab, dim);
  return e;
}

void Embedding::Initialize(Rng& rng) { GlorotUniform(table.data, table.rows, table.cols, rng); }

Matrix Embedding::Forward(std::span<const int> ids) const {
  Matrix out(ids.size(), table.cols);
  for (std::size_t t = 0; t < ids.size(); ++t) {
    const auto id = static_cast<std::size_t>(ids[t]);
    if (id >= table.rows) throw ContractError("embedding id out of range");
    std::copy_n(table.row(id).begin(), table.cols, out.row(t).begin());
  }
  return out;
}

void Embedding::Backward(std::span<const int> ids, const Matrix& d_out, Embedding& g) const {
  for (std::size_t t = 0; t < ids.size(); ++t) {
    auto dst = g.table.row(static_cast<std::size_t>(ids[t]));
    auto src = d_out.row(t);
    for (std::size_t c = 0; c < table.cols; ++c) dst[c] += src[c];
  }
}

std::vector<ParamRef> Embedding::Refs(const std::string& prefix, Embedding& g) {
  return {Ref("embedding", prefix + ".table", table, g.table)};
}

// ---------------------------------------------------------------------------

BceResult BinaryCrossEntropy(double p, int y) {
  if (y != 0 && y != 1) throw ContractError("binary label must be 0 or 1");
  const double q = std::clamp(p, kProbabilityClamp, 1.0 - kProbabilityClamp);
  BceResult r;
  r.loss = y == 1 ? -std::log(q) : -std::log(1.0 - q);
  r.grad = (q - y) / (q * (1.0 - q));
  return r;
}

void AdamState::Update(std::span<const ParamRef> params) {
  if (m.empty()) {
    m.resize(params.size());
    v.resize(params.size());
    for (std::size_t k = 0; k < params.size(); ++k) {
      m[k].assign(params[k].value.size(), 0.0);
      v[k].assign(params[k].value.size(), 0.0);
    }
  }
  if (m.size() != params.size()) throw ContractError("Adam state does not match parameter list");
  for (std::size_t k = 0; k < params.size(); ++k) {
    if (params[k].grad.size() != params[k].value.size() || m[k].size() != params[k].value.size()) {
      throw ContractError("Adam shape mismatch for " + params[k].name);
    }
    for (double gval : params[k].grad) {
      if (!std::isfinite(gval)) throw TrainingError("non-finite gradient in " + params[k].name);
    }
  }
  ++step;
  const double t = static_cast<double>(step);
  const double c1 = 1.0 - std::pow(beta1, t);
  const double c2 = 1.0 - std::pow(beta2, t);
  for (std::size_t k = 0; k < params.size(); ++k) {
    auto& mk = m[k];
    auto& vk = v[k];
    const auto& p = params[k];
    for (std::size_t j = 0; j < p.value.size(); ++j) {
      const double gval = p.grad[j];
      mk[j] = beta1 * mk[j] + (1.0 - beta1) * gval;
      vk[j] = beta2 * vk[j] + (1.0 - beta2) * gval * gval;
      const double m_hat = mk[j] / c1;
      const double v_hat = vk[j] / c2;
      p.value[j] -= learning_rate * m_hat / (std::sqrt(v_hat) + epsilon);
    }
  }
}

// ---------------------------------------------------------------------------

void TrainConfig::Validate() const {
  Require(epochs >= 1, "epochs must be at least 1");
  Require(learning_rate > 0.0 && std::isfinite(learning_rate), "learning_rate must be positive");
  Require(batch_size >= 1, "batch_size must be at least 1");
  Require(dropout_rate >= 0.0 && dropout_rate < 1.0, "dropout_rate must be in [0, 1)");
  Require(recurrent_dropout >= 0.0 && recurrent_dropout < 1.0,
          "recurrent_dropout must be in [0, 1)");
  Require(max_pool_size >= 1, "max_pool_size must be at least 1");
  Require(hidden_units >= 1 && filters >= 1 && embedding_dim >= 1,
          "layer widths must be positive");
  Require(!kernel_sizes.empty(), "at least one kernel size is required");
  for (std::size_t k : kernel_sizes) Require(k >= 1, "kernel sizes must be positive");
  Require(max_length >= 1, "max_length must be positive");
}

TrainConfig TrainConfig::DocClassifier(bool desk_scale) {
  TrainConfig c;
  if (desk_scale) {
    c.embedding_dim = 16;
    c.filters = 16;
    c.hidden_units = 32;
    c.learning_rate = 0.01;
  }
  return c;
}

TrainConfig TrainConfig::TokenClassifier(bool desk_scale) {
  TrainConfig c;
  c.kernel_sizes = {8};
  c.hidden_units = 125;
  c.dropout_rate = 0.0;
  c.recurrent_dropout = 0.0;
  c.max_length = 30;
  c.embedding_dim = 1;  // unused: characters are one-hot
  if (desk_scale) {
    c.filters = 16;
    c.hidden_units = 32;
    c.learning_rate = 0.01;
  }
  return c;
}

void Shuffle(std::vector<std::size_t>& items, Rng& rng) {
  for (std::size_t i = items.size(); i > 1; --i) {
    const std::size_t j = static_cast<std::size_t>(rng() % i);
    std::swap(items[i - 1], items[j]);
  }
}

std::vector<double> TrainMinibatches(std::size_t n_examples, const TrainConfig& config,
                                     std::span<const ParamRef> params, Rng& rng,
                                     const std::function<double(std::size_t)>& accumulate) {
  config.Validate();
  if (n_examples == 0) throw TrainingError("no training examples");
  AdamState adam;
  adam.learning_rate = config.learning_rate;
  std::vector<std::size_t> order(n_examples);
  for (std::size_t i = 0; i < n_examples; ++i) order[i] = i;

  std::vector<double> epoch_losses;
  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    Shuffle(order, rng);
    double total = 0.0;
    for (std::size_t begin = 0; begin < n_examples; begin += config.batch_size) {
      const std::size_t end = std::min(n_examples, begin + config.batch_size);
      ZeroGrads(params);
      for (std::size_t k = begin; k < end; ++k) {
        const double loss = accumulate(order[k]);
        if (!std::isfinite(loss)) {
          throw TrainingError("non-finite loss in epoch " + std::to_string(epoch + 1));
        }
        total += loss;
      }
      ScaleGrads(params, 1.0 / static_cast<double>(end - begin));
      adam.Update(params);
    }
    epoch_losses.push_back(total / static_cast<double>(n_examples));
  }
  return epoch_losses;
}

}  // namespace lexstyle::nn
