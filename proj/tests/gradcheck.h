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

// Central finite-difference gradient checks shared by the unit and
// acceptance suites. Independent of the analytic backward passes: losses
// are recomputed from scratch with forward functions only.

#ifndef LEXSTYLE_TESTS_GRADCHECK_H_
#define LEXSTYLE_TESTS_GRADCHECK_H_

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "lexstyle/classifier.h"
#include "lexstyle/nn.h"

namespace lexstyle::testing {

inline constexpr double kGradStep = 1e-5;
inline constexpr double kGradTolerance = 1e-4;

struct GradCheckResult {
  double max_rel_error = 0.0;
  std::string worst;
  std::size_t checked = 0;

  bool ok() const { return checked > 0 && max_rel_error <= kGradTolerance; }
};

inline std::string FormatG(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

// Relative error, with the denominator floored at 1e-6 so gradients that are
// zero up to rounding do not count as mismatches.
inline double RelativeError(double analytic, double numeric) {
  const double scale = std::max({std::fabs(analytic), std::fabs(numeric), 1e-6});
  return std::fabs(analytic - numeric) / scale;
}

// `loss` evaluates the scalar objective from the current values;
// `backprop` adds analytic gradients into every ref's grad buffer.
inline GradCheckResult CheckGradients(std::span<const nn::ParamRef> params,
                                      const std::function<double()>& loss,
                                      const std::function<void()>& backprop) {
  nn::ZeroGrads(params);
  backprop();
  GradCheckResult result;
  for (const auto& p : params) {
    for (std::size_t i = 0; i < p.value.size(); ++i) {
      const double saved = p.value[i];
      p.value[i] = saved + kGradStep;
      const double up = loss();
      p.value[i] = saved - kGradStep;
      const double down = loss();
      p.value[i] = saved;
      const double numeric = (up - down) / (2.0 * kGradStep);
      const double err = RelativeError(p.grad[i], numeric);
      ++result.checked;
      if (err > result.max_rel_error) {
        result.max_rel_error = err;
        result.worst = p.name + "[" + std::to_string(i) + "] analytic " +
                       FormatG(p.grad[i]) + " numeric " + FormatG(numeric);
      }
    }
  }
  return result;
}

inline void FillUniform(std::span<double> values, nn::Rng& rng, double scale = 0.5) {
  for (auto& v : values) {
    const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
    v = scale * (2.0 * u - 1.0);
  }
}

inline double Dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

// Loss = r_h . h_t + r_c . c_t over a random cell and random inputs.
inline GradCheckResult GradCheckLstmStep(std::uint64_t seed) {
  nn::Rng rng(seed);
  const std::size_t in = 3 + seed % 3, hidden = 2 + seed % 4;
  auto params = nn::LstmCellParams::Zeros(in, hidden);
  auto grads = nn::LstmCellParams::Zeros(in, hidden);
  auto refs = params.Refs("lstm", grads);
  for (auto& r : refs) FillUniform(r.value, rng);
  nn::Vec x(in), h(hidden), c(hidden), dx(in), dh(hidden), dc(hidden), rh(hidden), rc(hidden);
  FillUniform(x, rng, 1.0);
  FillUniform(h, rng, 0.9);
  FillUniform(c, rng, 1.0);
  FillUniform(rh, rng, 1.0);
  FillUniform(rc, rng, 1.0);
  refs.push_back({"x", x, dx});
  refs.push_back({"h_prev", h, dh});
  refs.push_back({"c_prev", c, dc});

  auto loss = [&] {
    const auto s = nn::LstmStep(params, x, h, c);
    return Dot(rh, s.h) + Dot(rc, s.c);
  };
  auto backprop = [&] {
    const auto s = nn::LstmStep(params, x, h, c);
    const auto g = nn::LstmStepBackward(params, s, rh, rc, grads);
    for (std::size_t i = 0; i < in; ++i) dx[i] += g.dx[i];
    for (std::size_t i = 0; i < hidden; ++i) {
      dh[i] += g.dh_prev[i];
      dc[i] += g.dc_prev[i];
    }
  };
  return CheckGradients(refs, loss, backprop);
}

// Loss = sum R .* conv(sequence), pre-activation.
inline GradCheckResult GradCheckConv(std::uint64_t seed) {
  nn::Rng rng(seed);
  const std::size_t filters = 2 + seed % 3, kernel = 1 + seed % 4, channels = 1 + seed % 3;
  const std::size_t len = kernel + 3;
  auto params = nn::ConvLayerParams::Zeros(filters, kernel, channels);
  auto grads = nn::ConvLayerParams::Zeros(filters, kernel, channels);
  auto refs = params.Refs("conv", grads);
  for (auto& r : refs) FillUniform(r.value, rng);
  nn::Matrix seq(len, channels), dseq(len, channels), weights(len - kernel + 1, filters);
  FillUniform(seq.data, rng, 1.0);
  FillUniform(weights.data, rng, 1.0);
  refs.push_back({"sequence", seq.data, dseq.data});

  auto loss = [&] { return Dot(nn::Conv1dForward(params, seq).data, weights.data); };
  auto backprop = [&] {
    const auto d = nn::Conv1dBackward(params, seq, weights, grads);
    for (std::size_t i = 0; i < d.data.size(); ++i) dseq.data[i] += d.data[i];
  };
  return CheckGradients(refs, loss, backprop);
}

// Loss = r . (W x + b).
inline GradCheckResult GradCheckDense(std::uint64_t seed) {
  nn::Rng rng(seed);
  const std::size_t in = 2 + seed % 5, out = 1 + seed % 3;
  auto params = nn::Dense::Zeros(in, out);
  auto grads = nn::Dense::Zeros(in, out);
  auto refs = params.Refs("dense", grads);
  for (auto& r : refs) FillUniform(r.value, rng);
  nn::Vec x(in), dx(in), r(out);
  FillUniform(x, rng, 1.0);
  FillUniform(r, rng, 1.0);
  refs.push_back({"x", x, dx});
  auto loss = [&] { return Dot(r, params.Forward(x)); };
  auto backprop = [&] {
    const auto d = params.Backward(x, r, grads);
    for (std::size_t i = 0; i < in; ++i) dx[i] += d[i];
  };
  return CheckGradients(refs, loss, backprop);
}

// Loss = BCE(sigmoid(w . x + b), y): the classifiers' output head.
inline GradCheckResult GradCheckBceHead(std::uint64_t seed) {
  nn::Rng rng(seed);
  const std::size_t in = 2 + seed % 6;
  const int y = static_cast<int>(seed % 2);
  auto params = nn::Dense::Zeros(in, 1);
  auto grads = nn::Dense::Zeros(in, 1);
  auto refs = params.Refs("head", grads);
  for (auto& r : refs) FillUniform(r.value, rng);
  nn::Vec x(in), dx(in);
  FillUniform(x, rng, 1.0);
  refs.push_back({"x", x, dx});
  auto loss = [&] {
    return nn::BinaryCrossEntropy(nn::Sigmoid(params.Forward(x)[0]), y).loss;
  };
  auto backprop = [&] {
    const double p = nn::Sigmoid(params.Forward(x)[0]);
    const double dlogit[1] = {nn::BinaryCrossEntropy(p, y).grad * p * (1.0 - p)};
    const auto d = params.Backward(x, dlogit, grads);
    for (std::size_t i = 0; i < in; ++i) dx[i] += d[i];
  };
  return CheckGradients(refs, loss, backprop);
}

}  // namespace lexstyle::testing

#endif  // LEXSTYLE_TESTS_GRADCHECK_H_
