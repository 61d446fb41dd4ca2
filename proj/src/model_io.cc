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

#include "lexstyle/model_io.h"

#include <algorithm>
#include <bit>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>

#include "lexstyle/errors.h"
#include "lexstyle/io.h"

namespace lexstyle {

namespace {

void PutU32(std::ostream& out, std::uint32_t v) {
  char b[4];
  for (int i = 0; i < 4; ++i) b[i] = static_cast<char>((v >> (8 * i)) & 0xFF);
  out.write(b, 4);
}

void PutU64(std::ostream& out, std::uint64_t v) {
  char b[8];
  for (int i = 0; i < 8; ++i) b[i] = static_cast<char>((v >> (8 * i)) & 0xFF);
  out.write(b, 8);
}

void PutString(std::ostream& out, const std::string& s) {
  PutU32(out, static_cast<std::uint32_t>(s.size()));
  out.write(s.data(), static_cast<std::streamsize>(s.size()));
}

void ReadBytes(std::istream& in, char* dst, std::size_t n) {
  in.read(dst, static_cast<std::streamsize>(n));
  if (static_cast<std::size_t>(in.gcount()) != n) throw ParseError("truncated model file", 0);
}

std::uint32_t GetU32(std::istream& in) {
  unsigned char b[4];
  ReadBytes(in, reinterpret_cast<char*>(b), 4);
  std::uint32_t v = 0;
  for (int i = 3; i >= 0; --i) v = (v << 8) | b[i];
  return v;
}

std::uint64_t GetU64(std::istream& in) {
  unsigned char b[8];
  ReadBytes(in, reinterpret_cast<char*>(b), 8);
  std::uint64_t v = 0;
  for (int i = 7; i >= 0; --i) v = (v << 8) | b[i];
  return v;
}

std::string GetString(std::istream& in) {
  const std::uint32_t n = GetU32(in);
  std::string s(n, '\0');
  ReadBytes(in, s.data(), n);
  return s;
}

}  // namespace

const ModelTensor& ModelFile::tensor(const std::string& name) const {
  for (const auto& t : tensors) {
    if (t.name == name) return t;
  }
  throw ParseError("model has no tensor \"" + name + "\"", 0);
}

void WriteModel(std::ostream& out, const ModelFile& model) {
  out.write(kModelMagic, sizeof(kModelMagic));
  PutU32(out, kModelFormatVersion);
  PutString(out, model.kind);
  PutString(out, model.meta.dump());
  PutU32(out, static_cast<std::uint32_t>(model.tensors.size()));
  for (const auto& t : model.tensors) {
    std::uint64_t elements = 1;
    for (auto d : t.shape) elements *= d;
    if (elements != t.data.size()) {
      throw ContractError("tensor " + t.name + " shape does not match its data");
    }
    PutString(out, t.name);
    PutString(out, t.layer);
    PutU32(out, static_cast<std::uint32_t>(t.shape.size()));
    for (auto d : t.shape) PutU64(out, d);
    for (double v : t.data) PutU64(out, std::bit_cast<std::uint64_t>(v));
  }
  if (!out) throw Error("failed writing model");
}

ModelFile ReadModel(std::istream& in) {
  char magic[sizeof(kModelMagic)];
  ReadBytes(in, magic, sizeof(magic));
  if (std::memcmp(magic, kModelMagic, sizeof(magic)) != 0) {
    throw ParseError("not a model file (bad magic)", 0);
  }
  const std::uint32_t version = GetU32(in);
  if (version != kModelFormatVersion) {
    throw ParseError("unsupported model format version " + std::to_string(version), 0);
  }
  ModelFile model;
  model.kind = GetString(in);
  try {
    model.meta = nlohmann::json::parse(GetString(in));
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("bad model metadata: ") + e.what(), 0);
  }
  const std::uint32_t count = GetU32(in);
  for (std::uint32_t k = 0; k < count; ++k) {
    ModelTensor t;
    t.name = GetString(in);
    t.layer = GetString(in);
    const std::uint32_t rank = GetU32(in);
    std::uint64_t elements = 1;
    for (std::uint32_t r = 0; r < rank; ++r) {
      t.shape.push_back(GetU64(in));
      elements *= t.shape.back();
    }
    if (elements > (std::uint64_t{1} << 34)) throw ParseError("tensor too large", 0);
    t.data.resize(elements);
    for (auto& v : t.data) v = std::bit_cast<double>(GetU64(in));
    model.tensors.push_back(std::move(t));
  }
  return model;
}

void SaveModel(const std::filesystem::path& path, const ModelFile& model) {
  WriteFileAtomically(path, [&](std::ostream& out) { WriteModel(out, model); });
}

ModelFile LoadModel(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open model " + path.string());
  return ReadModel(in);
}

nlohmann::json ToJson(const nn::TrainConfig& c) {
  return {{"epochs", c.epochs},
          {"learning_rate", c.learning_rate},
          {"batch_size", c.batch_size},
          {"dropout_rate", c.dropout_rate},
          {"recurrent_dropout", c.recurrent_dropout},
          {"max_pool_size", c.max_pool_size},
          {"hidden_units", c.hidden_units},
          {"embedding_dim", c.embedding_dim},
          {"filters", c.filters},
          {"kernel_sizes", c.kernel_sizes},
          {"max_length", c.max_length},
          {"seed", c.seed}};
}

nn::TrainConfig TrainConfigFromJson(const nlohmann::json& j) {
  nn::TrainConfig c;
  try {
    c.epochs = j.value("epochs", c.epochs);
    c.learning_rate = j.value("learning_rate", c.learning_rate);
    c.batch_size = j.value("batch_size", c.batch_size);
    c.dropout_rate = j.value("dropout_rate", c.dropout_rate);
    c.recurrent_dropout = j.value("recurrent_dropout", c.recurrent_dropout);
    c.max_pool_size = j.value("max_pool_size", c.max_pool_size);
    c.hidden_units = j.value("hidden_units", c.hidden_units);
    c.embedding_dim = j.value("embedding_dim", c.embedding_dim);
    c.filters = j.value("filters", c.filters);
    c.kernel_sizes = j.value("kernel_sizes", c.kernel_sizes);
    c.max_length = j.value("max_length", c.max_length);
    c.seed = j.value("seed", c.seed);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("bad train config: ") + e.what(), 0);
  }
  return c;
}

void CopyTensor(const ModelFile& model, const std::string& name,
                std::span<const std::uint64_t> shape, std::span<double> dst) {
  const ModelTensor& t = model.tensor(name);
  if (!std::equal(t.shape.begin(), t.shape.end(), shape.begin(), shape.end()) ||
      t.data.size() != dst.size()) {
    throw ParseError("tensor \"" + name + "\" has an unexpected shape", 0);
  }
  std::copy(t.data.begin(), t.data.end(), dst.begin());
}

std::vector<ModelTensor> TensorsFromParams(std::span<const nn::ParamRef> params) {
  std::vector<ModelTensor> out;
  out.reserve(params.size());
  for (const auto& p : params) {
    out.push_back({p.name, p.layer, p.shape, std::vector<double>(p.value.begin(), p.value.end())});
  }
  return out;
}

void LoadParams(const ModelFile& model, std::span<const nn::ParamRef> params) {
  for (const auto& p : params) CopyTensor(model, p.name, p.shape, p.value);
}

}  // namespace lexstyle
