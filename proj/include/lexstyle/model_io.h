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

// Flat, versioned model container shared by both classifiers. The byte
// layout is described in docs/model_format.md.

#ifndef LEXSTYLE_MODEL_IO_H_
#define LEXSTYLE_MODEL_IO_H_

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "lexstyle/nn.h"

namespace lexstyle {

inline constexpr char kModelMagic[8] = {'L', 'X', 'S', 'M', 'O', 'D', 'E', 'L'};
inline constexpr std::uint32_t kModelFormatVersion = 1;

struct ModelTensor {
  std::string name;
  std::string layer;  // "embedding", "conv1d", "lstm", "dense"
  std::vector<std::uint64_t> shape;
  std::vector<double> data;  // row-major

  bool operator==(const ModelTensor&) const = default;
};

struct ModelFile {
  std::string kind;     // "doc_classifier" | "char_token_classifier"
  nlohmann::json meta;  // train config, vocabularies, seed, training history
  std::vector<ModelTensor> tensors;

  const ModelTensor& tensor(const std::string& name) const;
};

void WriteModel(std::ostream& out, const ModelFile& model);
ModelFile ReadModel(std::istream& in);
// Writes to a sibling temp file and renames over `path`.
void SaveModel(const std::filesystem::path& path, const ModelFile& model);
ModelFile LoadModel(const std::filesystem::path& path);

nlohmann::json ToJson(const nn::TrainConfig& config);
nn::TrainConfig TrainConfigFromJson(const nlohmann::json& j);

// One tensor per parameter, named and shaped as the refs describe.
std::vector<ModelTensor> TensorsFromParams(std::span<const nn::ParamRef> params);
// Fills every parameter from the tensor of the same name.
void LoadParams(const ModelFile& model, std::span<const nn::ParamRef> params);

// Copies a tensor's data into `dst`, checking name, element count and shape.
void CopyTensor(const ModelFile& model, const std::string& name,
                std::span<const std::uint64_t> shape, std::span<double> dst);

}  // namespace lexstyle

#endif  // LEXSTYLE_MODEL_IO_H_
