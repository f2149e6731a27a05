// Copyright 2026 The lide Authors
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

#ifndef LIDE_MODEL_IO_H_
#define LIDE_MODEL_IO_H_

#include <memory>
#include <string>
#include <string_view>

#include "lide/classifier.h"

namespace lide {

inline constexpr int kModelFormatVersion = 1;

// Model files are single JSON documents carrying the format version, model
// type, registry snapshot, label list, feature spec, vocabulary, parameters
// and training configuration. Doubles are written with round-trip
// precision, so load(save(m)) predicts bit-for-bit like m.
//
// An ensemble is written as a manifest that references one file per member
// (`<path>.member<k>`, stored relative to the manifest) plus the inline
// meta model.
void SaveModel(const Classifier& model, const std::string& path);

// Throws lide::Error naming the first invalid field path, e.g.
// "model file x: invalid field /params/bias/2: expected number".
std::shared_ptr<const Classifier> LoadModel(const std::string& path);

// Registry document in the same layout as a model file's "registry"
// section: {"groups": [{"name", "base_tag", "languages": [{"code",
// "display_name"}]}]}.
std::shared_ptr<const Registry> LoadRegistryFile(const std::string& path);

// In-memory forms. Ensembles cannot be serialized this way.
std::string SerializeModel(const Classifier& model);
std::shared_ptr<const Classifier> DeserializeModel(std::string_view text,
                                                   const std::string& origin =
                                                       "<memory>");

}  // namespace lide

#endif  // LIDE_MODEL_IO_H_
