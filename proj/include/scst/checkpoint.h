// Copyright 2026 The SCST Authors.
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

#ifndef SCST_CHECKPOINT_H_
#define SCST_CHECKPOINT_H_

#include <filesystem>
#include <string>

#include "scst/nn.h"

namespace scst::nn {

// Binary layout, all integers little-endian uint32:
//   magic "SCSTCKPT" | version | tensor count |
//   per tensor: name length | name bytes | rank | dims... | float32 values
inline constexpr char kCheckpointMagic[8] = {'S', 'C', 'S', 'T',
                                             'C', 'K', 'P', 'T'};
inline constexpr uint32_t kCheckpointVersion = 1;

std::string SerializeCheckpoint(const ParamList& params);
// Overwrites the values of `params` in place; names, order and shapes must
// match the stored tensors.
void DeserializeCheckpoint(const std::string& bytes, ParamList& params);

void SaveCheckpoint(const std::filesystem::path& path, const ParamList& params);
void LoadCheckpoint(const std::filesystem::path& path, ParamList& params);

}  // namespace scst::nn

#endif  // SCST_CHECKPOINT_H_
