// Copyright 2026 The lutaug Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef LUTAUG_CHECKPOINT_H_
#define LUTAUG_CHECKPOINT_H_

#include <cstdint>
#include <string>

#include "json.hpp"
#include "lutaug/tensor.h"

namespace lutaug {

inline constexpr char kCheckpointMagic[8] = {'L', 'U', 'T', 'A',
                                             'U', 'G', 'C', 'K'};
inline constexpr uint32_t kCheckpointVersion = 1;

// Binary layout, all integers and floats little-endian:
//   magic[8] "LUTAUGCK" | u32 version | u64 manifest length | manifest JSON |
//   u32 block count | per block: u32 name length, name, u32 rank,
//   i64 dims[rank], f64 values[product(dims)].
struct Checkpoint {
  // Hyper-parameters and model kind ("syconet", "toy_harmonizer").
  nlohmann::json manifest = nlohmann::json::object();
  ParameterSet params;
};

std::string EncodeCheckpoint(const Checkpoint& checkpoint);
// `source` names the input in error messages.
Checkpoint DecodeCheckpoint(const std::string& bytes,
                            const std::string& source = "<memory>");

void SaveCheckpoint(const std::string& path, const Checkpoint& checkpoint);
Checkpoint LoadCheckpoint(const std::string& path);

}  // namespace lutaug

#endif  // LUTAUG_CHECKPOINT_H_
