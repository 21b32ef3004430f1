/*
 * Copyright 2026 The PPCI Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

// Predictor checkpoints: "PPNN", u16 version, u8 layer count, u32 layer
// sizes, then per layer the weights (row-major, in x out) and the biases as
// little-endian f32.

#ifndef PPCI_NN_CHECKPOINT_H_
#define PPCI_NN_CHECKPOINT_H_

#include <span>
#include <string>
#include <vector>

#include "ppci/nn/mlp.h"

namespace ppci::nn {

inline constexpr uint16_t kCheckpointVersion = 1;

std::vector<char> EncodeCheckpoint(const Predictor& predictor);
// Throws DataError on bad magic, version, sizes or truncation.
Predictor DecodeCheckpoint(std::span<const char> bytes);

void SaveCheckpoint(const Predictor& predictor, const std::string& path);
Predictor LoadCheckpoint(const std::string& path);

}  // namespace ppci::nn

#endif  // PPCI_NN_CHECKPOINT_H_
