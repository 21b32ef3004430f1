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

// Dataset container file:
//
//   "PPCI"                 4 bytes
//   version                u16 LE (currently 1)
//   flags                  u8, bit0 = labels present
//   n                      u32 LE
//   channels/height/width  u8 each
//   n records of           t:u8 w:u8 u:u8 y:u8 (0xFF if absent)
//                          c*h*w pixels as f32 LE
//
// Sealed labels of an unlabeled dataset travel in a separate IDX label file.

#ifndef PPCI_DGP_DATASET_IO_H_
#define PPCI_DGP_DATASET_IO_H_

#include <span>
#include <string>
#include <vector>

#include "ppci/dgp/dataset.h"

namespace ppci::dgp {

inline constexpr uint16_t kDatasetFormatVersion = 1;

std::vector<char> EncodeDataset(const Dataset& dataset);
// Throws DataError on bad magic, unsupported version or shape, truncation
// and inconsistent label flags.
Dataset DecodeDataset(std::span<const char> bytes);

void WriteDataset(const std::string& path, const Dataset& dataset);
Dataset ReadDataset(const std::string& path);

void WriteSealedLabels(const std::string& path, const SealedLabels& labels);
SealedLabels ReadSealedLabels(const std::string& path);

}  // namespace ppci::dgp

#endif  // PPCI_DGP_DATASET_IO_H_
