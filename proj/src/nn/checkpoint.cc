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

#include "ppci/nn/checkpoint.h"

#include "ppci/common/binary_io.h"
#include "ppci/common/error.h"

namespace ppci::nn {

namespace {

constexpr std::string_view kMagic = "PPNN";

void Truncated() { throw DataError("checkpoint truncated"); }

}  // namespace

std::vector<char> EncodeCheckpoint(const Predictor& predictor) {
  ByteWriter out;
  out.Bytes(kMagic);
  out.U16Le(kCheckpointVersion);
  const auto& sizes = predictor.layer_sizes();
  out.U8(static_cast<uint8_t>(sizes.size()));
  for (const int s : sizes) out.U32Le(static_cast<uint32_t>(s));
  for (size_t l = 0; l < predictor.num_layers(); ++l) {
    const auto& w = predictor.weight(l);
    for (Eigen::Index i = 0; i < w.rows(); ++i) {
      for (Eigen::Index j = 0; j < w.cols(); ++j) out.F32Le(w(i, j));
    }
    const auto& b = predictor.bias(l);
    for (Eigen::Index j = 0; j < b.size(); ++j) out.F32Le(b(j));
  }
  return out.buffer();
}

Predictor DecodeCheckpoint(std::span<const char> bytes) {
  ByteReader in(bytes);
  std::string magic;
  if (!in.Bytes(kMagic.size(), &magic)) Truncated();
  if (magic != kMagic) throw DataError("not a predictor checkpoint (bad magic)");
  uint16_t version = 0;
  if (!in.U16Le(&version)) Truncated();
  if (version != kCheckpointVersion) {
    throw DataError("unsupported checkpoint version " + std::to_string(version));
  }
  uint8_t count = 0;
  if (!in.U8(&count)) Truncated();
  if (count < 2) throw DataError("checkpoint declares fewer than two layers");
  std::vector<int> sizes(count);
  for (int& s : sizes) {
    uint32_t v = 0;
    if (!in.U32Le(&v)) Truncated();
    if (v == 0 || v > (1u << 24)) {
      throw DataError("checkpoint layer size " + std::to_string(v) +
                      " out of range");
    }
    s = static_cast<int>(v);
  }
  Predictor predictor(sizes);
  for (size_t l = 0; l < predictor.num_layers(); ++l) {
    auto& w = predictor.weight(l);
    for (Eigen::Index i = 0; i < w.rows(); ++i) {
      for (Eigen::Index j = 0; j < w.cols(); ++j) {
        if (!in.F32Le(&w(i, j))) Truncated();
      }
    }
    auto& b = predictor.bias(l);
    for (Eigen::Index j = 0; j < b.size(); ++j) {
      if (!in.F32Le(&b(j))) Truncated();
    }
  }
  if (in.remaining() != 0) {
    throw DataError("checkpoint has " + std::to_string(in.remaining()) +
                    " trailing bytes");
  }
  return predictor;
}

void SaveCheckpoint(const Predictor& predictor, const std::string& path) {
  WriteFileBytes(path, EncodeCheckpoint(predictor));
}

Predictor LoadCheckpoint(const std::string& path) {
  return DecodeCheckpoint(ReadFileBytes(path));
}

}  // namespace ppci::nn
