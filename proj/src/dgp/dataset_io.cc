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

#include "ppci/dgp/dataset_io.h"

#include "ppci/common/binary_io.h"
#include "ppci/common/error.h"
#include "ppci/dgp/idx.h"

namespace ppci::dgp {

namespace {

constexpr char kMagic[] = "PPCI";
constexpr uint8_t kAbsentLabel = 0xFF;

[[noreturn]] void Truncated() { throw DataError("dataset file truncated"); }

}  // namespace

std::vector<char> EncodeDataset(const Dataset& dataset) {
  ByteWriter out;
  out.Bytes(std::string_view(kMagic, 4));
  out.U16Le(kDatasetFormatVersion);
  out.U8(dataset.has_labels() ? 1 : 0);
  out.U32Le(static_cast<uint32_t>(dataset.size()));
  out.U8(kImageChannels);
  out.U8(kImageHeight);
  out.U8(kImageWidth);
  for (size_t i = 0; i < dataset.size(); ++i) {
    const UnitView unit = dataset.unit(i);
    out.U8(static_cast<uint8_t>(unit.t));
    out.U8(static_cast<uint8_t>(unit.w));
    out.U8(static_cast<uint8_t>(unit.u));
    out.U8(unit.y ? static_cast<uint8_t>(*unit.y) : kAbsentLabel);
    for (const float v : unit.x) out.F32Le(v);
  }
  return out.buffer();
}

Dataset DecodeDataset(std::span<const char> bytes) {
  ByteReader in(bytes);
  std::string magic;
  if (!in.Bytes(4, &magic)) Truncated();
  if (magic != std::string_view(kMagic, 4)) {
    throw DataError("not a dataset file (bad magic)");
  }
  uint16_t version;
  uint8_t flags;
  uint32_t n;
  uint8_t channels, height, width;
  if (!in.U16Le(&version) || !in.U8(&flags) || !in.U32Le(&n) ||
      !in.U8(&channels) || !in.U8(&height) || !in.U8(&width)) {
    Truncated();
  }
  if (version != kDatasetFormatVersion) {
    throw DataError("unsupported dataset format version " +
                    std::to_string(version));
  }
  if (channels != kImageChannels || height != kImageHeight ||
      width != kImageWidth) {
    throw DataError("unsupported image shape " + std::to_string(channels) +
                    "x" + std::to_string(height) + "x" + std::to_string(width));
  }
  const bool labeled = flags & 1;
  const size_t record = 4 + 4 * kImageSize;
  if (in.remaining() < static_cast<size_t>(n) * record) Truncated();

  std::vector<uint8_t> t(n), w(n), u(n);
  std::vector<int> y;
  if (labeled) y.resize(n);
  std::vector<float> images(static_cast<size_t>(n) * kImageSize);
  for (uint32_t i = 0; i < n; ++i) {
    uint8_t label;
    in.U8(&t[i]);
    in.U8(&w[i]);
    in.U8(&u[i]);
    in.U8(&label);
    if (labeled == (label == kAbsentLabel)) {
      throw DataError("record " + std::to_string(i) +
                      " label presence disagrees with the header flag");
    }
    if (labeled) y[i] = label;
    for (size_t p = 0; p < kImageSize; ++p) in.F32Le(&images[i * kImageSize + p]);
  }
  std::optional<std::vector<int>> labels;
  if (labeled) labels = std::move(y);
  return Dataset(std::move(t), std::move(w), std::move(u), std::move(labels),
                 std::move(images));
}

void WriteDataset(const std::string& path, const Dataset& dataset) {
  WriteFileBytes(path, EncodeDataset(dataset));
}

Dataset ReadDataset(const std::string& path) {
  return DecodeDataset(ReadFileBytes(path));
}

void WriteSealedLabels(const std::string& path, const SealedLabels& labels) {
  WriteFileBytes(path, EncodeIdxLabels(labels.Reveal()));
}

SealedLabels ReadSealedLabels(const std::string& path) {
  return SealedLabels(LoadIdxLabels(path));
}

}  // namespace ppci::dgp
