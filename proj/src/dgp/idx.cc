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

#include "ppci/dgp/idx.h"

#include <algorithm>
#include <sstream>

#include "ppci/common/binary_io.h"
#include "ppci/common/random.h"
#include "ppci/dgp/render.h"

namespace ppci::dgp {

namespace {

std::string Hex(uint32_t v) {
  std::ostringstream out;
  out << "0x" << std::hex << v;
  return out.str();
}

uint32_t ReadMagic(ByteReader& reader, uint32_t expected) {
  uint32_t magic;
  if (!reader.U32Be(&magic)) {
    throw IdxError(IdxError::Reason::kTruncated, "IDX header truncated");
  }
  if (magic != expected) {
    throw IdxError(IdxError::Reason::kWrongMagic,
                   "IDX magic " + Hex(magic) + ", expected " + Hex(expected));
  }
  return magic;
}

uint32_t ReadDim(ByteReader& reader) {
  uint32_t dim;
  if (!reader.U32Be(&dim)) {
    throw IdxError(IdxError::Reason::kTruncated, "IDX dimensions truncated");
  }
  return dim;
}

void WriteBe32(std::vector<char>& out, uint32_t v) {
  for (int shift = 24; shift >= 0; shift -= 8) {
    out.push_back(static_cast<char>((v >> shift) & 0xff));
  }
}

}  // namespace

IdxImages ParseIdxImages(std::span<const char> bytes) {
  ByteReader reader(bytes);
  ReadMagic(reader, kIdxImageMagic);
  const uint32_t n = ReadDim(reader);
  const uint32_t rows = ReadDim(reader);
  const uint32_t cols = ReadDim(reader);
  if (rows != kImageHeight || cols != kImageWidth) {
    throw IdxError(IdxError::Reason::kDimensionMismatch,
                   "IDX images are " + std::to_string(rows) + "x" +
                       std::to_string(cols) + ", expected 28x28");
  }
  const size_t payload = static_cast<size_t>(n) * kImagePlane;
  if (reader.remaining() < payload) {
    throw IdxError(IdxError::Reason::kTruncated,
                   "IDX image payload has " +
                       std::to_string(reader.remaining()) + " bytes, expected " +
                       std::to_string(payload));
  }
  IdxImages images;
  images.count = n;
  images.pixels.resize(payload);
  for (size_t i = 0; i < payload; ++i) {
    uint8_t v = 0;
    reader.U8(&v);
    images.pixels[i] = static_cast<float>(v) / 255.0f;
  }
  return images;
}

std::vector<int> ParseIdxLabels(std::span<const char> bytes) {
  ByteReader reader(bytes);
  ReadMagic(reader, kIdxLabelMagic);
  const uint32_t n = ReadDim(reader);
  if (reader.remaining() < n) {
    throw IdxError(IdxError::Reason::kTruncated,
                   "IDX label payload has " + std::to_string(reader.remaining()) +
                       " bytes, expected " + std::to_string(n));
  }
  std::vector<int> labels(n);
  for (uint32_t i = 0; i < n; ++i) {
    uint8_t v = 0;
    reader.U8(&v);
    labels[i] = v;
  }
  return labels;
}

IdxImages LoadIdxImages(const std::string& path) {
  return ParseIdxImages(ReadFileBytes(path));
}

std::vector<int> LoadIdxLabels(const std::string& path) {
  return ParseIdxLabels(ReadFileBytes(path));
}

std::vector<char> EncodeIdxLabels(std::span<const int> labels) {
  std::vector<char> out;
  WriteBe32(out, kIdxLabelMagic);
  WriteBe32(out, static_cast<uint32_t>(labels.size()));
  for (const int y : labels) out.push_back(static_cast<char>(y & 0xff));
  return out;
}

std::vector<char> EncodeIdxImages(std::span<const uint8_t> pixels,
                                  size_t count) {
  std::vector<char> out;
  WriteBe32(out, kIdxImageMagic);
  WriteBe32(out, static_cast<uint32_t>(count));
  WriteBe32(out, kImageHeight);
  WriteBe32(out, kImageWidth);
  for (const uint8_t v : pixels) out.push_back(static_cast<char>(v));
  return out;
}

DigitBank::DigitBank(IdxImages images, std::vector<int> labels)
    : images_(std::move(images)), labels_(std::move(labels)), by_class_(10) {
  if (images_.count != labels_.size()) {
    throw IdxError(IdxError::Reason::kDimensionMismatch,
                   "image file holds " + std::to_string(images_.count) +
                       " digits but label file holds " +
                       std::to_string(labels_.size()));
  }
  for (size_t i = 0; i < labels_.size(); ++i) {
    if (labels_[i] < 0 || labels_[i] > 9) {
      throw DataError("digit label " + std::to_string(labels_[i]) +
                      " outside 0..9");
    }
    by_class_[labels_[i]].push_back(i);
  }
}

DigitBank LoadDigitBank(const std::string& images_path,
                        const std::string& labels_path) {
  return DigitBank(LoadIdxImages(images_path), LoadIdxLabels(labels_path));
}

void RenderIdxDigitInto(const DigitBank& bank, int t, int w, int u, int y,
                        uint64_t noise_seed, std::span<float> out) {
  if (y < 0 || y > 9 || bank.of_class(y).empty()) {
    throw DataError("digit archive has no photo of class " + std::to_string(y));
  }
  const auto& pool = bank.of_class(y);
  RandomEngine rng(noise_seed);
  std::uniform_int_distribution<size_t> pick(0, pool.size() - 1);
  const std::span<const float> photo = bank.image(pool[pick(rng)]);

  // Intensity canvas, optionally box-downsampled into the padded window.
  std::array<float, kImagePlane> ink{};
  if (u == 0) {
    std::copy(photo.begin(), photo.end(), ink.begin());
  } else {
    const double scale = static_cast<double>(kImageHeight) / kPaddedSize;
    for (int r = 0; r < kPaddedSize; ++r) {
      for (int c = 0; c < kPaddedSize; ++c) {
        const int r0 = static_cast<int>(r * scale);
        const int r1 = std::max(r0 + 1, static_cast<int>((r + 1) * scale));
        const int c0 = static_cast<int>(c * scale);
        const int c1 = std::max(c0 + 1, static_cast<int>((c + 1) * scale));
        double sum = 0.0;
        for (int rr = r0; rr < r1; ++rr) {
          for (int cc = c0; cc < c1; ++cc) sum += photo[rr * kImageWidth + cc];
        }
        ink[(r + kPaddedOffset) * kImageWidth + (c + kPaddedOffset)] =
            static_cast<float>(sum / ((r1 - r0) * (c1 - c0)));
      }
    }
  }

  const auto pen = PenColor(t);
  const auto background = BackgroundColor(w);
  for (int ch = 0; ch < kImageChannels; ++ch) {
    for (size_t p = 0; p < kImagePlane; ++p) {
      const float a = ink[p];
      out[ch * kImagePlane + p] =
          std::clamp(a * pen[ch] + (1.0f - a) * background[ch], 0.0f, 1.0f);
    }
  }
}

}  // namespace ppci::dgp
