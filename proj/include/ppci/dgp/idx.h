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

// Reader and writer for big-endian IDX archives of handwritten digits
// (u8 image tensors n x 28 x 28, u8 label vectors), and the renderer that
// colors those digits in place of the synthetic glyphs.

#ifndef PPCI_DGP_IDX_H_
#define PPCI_DGP_IDX_H_

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "ppci/common/error.h"
#include "ppci/dgp/dataset.h"

namespace ppci::dgp {

inline constexpr uint32_t kIdxImageMagic = 0x00000803;
inline constexpr uint32_t kIdxLabelMagic = 0x00000801;

class IdxError : public DataError {
 public:
  enum class Reason { kWrongMagic, kTruncated, kDimensionMismatch };

  IdxError(Reason reason, const std::string& message)
      : DataError(message), reason_(reason) {}
  Reason reason() const { return reason_; }

 private:
  Reason reason_;
};

// Grayscale digits normalized to [0, 1], row-major n x 784.
struct IdxImages {
  size_t count = 0;
  std::vector<float> pixels;
};

IdxImages ParseIdxImages(std::span<const char> bytes);
std::vector<int> ParseIdxLabels(std::span<const char> bytes);

IdxImages LoadIdxImages(const std::string& path);
std::vector<int> LoadIdxLabels(const std::string& path);

std::vector<char> EncodeIdxLabels(std::span<const int> labels);
std::vector<char> EncodeIdxImages(std::span<const uint8_t> pixels, size_t count);

// Digit photos grouped by class.
class DigitBank {
 public:
  // Throws IdxError(kDimensionMismatch) when counts differ.
  DigitBank(IdxImages images, std::vector<int> labels);

  size_t size() const { return labels_.size(); }
  std::span<const float> image(size_t i) const {
    return std::span<const float>(images_.pixels).subspan(i * kImagePlane,
                                                          kImagePlane);
  }
  const std::vector<size_t>& of_class(int y) const { return by_class_.at(y); }

 private:
  IdxImages images_;
  std::vector<int> labels_;
  std::vector<std::vector<size_t>> by_class_;
};

// Loads an image/label file pair.
DigitBank LoadDigitBank(const std::string& images_path,
                        const std::string& labels_path);

// Picks a random photo of class y (driven by `noise_seed`), blends pen and
// background colors by its intensity and shrinks it to the central 12x12
// window when u=1. Throws DataError if the bank has no photo of class y.
void RenderIdxDigitInto(const DigitBank& bank, int t, int w, int u, int y,
                        uint64_t noise_seed, std::span<float> out);

}  // namespace ppci::dgp

#endif  // PPCI_DGP_IDX_H_
