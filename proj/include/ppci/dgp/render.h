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

// Measurement functions mapping (t, w, u, y, noise) to a 3x28x28 image.
//
// Pen color encodes the treatment (t=0 black, t=1 white), background color
// encodes w (w=0 red, w=1 green), and u=1 shrinks the digit into the central
// 12x12 window, which is what an 8-pixel padding on each side leaves of a
// 28x28 canvas.

#ifndef PPCI_DGP_RENDER_H_
#define PPCI_DGP_RENDER_H_

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "ppci/dgp/dataset.h"

namespace ppci::dgp {

inline constexpr int kPaddedOffset = 8;
inline constexpr int kPaddedSize = kImageHeight - 2 * kPaddedOffset;  // 12
inline constexpr float kGlyphNoiseStd = 0.05f;

using GlyphMask = std::array<bool, kImagePlane>;

// Noise-free seven-segment bitmap of digit `y`; `padded` selects the
// shrunken 12x12 variant.
const GlyphMask& BaseGlyph(int y, bool padded);

// Pixel colors in RGB order.
std::array<float, 3> PenColor(int t);
std::array<float, 3> BackgroundColor(int w);

// Glyph image without pixel noise.
std::vector<float> RenderGlyphNoiseless(int t, int w, int u, int y);

// Glyph image with N(0, 0.05^2) pixel noise clipped to [0, 1]. Identical
// arguments produce bit-identical images. Throws ConfigError for y outside
// 0..9 or non-binary settings.
std::vector<float> RenderGlyph(int t, int w, int u, int y, uint64_t noise_seed);

// Writes a rendered glyph into `out` (kImageSize floats).
void RenderGlyphInto(int t, int w, int u, int y, uint64_t noise_seed,
                     std::span<float> out);

}  // namespace ppci::dgp

#endif  // PPCI_DGP_RENDER_H_
