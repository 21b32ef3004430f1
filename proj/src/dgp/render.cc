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

#include "ppci/dgp/render.h"

#include <algorithm>
#include <cmath>
#include <random>
#include <string_view>

#include "ppci/common/error.h"
#include "ppci/common/random.h"

namespace ppci::dgp {

namespace {

// Segments lit per digit, in the usual a..g labelling:
//    aaa
//   f   b
//    ggg
//   e   c
//    ddd
constexpr std::array<std::string_view, 10> kSegments = {
    "abcdef", "bc", "abdeg", "abcdg", "bcfg",
    "acdfg", "acdefg", "abc", "abcdefg", "abcdfg"};

// Segment geometry in unit-square coordinates.
constexpr double kLeft = 0.25, kRight = 0.75;
constexpr double kTop = 0.15, kMiddle = 0.5, kBottom = 0.85;
constexpr double kStroke = 0.1;

bool OnSegment(char segment, double x, double y) {
  constexpr double h = kStroke / 2;
  auto horizontal = [&](double yc) {
    return std::abs(y - yc) <= h && x >= kLeft - h && x <= kRight + h;
  };
  auto vertical = [&](double xc, double y0, double y1) {
    return std::abs(x - xc) <= h && y >= y0 - h && y <= y1 + h;
  };
  switch (segment) {
    case 'a':
      return horizontal(kTop);
    case 'g':
      return horizontal(kMiddle);
    case 'd':
      return horizontal(kBottom);
    case 'f':
      return vertical(kLeft, kTop, kMiddle);
    case 'b':
      return vertical(kRight, kTop, kMiddle);
    case 'e':
      return vertical(kLeft, kMiddle, kBottom);
    case 'c':
      return vertical(kRight, kMiddle, kBottom);
  }
  return false;
}

GlyphMask BuildGlyph(int y, bool padded) {
  GlyphMask mask{};
  const int offset = padded ? kPaddedOffset : 0;
  const int size = padded ? kPaddedSize : kImageHeight;
  for (int r = 0; r < size; ++r) {
    for (int c = 0; c < size; ++c) {
      const double fx = (c + 0.5) / size;
      const double fy = (r + 0.5) / size;
      bool lit = false;
      for (const char s : kSegments[y]) lit = lit || OnSegment(s, fx, fy);
      mask[(r + offset) * kImageWidth + (c + offset)] = lit;
    }
  }
  return mask;
}

struct GlyphTable {
  std::array<GlyphMask, 10> full;
  std::array<GlyphMask, 10> padded;
  GlyphTable() {
    for (int y = 0; y < 10; ++y) {
      full[y] = BuildGlyph(y, false);
      padded[y] = BuildGlyph(y, true);
    }
  }
};

void CheckArguments(int t, int w, int u, int y) {
  if (y < 0 || y > 9) {
    throw ConfigError("digit " + std::to_string(y) + " outside 0..9");
  }
  if ((t | w | u) & ~1) throw ConfigError("settings t, w, u must be binary");
}

void Paint(int t, int w, int u, int y, std::span<float> out) {
  const GlyphMask& mask = BaseGlyph(y, u == 1);
  const auto pen = PenColor(t);
  const auto background = BackgroundColor(w);
  for (int ch = 0; ch < kImageChannels; ++ch) {
    float* plane = out.data() + ch * kImagePlane;
    for (size_t p = 0; p < kImagePlane; ++p) {
      plane[p] = mask[p] ? pen[ch] : background[ch];
    }
  }
}

}  // namespace

const GlyphMask& BaseGlyph(int y, bool padded) {
  static const GlyphTable table;
  return padded ? table.padded.at(y) : table.full.at(y);
}

std::array<float, 3> PenColor(int t) {
  return t == 0 ? std::array<float, 3>{0.f, 0.f, 0.f}
                : std::array<float, 3>{1.f, 1.f, 1.f};
}

std::array<float, 3> BackgroundColor(int w) {
  return w == 0 ? std::array<float, 3>{1.f, 0.f, 0.f}
                : std::array<float, 3>{0.f, 1.f, 0.f};
}

std::vector<float> RenderGlyphNoiseless(int t, int w, int u, int y) {
  CheckArguments(t, w, u, y);
  std::vector<float> image(kImageSize);
  Paint(t, w, u, y, image);
  return image;
}

void RenderGlyphInto(int t, int w, int u, int y, uint64_t noise_seed,
                     std::span<float> out) {
  CheckArguments(t, w, u, y);
  Paint(t, w, u, y, out);
  RandomEngine rng(noise_seed);
  std::normal_distribution<float> noise(0.0f, kGlyphNoiseStd);
  for (float& v : out) v = std::clamp(v + noise(rng), 0.0f, 1.0f);
}

std::vector<float> RenderGlyph(int t, int w, int u, int y,
                               uint64_t noise_seed) {
  std::vector<float> image(kImageSize);
  RenderGlyphInto(t, w, u, y, noise_seed, image);
  return image;
}

}  // namespace ppci::dgp
