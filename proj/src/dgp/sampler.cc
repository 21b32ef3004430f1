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

#include "ppci/dgp/sampler.h"

#include <random>

#include "ppci/common/error.h"
#include "ppci/common/random.h"
#include "ppci/dgp/render.h"

namespace ppci::dgp {

Draws SampleDraws(const DgpSpec& spec, size_t n, uint64_t seed) {
  spec.Validate();
  if (n < 1) throw ConfigError("sample size must be at least 1");

  RandomEngine rng(DeriveSeed(seed, "covariates"));
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_int_distribution<int> four(0, 3);
  std::uniform_int_distribution<int> seven(0, 6);
  auto bernoulli = [&](double p) { return unit(rng) < p ? 1 : 0; };

  Draws draws;
  draws.t.resize(n);
  draws.w.resize(n);
  draws.u.resize(n);
  draws.y.resize(n);
  for (size_t i = 0; i < n; ++i) {
    const int w = bernoulli(spec.p_w);
    const int u = bernoulli(spec.p_u);
    const int t = spec.randomized ? bernoulli(0.5) : bernoulli(w ? 0.9 : 0.1);
    int y = 0;
    switch (spec.effect) {
      case Effect::kLinearTraining: {
        const int a = four(rng), b = four(rng), c = four(rng);
        y = w * a + t * b + u * c;
        break;
      }
      case Effect::kLinearNull: {
        const int a = four(rng), b = four(rng), c = four(rng);
        y = w * a + b + u * c;
        break;
      }
      case Effect::kNonlinear: {
        const int a = four(rng), b = seven(rng);
        y = (t | u) * a + b;
        break;
      }
    }
    draws.t[i] = static_cast<uint8_t>(t);
    draws.w[i] = static_cast<uint8_t>(w);
    draws.u[i] = static_cast<uint8_t>(u);
    draws.y[i] = y;
  }
  return draws;
}

uint64_t UnitNoiseSeed(uint64_t seed, size_t unit) {
  return DeriveSeed(DeriveSeed(seed, "measurement"), unit);
}

Dataset Render(const DgpSpec& spec, Draws draws, uint64_t seed,
               const DigitBank* bank) {
  if (spec.renderer == Renderer::kIdxDigits && bank == nullptr) {
    throw ConfigError("idx_digits renderer requires a digit archive");
  }
  const size_t n = draws.size();
  std::vector<float> images(n * kImageSize);
  for (size_t i = 0; i < n; ++i) {
    std::span<float> out(images.data() + i * kImageSize, kImageSize);
    const uint64_t noise = UnitNoiseSeed(seed, i);
    if (spec.renderer == Renderer::kGlyph) {
      RenderGlyphInto(draws.t[i], draws.w[i], draws.u[i], draws.y[i], noise,
                      out);
    } else {
      RenderIdxDigitInto(*bank, draws.t[i], draws.w[i], draws.u[i],
                         draws.y[i], noise, out);
    }
  }
  return Dataset(std::move(draws.t), std::move(draws.w), std::move(draws.u),
                 std::move(draws.y), std::move(images));
}

Dataset Sample(const DgpSpec& spec, size_t n, uint64_t seed,
               const DigitBank* bank) {
  return Render(spec, SampleDraws(spec, n, seed), seed, bank);
}

}  // namespace ppci::dgp
