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

#ifndef PPCI_DGP_SAMPLER_H_
#define PPCI_DGP_SAMPLER_H_

#include <cstdint>
#include <vector>

#include "ppci/dgp/dataset.h"
#include "ppci/dgp/dgp_spec.h"
#include "ppci/dgp/idx.h"

namespace ppci::dgp {

// Settings and outcomes of n units without rendered measurements.
struct Draws {
  std::vector<uint8_t> t, w, u;
  std::vector<int> y;

  size_t size() const { return t.size(); }
};

// I.i.d. draws of (W, U, T, Y). Deterministic given seed; matches the
// settings and labels of Sample() with the same arguments.
Draws SampleDraws(const DgpSpec& spec, size_t n, uint64_t seed);

// Labeled dataset with rendered images. The idx_digits renderer needs a
// digit bank; passing none raises ConfigError.
Dataset Sample(const DgpSpec& spec, size_t n, uint64_t seed,
               const DigitBank* bank = nullptr);

// Renders images for existing draws.
Dataset Render(const DgpSpec& spec, Draws draws, uint64_t seed,
               const DigitBank* bank = nullptr);

// Per-unit measurement noise seed.
uint64_t UnitNoiseSeed(uint64_t seed, size_t unit);

}  // namespace ppci::dgp

#endif  // PPCI_DGP_SAMPLER_H_
