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

#ifndef PPCI_COMMON_RANDOM_H_
#define PPCI_COMMON_RANDOM_H_

#include <cstdint>
#include <random>
#include <string_view>

namespace ppci {

using RandomEngine = std::mt19937_64;

// splitmix64 finalizer.
inline uint64_t MixBits(uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Derives an independent sub-stream seed from a parent seed and a stage
// label ("covariates", "noise", "shuffle", ...). The label is hashed with
// FNV-1a so the mapping is stable across platforms and runs.
inline uint64_t DeriveSeed(uint64_t parent, std::string_view label) {
  uint64_t h = 0xcbf29ce484222325ULL;
  for (const char c : label) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ULL;
  }
  return MixBits(MixBits(parent) ^ h);
}

inline uint64_t DeriveSeed(uint64_t parent, uint64_t index) {
  return MixBits(MixBits(parent) + MixBits(index ^ 0x5851f42d4c957f2dULL));
}

}  // namespace ppci

#endif  // PPCI_COMMON_RANDOM_H_
