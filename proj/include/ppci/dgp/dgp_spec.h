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

#ifndef PPCI_DGP_DGP_SPEC_H_
#define PPCI_DGP_DGP_SPEC_H_

#include <string>
#include <string_view>

namespace ppci::dgp {

enum class DgpName { kA, kB, kC, kD, kE, kCustom };

// Structural equation for the outcome.
//   kLinearTraining: Y = W*U4 + T*U4 + U*U4
//   kLinearNull:     Y = W*U4 + U4 + U*U4
//   kNonlinear:      Y = (T or U)*U4 + U7
// where U4 ~ Unif{0..3} and U7 ~ Unif{0..6}, each draw independent.
enum class Effect { kLinearTraining, kLinearNull, kNonlinear };

enum class Renderer { kGlyph, kIdxDigits };

// Parameters of one synthetic experiment. Randomized experiments draw
// T ~ Be(0.5); observational ones draw T ~ Be(0.9) if W=1 and Be(0.1) if W=0.
struct DgpSpec {
  DgpName name = DgpName::kCustom;
  double p_w = 0.5;
  double p_u = 0.02;
  bool randomized = true;
  Effect effect = Effect::kLinearTraining;
  Renderer renderer = Renderer::kGlyph;

  // Canonical presets: the in-distribution training experiment (A) and the
  // four target experiments (B, C: null effect; D, E: nonlinear effect).
  static DgpSpec A();
  static DgpSpec B();
  static DgpSpec C();
  static DgpSpec D();
  static DgpSpec E();
  // Accepts "A".."E" (case-insensitive); throws ConfigError otherwise.
  static DgpSpec Named(std::string_view name);

  // Throws ConfigError when a probability leaves [0, 1].
  void Validate() const;

  std::string Label() const;
};

// Analytic average treatment effect E[Y|do(T=1)] - E[Y|do(T=0)].
double TrueAte(const DgpSpec& spec);

std::string_view EffectName(Effect effect);
Effect ParseEffect(std::string_view name);
std::string_view RendererName(Renderer renderer);
Renderer ParseRenderer(std::string_view name);

}  // namespace ppci::dgp

#endif  // PPCI_DGP_DGP_SPEC_H_
