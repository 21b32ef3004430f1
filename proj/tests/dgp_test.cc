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

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <limits>
#include <numeric>
#include <set>

#include "gtest/gtest.h"
#include "ppci/common/binary_io.h"
#include "ppci/common/error.h"
#include "ppci/dgp/dataset_io.h"
#include "ppci/dgp/dgp_spec.h"
#include "ppci/dgp/idx.h"
#include "ppci/dgp/render.h"
#include "ppci/dgp/sampler.h"

namespace ppci::dgp {
namespace {

std::vector<DgpSpec> AllPresets() {
  return {DgpSpec::A(), DgpSpec::B(), DgpSpec::C(), DgpSpec::D(),
          DgpSpec::E()};
}

double Mean(std::span<const uint8_t> v) {
  return std::accumulate(v.begin(), v.end(), 0.0) / v.size();
}

// Interventional mean E[Y | do(T=t)] by enumerating every (w, u) setting and
// every value of the independent uniform draws in the structural equations.
double InterventionalMeanByEnumeration(const DgpSpec& spec, int t) {
  double total = 0.0;
  for (int w = 0; w < 2; ++w) {
    for (int u = 0; u < 2; ++u) {
      const double p = (w ? spec.p_w : 1 - spec.p_w) * (u ? spec.p_u : 1 - spec.p_u);
      double conditional = 0.0;
      if (spec.effect == Effect::kNonlinear) {
        for (int a = 0; a < 4; ++a) {
          for (int b = 0; b < 7; ++b) conditional += ((t | u) * a + b) / 28.0;
        }
      } else {
        for (int a = 0; a < 4; ++a) {
          for (int b = 0; b < 4; ++b) {
            for (int c = 0; c < 4; ++c) {
              const int y = spec.effect == Effect::kLinearTraining
                                ? w * a + t * b + u * c
                                : w * a + b + u * c;
              conditional += y / 64.0;
            }
          }
        }
      }
      total += p * conditional;
    }
  }
  return total;
}

// Round-trip oracle: nearest noise-free glyph under the known settings.
int NearestGlyph(int t, int w, int u, std::span<const float> image) {
  int best = -1;
  double best_distance = std::numeric_limits<double>::infinity();
  for (int y = 0; y < 10; ++y) {
    const std::vector<float> reference = RenderGlyphNoiseless(t, w, u, y);
    double d2 = 0.0;
    for (size_t i = 0; i < image.size(); ++i) {
      d2 += (image[i] - reference[i]) * (image[i] - reference[i]);
    }
    if (d2 < best_distance) {
      best_distance = d2;
      best = y;
    }
  }
  return best;
}

TEST(DgpSpecTest, PresetsMatchTheExperimentTable) {
  const DgpSpec a = DgpSpec::A();
  EXPECT_EQ(a.p_w, 0.5);
  EXPECT_EQ(a.p_u, 0.02);
  EXPECT_TRUE(a.randomized);
  EXPECT_EQ(a.effect, Effect::kLinearTraining);

  struct Row {
    DgpSpec spec;
    double p_w, p_u;
    Effect effect;
  };
  for (const Row& row : {Row{DgpSpec::B(), 0.05, 0.05, Effect::kLinearNull},
                         Row{DgpSpec::C(), 0.5, 0.5, Effect::kLinearNull},
                         Row{DgpSpec::D(), 0.2, 0.2, Effect::kNonlinear},
                         Row{DgpSpec::E(), 0.5, 0.5, Effect::kNonlinear}}) {
    EXPECT_EQ(row.spec.p_w, row.p_w);
    EXPECT_EQ(row.spec.p_u, row.p_u);
    EXPECT_FALSE(row.spec.randomized);
    EXPECT_EQ(row.spec.effect, row.effect);
  }
  EXPECT_EQ(DgpSpec::Named("d").Label(), "D");
  EXPECT_THROW(DgpSpec::Named("F"), ConfigError);
}

TEST(DgpSpecTest, RejectsProbabilitiesOutsideUnitInterval) {
  DgpSpec spec = DgpSpec::A();
  spec.p_u = 1.5;
  EXPECT_THROW(spec.Validate(), ConfigError);
  EXPECT_THROW(SampleDraws(spec, 10, 1), ConfigError);
  spec.p_u = 0.1;
  spec.p_w = -0.01;
  EXPECT_THROW(SampleDraws(spec, 10, 1), ConfigError);
  spec.p_w = std::nan("");
  EXPECT_THROW(spec.Validate(), ConfigError);
}

TEST(TrueAteTest, AnalyticValues) {
  EXPECT_EQ(TrueAte(DgpSpec::A()), 1.5);
  EXPECT_EQ(TrueAte(DgpSpec::B()), 0.0);
  EXPECT_EQ(TrueAte(DgpSpec::C()), 0.0);
  EXPECT_EQ(TrueAte(DgpSpec::D()), 1.2);
  EXPECT_EQ(TrueAte(DgpSpec::E()), 0.75);

  DgpSpec no_padding = DgpSpec::D();
  no_padding.p_u = 0.0;
  EXPECT_EQ(TrueAte(no_padding), 1.5);
}

TEST(TrueAteTest, AgreesWithEnumerationOracle) {
  std::vector<DgpSpec> specs = AllPresets();
  for (double p_u : {0.0, 0.3, 0.9}) {
    DgpSpec custom = DgpSpec::E();
    custom.name = DgpName::kCustom;
    custom.p_u = p_u;
    custom.p_w = 0.7;
    specs.push_back(custom);
  }
  for (const DgpSpec& spec : specs) {
    const double oracle = InterventionalMeanByEnumeration(spec, 1) -
                          InterventionalMeanByEnumeration(spec, 0);
    EXPECT_NEAR(TrueAte(spec), oracle, 1e-12) << spec.Label();
  }
}

TEST(SampleTest, MarginalsOfTheTrainingExperiment) {
  const Draws draws = SampleDraws(DgpSpec::A(), 10000, 7);
  const double mean_t = Mean(draws.t);
  const double mean_u = Mean(draws.u);
  EXPECT_GE(mean_t, 0.48);
  EXPECT_LE(mean_t, 0.52);
  EXPECT_GE(mean_u, 0.008);
  EXPECT_LE(mean_u, 0.032);

  // E[Y] = 0.5*1.5 + 0.5*1.5 + 0.02*1.5 = 1.53.
  const double mean_y =
      std::accumulate(draws.y.begin(), draws.y.end(), 0.0) / draws.size();
  EXPECT_NEAR(InterventionalMeanByEnumeration(DgpSpec::A(), 1) * 0.5 +
                  InterventionalMeanByEnumeration(DgpSpec::A(), 0) * 0.5,
              1.53, 1e-12);
  EXPECT_NEAR(mean_y, 1.53, 0.06);
}

TEST(SampleTest, ObservationalPropensityGivenBackground) {
  const Draws draws = SampleDraws(DgpSpec::C(), 10000, 1);
  double treated = 0, count = 0;
  for (size_t i = 0; i < draws.size(); ++i) {
    if (draws.w[i] == 1) {
      count += 1;
      treated += draws.t[i];
    }
  }
  EXPECT_GE(treated / count, 0.87);
  EXPECT_LE(treated / count, 0.93);
}

TEST(SampleTest, RejectsEmptySample) {
  EXPECT_THROW(SampleDraws(DgpSpec::A(), 0, 1), ConfigError);
  EXPECT_THROW(Sample(DgpSpec::A(), 0, 1), ConfigError);
}

TEST(SampleTest, LabelsStayInsideTheirStructuralRange) {
  for (const DgpSpec& spec : AllPresets()) {
    const Draws draws = SampleDraws(spec, 5000, 3);
    for (size_t i = 0; i < draws.size(); ++i) {
      const int y = draws.y[i];
      ASSERT_GE(y, 0);
      ASSERT_LE(y, 9);
      if (spec.effect == Effect::kLinearTraining && !draws.w[i] &&
          !draws.t[i] && !draws.u[i]) {
        ASSERT_EQ(y, 0);
      }
      if (spec.effect == Effect::kNonlinear && !draws.t[i] && !draws.u[i]) {
        ASSERT_LE(y, 6);
      }
    }
  }
}

TEST(SampleTest, DeterministicAndConsistentWithDraws) {
  const Dataset a = Sample(DgpSpec::B(), 200, 11);
  const Dataset b = Sample(DgpSpec::B(), 200, 11);
  const Draws draws = SampleDraws(DgpSpec::B(), 200, 11);
  ASSERT_TRUE(std::equal(a.images().begin(), a.images().end(),
                         b.images().begin()));
  for (size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a.unit(i).t, draws.t[i]);
    EXPECT_EQ(a.unit(i).w, draws.w[i]);
    EXPECT_EQ(a.unit(i).u, draws.u[i]);
    EXPECT_EQ(a.labels()[i], draws.y[i]);
  }
  const Dataset other = Sample(DgpSpec::B(), 200, 12);
  EXPECT_FALSE(std::equal(a.images().begin(), a.images().end(),
                          other.images().begin()));
}

TEST(SampleTest, StratumIndexPartitionsUnits) {
  const Dataset data = Sample(DgpSpec::E(), 500, 5);
  const Stratification& index = data.stratum_index();
  std::vector<int> seen(data.size(), 0);
  for (size_t s = 0; s < index.num_strata(); ++s) {
    for (const size_t i : index.members(static_cast<int>(s))) {
      ++seen[i];
      const UnitView unit = data.unit(i);
      EXPECT_EQ(index.key(static_cast<int>(s)).values,
                (std::vector<int>{unit.t, unit.w, unit.u}));
    }
  }
  EXPECT_TRUE(std::all_of(seen.begin(), seen.end(), [](int c) { return c == 1; }));
  EXPECT_EQ(data.Stratify(std::vector<std::string>{}).num_strata(), 1u);
  EXPECT_THROW(data.Stratify(std::vector<std::string>{"x"}), ConfigError);
}

TEST(RenderTest, BackgroundMatchesColorUpToNoise) {
  const std::vector<float> image = RenderGlyph(0, 0, 0, 1, 42);
  const GlyphMask& mask = BaseGlyph(1, false);
  ASSERT_EQ(image.size(), kImageSize);
  const float expected[3] = {1.f, 0.f, 0.f};
  for (size_t p = 0; p < kImagePlane; ++p) {
    if (mask[p]) continue;
    for (int ch = 0; ch < 3; ++ch) {
      EXPECT_NEAR(image[ch * kImagePlane + p], expected[ch], 0.05 * 4);
    }
  }
  for (const float v : image) {
    EXPECT_GE(v, 0.f);
    EXPECT_LE(v, 1.f);
  }
}

TEST(RenderTest, PenColorFollowsTreatment) {
  const std::vector<float> white = RenderGlyphNoiseless(1, 1, 0, 8);
  const std::vector<float> black = RenderGlyphNoiseless(0, 1, 0, 8);
  const GlyphMask& mask = BaseGlyph(8, false);
  for (size_t p = 0; p < kImagePlane; ++p) {
    if (!mask[p]) continue;
    for (int ch = 0; ch < 3; ++ch) {
      EXPECT_EQ(white[ch * kImagePlane + p], 1.f);
      EXPECT_EQ(black[ch * kImagePlane + p], 0.f);
    }
  }
}

TEST(RenderTest, SameSeedIsBitIdentical) {
  const auto a = RenderGlyph(1, 0, 1, 7, 99);
  const auto b = RenderGlyph(1, 0, 1, 7, 99);
  EXPECT_EQ(a, b);
  EXPECT_NE(a, RenderGlyph(1, 0, 1, 7, 100));
}

TEST(RenderTest, GlyphsAreSeparatedBeforeNoise) {
  auto differing = [](const GlyphMask& a, const GlyphMask& b) {
    int count = 0;
    for (size_t p = 0; p < kImagePlane; ++p) count += a[p] != b[p];
    return count;
  };
  EXPECT_GE(differing(BaseGlyph(0, false), BaseGlyph(1, false)), 20);
  for (int a = 0; a < 10; ++a) {
    for (int b = a + 1; b < 10; ++b) {
      EXPECT_GE(differing(BaseGlyph(a, false), BaseGlyph(b, false)), 10)
          << a << " vs " << b;
      EXPECT_GE(differing(BaseGlyph(a, true), BaseGlyph(b, true)), 4)
          << a << " vs " << b << " padded";
    }
  }
}

TEST(RenderTest, PaddedGlyphStaysInsideCentralWindow) {
  for (int y = 0; y < 10; ++y) {
    const GlyphMask& mask = BaseGlyph(y, true);
    for (int r = 0; r < kImageHeight; ++r) {
      for (int c = 0; c < kImageWidth; ++c) {
        const bool inside = r >= 8 && r < 20 && c >= 8 && c < 20;
        if (!inside) {
          EXPECT_FALSE(mask[r * kImageWidth + c]);
        }
      }
    }
  }
}

TEST(RenderTest, RejectsInvalidDigit) {
  EXPECT_THROW(RenderGlyph(0, 0, 0, 10, 1), ConfigError);
  EXPECT_THROW(RenderGlyph(2, 0, 0, 1, 1), ConfigError);
}

// The measurement mechanism is shared by every experiment, and the digit is
// recoverable from the image.
TEST(RenderTest, NearestGlyphOracleRecoversEveryLabel) {
  size_t checked = 0;
  for (const DgpSpec& spec : AllPresets()) {
    const uint64_t seed = 1000 + checked;
    const Dataset data = Sample(spec, 300, seed);
    for (size_t i = 0; i < data.size(); ++i) {
      const UnitView unit = data.unit(i);
      ASSERT_EQ(NearestGlyph(unit.t, unit.w, unit.u, unit.x), *unit.y);
      const auto rerendered = RenderGlyph(unit.t, unit.w, unit.u, *unit.y,
                                          UnitNoiseSeed(seed, i));
      ASSERT_TRUE(std::equal(rerendered.begin(), rerendered.end(), unit.x.begin()));
      ++checked;
    }
  }
  EXPECT_GE(checked, 1000u);
}

TEST(DatasetTest, SealingLabelsKeepsThemOutOfTheDataset) {
  const Dataset data = Sample(DgpSpec::C(), 50, 2);
  auto [unlabeled, sealed] = data.SealLabels();
  EXPECT_FALSE(unlabeled.has_labels());
  EXPECT_THROW(unlabeled.labels(), DataError);
  EXPECT_FALSE(unlabeled.unit(0).y.has_value());
  ASSERT_EQ(sealed.size(), 50u);
  EXPECT_TRUE(std::equal(sealed.Reveal().begin(), sealed.Reveal().end(),
                         data.labels().begin()));
}

TEST(DatasetTest, RejectsInconsistentColumns) {
  EXPECT_THROW(Dataset({0, 1}, {0}, {0, 0}, std::nullopt,
                       std::vector<float>(2 * kImageSize)),
               DataError);
  EXPECT_THROW(Dataset({0}, {0}, {0}, std::vector<int>{12},
                       std::vector<float>(kImageSize)),
               DataError);
  EXPECT_THROW(Dataset({0}, {0}, {0}, std::nullopt,
                       std::vector<float>(kImageSize, 1.5f)),
               DataError);
}

TEST(DatasetIoTest, RoundTripPreservesEveryField) {
  for (const bool labeled : {true, false}) {
    Dataset data = Sample(DgpSpec::D(), 17, 4);
    if (!labeled) data = data.SealLabels().first;
    const std::vector<char> bytes = EncodeDataset(data);
    ASSERT_EQ(bytes.size(), 4 + 2 + 1 + 4 + 3 + 17 * (4 + 4 * kImageSize));
    EXPECT_EQ(std::string(bytes.data(), 4), "PPCI");
    EXPECT_EQ(bytes[6], labeled ? 1 : 0);
    const Dataset back = DecodeDataset(bytes);
    EXPECT_EQ(back.has_labels(), labeled);
    ASSERT_EQ(back.size(), data.size());
    for (size_t i = 0; i < data.size(); ++i) {
      EXPECT_EQ(back.unit(i).t, data.unit(i).t);
      EXPECT_EQ(back.unit(i).w, data.unit(i).w);
      EXPECT_EQ(back.unit(i).u, data.unit(i).u);
      EXPECT_EQ(back.unit(i).y, data.unit(i).y);
    }
    EXPECT_TRUE(std::equal(back.images().begin(), back.images().end(),
                           data.images().begin()));
    if (!labeled) {
      // First record's label byte.
      EXPECT_EQ(static_cast<uint8_t>(bytes[14 + 3]), 0xFF);
    }
  }
}

TEST(DatasetIoTest, RejectsMalformedFiles) {
  const std::vector<char> bytes = EncodeDataset(Sample(DgpSpec::A(), 3, 1));
  std::vector<char> bad_magic = bytes;
  bad_magic[0] = 'X';
  EXPECT_THROW(DecodeDataset(bad_magic), DataError);
  std::vector<char> truncated(bytes.begin(), bytes.end() - 5);
  EXPECT_THROW(DecodeDataset(truncated), DataError);
  std::vector<char> bad_flag = bytes;
  bad_flag[6] = 0;  // claims unlabeled while records carry labels
  EXPECT_THROW(DecodeDataset(bad_flag), DataError);
}

TEST(IdxTest, DecodesLabelFile) {
  const std::vector<char> bytes = {0, 0, 8, 1, 0, 0, 0, 3, 5, 0, 4};
  EXPECT_EQ(ParseIdxLabels(bytes), (std::vector<int>{5, 0, 4}));
  EXPECT_EQ(EncodeIdxLabels(std::vector<int>{5, 0, 4}), bytes);
}

TEST(IdxTest, ErrorsAreDistinct) {
  auto reason_of = [](auto&& fn) {
    try {
      fn();
    } catch (const IdxError& e) {
      return e.reason();
    }
    ADD_FAILURE() << "no IdxError thrown";
    return IdxError::Reason::kWrongMagic;
  };
  const std::vector<char> wrong = {0, 0, 0, 0, 0, 0, 0, 1, 0};
  EXPECT_EQ(reason_of([&] { ParseIdxLabels(wrong); }),
            IdxError::Reason::kWrongMagic);
  const std::vector<char> short_labels = {0, 0, 8, 1, 0, 0, 0, 3, 5};
  EXPECT_EQ(reason_of([&] { ParseIdxLabels(short_labels); }),
            IdxError::Reason::kTruncated);
  std::vector<uint8_t> pixels(kImagePlane * 2, 7);
  std::vector<char> images = EncodeIdxImages(pixels, 2);
  images.resize(images.size() - 1);
  EXPECT_EQ(reason_of([&] { ParseIdxImages(images); }),
            IdxError::Reason::kTruncated);
  EXPECT_EQ(reason_of([&] {
              DigitBank(ParseIdxImages(EncodeIdxImages(pixels, 2)),
                        std::vector<int>{1, 2, 3});
            }),
            IdxError::Reason::kDimensionMismatch);
  std::vector<char> not_28 = EncodeIdxImages(pixels, 2);
  not_28[11] = 27;
  EXPECT_EQ(reason_of([&] { ParseIdxImages(not_28); }),
            IdxError::Reason::kDimensionMismatch);
  EXPECT_THROW(ParseIdxImages(EncodeIdxLabels(std::vector<int>{1})), IdxError);
}

TEST(IdxTest, NormalizesFullIntensityToOne) {
  const std::vector<uint8_t> pixels(kImagePlane, 255);
  const IdxImages images = ParseIdxImages(EncodeIdxImages(pixels, 1));
  ASSERT_EQ(images.count, 1u);
  for (const float v : images.pixels) EXPECT_EQ(v, 1.0f);
}

TEST(IdxTest, LoadsFilesFromDisk) {
  const auto dir = std::filesystem::temp_directory_path();
  const std::string images_path = (dir / "ppci_idx_images.idx").string();
  const std::string labels_path = (dir / "ppci_idx_labels.idx").string();
  std::vector<uint8_t> pixels(kImagePlane * 3, 0);
  for (size_t i = 0; i < pixels.size(); i += 3) pixels[i] = 255;
  WriteFileBytes(images_path, EncodeIdxImages(pixels, 3));
  WriteFileBytes(labels_path, EncodeIdxLabels(std::vector<int>{2, 2, 9}));
  const DigitBank bank = LoadDigitBank(images_path, labels_path);
  EXPECT_EQ(bank.size(), 3u);
  EXPECT_EQ(bank.of_class(2).size(), 2u);
  EXPECT_EQ(bank.of_class(9).size(), 1u);
  std::filesystem::remove(images_path);
  std::filesystem::remove(labels_path);
  EXPECT_THROW(LoadIdxLabels(labels_path), DataError);
}

TEST(IdxRendererTest, ColorsAndPadsDigitPhotos) {
  // One photo per class: a solid square in the top-left 14x14 quadrant.
  std::vector<uint8_t> pixels(kImagePlane * 10, 0);
  for (int k = 0; k < 10; ++k) {
    for (int r = 0; r < 14; ++r) {
      for (int c = 0; c < 14; ++c) pixels[k * kImagePlane + r * 28 + c] = 255;
    }
  }
  std::vector<int> labels(10);
  std::iota(labels.begin(), labels.end(), 0);
  const DigitBank bank(ParseIdxImages(EncodeIdxImages(pixels, 10)), labels);

  std::vector<float> full(kImageSize), padded(kImageSize);
  RenderIdxDigitInto(bank, 1, 0, 0, 3, 5, full);
  RenderIdxDigitInto(bank, 1, 0, 1, 3, 5, padded);
  // White ink, red background.
  EXPECT_EQ(full[0 * kImagePlane + 0], 1.f);
  EXPECT_EQ(full[1 * kImagePlane + 0], 1.f);
  EXPECT_EQ(full[1 * kImagePlane + 27 * 28 + 27], 0.f);
  EXPECT_EQ(full[0 * kImagePlane + 27 * 28 + 27], 1.f);
  // Padding moves ink into the central window only.
  EXPECT_EQ(padded[1 * kImagePlane + 0], 0.f);
  EXPECT_EQ(padded[1 * kImagePlane + 8 * 28 + 8], 1.f);
  EXPECT_EQ(padded[1 * kImagePlane + 19 * 28 + 19], 0.f);

  DgpSpec spec = DgpSpec::A();
  spec.renderer = Renderer::kIdxDigits;
  EXPECT_THROW(Sample(spec, 10, 1), ConfigError);
  const Dataset data = Sample(spec, 20, 1, &bank);
  EXPECT_EQ(data.size(), 20u);

  const DigitBank partial(ParseIdxImages(EncodeIdxImages(
                              std::vector<uint8_t>(kImagePlane), 1)),
                          std::vector<int>{0});
  EXPECT_THROW(RenderIdxDigitInto(partial, 0, 0, 0, 4, 1, full), DataError);
}

}  // namespace
}  // namespace ppci::dgp
