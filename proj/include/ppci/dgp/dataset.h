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

#ifndef PPCI_DGP_DATASET_H_
#define PPCI_DGP_DATASET_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ppci/common/stratum.h"

namespace ppci::dgp {

inline constexpr int kImageChannels = 3;
inline constexpr int kImageHeight = 28;
inline constexpr int kImageWidth = 28;
inline constexpr size_t kImagePlane = kImageHeight * kImageWidth;
inline constexpr size_t kImageSize = kImageChannels * kImagePlane;

// Read-only view of one experimental unit. Pixels are channel-major (CHW).
struct UnitView {
  int t = 0;
  int w = 0;
  int u = 0;
  std::optional<int> y;
  std::span<const float> x;
};

// Ground-truth labels withheld from an unlabeled dataset. Only evaluation
// code should call Reveal().
class SealedLabels {
 public:
  SealedLabels() = default;
  explicit SealedLabels(std::vector<int> labels) : labels_(std::move(labels)) {}

  size_t size() const { return labels_.size(); }
  std::span<const int> Reveal() const { return labels_; }

 private:
  std::vector<int> labels_;
};

// Immutable columnar store of units. Either every unit carries a label or
// none does.
class Dataset {
 public:
  Dataset() = default;
  // Throws DataError on length mismatches, non-binary covariates, labels
  // outside 0..9, or pixels outside [0, 1].
  Dataset(std::vector<uint8_t> t, std::vector<uint8_t> w,
          std::vector<uint8_t> u, std::optional<std::vector<int>> labels,
          std::vector<float> images);

  size_t size() const { return t_.size(); }
  bool has_labels() const { return labels_.has_value(); }

  UnitView unit(size_t i) const;
  std::span<const float> image(size_t i) const {
    return std::span<const float>(images_).subspan(i * kImageSize, kImageSize);
  }
  // Row-major n x kImageSize pixel matrix.
  std::span<const float> images() const { return images_; }

  // Throws DataError when the dataset is unlabeled.
  std::span<const int> labels() const;

  // Discrete covariate column by name: "t", "w" or "u".
  std::span<const uint8_t> column(std::string_view name) const;

  // Names of the discrete columns, in the canonical stratum order.
  const std::vector<std::string>& schema() const;

  // Partition by all schema columns.
  const Stratification& stratum_index() const { return stratum_index_; }

  // Partition by a subset of the schema, in the given order. An empty list
  // yields the single-stratum partition.
  Stratification Stratify(std::span<const std::string> columns) const;

  // Splits off the labels. The returned dataset is unlabeled.
  std::pair<Dataset, SealedLabels> SealLabels() const;

 private:
  std::vector<uint8_t> t_, w_, u_;
  std::optional<std::vector<int>> labels_;
  std::vector<float> images_;
  Stratification stratum_index_;
};

}  // namespace ppci::dgp

#endif  // PPCI_DGP_DATASET_H_
