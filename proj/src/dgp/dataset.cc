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

#include "ppci/dgp/dataset.h"

#include <algorithm>

#include "ppci/common/error.h"

namespace ppci::dgp {

namespace {

const std::vector<std::string>& Schema() {
  static const std::vector<std::string> kSchema = {"t", "w", "u"};
  return kSchema;
}

void CheckBinary(std::span<const uint8_t> column, const char* name) {
  for (const uint8_t v : column) {
    if (v > 1) {
      throw DataError(std::string("column ") + name +
                      " must be binary, found value " + std::to_string(v));
    }
  }
}

}  // namespace

Dataset::Dataset(std::vector<uint8_t> t, std::vector<uint8_t> w,
                 std::vector<uint8_t> u, std::optional<std::vector<int>> labels,
                 std::vector<float> images)
    : t_(std::move(t)),
      w_(std::move(w)),
      u_(std::move(u)),
      labels_(std::move(labels)),
      images_(std::move(images)) {
  const size_t n = t_.size();
  if (w_.size() != n || u_.size() != n) {
    throw DataError("covariate columns have different lengths");
  }
  if (labels_ && labels_->size() != n) {
    throw DataError("label column length " + std::to_string(labels_->size()) +
                    " does not match " + std::to_string(n) + " units");
  }
  if (images_.size() != n * kImageSize) {
    throw DataError("image buffer holds " + std::to_string(images_.size()) +
                    " values, expected " + std::to_string(n * kImageSize));
  }
  CheckBinary(t_, "t");
  CheckBinary(w_, "w");
  CheckBinary(u_, "u");
  if (labels_) {
    for (const int y : *labels_) {
      if (y < 0 || y > 9) {
        throw DataError("label " + std::to_string(y) + " outside 0..9");
      }
    }
  }
  if (!std::all_of(images_.begin(), images_.end(),
                   [](float v) { return v >= 0.0f && v <= 1.0f; })) {
    throw DataError("pixel value outside [0, 1]");
  }
  stratum_index_ = Stratify(Schema());
}

UnitView Dataset::unit(size_t i) const {
  UnitView view;
  view.t = t_[i];
  view.w = w_[i];
  view.u = u_[i];
  if (labels_) view.y = (*labels_)[i];
  view.x = image(i);
  return view;
}

std::span<const int> Dataset::labels() const {
  if (!labels_) throw DataError("dataset is unlabeled");
  return *labels_;
}

std::span<const uint8_t> Dataset::column(std::string_view name) const {
  if (name == "t") return t_;
  if (name == "w") return w_;
  if (name == "u") return u_;
  throw ConfigError("unknown covariate column '" + std::string(name) +
                    "' (expected t, w or u)");
}

const std::vector<std::string>& Dataset::schema() const { return Schema(); }

Stratification Dataset::Stratify(std::span<const std::string> columns) const {
  std::vector<std::span<const uint8_t>> cols;
  for (const std::string& name : columns) cols.push_back(column(name));
  std::vector<StratumKey> keys(size());
  for (size_t i = 0; i < size(); ++i) {
    keys[i].values.reserve(cols.size());
    for (const auto& col : cols) keys[i].values.push_back(col[i]);
  }
  return Stratification(std::vector<std::string>(columns.begin(), columns.end()),
                        keys);
}

std::pair<Dataset, SealedLabels> Dataset::SealLabels() const {
  SealedLabels sealed(labels_.value_or(std::vector<int>{}));
  Dataset unlabeled(t_, w_, u_, std::nullopt, images_);
  return {std::move(unlabeled), std::move(sealed)};
}

}  // namespace ppci::dgp
