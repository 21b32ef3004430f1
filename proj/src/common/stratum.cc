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

#include "ppci/common/stratum.h"

#include <algorithm>
#include <map>

#include "ppci/common/error.h"

namespace ppci {

std::string StratumKey::ToString(std::span<const std::string> columns) const {
  std::string out;
  for (size_t i = 0; i < values.size(); ++i) {
    if (i > 0) out += ',';
    out += i < columns.size() ? columns[i] : "z" + std::to_string(i);
    out += '=';
    out += std::to_string(values[i]);
  }
  return out.empty() ? "all" : out;
}

Stratification::Stratification(std::vector<std::string> columns,
                               std::span<const StratumKey> unit_keys)
    : columns_(std::move(columns)) {
  std::map<StratumKey, int> index;
  for (const StratumKey& key : unit_keys) {
    if (key.values.size() != columns_.size()) {
      throw DataError("stratum key width " + std::to_string(key.values.size()) +
                      " does not match " + std::to_string(columns_.size()) +
                      " columns");
    }
    index.emplace(key, 0);
  }
  keys_.reserve(index.size());
  for (auto& [key, id] : index) {
    id = static_cast<int>(keys_.size());
    keys_.push_back(key);
  }
  members_.resize(keys_.size());
  unit_stratum_.resize(unit_keys.size());
  for (size_t i = 0; i < unit_keys.size(); ++i) {
    const int s = index.at(unit_keys[i]);
    unit_stratum_[i] = s;
    members_[s].push_back(i);
  }
}

Stratification Stratification::Trivial(size_t num_units) {
  std::vector<StratumKey> keys(num_units);
  return Stratification({}, keys);
}

int Stratification::find(const StratumKey& key) const {
  const auto it = std::lower_bound(keys_.begin(), keys_.end(), key);
  if (it == keys_.end() || *it != key) return -1;
  return static_cast<int>(it - keys_.begin());
}

}  // namespace ppci
