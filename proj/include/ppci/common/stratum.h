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

#ifndef PPCI_COMMON_STRATUM_H_
#define PPCI_COMMON_STRATUM_H_

#include <compare>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace ppci {

// Joint value of a fixed, ordered list of discrete columns. Components follow
// the column order of the owning Stratification.
struct StratumKey {
  std::vector<int> values;

  auto operator<=>(const StratumKey&) const = default;
  bool operator==(const StratumKey&) const = default;

  // "t=1,w=0" style rendering given the column names.
  std::string ToString(std::span<const std::string> columns) const;
};

// Partition of units 0..n-1 by their StratumKey. Strata are numbered in
// lexicographic key order, so the numbering depends only on which keys occur.
class Stratification {
 public:
  Stratification() = default;
  Stratification(std::vector<std::string> columns,
                 std::span<const StratumKey> unit_keys);

  // Single-stratum partition over n units with no columns.
  static Stratification Trivial(size_t num_units);

  size_t num_units() const { return unit_stratum_.size(); }
  size_t num_strata() const { return keys_.size(); }
  const std::vector<std::string>& columns() const { return columns_; }

  int stratum_of(size_t unit) const { return unit_stratum_[unit]; }
  std::span<const int> unit_strata() const { return unit_stratum_; }
  const StratumKey& key(int stratum) const { return keys_[stratum]; }
  const std::vector<StratumKey>& keys() const { return keys_; }
  const std::vector<size_t>& members(int stratum) const {
    return members_[stratum];
  }

  // Index of `key`, or -1 when no unit carries it.
  int find(const StratumKey& key) const;

  std::string Describe(int stratum) const {
    return keys_[stratum].ToString(columns_);
  }

 private:
  std::vector<std::string> columns_;
  std::vector<StratumKey> keys_;
  std::vector<int> unit_stratum_;
  std::vector<std::vector<size_t>> members_;
};

}  // namespace ppci

#endif  // PPCI_COMMON_STRATUM_H_
