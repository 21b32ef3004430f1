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

// Byte-order explicit readers and writers for the container formats.

#ifndef PPCI_COMMON_BINARY_IO_H_
#define PPCI_COMMON_BINARY_IO_H_

#include <bit>
#include <cstdint>
#include <cstring>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace ppci {

class ByteWriter {
 public:
  void Bytes(std::string_view s) { buffer_.insert(buffer_.end(), s.begin(), s.end()); }
  void U8(uint8_t v) { buffer_.push_back(static_cast<char>(v)); }
  void U16Le(uint16_t v) {
    U8(v & 0xff);
    U8(v >> 8);
  }
  void U32Le(uint32_t v) {
    for (int i = 0; i < 4; ++i) U8((v >> (8 * i)) & 0xff);
  }
  void F32Le(float v) { U32Le(std::bit_cast<uint32_t>(v)); }

  const std::vector<char>& buffer() const { return buffer_; }

 private:
  std::vector<char> buffer_;
};

// Bounds-checked cursor over an in-memory file. Every read reports whether
// enough bytes remained; callers turn a false into a truncation error.
class ByteReader {
 public:
  explicit ByteReader(std::span<const char> data) : data_(data) {}

  size_t remaining() const { return data_.size() - pos_; }

  bool Bytes(size_t n, std::string* out) {
    if (remaining() < n) return false;
    out->assign(data_.data() + pos_, n);
    pos_ += n;
    return true;
  }
  bool U8(uint8_t* out) {
    if (remaining() < 1) return false;
    *out = static_cast<uint8_t>(data_[pos_++]);
    return true;
  }
  bool U16Le(uint16_t* out) {
    uint8_t lo = 0, hi = 0;
    if (remaining() < 2) return false;
    U8(&lo);
    U8(&hi);
    *out = static_cast<uint16_t>(lo | (hi << 8));
    return true;
  }
  bool U32Le(uint32_t* out) {
    if (remaining() < 4) return false;
    uint32_t v = 0;
    for (int i = 0; i < 4; ++i) {
      uint8_t b = 0;
      U8(&b);
      v |= static_cast<uint32_t>(b) << (8 * i);
    }
    *out = v;
    return true;
  }
  bool U32Be(uint32_t* out) {
    if (remaining() < 4) return false;
    uint32_t v = 0;
    for (int i = 0; i < 4; ++i) {
      uint8_t b = 0;
      U8(&b);
      v = (v << 8) | b;
    }
    *out = v;
    return true;
  }
  bool F32Le(float* out) {
    uint32_t bits;
    if (!U32Le(&bits)) return false;
    *out = std::bit_cast<float>(bits);
    return true;
  }

 private:
  std::span<const char> data_;
  size_t pos_ = 0;
};

// Whole-file helpers. Both throw DataError on I/O failure.
std::vector<char> ReadFileBytes(const std::string& path);
void WriteFileBytes(const std::string& path, std::span<const char> bytes);

}  // namespace ppci

#endif  // PPCI_COMMON_BINARY_IO_H_
