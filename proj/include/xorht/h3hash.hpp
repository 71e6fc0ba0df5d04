// Copyright 2026 The xorht Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "xorht/bits.hpp"

namespace xorht {

/// Class H3 hash: a key_bits x index_bits boolean matrix. Row m is combined
/// into the hash when bit m of the key is set; bit 0 is the least
/// significant key bit.
class H3Matrix {
 public:
  static constexpr unsigned kMaxKeyBits = 128;
  static constexpr unsigned kMaxIndexBits = 63;

  H3Matrix(unsigned key_bits, unsigned index_bits, std::vector<std::uint64_t> rows);

  /// Rows drawn from a splitmix64 stream seeded with `seed`.
  static H3Matrix random(unsigned key_bits, unsigned index_bits, std::uint64_t seed);

  unsigned key_bits() const { return key_bits_; }
  unsigned index_bits() const { return index_bits_; }
  std::span<const std::uint64_t> rows() const { return rows_; }

  std::uint64_t hash(U128 key) const;

  /// "h3 <key_bits> <index_bits>" followed by one hex row per line.
  std::string to_text() const;
  static H3Matrix from_text(std::string_view text);

  friend bool operator==(const H3Matrix&, const H3Matrix&) = default;

 private:
  unsigned key_bits_;
  unsigned index_bits_;
  std::vector<std::uint64_t> rows_;
};

}  // namespace xorht
