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

#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>

namespace xorht {

using Cycle = std::int64_t;

/// Unsigned 128-bit quantity. Keys and values are at most this wide.
struct U128 {
  std::uint64_t lo = 0;
  std::uint64_t hi = 0;

  constexpr U128() = default;
  constexpr U128(std::uint64_t low) : lo(low) {}  // NOLINT: literals convert
  constexpr U128(std::uint64_t high, std::uint64_t low) : lo(low), hi(high) {}

  static constexpr U128 low_mask(unsigned bits) {
    if (bits == 0) return {};
    if (bits < 64) return U128{0, (std::uint64_t{1} << bits) - 1};
    if (bits == 64) return U128{0, ~std::uint64_t{0}};
    if (bits < 128) return U128{(std::uint64_t{1} << (bits - 64)) - 1, ~std::uint64_t{0}};
    return U128{~std::uint64_t{0}, ~std::uint64_t{0}};
  }

  constexpr bool bit(unsigned i) const {
    if (i < 64) return (lo >> i) & 1U;
    if (i < 128) return (hi >> (i - 64)) & 1U;
    return false;
  }
  constexpr bool is_zero() const { return lo == 0 && hi == 0; }
  constexpr bool fits(unsigned bits) const { return (*this & ~low_mask(bits)).is_zero(); }

  friend constexpr U128 operator^(U128 a, U128 b) { return {a.hi ^ b.hi, a.lo ^ b.lo}; }
  friend constexpr U128 operator&(U128 a, U128 b) { return {a.hi & b.hi, a.lo & b.lo}; }
  friend constexpr U128 operator|(U128 a, U128 b) { return {a.hi | b.hi, a.lo | b.lo}; }
  friend constexpr U128 operator~(U128 a) { return {~a.hi, ~a.lo}; }
  U128& operator^=(U128 o) { return *this = *this ^ o; }
  friend constexpr bool operator==(U128 a, U128 b) = default;
  friend constexpr std::strong_ordering operator<=>(U128 a, U128 b) {
    if (auto c = a.hi <=> b.hi; c != 0) return c;
    return a.lo <=> b.lo;
  }
};

constexpr unsigned hex_digits(unsigned bits) { return (bits + 3) / 4; }

/// Lowercase hex, zero padded to `digits` (more digits are emitted if needed).
std::string to_hex(U128 v, unsigned digits);

/// Accepts 1..32 hex digits, either case, no prefix.
std::optional<U128> parse_hex(std::string_view text);

/// A key||value word of up to 256 bits. The value sits in the low
/// `value_bits` bits and the key directly above it.
struct DataWord {
  static constexpr unsigned kMaxBits = 256;
  std::array<std::uint64_t, 4> limbs{};

  DataWord& operator^=(const DataWord& o) {
    for (std::size_t i = 0; i < limbs.size(); ++i) limbs[i] ^= o.limbs[i];
    return *this;
  }
  friend DataWord operator^(DataWord a, const DataWord& b) { return a ^= b; }
  friend bool operator==(const DataWord&, const DataWord&) = default;
  bool is_zero() const { return (limbs[0] | limbs[1] | limbs[2] | limbs[3]) == 0; }
};

DataWord concat(U128 key, U128 value, unsigned value_bits);

/// Bits [offset, offset + width) of `word`, width <= 128.
U128 extract(const DataWord& word, unsigned offset, unsigned width);

/// Hex of the low `width_bits` bits, most significant digit first.
std::string to_hex(const DataWord& word, unsigned width_bits);

struct U128Hash {
  std::size_t operator()(U128 v) const noexcept {
    std::uint64_t x = v.lo ^ (v.hi * 0x9e3779b97f4a7c15ULL);
    x ^= x >> 31;
    x *= 0xbf58476d1ce4e5b9ULL;
    x ^= x >> 29;
    return static_cast<std::size_t>(x);
  }
};

/// splitmix64 step: advances `state` and returns the mixed output.
constexpr std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace xorht
