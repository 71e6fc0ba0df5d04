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

#include "xorht/bits.hpp"

namespace xorht {
namespace {

constexpr char kHex[] = "0123456789abcdef";

unsigned nibble(std::uint64_t limb, unsigned shift) { return (limb >> shift) & 0xFU; }

void deposit(DataWord& w, unsigned offset, std::uint64_t chunk) {
  const unsigned li = offset / 64;
  const unsigned sh = offset % 64;
  if (li >= w.limbs.size()) return;
  w.limbs[li] |= chunk << sh;
  if (sh != 0 && li + 1 < w.limbs.size()) w.limbs[li + 1] |= chunk >> (64 - sh);
}

std::uint64_t chunk_at(const DataWord& w, unsigned offset) {
  const unsigned li = offset / 64;
  const unsigned sh = offset % 64;
  if (li >= w.limbs.size()) return 0;
  std::uint64_t v = w.limbs[li] >> sh;
  if (sh != 0 && li + 1 < w.limbs.size()) v |= w.limbs[li + 1] << (64 - sh);
  return v;
}

}  // namespace

std::string to_hex(U128 v, unsigned digits) {
  unsigned needed = 1;
  for (unsigned d = 32; d > 0; --d) {
    const unsigned pos = (d - 1) * 4;
    const std::uint64_t limb = pos < 64 ? v.lo : v.hi;
    if (nibble(limb, pos % 64) != 0) {
      needed = d;
      break;
    }
  }
  const unsigned n = digits > needed ? digits : needed;
  std::string out(n, '0');
  for (unsigned d = 0; d < n && d < 32; ++d) {
    const unsigned pos = d * 4;
    const std::uint64_t limb = pos < 64 ? v.lo : v.hi;
    out[n - 1 - d] = kHex[nibble(limb, pos % 64)];
  }
  return out;
}

std::optional<U128> parse_hex(std::string_view text) {
  if (text.empty() || text.size() > 32) return std::nullopt;
  U128 v;
  for (char c : text) {
    unsigned d;
    if (c >= '0' && c <= '9') {
      d = static_cast<unsigned>(c - '0');
    } else if (c >= 'a' && c <= 'f') {
      d = static_cast<unsigned>(c - 'a' + 10);
    } else if (c >= 'A' && c <= 'F') {
      d = static_cast<unsigned>(c - 'A' + 10);
    } else {
      return std::nullopt;
    }
    v.hi = (v.hi << 4) | (v.lo >> 60);
    v.lo = (v.lo << 4) | d;
  }
  return v;
}

DataWord concat(U128 key, U128 value, unsigned value_bits) {
  DataWord w;
  deposit(w, 0, value.lo);
  deposit(w, 64, value.hi);
  deposit(w, value_bits, key.lo);
  deposit(w, value_bits + 64, key.hi);
  return w;
}

U128 extract(const DataWord& word, unsigned offset, unsigned width) {
  const U128 raw{chunk_at(word, offset + 64), chunk_at(word, offset)};
  return raw & U128::low_mask(width);
}

std::string to_hex(const DataWord& word, unsigned width_bits) {
  const unsigned n = hex_digits(width_bits);
  std::string out(n, '0');
  for (unsigned d = 0; d < n; ++d) {
    const unsigned pos = d * 4;
    out[n - 1 - d] = kHex[nibble(word.limbs[pos / 64], pos % 64)];
  }
  return out;
}

}  // namespace xorht
