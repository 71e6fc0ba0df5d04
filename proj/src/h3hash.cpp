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

#include "xorht/h3hash.hpp"

#include <bit>
#include <sstream>
#include <stdexcept>

namespace xorht {

H3Matrix::H3Matrix(unsigned key_bits, unsigned index_bits, std::vector<std::uint64_t> rows)
    : key_bits_(key_bits), index_bits_(index_bits), rows_(std::move(rows)) {
  if (key_bits_ == 0 || key_bits_ > kMaxKeyBits) {
    throw std::invalid_argument("h3: key_bits must be in [1, 128]");
  }
  if (index_bits_ == 0 || index_bits_ > kMaxIndexBits) {
    throw std::invalid_argument("h3: index_bits must be in [1, 63]");
  }
  if (rows_.size() != key_bits_) {
    throw std::invalid_argument("h3: expected one row per key bit");
  }
  const std::uint64_t limit = std::uint64_t{1} << index_bits_;
  for (std::uint64_t r : rows_) {
    if (r >= limit) throw std::invalid_argument("h3: row wider than index_bits");
  }
}

H3Matrix H3Matrix::random(unsigned key_bits, unsigned index_bits, std::uint64_t seed) {
  if (index_bits == 0 || index_bits > kMaxIndexBits) {
    throw std::invalid_argument("h3: index_bits must be in [1, 63]");
  }
  const std::uint64_t mask = (std::uint64_t{1} << index_bits) - 1;
  std::vector<std::uint64_t> rows(key_bits);
  std::uint64_t state = seed;
  for (auto& r : rows) r = splitmix64(state) & mask;
  return H3Matrix(key_bits, index_bits, std::move(rows));
}

std::uint64_t H3Matrix::hash(U128 key) const {
  if (!key.fits(key_bits_)) throw std::invalid_argument("h3: key wider than key_bits");
  std::uint64_t acc = 0;
  for (std::uint64_t x = key.lo; x != 0; x &= x - 1) {
    acc ^= rows_[static_cast<std::size_t>(std::countr_zero(x))];
  }
  for (std::uint64_t x = key.hi; x != 0; x &= x - 1) {
    acc ^= rows_[64 + static_cast<std::size_t>(std::countr_zero(x))];
  }
  return acc;
}

std::string H3Matrix::to_text() const {
  std::ostringstream os;
  os << "h3 " << key_bits_ << ' ' << index_bits_ << '\n';
  for (std::uint64_t r : rows_) os << to_hex(U128{r}, hex_digits(index_bits_)) << '\n';
  return os.str();
}

H3Matrix H3Matrix::from_text(std::string_view text) {
  std::istringstream is{std::string(text)};
  std::string tag;
  unsigned key_bits = 0;
  unsigned index_bits = 0;
  if (!(is >> tag >> key_bits >> index_bits) || tag != "h3") {
    throw std::invalid_argument("h3: missing 'h3 <key_bits> <index_bits>' header");
  }
  std::vector<std::uint64_t> rows;
  std::string tok;
  while (is >> tok) {
    auto v = parse_hex(tok);
    if (!v || v->hi != 0) throw std::invalid_argument("h3: bad row '" + tok + "'");
    rows.push_back(v->lo);
  }
  return H3Matrix(key_bits, index_bits, std::move(rows));
}

}  // namespace xorht
