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

#include "xorht/xorstore.hpp"

#include <algorithm>
#include <ostream>
#include <sstream>

namespace xorht {

void StoreGeometry::validate() const {
  if (banks == 0) throw std::invalid_argument("store: need at least one bank");
  if (entries == 0 || slots == 0) throw std::invalid_argument("store: empty geometry");
  if (key_bits == 0 || key_bits > 128) throw std::invalid_argument("store: key_bits must be in [1, 128]");
  if (value_bits == 0 || value_bits > 128) {
    throw std::invalid_argument("store: value_bits must be in [1, 128]");
  }
}

Bank::Bank(unsigned owner, const StoreGeometry& geom)
    : owner_(owner),
      entries_(geom.entries),
      slots_(geom.slots),
      limbs_((geom.data_bits() + 63) / 64),
      data_(static_cast<std::size_t>(geom.entries) * geom.slots * limbs_, 0),
      occ_(static_cast<std::size_t>(geom.entries) * geom.slots, 0) {}

std::size_t Bank::cell(unsigned entry, unsigned slot) const {
  return static_cast<std::size_t>(entry) * slots_ + slot;
}

EncodedSlot Bank::peek(unsigned entry, unsigned slot) const {
  const std::size_t c = cell(entry, slot);
  EncodedSlot w;
  for (unsigned i = 0; i < limbs_; ++i) w.data.limbs[i] = data_[c * limbs_ + i];
  w.occ = occ_[c] != 0;
  return w;
}

void Bank::read_row(unsigned entry, Cycle cycle, std::span<EncodedSlot> out) {
  if (cycle == last_read_) {
    std::ostringstream os;
    os << "bank " << owner_ << ": second row read in cycle " << cycle;
    throw DisciplineViolation(os.str());
  }
  last_read_ = cycle;
  for (unsigned s = 0; s < slots_; ++s) out[s] = peek(entry, s);
}

void Bank::write(unsigned writer, unsigned entry, unsigned slot, const EncodedSlot& word,
                 Cycle cycle) {
  if (writer != owner_) {
    std::ostringstream os;
    os << "bank " << owner_ << ": write from foreign owner " << writer;
    throw DisciplineViolation(os.str());
  }
  if (cycle == last_write_) {
    std::ostringstream os;
    os << "bank " << owner_ << ": second write in cycle " << cycle;
    throw DisciplineViolation(os.str());
  }
  last_write_ = cycle;
  const std::size_t c = cell(entry, slot);
  for (unsigned i = 0; i < limbs_; ++i) data_[c * limbs_ + i] = word.data.limbs[i];
  occ_[c] = word.occ ? 1 : 0;
}

bool Bank::same_row(const Bank& other, unsigned entry) const {
  const std::size_t first = cell(entry, 0);
  const auto d = static_cast<std::ptrdiff_t>(first * limbs_);
  const auto dn = static_cast<std::ptrdiff_t>(std::size_t{slots_} * limbs_);
  const auto o = static_cast<std::ptrdiff_t>(first);
  return std::equal(data_.begin() + d, data_.begin() + d + dn, other.data_.begin() + d) &&
         std::equal(occ_.begin() + o, occ_.begin() + o + slots_, other.occ_.begin() + o);
}

bool Bank::same_contents(const Bank& other) const { return data_ == other.data_ && occ_ == other.occ_; }

Replica::Replica(const StoreGeometry& geom) : geom_(geom) {
  geom_.validate();
  banks_.reserve(geom_.banks);
  for (unsigned b = 0; b < geom_.banks; ++b) banks_.emplace_back(b, geom_);
}

void Replica::read_row(unsigned entry, Cycle cycle, std::span<EncodedSlot> out) {
  for (unsigned b = 0; b < geom_.banks; ++b) {
    banks_[b].read_row(entry, cycle, out.subspan(static_cast<std::size_t>(b) * geom_.slots, geom_.slots));
  }
}

std::vector<EncodedSlot> Replica::column(unsigned entry, unsigned slot) const {
  std::vector<EncodedSlot> col;
  col.reserve(geom_.banks);
  for (const Bank& b : banks_) col.push_back(b.peek(entry, slot));
  return col;
}

std::vector<DecodedSlot> Replica::decode_row(unsigned entry) const {
  std::vector<DecodedSlot> row(geom_.slots);
  for (unsigned s = 0; s < geom_.slots; ++s) row[s] = decode_slot(*this, entry, s);
  return row;
}

void Replica::dump_hex(std::ostream& os) const {
  for (const Bank& b : banks_) {
    for (unsigned e = 0; e < geom_.entries; ++e) {
      for (unsigned s = 0; s < geom_.slots; ++s) {
        const EncodedSlot w = b.peek(e, s);
        os << to_hex(w.data, geom_.data_bits()) << ' ' << (w.occ ? 1 : 0) << '\n';
      }
    }
  }
}

DecodedSlot decode_column(std::span<const EncodedSlot> column, unsigned key_bits,
                          unsigned value_bits) {
  DataWord data;
  bool occ = false;
  for (const EncodedSlot& w : column) {
    data ^= w.data;
    occ ^= w.occ;
  }
  return DecodedSlot{occ, extract(data, value_bits, key_bits), extract(data, 0, value_bits)};
}

EncodedSlot encode_upsert(std::span<const EncodedSlot> column, unsigned owner, U128 key,
                          U128 value, unsigned value_bits) {
  if (owner >= column.size()) throw std::out_of_range("encode_upsert: owner out of range");
  EncodedSlot w{concat(key, value, value_bits), true};
  for (unsigned b = 0; b < column.size(); ++b) {
    if (b == owner) continue;
    w.data ^= column[b].data;
    w.occ ^= column[b].occ;
  }
  return w;
}

EncodedSlot encode_delete(std::span<const EncodedSlot> column, unsigned owner) {
  if (owner >= column.size()) throw std::out_of_range("encode_delete: owner out of range");
  EncodedSlot w{column[owner].data, false};
  for (unsigned b = 0; b < column.size(); ++b) {
    if (b != owner) w.occ ^= column[b].occ;
  }
  return w;
}

DecodedSlot decode_slot(const Replica& replica, unsigned entry, unsigned slot) {
  const auto& g = replica.geometry();
  return decode_column(replica.column(entry, slot), g.key_bits, g.value_bits);
}

EncodedSlot encode_upsert(const Replica& replica, unsigned owner, unsigned entry, unsigned slot,
                          U128 key, U128 value) {
  return encode_upsert(replica.column(entry, slot), owner, key, value,
                       replica.geometry().value_bits);
}

EncodedSlot encode_delete(const Replica& replica, unsigned owner, unsigned entry, unsigned slot) {
  return encode_delete(replica.column(entry, slot), owner);
}

void apply_write(Bank& bank, unsigned writer, unsigned entry, unsigned slot,
                 const EncodedSlot& word, Cycle cycle) {
  bank.write(writer, entry, slot, word, cycle);
}

std::uint64_t blocks_required(const XorMemSpec& spec, bool shared_read_ports) {
  if (spec.read_ports == 0 || spec.write_ports == 0) {
    throw std::invalid_argument("xor memory: need at least one read and one write port");
  }
  const std::uint64_t m = spec.read_ports;
  const std::uint64_t n = spec.write_ports;
  return shared_read_ports ? m * n : n * (n - 1 + m);
}

}  // namespace xorht
