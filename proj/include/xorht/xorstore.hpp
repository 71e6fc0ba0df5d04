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
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "xorht/bits.hpp"

namespace xorht {

/// One XOR-encoded fragment: data bits plus an occupancy parity bit.
/// The decoded slot at (entry, slot) is the XOR of these across all banks.
struct EncodedSlot {
  DataWord data;
  bool occ = false;

  friend bool operator==(const EncodedSlot&, const EncodedSlot&) = default;
};

struct DecodedSlot {
  bool occupied = false;
  U128 key;
  U128 value;

  friend bool operator==(const DecodedSlot&, const DecodedSlot&) = default;
};

struct StoreGeometry {
  unsigned banks = 1;
  unsigned entries = 1;
  unsigned slots = 1;
  unsigned key_bits = 32;
  unsigned value_bits = 32;

  unsigned data_bits() const { return key_bits + value_bits; }
  void validate() const;
};

/// Raised when a single-read/single-write bank sees a second access in one
/// cycle, or a write from a mutation PE that does not own it.
class DisciplineViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// One 1R1W SRAM bank: entries x slots encoded words, written only by the
/// mutation PE whose index equals `owner`.
class Bank {
 public:
  Bank(unsigned owner, const StoreGeometry& geom);

  unsigned owner() const { return owner_; }

  /// Unported access, for inspection and tests.
  EncodedSlot peek(unsigned entry, unsigned slot) const;

  /// Reads a full entry row through the read port. `out` holds `slots` words.
  void read_row(unsigned entry, Cycle cycle, std::span<EncodedSlot> out);

  void write(unsigned writer, unsigned entry, unsigned slot, const EncodedSlot& word, Cycle cycle);

  /// Cell contents only; port history is ignored.
  bool same_row(const Bank& other, unsigned entry) const;
  bool same_contents(const Bank& other) const;

 private:
  std::size_t cell(unsigned entry, unsigned slot) const;

  unsigned owner_;
  unsigned entries_;
  unsigned slots_;
  unsigned limbs_;
  std::vector<std::uint64_t> data_;
  std::vector<std::uint8_t> occ_;
  Cycle last_read_ = -1;
  Cycle last_write_ = -1;
};

/// One PE's copy of the table: k banks, bank b owned by mutation PE b.
class Replica {
 public:
  explicit Replica(const StoreGeometry& geom);

  const StoreGeometry& geometry() const { return geom_; }
  Bank& bank(unsigned b) { return banks_[b]; }
  const Bank& bank(unsigned b) const { return banks_[b]; }

  /// Row read from every bank; out[b * slots + s] is bank b, slot s.
  void read_row(unsigned entry, Cycle cycle, std::span<EncodedSlot> out);

  /// The k words at (entry, slot), indexed by bank.
  std::vector<EncodedSlot> column(unsigned entry, unsigned slot) const;

  std::vector<DecodedSlot> decode_row(unsigned entry) const;

  /// Bank-major, entry-major, slot-major; one "<key||value hex> <occ>" line per cell.
  void dump_hex(std::ostream& os) const;

 private:
  StoreGeometry geom_;
  std::vector<Bank> banks_;
};

DecodedSlot decode_column(std::span<const EncodedSlot> column, unsigned key_bits,
                          unsigned value_bits);

/// Word for bank `owner` so that the column decodes to occupied (key, value).
EncodedSlot encode_upsert(std::span<const EncodedSlot> column, unsigned owner, U128 key,
                          U128 value, unsigned value_bits);

/// Word for bank `owner` that clears decoded occupancy. Data bits are kept.
EncodedSlot encode_delete(std::span<const EncodedSlot> column, unsigned owner);

DecodedSlot decode_slot(const Replica& replica, unsigned entry, unsigned slot);
EncodedSlot encode_upsert(const Replica& replica, unsigned owner, unsigned entry, unsigned slot,
                          U128 key, U128 value);
EncodedSlot encode_delete(const Replica& replica, unsigned owner, unsigned entry, unsigned slot);

/// Writes `word` verbatim; `writer` is the mutation PE issuing the write.
void apply_write(Bank& bank, unsigned writer, unsigned entry, unsigned slot,
                 const EncodedSlot& word, Cycle cycle);

/// m read ports, n write ports.
struct XorMemSpec {
  unsigned read_ports = 1;
  unsigned write_ports = 1;
};

/// SRAM blocks for an mRnW XOR memory: n(n-1+m) in the classic layout,
/// m*n when writes reuse the read ports.
std::uint64_t blocks_required(const XorMemSpec& spec, bool shared_read_ports);

}  // namespace xorht
