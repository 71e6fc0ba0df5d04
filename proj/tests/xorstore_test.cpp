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


#include <gtest/gtest.h>

#include <map>
#include <optional>
#include <random>
#include <sstream>

#include "xorht/xorstore.hpp"

namespace xorht {
namespace {

StoreGeometry geom(unsigned banks, unsigned entries = 4, unsigned slots = 2) {
  return StoreGeometry{banks, entries, slots, 32, 32};
}

void upsert(Replica& r, unsigned owner, unsigned e, unsigned s, U128 k, U128 v, Cycle c) {
  apply_write(r.bank(owner), owner, e, s, encode_upsert(r, owner, e, s, k, v), c);
}

void remove(Replica& r, unsigned owner, unsigned e, unsigned s, Cycle c) {
  apply_write(r.bank(owner), owner, e, s, encode_delete(r, owner, e, s), c);
}

TEST(XorStore, BlockCounts) {
  EXPECT_EQ(blocks_required({2, 2}, false), 6U);
  EXPECT_EQ(blocks_required({2, 2}, true), 4U);
  EXPECT_EQ(blocks_required({1, 1}, false), 1U);
  EXPECT_EQ(blocks_required({1, 1}, true), 1U);
  EXPECT_THROW(blocks_required({0, 1}, true), std::invalid_argument);
}

TEST(XorStore, SharedLayoutNeverLarger) {
  for (unsigned m = 1; m <= 16; ++m) {
    for (unsigned n = 2; n <= 16; ++n) {
      EXPECT_LE(blocks_required({m, n}, true), blocks_required({m, n}, false)) << m << "R" << n << "W";
      EXPECT_EQ(blocks_required({m, n}, false), std::uint64_t{n} * (n - 1 + m));
    }
  }
}

TEST(XorStore, EmptyDecodesUnoccupied) {
  Replica r(geom(3));
  EXPECT_FALSE(decode_slot(r, 1, 1).occupied);
}

TEST(XorStore, FreshInsertStoresRawPair) {
  Replica r(geom(3));
  const EncodedSlot w = encode_upsert(r, 0, 2, 1, 0x1234, 0x55);
  EXPECT_EQ(w.data, concat(0x1234, 0x55, 32));
  EXPECT_TRUE(w.occ);
  apply_write(r.bank(0), 0, 2, 1, w, 0);
  const DecodedSlot d = decode_slot(r, 2, 1);
  EXPECT_TRUE(d.occupied);
  EXPECT_EQ(d.key, U128{0x1234});
  EXPECT_EQ(d.value, U128{0x55});
}

TEST(XorStore, UpdateWithinOwnBankOverwritesValue) {
  Replica r(geom(2));
  upsert(r, 0, 0, 0, 7, 1, 0);
  const EncodedSlot w = encode_upsert(r, 0, 0, 0, 7, 2);
  EXPECT_EQ(w.data, concat(7, 2, 32));
  EXPECT_TRUE(w.occ);
}

TEST(XorStore, MixedOwnerSequenceMatchesMap) {
  Replica r(geom(3));
  std::map<int, std::pair<U128, U128>> oracle;  // slot 0 of entry 0
  upsert(r, 0, 0, 0, 0xa1, 0xb1, 0);
  oracle[0] = {0xa1, 0xb1};
  upsert(r, 1, 0, 0, 0xa1, 0xb2, 1);
  oracle[0] = {0xa1, 0xb2};
  remove(r, 0, 0, 0, 2);
  oracle.erase(0);
  EXPECT_FALSE(decode_slot(r, 0, 0).occupied);
  upsert(r, 2, 0, 0, 0xc3, 0xd3, 3);
  oracle[0] = {0xc3, 0xd3};
  const DecodedSlot d = decode_slot(r, 0, 0);
  ASSERT_TRUE(d.occupied);
  EXPECT_EQ(d.key, oracle[0].first);
  EXPECT_EQ(d.value, oracle[0].second);
}

TEST(XorStore, DeleteBalancesSpreadParity) {
  Replica r(geom(3));
  upsert(r, 0, 1, 0, 5, 6, 0);
  remove(r, 1, 1, 0, 1);  // occupancy now spread over banks 0 and 1
  upsert(r, 2, 1, 0, 8, 9, 2);
  ASSERT_TRUE(decode_slot(r, 1, 0).occupied);
  const EncodedSlot w = encode_delete(r, 1, 1, 0);
  const bool others = r.bank(0).peek(1, 0).occ ^ r.bank(2).peek(1, 0).occ;
  EXPECT_EQ(w.occ, others);
  EXPECT_EQ(w.data, r.bank(1).peek(1, 0).data);
  apply_write(r.bank(1), 1, 1, 0, w, 3);
  EXPECT_FALSE(decode_slot(r, 1, 0).occupied);
}

TEST(XorStore, ReinsertAfterDeleteByOtherOwner) {
  Replica r(geom(4));
  upsert(r, 3, 0, 1, 11, 12, 0);
  remove(r, 3, 0, 1, 1);
  upsert(r, 1, 0, 1, 21, 22, 2);
  const DecodedSlot d = decode_slot(r, 0, 1);
  EXPECT_TRUE(d.occupied);
  EXPECT_EQ(d.key, U128{21});
  EXPECT_EQ(d.value, U128{22});
}

TEST(XorStore, RandomResidueRoundTrip) {
  std::mt19937_64 rng(3);
  const StoreGeometry g{4, 1, 1, 64, 64};
  for (int t = 0; t < 2000; ++t) {
    Replica r(g);
    for (unsigned b = 0; b < 4; ++b) {
      EncodedSlot junk{concat(U128{rng()}, U128{rng()}, 64), (rng() & 1) != 0};
      apply_write(r.bank(b), b, 0, 0, junk, 0);
    }
    const unsigned owner = static_cast<unsigned>(rng() % 4);
    const U128 k{rng()};
    const U128 v{rng()};
    apply_write(r.bank(owner), owner, 0, 0, encode_upsert(r, owner, 0, 0, k, v), 1);
    const DecodedSlot d = decode_slot(r, 0, 0);
    ASSERT_TRUE(d.occupied);
    ASSERT_EQ(d.key, k);
    ASSERT_EQ(d.value, v);
  }
}

TEST(XorStore, WideWordsRoundTrip) {
  const StoreGeometry g{2, 2, 1, 128, 128};
  Replica r(g);
  const U128 k{0x0123456789abcdefULL, 0xfedcba9876543210ULL};
  const U128 v{~0ULL, 1};
  upsert(r, 1, 1, 0, k, v, 0);
  upsert(r, 0, 1, 0, k, v ^ U128{5}, 1);
  const DecodedSlot d = decode_slot(r, 1, 0);
  EXPECT_EQ(d.key, k);
  EXPECT_EQ(d.value, v ^ U128{5});
}

TEST(XorStore, DistinctOwnersCommute) {
  std::mt19937_64 rng(17);
  for (int t = 0; t < 500; ++t) {
    Replica base(geom(3, 1, 1));
    upsert(base, static_cast<unsigned>(rng() % 3), 0, 0, rng() & 0xffff, rng() & 0xffff, 0);
    const EncodedSlot a = encode_upsert(base, 0, 0, 0, rng() & 0xffff, rng() & 0xffff);
    const EncodedSlot b = encode_delete(base, 2, 0, 0);
    Replica x = base;
    Replica y = base;
    apply_write(x.bank(0), 0, 0, 0, a, 1);
    apply_write(x.bank(2), 2, 0, 0, b, 2);
    apply_write(y.bank(2), 2, 0, 0, b, 1);
    apply_write(y.bank(0), 0, 0, 0, a, 2);
    ASSERT_EQ(decode_slot(x, 0, 0), decode_slot(y, 0, 0));
  }
}

TEST(XorStore, DifferentialAgainstMap) {
  std::mt19937_64 rng(2718);
  for (int seq = 0; seq < 10000; ++seq) {
    const unsigned k = 1 + static_cast<unsigned>(rng() % 4);
    const unsigned entries = 1 + static_cast<unsigned>(rng() % 16);
    const unsigned slots = 1 + static_cast<unsigned>(rng() % 4);
    Replica r(StoreGeometry{k, entries, slots, 16, 16});
    std::map<std::pair<unsigned, unsigned>, std::pair<U128, U128>> oracle;
    const int ops = 1 + static_cast<int>(rng() % 12);
    for (int i = 0; i < ops; ++i) {
      const unsigned owner = static_cast<unsigned>(rng() % k);
      const unsigned e = static_cast<unsigned>(rng() % entries);
      const unsigned s = static_cast<unsigned>(rng() % slots);
      if (rng() % 3 == 0) {
        remove(r, owner, e, s, i);
        oracle.erase({e, s});
      } else {
        const U128 key{rng() & 0xffff};
        const U128 val{rng() & 0xffff};
        upsert(r, owner, e, s, key, val, i);
        oracle[{e, s}] = {key, val};
      }
    }
    for (unsigned e = 0; e < entries; ++e) {
      for (unsigned s = 0; s < slots; ++s) {
        const DecodedSlot d = decode_slot(r, e, s);
        const auto it = oracle.find({e, s});
        ASSERT_EQ(d.occupied, it != oracle.end()) << "sequence " << seq;
        if (d.occupied) {
          ASSERT_EQ(d.key, it->second.first);
          ASSERT_EQ(d.value, it->second.second);
        }
      }
    }
  }
}

TEST(XorStore, OneWritePerBankPerCycle) {
  Replica r(geom(2));
  const EncodedSlot w{concat(1, 2, 32), true};
  apply_write(r.bank(0), 0, 0, 0, w, 5);
  EXPECT_EQ(r.bank(0).peek(0, 0), w);
  apply_write(r.bank(1), 1, 0, 0, w, 5);
  EXPECT_THROW(apply_write(r.bank(0), 0, 1, 1, w, 5), DisciplineViolation);
  EXPECT_NO_THROW(apply_write(r.bank(0), 0, 1, 1, w, 6));
}

TEST(XorStore, ForeignWriterRejected) {
  Replica r(geom(2));
  EXPECT_THROW(apply_write(r.bank(1), 0, 0, 0, EncodedSlot{}, 0), DisciplineViolation);
}

TEST(XorStore, OneRowReadPerBankPerCycle) {
  Replica r(geom(2));
  std::vector<EncodedSlot> row(4);
  r.read_row(0, 3, row);
  EXPECT_THROW(r.read_row(1, 3, row), DisciplineViolation);
  EXPECT_NO_THROW(r.read_row(1, 4, row));
}

TEST(XorStore, HexDumpGolden) {
  Replica r(StoreGeometry{2, 2, 1, 8, 8});
  upsert(r, 0, 1, 0, 0xab, 0xcd, 0);
  upsert(r, 1, 1, 0, 0xab, 0x01, 1);
  std::ostringstream os;
  r.dump_hex(os);
  // bank 0: entry 0, entry 1; bank 1: entry 0, entry 1
  EXPECT_EQ(os.str(), "0000 0\nabcd 1\n0000 0\n00cc 0\n");
}

}  // namespace
}  // namespace xorht
