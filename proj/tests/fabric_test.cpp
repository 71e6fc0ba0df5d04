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

#include <random>
#include <set>

#include "xorht/fabric.hpp"

namespace xorht {
namespace {

Query mk(OpKind op, std::size_t index) { return Query{op, U128{index}, 0, index}; }

TEST(Dispatcher, SearchesSpreadOverAllPes) {
  Dispatcher d(4, 4, OverflowMode::Defer);
  const std::vector<Query> batch = {mk(OpKind::Search, 0), mk(OpKind::Search, 1), mk(OpKind::Search, 2),
                                    mk(OpKind::Search, 3)};
  const DispatchResult r = d.dispatch(batch);
  ASSERT_EQ(r.assigned.size(), 4U);
  std::set<unsigned> pes;
  for (const Assignment& a : r.assigned) pes.insert(a.pe);
  EXPECT_EQ(pes.size(), 4U);
  EXPECT_TRUE(r.deferred.empty());
}

TEST(Dispatcher, ExcessNsqDeferred) {
  Dispatcher d(4, 2, OverflowMode::Defer);
  const std::vector<Query> batch = {mk(OpKind::Insert, 0), mk(OpKind::Insert, 1), mk(OpKind::Insert, 2),
                                    mk(OpKind::Search, 3)};
  const DispatchResult r = d.dispatch(batch);
  ASSERT_EQ(r.assigned.size(), 3U);
  ASSERT_EQ(r.deferred.size(), 1U);
  EXPECT_EQ(r.deferred[0].trace_index, 2U);
  unsigned inserts = 0;
  for (const Assignment& a : r.assigned) {
    if (a.query.op == OpKind::Insert) {
      ++inserts;
      EXPECT_LT(a.pe, 2U);
    }
  }
  EXPECT_EQ(inserts, 2U);
}

TEST(Dispatcher, RejectModeReportsOverflow) {
  Dispatcher d(4, 1, OverflowMode::Reject);
  const std::vector<Query> batch = {mk(OpKind::Delete, 0), mk(OpKind::Update, 1)};
  const DispatchResult r = d.dispatch(batch);
  EXPECT_EQ(r.assigned.size(), 1U);
  EXPECT_TRUE(r.deferred.empty());
  ASSERT_EQ(r.rejected.size(), 1U);
  EXPECT_EQ(r.rejected[0].trace_index, 1U);
}

TEST(Dispatcher, EmptyBatch) {
  Dispatcher d(4, 2, OverflowMode::Defer);
  const DispatchResult r = d.dispatch({});
  EXPECT_TRUE(r.assigned.empty());
  EXPECT_TRUE(r.deferred.empty());
}

TEST(Dispatcher, RandomBatchesRespectCapacity) {
  std::mt19937_64 rng(21);
  for (int t = 0; t < 2000; ++t) {
    const unsigned p = 1 + static_cast<unsigned>(rng() % 16);
    const unsigned k = 1 + static_cast<unsigned>(rng() % p);
    Dispatcher d(p, k, OverflowMode::Defer);
    for (int cycle = 0; cycle < 5; ++cycle) {
      std::vector<Query> batch;
      const unsigned n = static_cast<unsigned>(rng() % (p + 1));
      for (unsigned i = 0; i < n; ++i) batch.push_back(mk(static_cast<OpKind>(rng() % 4), i));
      const DispatchResult r = d.dispatch(batch);
      std::set<unsigned> pes;
      unsigned nsq = 0;
      for (const Assignment& a : r.assigned) {
        ASSERT_TRUE(pes.insert(a.pe).second);
        ASSERT_LT(a.pe, p);
        if (is_nsq(a.query.op)) {
          ++nsq;
          ASSERT_LT(a.pe, k);
        }
      }
      ASSERT_LE(nsq, k);
      ASSERT_EQ(r.assigned.size() + r.deferred.size(), batch.size());
      for (std::size_t i = 1; i < r.deferred.size(); ++i) {
        ASSERT_LT(r.deferred[i - 1].trace_index, r.deferred[i].trace_index);
      }
      unsigned offered_nsq = 0;
      for (const Query& q : batch) offered_nsq += is_nsq(q.op) ? 1 : 0;
      if (offered_nsq <= k) {
        ASSERT_TRUE(r.deferred.empty());
      }
    }
  }
}

MutationMessage message(unsigned owner, unsigned entry, unsigned slot, U128 key, U128 value) {
  MutationMessage m;
  m.owner = owner;
  m.origin_pe = owner;
  m.entry = entry;
  m.slot = slot;
  m.word = EncodedSlot{concat(key, value, 16), true};
  return m;
}

TEST(Fabric, OneReplicaPerCycleInRingOrder) {
  const StoreGeometry g{4, 4, 2, 16, 16};
  std::vector<Replica> reps(4, Replica(g));
  Fabric f(4);
  f.inject(message(2, 1, 0, 0xaa, 0xbb));
  const Cycle c = 10;
  for (Cycle t = c; t < c + 4; ++t) {
    const auto retired = f.propagate_step(reps, t);
    // Hop h (1-based) reaches replica (2 + h - 1) mod 4.
    const unsigned hops = static_cast<unsigned>(t - c + 1);
    for (unsigned r = 0; r < 4; ++r) {
      const unsigned distance = (r + 4 - 2) % 4;
      EXPECT_EQ(decode_slot(reps[r], 1, 0).occupied, distance < hops) << "cycle " << t << " replica " << r;
    }
    EXPECT_EQ(retired.size(), t == c + 3 ? 1U : 0U);
  }
  EXPECT_TRUE(f.idle());
}

TEST(Fabric, SinglePeRetiresAfterOneHop) {
  const StoreGeometry g{1, 2, 1, 16, 16};
  std::vector<Replica> reps(1, Replica(g));
  Fabric f(1);
  f.inject(message(0, 0, 0, 1, 2));
  EXPECT_EQ(f.propagate_step(reps, 0).size(), 1U);
  EXPECT_TRUE(f.idle());
  EXPECT_TRUE(decode_slot(reps[0], 0, 0).occupied);
}

TEST(Fabric, DistinctOwnersSameCellSameCycle) {
  const StoreGeometry g{2, 1, 1, 16, 16};
  std::vector<Replica> reps(3, Replica(g));
  Fabric f(3);
  f.inject(message(0, 0, 0, 0x11, 0x22));
  f.inject(message(1, 0, 0, 0x33, 0x44));
  for (Cycle t = 0; t < 3; ++t) ASSERT_NO_THROW(f.propagate_step(reps, t));
  EXPECT_TRUE(f.idle());
  // Both words landed, so every replica decodes to their XOR.
  const DataWord expect = concat(0x11, 0x22, 16) ^ concat(0x33, 0x44, 16);
  for (const Replica& r : reps) {
    const DecodedSlot d = decode_slot(r, 0, 0);
    EXPECT_FALSE(d.occupied);
    EXPECT_EQ(concat(d.key, d.value, 16), expect);
  }
}

TEST(Fabric, SameOwnerTwiceInOneCycleHalts) {
  const StoreGeometry g{2, 2, 1, 16, 16};
  std::vector<Replica> reps(2, Replica(g));
  Fabric f(2);
  f.inject(message(0, 0, 0, 1, 1));
  f.inject(message(0, 1, 0, 2, 2));
  EXPECT_THROW(f.propagate_step(reps, 0), DisciplineViolation);
}

TEST(Fabric, PerOwnerOrderPreserved) {
  const StoreGeometry g{2, 1, 1, 16, 16};
  std::vector<Replica> reps(4, Replica(g));
  Fabric f(4);
  for (Cycle t = 0; t < 6; ++t) {
    f.inject(message(1, 0, 0, 7, static_cast<std::uint64_t>(t)));
    f.propagate_step(reps, t);
  }
  for (Cycle t = 6; t < 9; ++t) f.propagate_step(reps, t);
  for (const Replica& r : reps) EXPECT_EQ(decode_slot(r, 0, 0).value, U128{5});
}

TEST(Fabric, FaultFlipsLastHopOnly) {
  const StoreGeometry g{1, 1, 1, 16, 16};
  std::vector<Replica> reps(3, Replica(g));
  Fabric f(3, FaultPlan{0, 0, 4});
  f.inject(message(0, 0, 0, 0, 0));
  for (Cycle t = 0; t < 3; ++t) f.propagate_step(reps, t);
  EXPECT_EQ(decode_slot(reps[0], 0, 0).value, U128{0});
  EXPECT_EQ(decode_slot(reps[1], 0, 0).value, U128{0});
  EXPECT_EQ(decode_slot(reps[2], 0, 0).value, U128{16});
}

}  // namespace
}  // namespace xorht
