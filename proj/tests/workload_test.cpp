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

#include <filesystem>
#include <fstream>
#include <map>
#include <random>
#include <set>
#include <sstream>

#include "xorht/engine.hpp"
#include "xorht/workload.hpp"

namespace xorht {
namespace {

SimConfig cfg(unsigned p, unsigned k) {
  SimConfig c;
  c.p = p;
  c.k = k;
  c.entries = 1024;
  return c;
}

TEST(Uniform, ZeroFractionIsAllSearches) {
  WorkloadSpec w;
  w.nsq_fraction = 0;
  w.total_queries = 5000;
  const auto t = gen_uniform(w, cfg(8, 4));
  ASSERT_EQ(t.size(), 5000U);
  for (const Query& q : t) EXPECT_EQ(q.op, OpKind::Search);
}

TEST(Uniform, BatchesRespectMutationCap) {
  WorkloadSpec w;
  w.nsq_fraction = 0.5;
  w.total_queries = 100000;
  const auto t = gen_uniform(w, cfg(8, 4));
  ASSERT_EQ(t.size(), 100000U);
  std::size_t nsq = 0;
  for (std::size_t b = 0; b < t.size(); b += 8) {
    unsigned in_batch = 0;
    for (std::size_t i = b; i < std::min(b + 8, t.size()); ++i) in_batch += is_nsq(t[i].op);
    ASSERT_LE(in_batch, 4U) << "batch at " << b;
    nsq += in_batch;
  }
  EXPECT_NEAR(static_cast<double>(nsq) / 100000.0, 0.5, 0.01);
}

TEST(Uniform, MixAndKeySpace) {
  WorkloadSpec w;
  w.nsq_fraction = 0.5;
  w.total_queries = 80000;
  w.key_space_bits = 12;
  w.mix = {1, 1, 2};
  const auto t = gen_uniform(w, cfg(4, 4));
  std::map<OpKind, double> count;
  for (const Query& q : t) {
    ++count[q.op];
    EXPECT_TRUE(q.key.fits(12));
  }
  const double nsq = count[OpKind::Insert] + count[OpKind::Update] + count[OpKind::Delete];
  EXPECT_NEAR(count[OpKind::Insert] / nsq, 0.25, 0.02);
  EXPECT_NEAR(count[OpKind::Update] / nsq, 0.25, 0.02);
  EXPECT_NEAR(count[OpKind::Delete] / nsq, 0.5, 0.02);
  for (std::size_t i = 0; i < t.size(); ++i) EXPECT_EQ(t[i].trace_index, i);
}

TEST(Uniform, DeterministicInSeed) {
  WorkloadSpec w;
  w.total_queries = 3000;
  const auto a = gen_uniform(w, cfg(8, 8));
  const auto b = gen_uniform(w, cfg(8, 8));
  EXPECT_EQ(a, b);
  w.seed = 2;
  EXPECT_NE(a, gen_uniform(w, cfg(8, 8)));
}

TEST(Uniform, RejectsUnreachableFraction) {
  WorkloadSpec w;
  w.nsq_fraction = 0.75;
  try {
    gen_uniform(w, cfg(8, 4));
    FAIL() << "expected rejection";
  } catch (const std::invalid_argument& e) {
    EXPECT_NE(std::string(e.what()).find("nsq_fraction"), std::string::npos);
  }
  w.nsq_fraction = -0.1;
  EXPECT_THROW(w.validate(), std::invalid_argument);
  w.nsq_fraction = 0.5;
  w.mix = {0, 0, 0};
  EXPECT_THROW(w.validate(), std::invalid_argument);
}

TEST(SameBucket, EveryKeyHitsTarget) {
  SimConfig c = cfg(16, 16);
  WorkloadSpec w;
  w.distribution = Distribution::SameBucket;
  w.nsq_fraction = 1.0;
  w.total_queries = 20000;
  w.target_bucket = 77;
  const H3Matrix m = c.matrix();
  const auto t = generate(w, c);
  std::set<U128> keys;
  for (const Query& q : t) {
    ASSERT_EQ(m.hash(q.key), 77U);
    keys.insert(q.key);
  }
  EXPECT_GT(keys.size(), 100U);
}

TEST(SameBucket, UnreachableTargetThrows) {
  // Every row only sets bit 0, so the image is {0, 1}.
  const H3Matrix m(8, 3, std::vector<std::uint64_t>(8, 1));
  EXPECT_EQ(gf2_rank(m), 1U);
  EXPECT_FALSE(preimage_space(m, 2).has_value());
  SimConfig c = cfg(4, 4);
  c.entries = 8;
  c.key_bits = 8;
  WorkloadSpec w;
  w.key_space_bits = 8;
  EXPECT_THROW(gen_same_bucket(w, c, m, 2), UnreachableBucket);
  EXPECT_NO_THROW(gen_same_bucket(w, c, m, 1));
}

TEST(Preimage, DistinctAndExhaustive) {
  std::mt19937_64 rng(17);
  for (int t = 0; t < 300; ++t) {
    const unsigned kb = 1 + static_cast<unsigned>(rng() % 14);
    const unsigned ib = 1 + static_cast<unsigned>(rng() % 6);
    std::vector<std::uint64_t> rows(kb);
    const bool sparse = t % 3 == 0;
    for (auto& r : rows) r = sparse ? (rng() & 1) : rng() & ((1U << ib) - 1);
    const H3Matrix m(kb, ib, rows);
    const unsigned rank = gf2_rank(m);
    const std::uint64_t target = rng() & ((1U << ib) - 1);

    // Brute force over the whole key space.
    std::set<U128> truth;
    for (std::uint64_t k = 0; k < (1ULL << kb); ++k) {
      if (m.hash(k) == target) truth.insert(k);
    }
    const auto space = preimage_space(m, target);
    ASSERT_EQ(space.has_value(), !truth.empty());
    if (!space) continue;
    ASSERT_EQ(space->kernel.size(), kb - rank);
    ASSERT_EQ(truth.size(), 1ULL << (kb - rank));

    const std::uint64_t want = 1 + rng() % 64;
    const auto keys = distinct_preimages(*space, want, rng());
    ASSERT_EQ(keys.size(), std::min<std::uint64_t>(want, truth.size()));
    std::set<U128> seen;
    for (U128 k : keys) {
      ASSERT_TRUE(truth.count(k));
      ASSERT_TRUE(seen.insert(k).second);
    }
  }
}

TEST(Rank, KnownMatrices) {
  std::vector<std::uint64_t> id = {1, 2, 4, 8};
  EXPECT_EQ(gf2_rank(H3Matrix(4, 4, id)), 4U);
  EXPECT_EQ(gf2_rank(H3Matrix(4, 4, {1, 2, 3, 3})), 2U);
  EXPECT_EQ(gf2_rank(H3Matrix(4, 4, {0, 0, 0, 0})), 0U);
  EXPECT_EQ(gf2_rank(H3Matrix(4, 4, id), 2), 2U);
}

TEST(Trace, ParsesLines) {
  std::istringstream is("# header\nI 00000007 0000002a\nS 7\n\nU ff 1\nD 10  # trailing\n");
  const auto t = read_trace(is);
  ASSERT_EQ(t.size(), 4U);
  EXPECT_EQ(t[0], (Query{OpKind::Insert, 7, 42, 0}));
  EXPECT_EQ(t[1], (Query{OpKind::Search, 7, 0, 1}));
  EXPECT_EQ(t[2], (Query{OpKind::Update, 255, 1, 2}));
  EXPECT_EQ(t[3], (Query{OpKind::Delete, 16, 0, 3}));
}

TEST(Trace, ReportsBadLine) {
  const char* bad[] = {"S 1\nX 00 00\n", "S 1\nI 5\n", "S 1\nS zz\n", "S 1\nS 1 2 3\n"};
  for (const char* text : bad) {
    std::istringstream is(text);
    try {
      read_trace(is);
      FAIL() << "accepted: " << text;
    } catch (const TraceParseError& e) {
      EXPECT_EQ(e.line(), 2U) << text;
      EXPECT_NE(std::string(e.what()).find("line 2"), std::string::npos);
    }
  }
}

TEST(Trace, FileRoundTrip) {
  WorkloadSpec w;
  w.total_queries = 2000;
  const auto t = gen_uniform(w, cfg(8, 8));
  const auto dir = std::filesystem::temp_directory_path() / "xorht_workload_test";
  std::filesystem::create_directories(dir);
  for (const char* name : {"t.trace", "t.trace.gz"}) {
    const std::string path = (dir / name).string();
    trace_write(path, t, 32, 32);
    EXPECT_EQ(trace_read(path), t) << name;
  }
  std::ifstream gz(dir / "t.trace.gz", std::ios::binary);
  unsigned char magic[2] = {};
  gz.read(reinterpret_cast<char*>(magic), 2);
  EXPECT_EQ(magic[0], 0x1f);
  EXPECT_EQ(magic[1], 0x8b);
  EXPECT_LT(std::filesystem::file_size(dir / "t.trace.gz"), std::filesystem::file_size(dir / "t.trace"));
  EXPECT_THROW(trace_read((dir / "missing.trace").string()), std::runtime_error);
  std::filesystem::remove_all(dir);
}

}  // namespace
}  // namespace xorht
