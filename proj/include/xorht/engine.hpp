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
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "xorht/fabric.hpp"
#include "xorht/h3hash.hpp"
#include "xorht/pe.hpp"
#include "xorht/types.hpp"
#include "xorht/xorstore.hpp"

namespace xorht {

struct SimConfig {
  unsigned p = 16;
  unsigned k = 16;
  unsigned entries = 4096;  // power of two, at least 2
  unsigned slots = 4;       // 1..8
  unsigned key_bits = 32;
  unsigned value_bits = 32;
  StageLatencies latencies;
  double clock_mhz = 370.375;
  std::uint64_t seed = 1;
  OverflowMode overflow = OverflowMode::Defer;

  /// Throws std::invalid_argument naming the offending field.
  void validate() const;

  unsigned index_bits() const;
  unsigned t0() const { return latencies.total(); }
  double nsq_ratio() const { return static_cast<double>(k) / p; }
  StoreGeometry geometry() const { return {k, entries, slots, key_bits, value_bits}; }
  H3Matrix matrix() const;
};

struct SimOptions {
  bool record_snapshots = false;
  bool keep_replicas = false;
  std::optional<FaultPlan> fault;
};

/// Decoded state of one bucket at the end of a cycle in which the last
/// NSQ touching it finished propagating.
struct BucketSnapshot {
  std::uint64_t bucket = 0;
  Cycle cycle = 0;
  std::vector<DecodedSlot> row;
  bool replicas_agree = true;
  bool multi_pe = false;  // the NSQ cluster came from more than one PE
};

struct LatencyStats {
  std::string op;
  std::uint64_t count = 0;
  Cycle min_cycles = 0;
  Cycle max_cycles = 0;
  double mean_cycles = 0;
  double mean_ns = 0;
  double max_ns = 0;
  std::map<Cycle, std::uint64_t> histogram;  // accept-to-complete cycles
};

struct SimReport {
  unsigned p = 0;
  unsigned k = 0;
  unsigned t0 = 0;
  double clock_mhz = 0;
  std::uint64_t queries = 0;
  std::uint64_t accepted = 0;
  std::uint64_t completed = 0;
  std::uint64_t rejected = 0;
  std::uint64_t insert_failed = 0;
  std::uint64_t deferred_queries = 0;
  std::uint64_t deferred_cycles = 0;
  std::uint64_t discipline_violations = 0;
  std::uint64_t mutation_messages = 0;
  Cycle total_cycles = 0;
  Cycle last_accept_cycle = -1;
  double mops_raw = 0;     // completed / total_cycles * clock
  double mops_steady = 0;  // completed / (last_accept_cycle + 1) * clock
  std::vector<LatencyStats> latency;
};

struct RunResult {
  SimReport report;
  std::vector<QueryResult> results;  // one per trace position
  std::vector<BucketSnapshot> snapshots;
  std::vector<Replica> replicas;  // filled when keep_replicas is set
};

/// Deterministic cycle-level run of `trace` on the configured system.
RunResult run(const SimConfig& config, std::span<const Query> trace, const SimOptions& options = {});

/// Per-op latency (accept to complete) for search, insert, update, delete,
/// plus "nsq_committed" over every NSQ that wrote the table.
std::vector<LatencyStats> measure_latency(std::span<const QueryResult> results, double clock_mhz);

/// entries * slots decoded slots, entry-major.
std::vector<DecodedSlot> decode_table(const Replica& replica);

/// Every replica holds bit-identical banks.
bool replicas_converged(std::span<const Replica> replicas);

}  // namespace xorht
