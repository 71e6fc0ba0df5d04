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
#include <deque>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "xorht/h3hash.hpp"
#include "xorht/types.hpp"
#include "xorht/xorstore.hpp"

namespace xorht {

/// Cycles spent in each pipeline component. Every component takes at least one.
struct StageLatencies {
  unsigned hash = 1;
  unsigned read = 1;
  unsigned xor_tree = 2;
  unsigned resolve = 1;

  unsigned total() const { return hash + read + xor_tree + resolve; }
  void validate() const;

  friend bool operator==(const StageLatencies&, const StageLatencies&) = default;
};

struct PEConfig {
  unsigned pe_id = 0;
  bool mutation_capable = true;
  unsigned owner_id = 0;  // bank this PE writes, when mutation capable
  StageLatencies latencies;
};

struct ResolveOutcome {
  enum class Kind : std::uint8_t { MatchSlot, OpenSlot, BucketFull, NotFound };
  Kind kind = Kind::NotFound;
  unsigned slot = 0;

  friend bool operator==(const ResolveOutcome&, const ResolveOutcome&) = default;
};

/// Slot probing: the lowest occupied slot holding the key wins; otherwise
/// upserts take the lowest open slot.
ResolveOutcome resolve(std::span<const DecodedSlot> row, const Query& query);

/// An encoded write travelling the inter-PE ring, one replica per cycle.
struct MutationMessage {
  unsigned owner = 0;      // bank written in every replica
  unsigned origin_pe = 0;  // first replica visited
  unsigned entry = 0;
  unsigned slot = 0;
  EncodedSlot word;
  unsigned hops_done = 0;
  std::size_t trace_index = 0;
  std::uint64_t serial = 0;  // creation order across the whole run
  Cycle created = 0;
};

/// An NSQ routed to a search-only PE, or two queries offered to one PE in
/// the same cycle. Both are dispatcher bugs.
class RoutingError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

struct PeRead {
  std::uint64_t bucket = 0;
  bool nsq = false;
};

struct PeEmission {
  QueryResult result;
  std::optional<MutationMessage> message;
};

struct PeStepOutput {
  std::optional<PeRead> read;
  std::optional<PeEmission> emitted;
};

/// One processing engine. The functional work (hash, bank read, both XOR
/// trees, slot resolution) happens when a query reaches the read stage;
/// the result leaves the pipeline exactly t0 cycles after acceptance.
///
/// NSQ reads see this PE's own older mutations that have not yet been
/// committed to the local (M) bank, so a single PE behaves sequentially.
/// There is no forwarding from other PEs.
class ProcessingEngine {
 public:
  ProcessingEngine(PEConfig config, const H3Matrix& hash, const StoreGeometry& geom);

  const PEConfig& config() const { return config_; }
  unsigned t0() const { return config_.latencies.total(); }

  void accept(const Query& query, Cycle issue_cycle, Cycle cycle);

  PeStepOutput step(Cycle cycle, Replica& local);

  bool busy() const { return !pipeline_.empty(); }

 private:
  struct InFlight {
    Query query;
    Cycle issue = 0;
    Cycle accept = 0;
    Cycle read_at = 0;
    Cycle emit_at = 0;
    bool computed = false;
    std::uint64_t bucket = 0;
    std::vector<DecodedSlot> decoded_row;
    ResolveOutcome resolved;
    Outcome outcome = Outcome::None;
    U128 found_value;
    std::optional<EncodedSlot> word;
  };

  void compute(InFlight& q, Cycle cycle, Replica& local);

  PEConfig config_;
  const H3Matrix* hash_;
  StoreGeometry geom_;
  std::deque<InFlight> pipeline_;
  std::vector<EncodedSlot> row_buf_;
  Cycle last_accept_ = -1;
};

}  // namespace xorht
