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
#include <optional>
#include <span>
#include <vector>

#include "xorht/pe.hpp"
#include "xorht/types.hpp"
#include "xorht/xorstore.hpp"

namespace xorht {

enum class OverflowMode : std::uint8_t { Defer, Reject };

struct Assignment {
  unsigned pe = 0;
  Query query;
};

struct DispatchResult {
  std::vector<Assignment> assigned;
  std::vector<Query> deferred;  // trace order; goes back to the queue head
  std::vector<Query> rejected;  // reject mode only
};

/// Routes one cycle's worth of queries (at most p) to PEs. NSQ go
/// round-robin over mutation PEs 0..k-1, searches round-robin over the PEs
/// left free. At most k NSQ leave per cycle.
class Dispatcher {
 public:
  Dispatcher(unsigned p, unsigned k, OverflowMode mode);

  DispatchResult dispatch(std::span<const Query> batch);

  unsigned search_cursor() const { return search_rr_; }
  unsigned nsq_cursor() const { return nsq_rr_; }
  OverflowMode mode() const { return mode_; }

 private:
  unsigned p_;
  unsigned k_;
  OverflowMode mode_;
  unsigned search_rr_ = 0;
  unsigned nsq_rr_ = 0;
  std::vector<char> busy_;
};

/// Test-only corruption of one ring write: bit `bit` of the data word of
/// message number `serial` is flipped on hop `hop` (1-based; 0 = last hop).
struct FaultPlan {
  std::uint64_t serial = 0;
  unsigned hop = 0;
  unsigned bit = 0;
};

/// The inter-PE mutation ring. Hop h of a message created by PE o writes
/// bank[owner] of replica (o + h - 1) mod p; hop 1 is the local commit.
class Fabric {
 public:
  explicit Fabric(unsigned p, std::optional<FaultPlan> fault = std::nullopt);

  /// Stamps the creation serial and queues the message for its first hop
  /// in the next propagate_step.
  void inject(MutationMessage message);

  /// One cycle of ring movement. Returns the messages that completed
  /// their last hop this cycle.
  std::vector<MutationMessage> propagate_step(std::span<Replica> replicas, Cycle cycle);

  bool idle() const { return live_.empty(); }
  std::size_t in_flight() const { return live_.size(); }
  std::uint64_t created() const { return next_serial_; }

 private:
  unsigned p_;
  std::optional<FaultPlan> fault_;
  std::vector<MutationMessage> live_;
  std::uint64_t next_serial_ = 0;
};

}  // namespace xorht
