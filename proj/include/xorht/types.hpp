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

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string_view>

#include "xorht/bits.hpp"

namespace xorht {

enum class OpKind : std::uint8_t { Search, Insert, Update, Delete };

/// Insert, update and delete are non-search queries (NSQ).
constexpr bool is_nsq(OpKind op) { return op != OpKind::Search; }

std::string_view to_string(OpKind op);
char op_letter(OpKind op);
std::optional<OpKind> op_from_letter(char c);

struct Query {
  OpKind op = OpKind::Search;
  U128 key;
  U128 value;  // meaningful for Insert/Update only
  std::size_t trace_index = 0;

  friend bool operator==(const Query&, const Query&) = default;
};

enum class Outcome : std::uint8_t {
  Found,
  None,
  Inserted,
  Updated,
  Deleted,
  InsertFailed,
  CapacityViolation,
};

std::string_view to_string(Outcome o);

struct QueryResult {
  std::size_t trace_index = 0;
  OpKind op = OpKind::Search;
  U128 key;
  Outcome outcome = Outcome::None;
  U128 value;     // value returned by Found
  int slot = -1;  // matched or allocated slot, -1 when none
  int pe = -1;
  std::uint64_t bucket = 0;
  Cycle issue_cycle = 0;
  Cycle accept_cycle = 0;
  Cycle read_cycle = 0;
  // Point in the reference serialization: the read cycle for searches,
  // the local commit cycle for NSQ.
  Cycle serial_cycle = 0;
  // Search: result emission. NSQ: final replica commit (emission when
  // nothing was written).
  Cycle complete_cycle = 0;
  bool committed = false;
};

}  // namespace xorht
