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
#include <optional>
#include <span>
#include <vector>

#include "xorht/engine.hpp"
#include "xorht/h3hash.hpp"
#include "xorht/types.hpp"
#include "xorht/workload.hpp"

namespace xorht {

struct OracleOutcome {
  Outcome outcome = Outcome::None;
  U128 value;
  int slot = -1;

  friend bool operator==(const OracleOutcome&, const OracleOutcome&) = default;
};

/// Plain bucket array applying one query at a time, with the same
/// match-first, then lowest-open-slot rule as the PEs.
class OracleTable {
 public:
  OracleTable(const H3Matrix& matrix, unsigned entries, unsigned slots);

  OracleOutcome apply(const Query& query);

  std::span<const DecodedSlot> row(std::uint64_t bucket) const;
  void set_row(std::uint64_t bucket, std::span<const DecodedSlot> row);
  const std::vector<DecodedSlot>& table() const { return cells_; }
  const H3Matrix& matrix() const { return *matrix_; }

 private:
  const H3Matrix* matrix_;
  unsigned entries_;
  unsigned slots_;
  std::vector<DecodedSlot> cells_;
};

/// A query result or a quiescent bucket snapshot, in serialization order.
struct CommitEvent {
  enum class Kind : std::uint8_t { Query, Snapshot };
  Kind kind = Kind::Query;
  std::size_t index = 0;  // trace position or snapshot index
};

/// Searches at their read cycle, NSQ at their local commit cycle. Within a
/// cycle reads precede commits, commits precede snapshots, then PE index.
/// Capacity-violation results never executed and are left out.
std::vector<CommitEvent> commit_order(std::span<const QueryResult> results,
                                      std::span<const BucketSnapshot> snapshots);

struct Divergence {
  std::uint64_t bucket = 0;
  Cycle cycle = 0;
  bool explained = false;
  bool duplicate_keys = false;
};

struct ReplayResult {
  std::vector<std::optional<OracleOutcome>> expected;  // per trace position
  std::vector<Divergence> divergences;
  std::vector<DecodedSlot> final_table;
};

/// Expected outcomes under `order`. At each snapshot the oracle's bucket is
/// compared with the simulated one, then re-synchronised to it.
ReplayResult reference_replay(const SimConfig& config, std::span<const Query> trace,
                              std::span<const CommitEvent> order, std::span<const BucketSnapshot> snapshots);

struct ErrorRecord {
  std::size_t trace_index = 0;
  std::optional<std::size_t> conflicting;  // trace index of the NSQ blamed
  Cycle gap = 0;
  bool explained = false;
};

struct ErrorReport {
  std::uint64_t n_err = 0;
  std::uint64_t unexplained_mismatches = 0;
  std::uint64_t divergences = 0;
  std::uint64_t unexplained_divergences = 0;
  std::uint64_t duplicates = 0;
  Cycle window = 0;
  std::vector<ErrorRecord> errors;

  std::uint64_t unexplained() const { return unexplained_mismatches + unexplained_divergences; }
};

/// A mismatch is explained when the latest same-bucket NSQ ahead of it in
/// the serialization committed fewer than p + t0 cycles earlier.
ErrorReport classify(std::span<const QueryResult> sim, const ReplayResult& replay,
                     std::span<const CommitEvent> order, const SimConfig& config);

struct VerifyResult {
  RunResult run;
  ReplayResult replay;
  ErrorReport errors;
  bool converged = false;
  bool final_matches_oracle = false;
};

/// Simulate with snapshots, replay, classify, and check quiescent state.
VerifyResult verify_run(const SimConfig& config, std::span<const Query> trace,
                        std::optional<FaultPlan> fault = std::nullopt);

struct TrialRecord {
  std::size_t trial = 0;
  std::uint64_t seed = 0;
  std::uint64_t n_err = 0;
  std::uint64_t duplicates = 0;
  std::uint64_t unexplained = 0;
  bool converged = true;
};

struct BoundRow {
  double theta = 0;
  double empirical = 0;
  double bound = 0;
  bool ok = true;
};

struct BoundTable {
  std::vector<TrialRecord> trials;
  std::vector<BoundRow> rows;
  bool ok() const;
};

/// min(1, (p^2 + p t0) / theta).
double error_bound(unsigned p, unsigned t0, double theta);

/// `trials` independent runs; trial i uses workload seed workload.seed + i.
BoundTable check_bound(const SimConfig& config, const WorkloadSpec& workload, std::size_t trials,
                       std::span<const double> thetas, unsigned jobs = 1,
                       std::optional<FaultPlan> fault = std::nullopt);

/// "trial,seed,n_err,duplicates,unexplained,converged"
void write_trials_csv(std::ostream& os, std::span<const TrialRecord> trials);
/// "theta,empirical,bound,ok"
void write_bound_csv(std::ostream& os, std::span<const BoundRow> rows);

}  // namespace xorht
