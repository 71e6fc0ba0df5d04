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


#include "xorht/consistency.hpp"

#include <algorithm>
#include <ostream>
#include <tuple>
#include <unordered_map>

#include "xorht/parallel.hpp"

namespace xorht {

namespace {

// Unoccupied slots carry residue only.
bool same_slot(const DecodedSlot& a, const DecodedSlot& b) {
  if (a.occupied != b.occupied) return false;
  return !a.occupied || (a.key == b.key && a.value == b.value);
}

bool same_row(std::span<const DecodedSlot> a, std::span<const DecodedSlot> b) {
  return std::equal(a.begin(), a.end(), b.begin(), b.end(), same_slot);
}

bool has_duplicate_keys(std::span<const DecodedSlot> row) {
  for (std::size_t i = 0; i < row.size(); ++i) {
    for (std::size_t j = i + 1; j < row.size(); ++j) {
      if (row[i].occupied && row[j].occupied && row[i].key == row[j].key) return true;
    }
  }
  return false;
}

OracleOutcome observed(const QueryResult& r) { return {r.outcome, r.value, r.slot}; }

}  // namespace

OracleTable::OracleTable(const H3Matrix& matrix, unsigned entries, unsigned slots)
    : matrix_(&matrix), entries_(entries), slots_(slots),
      cells_(static_cast<std::size_t>(entries) * slots) {}

std::span<const DecodedSlot> OracleTable::row(std::uint64_t bucket) const {
  return std::span<const DecodedSlot>(cells_).subspan(bucket * slots_, slots_);
}

void OracleTable::set_row(std::uint64_t bucket, std::span<const DecodedSlot> row) {
  std::copy(row.begin(), row.end(), cells_.begin() + static_cast<std::ptrdiff_t>(bucket * slots_));
}

OracleOutcome OracleTable::apply(const Query& q) {
  const std::uint64_t bucket = matrix_->hash(q.key);
  DecodedSlot* row = cells_.data() + bucket * slots_;
  int match = -1;
  int open = -1;
  for (unsigned s = 0; s < slots_; ++s) {
    if (row[s].occupied && row[s].key == q.key) {
      match = static_cast<int>(s);
      break;
    }
  }
  for (unsigned s = 0; s < slots_ && open < 0; ++s) {
    if (!row[s].occupied) open = static_cast<int>(s);
  }
  OracleOutcome out;
  switch (q.op) {
    case OpKind::Search:
      if (match >= 0) out = {Outcome::Found, row[match].value, match};
      break;
    case OpKind::Insert:
    case OpKind::Update: {
      const int s = match >= 0 ? match : open;
      if (s < 0) {
        out.outcome = Outcome::InsertFailed;
        break;
      }
      out = {match >= 0 ? Outcome::Updated : Outcome::Inserted, U128{}, s};
      row[s] = DecodedSlot{true, q.key, q.value};
      break;
    }
    case OpKind::Delete:
      if (match >= 0) {
        out = {Outcome::Deleted, U128{}, match};
        row[match].occupied = false;
      }
      break;
  }
  return out;
}

std::vector<CommitEvent> commit_order(std::span<const QueryResult> results,
                                      std::span<const BucketSnapshot> snapshots) {
  using Key = std::tuple<Cycle, int, int, std::size_t>;
  std::vector<std::pair<Key, CommitEvent>> events;
  events.reserve(results.size() + snapshots.size());
  for (std::size_t i = 0; i < results.size(); ++i) {
    const QueryResult& r = results[i];
    if (r.outcome == Outcome::CapacityViolation) continue;
    events.push_back({{r.serial_cycle, is_nsq(r.op) ? 1 : 0, r.pe, i}, {CommitEvent::Kind::Query, i}});
  }
  for (std::size_t i = 0; i < snapshots.size(); ++i) {
    events.push_back({{snapshots[i].cycle, 2, 0, i}, {CommitEvent::Kind::Snapshot, i}});
  }
  std::sort(events.begin(), events.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  std::vector<CommitEvent> order;
  order.reserve(events.size());
  for (const auto& e : events) order.push_back(e.second);
  return order;
}

ReplayResult reference_replay(const SimConfig& config, std::span<const Query> trace,
                              std::span<const CommitEvent> order, std::span<const BucketSnapshot> snapshots) {
  const H3Matrix matrix = config.matrix();
  OracleTable oracle(matrix, config.entries, config.slots);
  ReplayResult out;
  out.expected.resize(trace.size());
  for (const CommitEvent& e : order) {
    if (e.kind == CommitEvent::Kind::Query) {
      out.expected[e.index] = oracle.apply(trace[e.index]);
      continue;
    }
    const BucketSnapshot& snap = snapshots[e.index];
    const bool agree = same_row(oracle.row(snap.bucket), snap.row);
    if (!agree || !snap.replicas_agree) {
      out.divergences.push_back(Divergence{snap.bucket, snap.cycle, snap.replicas_agree && snap.multi_pe,
                                           has_duplicate_keys(snap.row)});
    }
    oracle.set_row(snap.bucket, snap.row);
  }
  out.final_table = oracle.table();
  return out;
}

ErrorReport classify(std::span<const QueryResult> sim, const ReplayResult& replay,
                     std::span<const CommitEvent> order, const SimConfig& config) {
  ErrorReport rep;
  rep.window = static_cast<Cycle>(config.p + config.t0());
  struct Last {
    std::size_t pos;
    Cycle commit;
  };
  std::unordered_map<std::uint64_t, Last> last_nsq;
  for (const CommitEvent& e : order) {
    if (e.kind != CommitEvent::Kind::Query) continue;
    const QueryResult& r = sim[e.index];
    const auto& expected = replay.expected[e.index];
    if (expected && !(observed(r) == *expected)) {
      ErrorRecord rec;
      rec.trace_index = r.trace_index;
      if (auto it = last_nsq.find(r.bucket); it != last_nsq.end()) {
        rec.conflicting = sim[it->second.pos].trace_index;
        rec.gap = r.serial_cycle - it->second.commit;
        rec.explained = rec.gap < rep.window;
      }
      if (rec.explained) {
        ++rep.n_err;
      } else {
        ++rep.unexplained_mismatches;
      }
      rep.errors.push_back(rec);
    }
    if (is_nsq(r.op)) last_nsq[r.bucket] = Last{e.index, r.serial_cycle};
  }
  for (const Divergence& d : replay.divergences) {
    ++rep.divergences;
    if (!d.explained) ++rep.unexplained_divergences;
    if (d.duplicate_keys) ++rep.duplicates;
  }
  return rep;
}

VerifyResult verify_run(const SimConfig& config, std::span<const Query> trace, std::optional<FaultPlan> fault) {
  VerifyResult v;
  SimOptions opts;
  opts.record_snapshots = true;
  opts.keep_replicas = true;
  opts.fault = fault;
  v.run = run(config, trace, opts);
  const std::vector<CommitEvent> order = commit_order(v.run.results, v.run.snapshots);
  v.replay = reference_replay(config, trace, order, v.run.snapshots);
  v.errors = classify(v.run.results, v.replay, order, config);
  v.converged = replicas_converged(v.run.replicas);
  v.final_matches_oracle = same_row(decode_table(v.run.replicas[0]), v.replay.final_table);
  return v;
}

double error_bound(unsigned p, unsigned t0, double theta) {
  const double b = (static_cast<double>(p) * p + static_cast<double>(p) * t0) / theta;
  return std::min(1.0, b);
}

bool BoundTable::ok() const {
  for (const TrialRecord& t : trials) {
    if (t.unexplained != 0 || !t.converged) return false;
  }
  return std::all_of(rows.begin(), rows.end(), [](const BoundRow& r) { return r.ok; });
}

BoundTable check_bound(const SimConfig& config, const WorkloadSpec& workload, std::size_t trials,
                       std::span<const double> thetas, unsigned jobs, std::optional<FaultPlan> fault) {
  BoundTable table;
  table.trials.resize(trials);
  parallel_for(trials, jobs, [&](std::size_t i) {
    WorkloadSpec spec = workload;
    spec.seed = workload.seed + i;
    const std::vector<Query> trace = generate(spec, config);
    const VerifyResult v = verify_run(config, trace, fault);
    table.trials[i] = TrialRecord{i, spec.seed, v.errors.n_err, v.errors.duplicates, v.errors.unexplained(),
                                  v.converged};
  });
  for (double theta : thetas) {
    BoundRow row;
    row.theta = theta;
    std::size_t hits = 0;
    for (const TrialRecord& t : table.trials) hits += static_cast<double>(t.n_err) >= theta ? 1 : 0;
    row.empirical = trials == 0 ? 0.0 : static_cast<double>(hits) / static_cast<double>(trials);
    row.bound = error_bound(config.p, config.t0(), theta);
    row.ok = row.empirical <= row.bound;
    table.rows.push_back(row);
  }
  return table;
}

void write_trials_csv(std::ostream& os, std::span<const TrialRecord> trials) {
  os << "trial,seed,n_err,duplicates,unexplained,converged\n";
  for (const TrialRecord& t : trials) {
    os << t.trial << ',' << t.seed << ',' << t.n_err << ',' << t.duplicates << ',' << t.unexplained << ','
       << (t.converged ? 1 : 0) << '\n';
  }
}

void write_bound_csv(std::ostream& os, std::span<const BoundRow> rows) {
  os << "theta,empirical,bound,ok\n";
  for (const BoundRow& r : rows) {
    os << r.theta << ',' << r.empirical << ',' << r.bound << ',' << (r.ok ? 1 : 0) << '\n';
  }
}

}  // namespace xorht
