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


#include "xorht/engine.hpp"

#include <algorithm>
#include <bit>
#include <deque>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

namespace xorht {

namespace {

void field_error(const char* field, const std::string& why) {
  throw std::invalid_argument(std::string(field) + ": " + why);
}

struct Activity {
  int count = 0;
  unsigned first_pe = 0;
  bool multi_pe = false;
};

bool bucket_agrees(std::span<const Replica> replicas, unsigned entry) {
  const unsigned banks = replicas[0].geometry().banks;
  for (std::size_t r = 1; r < replicas.size(); ++r) {
    for (unsigned b = 0; b < banks; ++b) {
      if (!replicas[r].bank(b).same_row(replicas[0].bank(b), entry)) return false;
    }
  }
  return true;
}

}  // namespace

void SimConfig::validate() const {
  if (p == 0) field_error("p", "must be at least 1");
  if (k == 0 || k > p) field_error("k", "must satisfy 1 <= k <= p");
  if (entries < 2 || !std::has_single_bit(entries)) field_error("entries", "must be a power of two >= 2");
  if (slots == 0 || slots > 8) field_error("slots", "must be in [1, 8]");
  if (key_bits == 0 || key_bits > 128) field_error("key_bits", "must be in [1, 128]");
  if (value_bits == 0 || value_bits > 128) field_error("value_bits", "must be in [1, 128]");
  if (!(clock_mhz > 0)) field_error("clock_mhz", "must be positive");
  try {
    latencies.validate();
  } catch (const std::invalid_argument& e) {
    field_error("latencies", e.what());
  }
}

unsigned SimConfig::index_bits() const { return static_cast<unsigned>(std::countr_zero(entries)); }

H3Matrix SimConfig::matrix() const { return H3Matrix::random(key_bits, index_bits(), seed); }

RunResult run(const SimConfig& config, std::span<const Query> trace, const SimOptions& options) {
  config.validate();
  const unsigned p = config.p;
  const unsigned t0 = config.t0();
  const StoreGeometry geom = config.geometry();
  if (options.fault && options.fault->bit >= geom.data_bits()) {
    throw std::invalid_argument("fault: bit index beyond the data word");
  }
  const H3Matrix matrix = config.matrix();

  std::vector<Query> queries(trace.begin(), trace.end());
  for (std::size_t i = 0; i < queries.size(); ++i) {
    const Query& q = queries[i];
    if (!q.key.fits(config.key_bits)) {
      std::ostringstream os;
      os << "trace index " << q.trace_index << ": key wider than " << config.key_bits << " bits";
      throw std::invalid_argument(os.str());
    }
    if (is_nsq(q.op) && q.op != OpKind::Delete && !q.value.fits(config.value_bits)) {
      std::ostringstream os;
      os << "trace index " << q.trace_index << ": value wider than " << config.value_bits << " bits";
      throw std::invalid_argument(os.str());
    }
    queries[i].trace_index = i;
  }

  std::vector<Replica> replicas(p, Replica(geom));
  std::vector<ProcessingEngine> pes;
  pes.reserve(p);
  for (unsigned i = 0; i < p; ++i) {
    pes.emplace_back(PEConfig{i, i < config.k, i < config.k ? i : 0, config.latencies}, matrix, geom);
  }
  Dispatcher dispatcher(p, config.k, config.overflow);
  Fabric fabric(p, options.fault);

  RunResult out;
  out.results.resize(queries.size());
  SimReport& rep = out.report;
  rep.p = p;
  rep.k = config.k;
  rep.t0 = t0;
  rep.clock_mhz = config.clock_mhz;
  rep.queries = queries.size();

  std::vector<Cycle> issue(queries.size(), -1);
  std::deque<std::size_t> pending;
  for (std::size_t i = 0; i < queries.size(); ++i) pending.push_back(i);

  std::unordered_map<std::uint64_t, Activity> activity;
  std::vector<std::uint64_t> released;
  auto release = [&](std::uint64_t bucket) {
    auto it = activity.find(bucket);
    if (--it->second.count == 0) released.push_back(bucket);
  };

  std::vector<Query> batch;
  batch.reserve(p);
  Cycle cycle = 0;
  Cycle end = -1;  // last cycle to simulate, known once the queue drains
  while (true) {
    for (unsigned i = 0; i < p; ++i) {
      PeStepOutput step = pes[i].step(cycle, replicas[i]);
      if (step.read && step.read->nsq) {
        // A cluster lasts until its snapshot, even if the count touches
        // zero mid-cycle.
        auto [it, fresh] = activity.try_emplace(step.read->bucket);
        if (fresh) {
          it->second.first_pe = i;
        } else if (it->second.first_pe != i) {
          it->second.multi_pe = true;
        }
        ++it->second.count;
      }
      if (step.emitted) {
        QueryResult r = std::move(step.emitted->result);
        const std::size_t pos = r.trace_index;
        r.trace_index = trace[pos].trace_index;
        if (step.emitted->message) {
          fabric.inject(*step.emitted->message);
          r.complete_cycle = cycle + p - 1;
        } else if (is_nsq(r.op)) {
          release(r.bucket);
        }
        if (r.outcome == Outcome::InsertFailed) ++rep.insert_failed;
        ++rep.completed;
        out.results[pos] = std::move(r);
      }
    }

    for (const MutationMessage& m : fabric.propagate_step(replicas, cycle)) release(m.entry);

    for (std::uint64_t bucket : released) {
      auto it = activity.find(bucket);
      if (it == activity.end() || it->second.count != 0) continue;
      if (options.record_snapshots) {
        const unsigned entry = static_cast<unsigned>(bucket);
        out.snapshots.push_back(BucketSnapshot{bucket, cycle, replicas[0].decode_row(entry),
                                               bucket_agrees(replicas, entry), it->second.multi_pe});
      }
      activity.erase(it);
    }
    released.clear();

    if (!pending.empty()) {
      batch.clear();
      const std::size_t take = std::min<std::size_t>(p, pending.size());
      for (std::size_t j = 0; j < take; ++j) {
        const std::size_t pos = pending.front();
        pending.pop_front();
        if (issue[pos] < 0) issue[pos] = cycle;
        batch.push_back(queries[pos]);
      }
      DispatchResult d = dispatcher.dispatch(batch);
      for (const Assignment& a : d.assigned) {
        pes[a.pe].accept(a.query, issue[a.query.trace_index], cycle);
      }
      if (!d.assigned.empty()) {
        rep.accepted += d.assigned.size();
        rep.last_accept_cycle = cycle;
      }
      if (!d.deferred.empty()) {
        ++rep.deferred_cycles;
        rep.deferred_queries += d.deferred.size();
        for (auto it = d.deferred.rbegin(); it != d.deferred.rend(); ++it) {
          pending.push_front(it->trace_index);
        }
      }
      for (const Query& q : d.rejected) {
        QueryResult& r = out.results[q.trace_index];
        r.trace_index = trace[q.trace_index].trace_index;
        r.op = q.op;
        r.key = q.key;
        r.outcome = Outcome::CapacityViolation;
        r.bucket = matrix.hash(q.key);
        r.issue_cycle = r.accept_cycle = r.read_cycle = r.serial_cycle = r.complete_cycle = cycle;
        ++rep.rejected;
      }
    }

    if (pending.empty() && end < 0) {
      end = rep.last_accept_cycle < 0 ? cycle : rep.last_accept_cycle + p + t0;
    }
    if (end >= 0 && cycle >= end) break;
    ++cycle;
  }

  const bool busy = std::any_of(pes.begin(), pes.end(), [](const ProcessingEngine& e) { return e.busy(); });
  if (busy || !fabric.idle()) throw std::logic_error("engine: pipeline not drained at end of run");

  rep.total_cycles = queries.empty() ? 0 : cycle + 1;
  rep.mutation_messages = fabric.created();
  if (rep.completed > 0) {
    rep.mops_raw = static_cast<double>(rep.completed) / static_cast<double>(rep.total_cycles) * config.clock_mhz;
    rep.mops_steady =
        static_cast<double>(rep.completed) / static_cast<double>(rep.last_accept_cycle + 1) * config.clock_mhz;
  }
  rep.latency = measure_latency(out.results, config.clock_mhz);
  if (options.keep_replicas) out.replicas = std::move(replicas);
  return out;
}

std::vector<LatencyStats> measure_latency(std::span<const QueryResult> results, double clock_mhz) {
  std::vector<LatencyStats> stats(5);
  stats[0].op = "search";
  stats[1].op = "insert";
  stats[2].op = "update";
  stats[3].op = "delete";
  stats[4].op = "nsq_committed";
  std::vector<double> sums(5, 0.0);
  auto add = [&](std::size_t i, Cycle lat) {
    LatencyStats& s = stats[i];
    if (s.count == 0) {
      s.min_cycles = s.max_cycles = lat;
    } else {
      s.min_cycles = std::min(s.min_cycles, lat);
      s.max_cycles = std::max(s.max_cycles, lat);
    }
    ++s.count;
    sums[i] += static_cast<double>(lat);
    ++s.histogram[lat];
  };
  for (const QueryResult& r : results) {
    if (r.outcome == Outcome::CapacityViolation) continue;
    const Cycle lat = r.complete_cycle - r.accept_cycle;
    add(static_cast<std::size_t>(r.op), lat);
    if (r.committed) add(4, lat);
  }
  for (std::size_t i = 0; i < stats.size(); ++i) {
    LatencyStats& s = stats[i];
    if (s.count == 0) continue;
    s.mean_cycles = sums[i] / static_cast<double>(s.count);
    s.mean_ns = s.mean_cycles / clock_mhz * 1000.0;
    s.max_ns = static_cast<double>(s.max_cycles) / clock_mhz * 1000.0;
  }
  return stats;
}

std::vector<DecodedSlot> decode_table(const Replica& replica) {
  const StoreGeometry& g = replica.geometry();
  std::vector<DecodedSlot> table;
  table.reserve(static_cast<std::size_t>(g.entries) * g.slots);
  for (unsigned e = 0; e < g.entries; ++e) {
    for (DecodedSlot& s : replica.decode_row(e)) table.push_back(s);
  }
  return table;
}

bool replicas_converged(std::span<const Replica> replicas) {
  if (replicas.empty()) return true;
  const unsigned banks = replicas[0].geometry().banks;
  for (std::size_t r = 1; r < replicas.size(); ++r) {
    for (unsigned b = 0; b < banks; ++b) {
      if (!replicas[r].bank(b).same_contents(replicas[0].bank(b))) return false;
    }
  }
  return true;
}

}  // namespace xorht
