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


#include "xorht/report.hpp"

#include <ostream>

#include "json.hpp"

namespace xorht {

namespace {

using json = nlohmann::ordered_json;

json latency_json(const LatencyStats& s) {
  json j;
  j["count"] = s.count;
  j["min_cycles"] = s.min_cycles;
  j["max_cycles"] = s.max_cycles;
  j["mean_cycles"] = s.mean_cycles;
  j["mean_ns"] = s.mean_ns;
  j["max_ns"] = s.max_ns;
  json h = json::object();
  for (const auto& [lat, n] : s.histogram) h[std::to_string(lat)] = n;
  j["histogram"] = h;
  return j;
}

}  // namespace

std::string report_json(const SimReport& r) {
  json j;
  j["p"] = r.p;
  j["k"] = r.k;
  j["t0"] = r.t0;
  j["clock_mhz"] = r.clock_mhz;
  j["queries"] = r.queries;
  j["accepted"] = r.accepted;
  j["completed"] = r.completed;
  j["rejected"] = r.rejected;
  j["insert_failed"] = r.insert_failed;
  j["deferred_queries"] = r.deferred_queries;
  j["deferred_cycles"] = r.deferred_cycles;
  j["discipline_violations"] = r.discipline_violations;
  j["mutation_messages"] = r.mutation_messages;
  j["total_cycles"] = r.total_cycles;
  j["last_accept_cycle"] = r.last_accept_cycle;
  j["mops_raw"] = r.mops_raw;
  j["mops_steady"] = r.mops_steady;
  json lat = json::object();
  for (const LatencyStats& s : r.latency) lat[s.op] = latency_json(s);
  j["latency"] = lat;
  return j.dump(2) + "\n";
}

void write_report_csv(std::ostream& os, const SimReport& r) {
  os << "op,metric,value\n";
  auto row = [&os](const std::string& op, const char* metric, const auto& v) {
    os << op << ',' << metric << ',' << v << '\n';
  };
  const auto old_precision = os.precision(10);
  row("all", "p", r.p);
  row("all", "k", r.k);
  row("all", "t0", r.t0);
  row("all", "clock_mhz", r.clock_mhz);
  row("all", "queries", r.queries);
  row("all", "completed", r.completed);
  row("all", "rejected", r.rejected);
  row("all", "insert_failed", r.insert_failed);
  row("all", "deferred_queries", r.deferred_queries);
  row("all", "deferred_cycles", r.deferred_cycles);
  row("all", "discipline_violations", r.discipline_violations);
  row("all", "total_cycles", r.total_cycles);
  row("all", "last_accept_cycle", r.last_accept_cycle);
  row("all", "mops_raw", r.mops_raw);
  row("all", "mops_steady", r.mops_steady);
  for (const LatencyStats& s : r.latency) {
    row(s.op, "count", s.count);
    row(s.op, "min_cycles", s.min_cycles);
    row(s.op, "max_cycles", s.max_cycles);
    row(s.op, "mean_cycles", s.mean_cycles);
    row(s.op, "mean_ns", s.mean_ns);
    row(s.op, "max_ns", s.max_ns);
  }
  os.precision(old_precision);
}

void write_results_csv(std::ostream& os, std::span<const QueryResult> results, unsigned key_bits) {
  os << "trace_index,op,key_hex,outcome,issue,accept,complete\n";
  for (const QueryResult& r : results) {
    os << r.trace_index << ',' << to_string(r.op) << ',' << to_hex(r.key, hex_digits(key_bits)) << ','
       << to_string(r.outcome) << ',' << r.issue_cycle << ',' << r.accept_cycle << ',' << r.complete_cycle
       << '\n';
  }
}

}  // namespace xorht
