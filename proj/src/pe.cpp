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

#include "xorht/pe.hpp"

#include <sstream>

namespace xorht {

void StageLatencies::validate() const {
  if (hash == 0 || read == 0 || xor_tree == 0 || resolve == 0) {
    throw std::invalid_argument("stage latencies: every stage takes at least one cycle");
  }
}

ResolveOutcome resolve(std::span<const DecodedSlot> row, const Query& query) {
  using Kind = ResolveOutcome::Kind;
  for (unsigned s = 0; s < row.size(); ++s) {
    if (row[s].occupied && row[s].key == query.key) return {Kind::MatchSlot, s};
  }
  if (query.op == OpKind::Insert || query.op == OpKind::Update) {
    for (unsigned s = 0; s < row.size(); ++s) {
      if (!row[s].occupied) return {Kind::OpenSlot, s};
    }
    return {Kind::BucketFull, 0};
  }
  return {Kind::NotFound, 0};
}

ProcessingEngine::ProcessingEngine(PEConfig config, const H3Matrix& hash,
                                   const StoreGeometry& geom)
    : config_(config),
      hash_(&hash),
      geom_(geom),
      row_buf_(static_cast<std::size_t>(geom.banks) * geom.slots) {
  config_.latencies.validate();
  if (config_.mutation_capable && config_.owner_id >= geom_.banks) {
    throw std::invalid_argument("pe: owner_id must be below the bank count");
  }
}

void ProcessingEngine::accept(const Query& query, Cycle issue_cycle, Cycle cycle) {
  if (is_nsq(query.op) && !config_.mutation_capable) {
    std::ostringstream os;
    os << "pe " << config_.pe_id << " is search-only; cannot accept " << to_string(query.op)
       << " (trace index " << query.trace_index << ")";
    throw RoutingError(os.str());
  }
  if (cycle == last_accept_) {
    std::ostringstream os;
    os << "pe " << config_.pe_id << ": second query offered in cycle " << cycle;
    throw RoutingError(os.str());
  }
  last_accept_ = cycle;
  InFlight q;
  q.query = query;
  q.issue = issue_cycle;
  q.accept = cycle;
  q.read_at = cycle + config_.latencies.hash;
  q.emit_at = cycle + t0();
  pipeline_.push_back(std::move(q));
}

void ProcessingEngine::compute(InFlight& q, Cycle cycle, Replica& local) {
  const unsigned slots = geom_.slots;
  const unsigned banks = geom_.banks;
  const bool nsq = is_nsq(q.query.op);

  q.bucket = hash_->hash(q.query.key);
  local.read_row(static_cast<unsigned>(q.bucket), cycle, row_buf_);

  if (nsq) {
    // Own mutations still ahead in the pipeline, oldest first so the
    // youngest write to a slot wins.
    const std::size_t owner_base = static_cast<std::size_t>(config_.owner_id) * slots;
    for (const InFlight& older : pipeline_) {
      if (&older == &q) break;
      if (older.computed && older.word && older.bucket == q.bucket) {
        row_buf_[owner_base + older.resolved.slot] = *older.word;
      }
    }
  }

  std::vector<EncodedSlot> column(banks);
  std::vector<std::vector<EncodedSlot>> columns(slots, column);
  q.decoded_row.resize(slots);
  for (unsigned s = 0; s < slots; ++s) {
    for (unsigned b = 0; b < banks; ++b) columns[s][b] = row_buf_[static_cast<std::size_t>(b) * slots + s];
    q.decoded_row[s] = decode_column(columns[s], geom_.key_bits, geom_.value_bits);
  }

  q.resolved = resolve(q.decoded_row, q.query);
  using Kind = ResolveOutcome::Kind;
  const auto& column_at = [&](unsigned s) -> const std::vector<EncodedSlot>& { return columns[s]; };

  switch (q.query.op) {
    case OpKind::Search:
      if (q.resolved.kind == Kind::MatchSlot) {
        q.outcome = Outcome::Found;
        q.found_value = q.decoded_row[q.resolved.slot].value;
      } else {
        q.outcome = Outcome::None;
      }
      break;
    case OpKind::Insert:
    case OpKind::Update:
      if (q.resolved.kind == Kind::BucketFull) {
        q.outcome = Outcome::InsertFailed;
        break;
      }
      q.outcome = q.resolved.kind == Kind::MatchSlot ? Outcome::Updated : Outcome::Inserted;
      q.word = encode_upsert(column_at(q.resolved.slot), config_.owner_id, q.query.key,
                             q.query.value, geom_.value_bits);
      break;
    case OpKind::Delete:
      if (q.resolved.kind != Kind::MatchSlot) {
        q.outcome = Outcome::None;
        break;
      }
      q.outcome = Outcome::Deleted;
      q.word = encode_delete(column_at(q.resolved.slot), config_.owner_id);
      break;
  }
  q.computed = true;
}

PeStepOutput ProcessingEngine::step(Cycle cycle, Replica& local) {
  PeStepOutput out;
  for (InFlight& q : pipeline_) {
    if (q.read_at == cycle) {
      compute(q, cycle, local);
      out.read = PeRead{q.bucket, is_nsq(q.query.op)};
      break;
    }
  }

  if (!pipeline_.empty() && pipeline_.front().emit_at == cycle) {
    InFlight& q = pipeline_.front();
    PeEmission em;
    QueryResult& r = em.result;
    r.trace_index = q.query.trace_index;
    r.op = q.query.op;
    r.key = q.query.key;
    r.outcome = q.outcome;
    r.value = q.found_value;
    r.pe = static_cast<int>(config_.pe_id);
    r.bucket = q.bucket;
    r.issue_cycle = q.issue;
    r.accept_cycle = q.accept;
    r.read_cycle = q.read_at;
    r.serial_cycle = is_nsq(q.query.op) ? q.emit_at : q.read_at;
    r.complete_cycle = cycle;
    if (q.resolved.kind == ResolveOutcome::Kind::MatchSlot ||
        q.resolved.kind == ResolveOutcome::Kind::OpenSlot) {
      r.slot = static_cast<int>(q.resolved.slot);
    }
    if (q.word) {
      MutationMessage m;
      m.owner = config_.owner_id;
      m.origin_pe = config_.pe_id;
      m.entry = static_cast<unsigned>(q.bucket);
      m.slot = q.resolved.slot;
      m.word = *q.word;
      m.trace_index = q.query.trace_index;
      m.created = cycle;
      em.message = m;
      r.committed = true;
    }
    out.emitted = std::move(em);
    pipeline_.pop_front();
  }
  return out;
}

}  // namespace xorht
