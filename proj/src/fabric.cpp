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


#include "xorht/fabric.hpp"

#include <algorithm>
#include <stdexcept>

namespace xorht {

Dispatcher::Dispatcher(unsigned p, unsigned k, OverflowMode mode)
    : p_(p), k_(k), mode_(mode), busy_(p, 0) {
  if (p == 0 || k == 0 || k > p) throw std::invalid_argument("dispatcher: need 1 <= k <= p");
}

DispatchResult Dispatcher::dispatch(std::span<const Query> batch) {
  if (batch.size() > p_) throw std::invalid_argument("dispatcher: batch larger than p");
  DispatchResult out;
  std::fill(busy_.begin(), busy_.end(), 0);

  std::vector<const Query*> searches;
  unsigned nsq_taken = 0;
  for (const Query& q : batch) {
    if (!is_nsq(q.op)) {
      searches.push_back(&q);
      continue;
    }
    if (nsq_taken == k_) {
      (mode_ == OverflowMode::Defer ? out.deferred : out.rejected).push_back(q);
      continue;
    }
    const unsigned pe = nsq_rr_;
    nsq_rr_ = (nsq_rr_ + 1) % k_;
    busy_[pe] = 1;
    ++nsq_taken;
    out.assigned.push_back({pe, q});
  }

  unsigned pe = search_rr_;
  for (const Query* q : searches) {
    while (busy_[pe]) pe = (pe + 1) % p_;
    busy_[pe] = 1;
    out.assigned.push_back({pe, *q});
    pe = (pe + 1) % p_;
    search_rr_ = pe;
  }
  return out;
}

Fabric::Fabric(unsigned p, std::optional<FaultPlan> fault) : p_(p), fault_(fault) {
  if (p == 0) throw std::invalid_argument("fabric: need at least one PE");
}

void Fabric::inject(MutationMessage message) {
  message.hops_done = 0;
  message.serial = next_serial_++;
  live_.push_back(message);
}

std::vector<MutationMessage> Fabric::propagate_step(std::span<Replica> replicas, Cycle cycle) {
  if (replicas.size() != p_) throw std::invalid_argument("fabric: replica count differs from p");
  std::vector<MutationMessage> retired;
  for (MutationMessage& m : live_) {
    const unsigned hop = m.hops_done + 1;
    Replica& target = replicas[(m.origin_pe + m.hops_done) % p_];
    EncodedSlot word = m.word;
    if (fault_ && fault_->serial == m.serial && (fault_->hop == 0 ? hop == p_ : hop == fault_->hop)) {
      word.data.limbs[fault_->bit / 64] ^= std::uint64_t{1} << (fault_->bit % 64);
    }
    target.bank(m.owner).write(m.owner, m.entry, m.slot, word, cycle);
    m.hops_done = hop;
    if (hop == p_) retired.push_back(m);
  }
  std::erase_if(live_, [this](const MutationMessage& m) { return m.hops_done == p_; });
  return retired;
}

}  // namespace xorht
