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


#include "xorht/workload.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <numeric>
#include <set>
#include <sstream>

namespace xorht {

namespace {

__extension__ using Wide = unsigned __int128;

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  std::uint64_t next() { return gen_(); }
  std::uint64_t below(std::uint64_t n) {
    return static_cast<std::uint64_t>((static_cast<Wide>(gen_()) * n) >> 64);
  }
  double unit() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }
  bool chance(double p) { return unit() < p; }
  U128 bits(unsigned n) {
    const std::uint64_t lo = gen_();
    const std::uint64_t hi = gen_();
    return U128{hi, lo} & U128::low_mask(n);
  }

 private:
  std::mt19937_64 gen_;
};

void check_key_space(const WorkloadSpec& spec, const SimConfig& config) {
  if (spec.key_space_bits > config.key_bits) {
    throw std::invalid_argument("workload.key_space_bits: exceeds key_bits of the table");
  }
  if (spec.nsq_fraction > config.nsq_ratio() + 1e-12) {
    std::ostringstream os;
    os << "workload.nsq_fraction: " << spec.nsq_fraction << " exceeds the NSQ ratio k/p = " << config.k << "/"
       << config.p << "; at most k NSQ can enter per cycle";
    throw std::invalid_argument(os.str());
  }
}

/// Which trace positions are NSQ: Bernoulli per position, overflow beyond
/// k in a batch is carried into the next batch.
std::vector<char> place_nsq(Rng& rng, const WorkloadSpec& spec, const SimConfig& config) {
  const std::uint64_t n = spec.total_queries;
  std::vector<char> nsq(n, 0);
  std::vector<unsigned> idx(config.p);
  std::uint64_t carry = 0;
  for (std::uint64_t start = 0; start < n; start += config.p) {
    const unsigned len = static_cast<unsigned>(std::min<std::uint64_t>(config.p, n - start));
    std::uint64_t want = carry;
    for (unsigned i = 0; i < len; ++i) want += rng.chance(spec.nsq_fraction) ? 1 : 0;
    const unsigned place = static_cast<unsigned>(std::min<std::uint64_t>({want, config.k, len}));
    carry = want - place;
    std::iota(idx.begin(), idx.begin() + len, 0U);
    for (unsigned i = 0; i < place; ++i) {
      const unsigned j = i + static_cast<unsigned>(rng.below(len - i));
      std::swap(idx[i], idx[j]);
      nsq[start + idx[i]] = 1;
    }
  }
  return nsq;
}

template <typename FreshKey>
std::vector<Query> build(const WorkloadSpec& spec, const SimConfig& config, Rng& rng, FreshKey fresh_key) {
  const std::vector<char> nsq = place_nsq(rng, spec, config);
  const double total_w = spec.mix.insert + spec.mix.update + spec.mix.remove;
  std::vector<U128> live;
  std::vector<Query> trace;
  trace.reserve(spec.total_queries);

  auto pick_live = [&](double hit) -> std::optional<std::size_t> {
    if (live.empty() || !rng.chance(hit)) return std::nullopt;
    return static_cast<std::size_t>(rng.below(live.size()));
  };

  for (std::uint64_t i = 0; i < spec.total_queries; ++i) {
    Query q;
    q.trace_index = i;
    if (!nsq[i]) {
      q.op = OpKind::Search;
      const auto hit = pick_live(spec.search_hit_probability);
      q.key = hit ? live[*hit] : fresh_key();
    } else {
      const double r = rng.unit() * total_w;
      if (r < spec.mix.insert) {
        q.op = OpKind::Insert;
        q.key = fresh_key();
        live.push_back(q.key);
      } else if (r < spec.mix.insert + spec.mix.update) {
        q.op = OpKind::Update;
        const auto hit = pick_live(spec.hit_probability);
        q.key = hit ? live[*hit] : fresh_key();
      } else {
        q.op = OpKind::Delete;
        const auto hit = pick_live(spec.hit_probability);
        if (hit) {
          q.key = live[*hit];
          live[*hit] = live.back();
          live.pop_back();
        } else {
          q.key = fresh_key();
        }
      }
      if (q.op != OpKind::Delete) q.value = rng.bits(config.value_bits);
    }
    trace.push_back(q);
  }
  return trace;
}

struct XorBasis {
  // basis[b] has highest set bit b; comb records the key bits combined into it.
  std::array<std::uint64_t, 64> vec{};
  std::array<U128, 64> comb{};
  std::array<bool, 64> used{};

  // Reduces v in place, returning the combination consumed.
  U128 reduce(std::uint64_t& v) const {
    U128 c;
    while (v != 0) {
      const int b = 63 - std::countl_zero(v);
      if (!used[b]) break;
      v ^= vec[b];
      c ^= comb[b];
    }
    return c;
  }
};

}  // namespace

void WorkloadSpec::validate() const {
  if (!(nsq_fraction >= 0 && nsq_fraction <= 1)) {
    throw std::invalid_argument("workload.nsq_fraction: must be in [0, 1]");
  }
  if (mix.insert < 0 || mix.update < 0 || mix.remove < 0) {
    throw std::invalid_argument("workload.op_mix: weights must be non-negative");
  }
  if (nsq_fraction > 0 && mix.insert + mix.update + mix.remove <= 0) {
    throw std::invalid_argument("workload.op_mix: weights sum to zero");
  }
  if (key_space_bits == 0 || key_space_bits > 128) {
    throw std::invalid_argument("workload.key_space_bits: must be in [1, 128]");
  }
  if (!(hit_probability >= 0 && hit_probability <= 1)) {
    throw std::invalid_argument("workload.hit_probability: must be in [0, 1]");
  }
  if (!(search_hit_probability >= 0 && search_hit_probability <= 1)) {
    throw std::invalid_argument("workload.search_hit_probability: must be in [0, 1]");
  }
}

std::vector<Query> gen_uniform(const WorkloadSpec& spec, const SimConfig& config) {
  spec.validate();
  config.validate();
  check_key_space(spec, config);
  Rng rng(spec.seed);
  return build(spec, config, rng, [&] { return rng.bits(spec.key_space_bits); });
}

std::vector<Query> gen_same_bucket(const WorkloadSpec& spec, const SimConfig& config,
                                   const H3Matrix& matrix, std::uint64_t target_bucket) {
  spec.validate();
  config.validate();
  check_key_space(spec, config);
  const unsigned bits = std::min(spec.key_space_bits, matrix.key_bits());
  const auto space = preimage_space(matrix, target_bucket, bits);
  if (!space) {
    std::ostringstream os;
    os << "bucket " << target_bucket << " has no preimage among " << bits << "-bit keys";
    throw UnreachableBucket(os.str());
  }
  Rng rng(spec.seed);
  const std::vector<U128> pool = distinct_preimages(*space, 1024, rng.next());
  return build(spec, config, rng, [&] { return pool[rng.below(pool.size())]; });
}

std::vector<Query> generate(const WorkloadSpec& spec, const SimConfig& config) {
  if (spec.distribution == Distribution::SameBucket) {
    return gen_same_bucket(spec, config, config.matrix(), spec.target_bucket);
  }
  return gen_uniform(spec, config);
}

unsigned gf2_rank(const H3Matrix& matrix, unsigned key_bits) {
  const unsigned n = key_bits == 0 ? matrix.key_bits() : std::min(key_bits, matrix.key_bits());
  XorBasis basis;
  unsigned rank = 0;
  for (unsigned m = 0; m < n; ++m) {
    std::uint64_t v = matrix.rows()[m];
    basis.reduce(v);
    if (v == 0) continue;
    const int b = 63 - std::countl_zero(v);
    basis.vec[b] = v;
    basis.used[b] = true;
    ++rank;
  }
  return rank;
}

std::optional<PreimageSpace> preimage_space(const H3Matrix& matrix, std::uint64_t target, unsigned key_bits) {
  const unsigned n = key_bits == 0 ? matrix.key_bits() : std::min(key_bits, matrix.key_bits());
  XorBasis basis;
  PreimageSpace space;
  for (unsigned m = 0; m < n; ++m) {
    std::uint64_t v = matrix.rows()[m];
    U128 unit = m < 64 ? U128{0, std::uint64_t{1} << m} : U128{std::uint64_t{1} << (m - 64), 0};
    U128 c = basis.reduce(v) ^ unit;
    if (v == 0) {
      space.kernel.push_back(c);
      continue;
    }
    const int b = 63 - std::countl_zero(v);
    basis.vec[b] = v;
    basis.comb[b] = c;
    basis.used[b] = true;
  }
  std::uint64_t t = target;
  space.base = basis.reduce(t);
  if (t != 0) return std::nullopt;
  return space;
}

std::vector<U128> distinct_preimages(const PreimageSpace& space, std::uint64_t count, std::uint64_t seed) {
  const std::size_t dim = space.kernel.size();
  std::vector<U128> out;
  auto combine = [&](auto&& pick) {
    U128 x = space.base;
    for (std::size_t i = 0; i < dim; ++i) {
      if (pick(i)) x ^= space.kernel[i];
    }
    return x;
  };
  if (dim < 63 && (std::uint64_t{1} << dim) <= count) {
    const std::uint64_t total = std::uint64_t{1} << dim;
    out.reserve(total);
    for (std::uint64_t c = 0; c < total; ++c) out.push_back(combine([c](std::size_t i) { return (c >> i) & 1U; }));
    return out;
  }
  Rng rng(seed);
  std::set<U128> seen;
  out.reserve(count);
  while (out.size() < count) {
    const U128 x = combine([&rng](std::size_t) { return (rng.next() >> 63) != 0; });
    if (seen.insert(x).second) out.push_back(x);
  }
  return out;
}

}  // namespace xorht
