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
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "xorht/engine.hpp"
#include "xorht/h3hash.hpp"
#include "xorht/types.hpp"

namespace xorht {

enum class Distribution : std::uint8_t { Uniform, SameBucket };

/// Relative weights of the three NSQ kinds.
struct OpMix {
  double insert = 2;
  double update = 1;
  double remove = 1;
};

struct WorkloadSpec {
  std::uint64_t total_queries = 1000;
  double nsq_fraction = 0.5;
  OpMix mix;
  unsigned key_space_bits = 32;
  Distribution distribution = Distribution::Uniform;
  std::uint64_t target_bucket = 0;  // same-bucket only
  std::uint64_t seed = 1;
  double hit_probability = 0.5;         // update/delete aimed at an inserted key
  double search_hit_probability = 0.5;  // search aimed at an inserted key

  void validate() const;
};

/// Uniform keys over the key space. NSQ are spread over p-query batches so
/// that no batch holds more than k of them.
std::vector<Query> gen_uniform(const WorkloadSpec& spec, const SimConfig& config);

/// Every key hashes to `target_bucket` under `matrix`.
std::vector<Query> gen_same_bucket(const WorkloadSpec& spec, const SimConfig& config,
                                   const H3Matrix& matrix, std::uint64_t target_bucket);

/// Dispatches on spec.distribution, using config.matrix() for same-bucket.
std::vector<Query> generate(const WorkloadSpec& spec, const SimConfig& config);

/// Rank over GF(2) of the first `key_bits` rows (all rows when 0).
unsigned gf2_rank(const H3Matrix& matrix, unsigned key_bits = 0);

/// All keys below 2^key_bits hashing to `target` are base XOR span(kernel).
struct PreimageSpace {
  U128 base;
  std::vector<U128> kernel;
};

/// nullopt when `target` lies outside the image of the first `key_bits` rows.
std::optional<PreimageSpace> preimage_space(const H3Matrix& matrix, std::uint64_t target,
                                            unsigned key_bits = 0);

/// min(count, 2^dim) distinct preimages, deterministic in `seed`.
std::vector<U128> distinct_preimages(const PreimageSpace& space, std::uint64_t count, std::uint64_t seed);

class UnreachableBucket : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class TraceParseError : public std::runtime_error {
 public:
  TraceParseError(std::size_t line, const std::string& what);
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

/// One query per line: op letter, key hex, value hex for I/U. '#' starts a comment.
std::vector<Query> read_trace(std::istream& is);
void write_trace(std::ostream& os, const std::vector<Query>& trace, unsigned key_bits, unsigned value_bits);

/// Files ending in ".gz" are gzip compressed.
std::vector<Query> trace_read(const std::string& path);
void trace_write(const std::string& path, const std::vector<Query>& trace, unsigned key_bits,
                 unsigned value_bits);

}  // namespace xorht
