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
#include <span>
#include <string>
#include <vector>

namespace xorht {

struct DeviceProfile {
  std::string name;
  std::uint64_t total_blocks = 0;
  std::uint64_t block_depth = 0;  // words
  std::uint64_t block_width = 0;  // bits

  std::uint64_t block_bits() const { return block_depth * block_width; }
  std::uint64_t total_bits() const { return total_blocks * block_bits(); }
  void validate() const;
};

/// 1280 URAM blocks of 4096 x 72.
DeviceProfile u250_profile();
/// 11721 M20K blocks of 512 x 40 (about 229 Mb).
DeviceProfile stratix10_profile();
/// "u250" or "stratix10"; throws std::invalid_argument otherwise.
DeviceProfile builtin_profile(const std::string& name);

/// JSON object {name, total_blocks, block_depth, block_width}.
DeviceProfile load_profile(std::istream& is);
DeviceProfile load_profile_file(const std::string& path);

struct TableGeometry {
  unsigned p = 1;
  unsigned k = 1;
  std::uint64_t entries = 1;
  unsigned slots = 1;
  unsigned key_bits = 32;
  unsigned value_bits = 32;

  unsigned slot_word_bits() const { return key_bits + value_bits + 1; }
  void validate() const;
};

/// p * k * E * S * (key + value + 1) bits.
std::uint64_t table_memory_bits(const TableGeometry& g);
double table_memory_bytes(const TableGeometry& g);

struct BlockUsage {
  std::uint64_t per_bank = 0;
  std::uint64_t total = 0;
  double utilization = 0;
  bool feasible = false;
};

BlockUsage blocks_for_table(const TableGeometry& g, const DeviceProfile& device);

/// Largest power-of-two E with blocks <= budget * total_blocks, or 0.
std::uint64_t max_entries(const DeviceProfile& device, unsigned p, unsigned k, unsigned slots, unsigned key_bits,
                          unsigned value_bits, double budget_fraction);

struct PlanRow {
  TableGeometry geom;
  double bytes = 0;
  BlockUsage blocks;
  std::uint64_t max_entries = 0;
};

struct PlanGrid {
  std::vector<unsigned> p;
  std::vector<unsigned> k;
  std::vector<std::uint64_t> entries;
  std::vector<unsigned> slots;
  std::vector<unsigned> key_bits;
  std::vector<unsigned> value_bits;
  double budget = 0.8;
};

/// Grid points with k > p are skipped.
std::vector<PlanRow> plan(const DeviceProfile& device, const PlanGrid& grid);

/// The 50000-entry, 2-slot, 32+32-bit table over p in {2,4,8,16} and every k in 1..p.
std::vector<PlanRow> memory_sweep(const DeviceProfile& device);

/// "p,k,ratio,entries,slots,key_bits,value_bits,bytes,blocks,utilization,feasible,max_entries"
void write_plan_csv(std::ostream& os, std::span<const PlanRow> rows);

}  // namespace xorht
