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


#include "xorht/resource.hpp"

#include <fstream>
#include <istream>
#include <ostream>
#include <stdexcept>

#include "json.hpp"

namespace xorht {

namespace {

std::uint64_t ceil_div(std::uint64_t a, std::uint64_t b) { return (a + b - 1) / b; }

}  // namespace

void DeviceProfile::validate() const {
  if (total_blocks == 0 || block_depth == 0 || block_width == 0) {
    throw std::invalid_argument("device profile '" + name + "': blocks, depth and width must be positive");
  }
}

DeviceProfile u250_profile() { return {"u250", 1280, 4096, 72}; }

DeviceProfile stratix10_profile() { return {"stratix10", 11721, 512, 40}; }

DeviceProfile builtin_profile(const std::string& name) {
  if (name == "u250") return u250_profile();
  if (name == "stratix10") return stratix10_profile();
  throw std::invalid_argument("unknown device profile '" + name + "' (built-ins: u250, stratix10)");
}

DeviceProfile load_profile(std::istream& is) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(is);
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("device profile: ") + e.what());
  }
  DeviceProfile d;
  auto need = [&j](const char* key) -> const nlohmann::json& {
    if (!j.contains(key)) throw std::invalid_argument(std::string("device profile: missing field '") + key + "'");
    return j.at(key);
  };
  try {
    d.name = need("name").get<std::string>();
    d.total_blocks = need("total_blocks").get<std::uint64_t>();
    d.block_depth = need("block_depth").get<std::uint64_t>();
    d.block_width = need("block_width").get<std::uint64_t>();
  } catch (const nlohmann::json::type_error& e) {
    throw std::invalid_argument(std::string("device profile: ") + e.what());
  }
  d.validate();
  return d;
}

DeviceProfile load_profile_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open device profile " + path);
  return load_profile(is);
}

void TableGeometry::validate() const {
  if (p == 0 || k == 0 || k > p) throw std::invalid_argument("geometry: need 1 <= k <= p");
  if (entries == 0 || slots == 0) throw std::invalid_argument("geometry: entries and slots must be positive");
  if (key_bits == 0 || value_bits == 0) throw std::invalid_argument("geometry: widths must be positive");
}

std::uint64_t table_memory_bits(const TableGeometry& g) {
  g.validate();
  return std::uint64_t{g.p} * g.k * g.entries * g.slots * g.slot_word_bits();
}

double table_memory_bytes(const TableGeometry& g) { return static_cast<double>(table_memory_bits(g)) / 8.0; }

BlockUsage blocks_for_table(const TableGeometry& g, const DeviceProfile& device) {
  g.validate();
  device.validate();
  BlockUsage u;
  u.per_bank = ceil_div(g.entries * g.slots, device.block_depth) * ceil_div(g.slot_word_bits(), device.block_width);
  u.total = std::uint64_t{g.p} * g.k * u.per_bank;
  u.utilization = static_cast<double>(u.total) / static_cast<double>(device.total_blocks);
  u.feasible = u.total <= device.total_blocks;
  return u;
}

std::uint64_t max_entries(const DeviceProfile& device, unsigned p, unsigned k, unsigned slots, unsigned key_bits,
                          unsigned value_bits, double budget_fraction) {
  if (!(budget_fraction > 0 && budget_fraction <= 1)) {
    throw std::invalid_argument("max_entries: budget fraction must be in (0, 1]");
  }
  const double budget = budget_fraction * static_cast<double>(device.total_blocks);
  TableGeometry g{p, k, 1, slots, key_bits, value_bits};
  std::uint64_t best = 0;
  for (std::uint64_t e = 1; e != 0 && e <= (std::uint64_t{1} << 48); e <<= 1) {
    g.entries = e;
    if (static_cast<double>(blocks_for_table(g, device).total) > budget) break;
    best = e;
  }
  return best;
}

std::vector<PlanRow> plan(const DeviceProfile& device, const PlanGrid& grid) {
  std::vector<PlanRow> rows;
  for (unsigned p : grid.p) {
    for (unsigned k : grid.k) {
      if (k == 0 || k > p) continue;
      for (std::uint64_t e : grid.entries) {
        for (unsigned s : grid.slots) {
          for (unsigned kb : grid.key_bits) {
            for (unsigned vb : grid.value_bits) {
              PlanRow r;
              r.geom = TableGeometry{p, k, e, s, kb, vb};
              r.geom.validate();
              r.bytes = table_memory_bytes(r.geom);
              r.blocks = blocks_for_table(r.geom, device);
              r.max_entries = max_entries(device, p, k, s, kb, vb, grid.budget);
              rows.push_back(r);
            }
          }
        }
      }
    }
  }
  return rows;
}

std::vector<PlanRow> memory_sweep(const DeviceProfile& device) {
  std::vector<PlanRow> rows;
  for (unsigned p : {2U, 4U, 8U, 16U}) {
    PlanGrid grid;
    grid.p = {p};
    for (unsigned k = 1; k <= p; ++k) grid.k.push_back(k);
    grid.entries = {50000};
    grid.slots = {2};
    grid.key_bits = {32};
    grid.value_bits = {32};
    for (PlanRow& r : plan(device, grid)) rows.push_back(r);
  }
  return rows;
}

void write_plan_csv(std::ostream& os, std::span<const PlanRow> rows) {
  os << "p,k,ratio,entries,slots,key_bits,value_bits,bytes,blocks,utilization,feasible,max_entries\n";
  const auto old_precision = os.precision(12);
  for (const PlanRow& r : rows) {
    const TableGeometry& g = r.geom;
    os << g.p << ',' << g.k << ',' << static_cast<double>(g.k) / g.p << ',' << g.entries << ',' << g.slots << ','
       << g.key_bits << ',' << g.value_bits << ',' << r.bytes << ',' << r.blocks.total << ','
       << r.blocks.utilization << ',' << (r.blocks.feasible ? 1 : 0) << ',' << r.max_entries << '\n';
  }
  os.precision(old_precision);
}

}  // namespace xorht
