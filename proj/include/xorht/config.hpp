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
#include <string>
#include <vector>

#include "xorht/engine.hpp"
#include "xorht/resource.hpp"
#include "xorht/workload.hpp"

namespace xorht {

struct SweepRanges {
  std::vector<unsigned> p;
  std::vector<unsigned> k;  // empty: k = p at every point
  std::vector<unsigned> slots;
  std::vector<unsigned> key_bits;
  std::vector<unsigned> value_bits;
};

struct ExperimentConfig {
  SimConfig sim;
  WorkloadSpec workload;
  std::string trace;       // trace file; empty means generate
  std::string output_dir = ".";
  bool per_query = false;  // dump per-query CSV from simulate
  std::size_t trials = 1000;
  std::vector<double> theta = {336, 672, 1344};
  unsigned jobs = 1;
  SweepRanges sweep;
  std::string device = "u250";  // built-in name or path to a profile file
  PlanGrid plan;

  /// Cross-field checks; throws std::invalid_argument naming the field.
  void validate() const;
};

/// Headline configurations: "xilinx16" (16 PEs at 370.375 MHz) and
/// "stratix8" (8 PEs at 276 MHz).
ExperimentConfig preset(const std::string& name);

/// Fields absent from the document keep the values in `base`. Unknown
/// keys and type mismatches are errors naming the field path.
ExperimentConfig parse_config(std::istream& is, ExperimentConfig base = {});
ExperimentConfig load_config(const std::string& path, ExperimentConfig base = {});

/// The effective configuration as JSON.
std::string config_json(const ExperimentConfig& config);

}  // namespace xorht
