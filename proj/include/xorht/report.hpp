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

#include <iosfwd>
#include <span>
#include <string>

#include "xorht/engine.hpp"

namespace xorht {

/// Report as a JSON tree (pretty printed, stable key order).
std::string report_json(const SimReport& report);

/// Header "op,metric,value"; op is "all" for run-wide metrics.
void write_report_csv(std::ostream& os, const SimReport& report);

/// Header "trace_index,op,key_hex,outcome,issue,accept,complete".
void write_results_csv(std::ostream& os, std::span<const QueryResult> results, unsigned key_bits);

}  // namespace xorht
