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


#include "xorht/config.hpp"

#include <fstream>
#include <istream>
#include <limits>
#include <set>
#include <stdexcept>

#include "json.hpp"

namespace xorht {

namespace {

using json = nlohmann::json;

[[noreturn]] void fail(const std::string& path, const std::string& why) {
  throw std::invalid_argument("config field '" + path + "': " + why);
}

void only_keys(const json& obj, const std::string& path, std::initializer_list<const char*> keys) {
  if (!obj.is_object()) fail(path.empty() ? "<root>" : path, "expected an object");
  const std::set<std::string> allowed(keys.begin(), keys.end());
  for (const auto& [key, _] : obj.items()) {
    if (!allowed.count(key)) fail(path.empty() ? key : path + "." + key, "unknown field");
  }
}

template <typename T>
void read(const json& obj, const char* key, const std::string& path, T& out) {
  if (!obj.contains(key)) return;
  const std::string where = path.empty() ? key : path + "." + key;
  const json& v = obj.at(key);
  try {
    if constexpr (std::is_same_v<T, bool>) {
      if (!v.is_boolean()) fail(where, "expected true or false");
    } else if constexpr (std::is_integral_v<T>) {
      if (!v.is_number_integer()) fail(where, "expected an integer");
      if (v.is_number_integer() && !v.is_number_unsigned() && v.get<std::int64_t>() < 0) {
        fail(where, "must be non-negative");
      }
      if (v.is_number_unsigned() && v.get<std::uint64_t>() > std::numeric_limits<T>::max()) {
        fail(where, "out of range");
      }
    } else if constexpr (std::is_floating_point_v<T>) {
      if (!v.is_number()) fail(where, "expected a number");
    } else if constexpr (std::is_same_v<T, std::string>) {
      if (!v.is_string()) fail(where, "expected a string");
    } else {
      if (!v.is_array()) fail(where, "expected an array");
    }
    out = v.get<T>();
  } catch (const json::exception& e) {
    fail(where, e.what());
  }
}

void parse_sim(const json& j, SimConfig& s) {
  only_keys(j, "sim", {"p", "k", "entries", "slots", "key_bits", "value_bits", "latencies", "clock_mhz", "seed",
                       "overflow"});
  read(j, "p", "sim", s.p);
  read(j, "k", "sim", s.k);
  read(j, "entries", "sim", s.entries);
  read(j, "slots", "sim", s.slots);
  read(j, "key_bits", "sim", s.key_bits);
  read(j, "value_bits", "sim", s.value_bits);
  read(j, "clock_mhz", "sim", s.clock_mhz);
  read(j, "seed", "sim", s.seed);
  if (j.contains("latencies")) {
    const json& l = j.at("latencies");
    only_keys(l, "sim.latencies", {"hash", "read", "xor_tree", "resolve"});
    read(l, "hash", "sim.latencies", s.latencies.hash);
    read(l, "read", "sim.latencies", s.latencies.read);
    read(l, "xor_tree", "sim.latencies", s.latencies.xor_tree);
    read(l, "resolve", "sim.latencies", s.latencies.resolve);
  }
  std::string overflow;
  read(j, "overflow", "sim", overflow);
  if (overflow == "defer") {
    s.overflow = OverflowMode::Defer;
  } else if (overflow == "reject") {
    s.overflow = OverflowMode::Reject;
  } else if (!overflow.empty()) {
    fail("sim.overflow", "expected \"defer\" or \"reject\"");
  }
}

void parse_workload(const json& j, WorkloadSpec& w) {
  only_keys(j, "workload", {"total_queries", "nsq_fraction", "op_mix", "key_space_bits", "distribution",
                            "target_bucket", "seed", "hit_probability", "search_hit_probability"});
  read(j, "total_queries", "workload", w.total_queries);
  read(j, "nsq_fraction", "workload", w.nsq_fraction);
  read(j, "key_space_bits", "workload", w.key_space_bits);
  read(j, "target_bucket", "workload", w.target_bucket);
  read(j, "seed", "workload", w.seed);
  read(j, "hit_probability", "workload", w.hit_probability);
  read(j, "search_hit_probability", "workload", w.search_hit_probability);
  if (j.contains("op_mix")) {
    const json& m = j.at("op_mix");
    only_keys(m, "workload.op_mix", {"insert", "update", "delete"});
    read(m, "insert", "workload.op_mix", w.mix.insert);
    read(m, "update", "workload.op_mix", w.mix.update);
    read(m, "delete", "workload.op_mix", w.mix.remove);
  }
  std::string dist;
  read(j, "distribution", "workload", dist);
  if (dist == "uniform") {
    w.distribution = Distribution::Uniform;
  } else if (dist == "same_bucket") {
    w.distribution = Distribution::SameBucket;
  } else if (!dist.empty()) {
    fail("workload.distribution", "expected \"uniform\" or \"same_bucket\"");
  }
}

}  // namespace

void ExperimentConfig::validate() const {
  sim.validate();
  workload.validate();
  if (workload.key_space_bits > sim.key_bits) fail("workload.key_space_bits", "exceeds sim.key_bits");
  if (workload.nsq_fraction > sim.nsq_ratio() + 1e-12) fail("workload.nsq_fraction", "exceeds k/p");
  if (workload.distribution == Distribution::SameBucket && workload.target_bucket >= sim.entries) {
    fail("workload.target_bucket", "must be below sim.entries");
  }
  if (jobs == 0) fail("jobs", "must be at least 1");
  for (double t : theta) {
    if (!(t > 0)) fail("theta", "values must be positive");
  }
  if (!(plan.budget > 0 && plan.budget <= 1)) fail("plan.budget", "must be in (0, 1]");
}

ExperimentConfig preset(const std::string& name) {
  ExperimentConfig c;
  if (name == "xilinx16") {
    c.sim.p = 16;
    c.sim.k = 16;
    c.sim.clock_mhz = 370.375;
    c.device = "u250";
  } else if (name == "stratix8") {
    c.sim.p = 8;
    c.sim.k = 4;
    c.sim.clock_mhz = 276.0;
    c.device = "stratix10";
  } else {
    throw std::invalid_argument("unknown preset '" + name + "' (available: xilinx16, stratix8)");
  }
  return c;
}

ExperimentConfig parse_config(std::istream& is, ExperimentConfig c) {
  json j;
  try {
    j = json::parse(is);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(std::string("config: ") + e.what());
  }
  only_keys(j, "", {"preset", "sim", "workload", "trace", "output", "trials", "theta", "jobs", "sweep", "plan"});
  if (j.contains("preset")) {
    std::string name;
    read(j, "preset", "", name);
    c = preset(name);
  }
  if (j.contains("sim")) parse_sim(j.at("sim"), c.sim);
  if (j.contains("workload")) parse_workload(j.at("workload"), c.workload);
  read(j, "trace", "", c.trace);
  if (j.contains("output")) {
    const json& o = j.at("output");
    only_keys(o, "output", {"dir", "per_query"});
    read(o, "dir", "output", c.output_dir);
    read(o, "per_query", "output", c.per_query);
  }
  read(j, "trials", "", c.trials);
  read(j, "theta", "", c.theta);
  read(j, "jobs", "", c.jobs);
  if (j.contains("sweep")) {
    const json& s = j.at("sweep");
    only_keys(s, "sweep", {"p", "k", "slots", "key_bits", "value_bits"});
    read(s, "p", "sweep", c.sweep.p);
    read(s, "k", "sweep", c.sweep.k);
    read(s, "slots", "sweep", c.sweep.slots);
    read(s, "key_bits", "sweep", c.sweep.key_bits);
    read(s, "value_bits", "sweep", c.sweep.value_bits);
  }
  if (j.contains("plan")) {
    const json& p = j.at("plan");
    only_keys(p, "plan", {"device", "p", "k", "entries", "slots", "key_bits", "value_bits", "budget"});
    read(p, "device", "plan", c.device);
    read(p, "p", "plan", c.plan.p);
    read(p, "k", "plan", c.plan.k);
    read(p, "entries", "plan", c.plan.entries);
    read(p, "slots", "plan", c.plan.slots);
    read(p, "key_bits", "plan", c.plan.key_bits);
    read(p, "value_bits", "plan", c.plan.value_bits);
    read(p, "budget", "plan", c.plan.budget);
  }
  return c;
}

ExperimentConfig load_config(const std::string& path, ExperimentConfig base) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open config " + path);
  return parse_config(is, std::move(base));
}

std::string config_json(const ExperimentConfig& c) {
  nlohmann::ordered_json j;
  const SimConfig& s = c.sim;
  j["sim"] = {{"p", s.p},
              {"k", s.k},
              {"entries", s.entries},
              {"slots", s.slots},
              {"key_bits", s.key_bits},
              {"value_bits", s.value_bits},
              {"latencies",
               {{"hash", s.latencies.hash},
                {"read", s.latencies.read},
                {"xor_tree", s.latencies.xor_tree},
                {"resolve", s.latencies.resolve}}},
              {"clock_mhz", s.clock_mhz},
              {"seed", s.seed},
              {"overflow", s.overflow == OverflowMode::Defer ? "defer" : "reject"}};
  const WorkloadSpec& w = c.workload;
  j["workload"] = {{"total_queries", w.total_queries},
                   {"nsq_fraction", w.nsq_fraction},
                   {"op_mix", {{"insert", w.mix.insert}, {"update", w.mix.update}, {"delete", w.mix.remove}}},
                   {"key_space_bits", w.key_space_bits},
                   {"distribution", w.distribution == Distribution::Uniform ? "uniform" : "same_bucket"},
                   {"target_bucket", w.target_bucket},
                   {"seed", w.seed},
                   {"hit_probability", w.hit_probability},
                   {"search_hit_probability", w.search_hit_probability}};
  j["trace"] = c.trace;
  j["output"] = {{"dir", c.output_dir}, {"per_query", c.per_query}};
  j["trials"] = c.trials;
  j["theta"] = c.theta;
  j["jobs"] = c.jobs;
  j["sweep"] = {{"p", c.sweep.p},
                {"k", c.sweep.k},
                {"slots", c.sweep.slots},
                {"key_bits", c.sweep.key_bits},
                {"value_bits", c.sweep.value_bits}};
  j["plan"] = {{"device", c.device},
               {"p", c.plan.p},
               {"k", c.plan.k},
               {"entries", c.plan.entries},
               {"slots", c.plan.slots},
               {"key_bits", c.plan.key_bits},
               {"value_bits", c.plan.value_bits},
               {"budget", c.plan.budget}};
  return j.dump(2) + "\n";
}

}  // namespace xorht
