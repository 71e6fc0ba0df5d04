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

// xorht: simulate, sweep, verify, plan, gen-trace.
//
// Exit status: 0 success, 1 a requested check failed, 2 bad usage or
// configuration, 3 I/O or runtime failure.

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "xorht/config.hpp"
#include "xorht/consistency.hpp"
#include "xorht/engine.hpp"
#include "xorht/parallel.hpp"
#include "xorht/report.hpp"
#include "xorht/resource.hpp"
#include "xorht/workload.hpp"

namespace fs = std::filesystem;
using namespace xorht;

namespace {

constexpr int kExitCheckFailed = 1;
constexpr int kExitUsage = 2;
constexpr int kExitRuntime = 3;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Common {
  std::string config_path;
  std::string preset;
  std::optional<std::uint64_t> seed;
  std::optional<unsigned> jobs;
  std::string output;
  std::string format = "csv";
  bool quiet = false;
};

void log(const Common& c, const std::string& msg) {
  if (!c.quiet) std::cerr << "xorht: " << msg << '\n';
}

ExperimentConfig resolve(const Common& c) {
  ExperimentConfig cfg;
  try {
    if (!c.preset.empty()) cfg = preset(c.preset);
    if (!c.config_path.empty()) {
      if (!fs::exists(c.config_path)) throw std::runtime_error("config file not found: " + c.config_path);
      cfg = load_config(c.config_path, cfg);
    }
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  if (c.seed) {
    cfg.sim.seed = *c.seed;
    cfg.workload.seed = *c.seed;
  }
  if (c.jobs) cfg.jobs = *c.jobs;
  if (!c.output.empty()) cfg.output_dir = c.output;
  return cfg;
}

void validate(const ExperimentConfig& cfg) {
  try {
    cfg.validate();
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
}

std::ofstream open_out(const fs::path& path) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot write " + path.string());
  return os;
}

std::vector<Query> load_or_generate(const ExperimentConfig& cfg, const Common& c) {
  if (!cfg.trace.empty()) {
    log(c, "reading trace " + cfg.trace);
    return trace_read(cfg.trace);
  }
  log(c, "generating " + std::to_string(cfg.workload.total_queries) + " queries");
  return generate(cfg.workload, cfg.sim);
}

int cmd_simulate(const Common& c, const std::string& trace_flag, std::optional<std::uint64_t> queries,
                 bool per_query) {
  ExperimentConfig cfg = resolve(c);
  if (!trace_flag.empty()) cfg.trace = trace_flag;
  if (queries) cfg.workload.total_queries = *queries;
  if (per_query) cfg.per_query = true;
  validate(cfg);

  const std::vector<Query> trace = load_or_generate(cfg, c);
  const RunResult r = run(cfg.sim, trace);
  const fs::path dir(cfg.output_dir);
  {
    std::ofstream os = open_out(dir / "report.json");
    os << report_json(r.report);
  }
  {
    std::ofstream os = open_out(dir / "report.csv");
    write_report_csv(os, r.report);
  }
  if (cfg.per_query) {
    std::ofstream os = open_out(dir / "results.csv");
    write_results_csv(os, r.results, cfg.sim.key_bits);
  }
  if (c.format == "json-tree") {
    std::cout << report_json(r.report);
  } else {
    write_report_csv(std::cout, r.report);
  }
  std::ostringstream msg;
  msg << r.report.completed << " queries in " << r.report.total_cycles << " cycles, steady "
      << r.report.mops_steady << " MOPS; reports in " << dir.string();
  log(c, msg.str());
  return r.report.discipline_violations == 0 ? 0 : kExitCheckFailed;
}

struct SweepRow {
  SimConfig sim;
  std::string status = "ok";
  SimReport report;
};

int cmd_sweep(const Common& c) {
  ExperimentConfig cfg = resolve(c);
  validate(cfg);
  const SweepRanges& s = cfg.sweep;
  const std::vector<unsigned> slots = s.slots.empty() ? std::vector<unsigned>{cfg.sim.slots} : s.slots;
  const std::vector<unsigned> kbs = s.key_bits.empty() ? std::vector<unsigned>{cfg.sim.key_bits} : s.key_bits;
  const std::vector<unsigned> vbs =
      s.value_bits.empty() ? std::vector<unsigned>{cfg.sim.value_bits} : s.value_bits;

  std::vector<SweepRow> rows;
  for (unsigned p : s.p) {
    const std::vector<unsigned> ks = s.k.empty() ? std::vector<unsigned>{p} : s.k;
    for (unsigned k : ks) {
      for (unsigned sl : slots) {
        for (unsigned kb : kbs) {
          for (unsigned vb : vbs) {
            SweepRow row;
            row.sim = cfg.sim;
            row.sim.p = p;
            row.sim.k = k;
            row.sim.slots = sl;
            row.sim.key_bits = kb;
            row.sim.value_bits = vb;
            rows.push_back(row);
          }
        }
      }
    }
  }
  log(c, "sweeping " + std::to_string(rows.size()) + " grid points");
  parallel_for(rows.size(), cfg.jobs, [&](std::size_t i) {
    SweepRow& row = rows[i];
    try {
      WorkloadSpec w = cfg.workload;
      w.nsq_fraction = std::min(w.nsq_fraction, row.sim.nsq_ratio());
      w.key_space_bits = std::min(w.key_space_bits, row.sim.key_bits);
      row.sim.validate();
      const std::vector<Query> trace = generate(w, row.sim);
      row.report = run(row.sim, trace).report;
    } catch (const std::exception& e) {
      row.status = e.what();
      std::replace(row.status.begin(), row.status.end(), ',', ';');
    }
  });

  std::ostringstream csv;
  csv << "p,k,ratio,slots,key_bits,value_bits,clock_mhz,queries,completed,total_cycles,mops_steady,mops_raw,"
         "deferred_cycles,status\n";
  nlohmann::ordered_json tree = nlohmann::ordered_json::array();
  bool all_ok = true;
  for (const SweepRow& r : rows) {
    all_ok = all_ok && r.status == "ok";
    csv << r.sim.p << ',' << r.sim.k << ',' << r.sim.nsq_ratio() << ',' << r.sim.slots << ',' << r.sim.key_bits
        << ',' << r.sim.value_bits << ',' << r.sim.clock_mhz << ',' << r.report.queries << ','
        << r.report.completed << ',' << r.report.total_cycles << ',' << r.report.mops_steady << ','
        << r.report.mops_raw << ',' << r.report.deferred_cycles << ',' << r.status << '\n';
    tree.push_back({{"p", r.sim.p},
                    {"k", r.sim.k},
                    {"ratio", r.sim.nsq_ratio()},
                    {"slots", r.sim.slots},
                    {"key_bits", r.sim.key_bits},
                    {"value_bits", r.sim.value_bits},
                    {"clock_mhz", r.sim.clock_mhz},
                    {"queries", r.report.queries},
                    {"completed", r.report.completed},
                    {"total_cycles", r.report.total_cycles},
                    {"mops_steady", r.report.mops_steady},
                    {"mops_raw", r.report.mops_raw},
                    {"deferred_cycles", r.report.deferred_cycles},
                    {"status", r.status}});
  }
  {
    std::ofstream os = open_out(fs::path(cfg.output_dir) / "sweep.csv");
    os << csv.str();
  }
  std::cout << (c.format == "json-tree" ? tree.dump(2) + "\n" : csv.str());
  return all_ok ? 0 : kExitCheckFailed;
}

int cmd_verify(const Common& c, std::optional<std::size_t> trials, const std::vector<double>& theta,
               bool inject_fault) {
  ExperimentConfig cfg = resolve(c);
  if (trials) cfg.trials = *trials;
  if (!theta.empty()) cfg.theta = theta;
  validate(cfg);
  std::optional<FaultPlan> fault;
  if (inject_fault) {
    fault = FaultPlan{0, 0, 0};
    log(c, "fault injection: flipping bit 0 of the first mutation's last ring write");
  }
  log(c, "running " + std::to_string(cfg.trials) + " trials on " + std::to_string(cfg.jobs) + " thread(s)");
  const BoundTable table = check_bound(cfg.sim, cfg.workload, cfg.trials, cfg.theta, cfg.jobs, fault);

  const fs::path dir(cfg.output_dir);
  {
    std::ofstream os = open_out(dir / "trials.csv");
    write_trials_csv(os, table.trials);
  }
  {
    std::ofstream os = open_out(dir / "bound.csv");
    write_bound_csv(os, table.rows);
  }
  if (c.format == "json-tree") {
    nlohmann::ordered_json j;
    std::uint64_t unexplained = 0;
    for (const TrialRecord& t : table.trials) unexplained += t.unexplained;
    j["trials"] = table.trials.size();
    j["unexplained"] = unexplained;
    j["ok"] = table.ok();
    j["bound"] = nlohmann::ordered_json::array();
    for (const BoundRow& r : table.rows) {
      j["bound"].push_back({{"theta", r.theta}, {"empirical", r.empirical}, {"bound", r.bound}, {"ok", r.ok}});
    }
    std::cout << j.dump(2) << '\n';
  } else {
    write_bound_csv(std::cout, table.rows);
  }
  for (const TrialRecord& t : table.trials) {
    if (t.unexplained != 0 || !t.converged) {
      log(c, "trial " + std::to_string(t.trial) + ": " + std::to_string(t.unexplained) +
                 " unexplained deviation(s)" + (t.converged ? "" : ", replicas differ after drain"));
      break;
    }
  }
  log(c, table.ok() ? "consistency check passed" : "consistency check FAILED");
  return table.ok() ? 0 : kExitCheckFailed;
}

int cmd_plan(const Common& c, const std::string& device_flag) {
  ExperimentConfig cfg = resolve(c);
  if (!device_flag.empty()) cfg.device = device_flag;
  validate(cfg);
  DeviceProfile device;
  try {
    device = fs::exists(cfg.device) ? load_profile_file(cfg.device) : builtin_profile(cfg.device);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  const bool grid_given = !cfg.plan.p.empty();
  std::vector<PlanRow> rows;
  if (grid_given) {
    PlanGrid g = cfg.plan;
    if (g.k.empty()) g.k = g.p;
    if (g.entries.empty()) g.entries = {cfg.sim.entries};
    if (g.slots.empty()) g.slots = {cfg.sim.slots};
    if (g.key_bits.empty()) g.key_bits = {cfg.sim.key_bits};
    if (g.value_bits.empty()) g.value_bits = {cfg.sim.value_bits};
    rows = plan(device, g);
  } else {
    log(c, "no plan grid given; running the 50000-entry memory sweep");
    rows = memory_sweep(device);
  }
  std::ostringstream csv;
  write_plan_csv(csv, rows);
  {
    std::ofstream os = open_out(fs::path(cfg.output_dir) / "plan.csv");
    os << csv.str();
  }
  if (c.format == "json-tree") {
    nlohmann::ordered_json j = nlohmann::ordered_json::array();
    for (const PlanRow& r : rows) {
      j.push_back({{"p", r.geom.p},
                   {"k", r.geom.k},
                   {"entries", r.geom.entries},
                   {"slots", r.geom.slots},
                   {"key_bits", r.geom.key_bits},
                   {"value_bits", r.geom.value_bits},
                   {"bytes", r.bytes},
                   {"blocks", r.blocks.total},
                   {"utilization", r.blocks.utilization},
                   {"feasible", r.blocks.feasible},
                   {"max_entries", r.max_entries}});
    }
    std::cout << j.dump(2) << '\n';
  } else {
    std::cout << csv.str();
  }
  const auto infeasible = std::count_if(rows.begin(), rows.end(), [](const PlanRow& r) { return !r.blocks.feasible; });
  if (infeasible > 0) log(c, std::to_string(infeasible) + " grid point(s) exceed the device");
  return 0;
}

int cmd_gen_trace(const Common& c, const std::string& out, std::optional<std::uint64_t> queries) {
  ExperimentConfig cfg = resolve(c);
  if (queries) cfg.workload.total_queries = *queries;
  validate(cfg);
  const std::vector<Query> trace = generate(cfg.workload, cfg.sim);
  if (out.empty() || out == "-") {
    write_trace(std::cout, trace, cfg.sim.key_bits, cfg.sim.value_bits);
  } else {
    trace_write(out, trace, cfg.sim.key_bits, cfg.sim.value_bits);
    log(c, "wrote " + std::to_string(trace.size()) + " queries to " + out);
  }
  return 0;
}

void add_common(CLI::App* sub, Common& c) {
  sub->add_option("--config", c.config_path, "JSON experiment config");
  sub->add_option("--preset", c.preset, "Start from a preset (xilinx16, stratix8)");
  sub->add_option("--seed", c.seed, "Seed for the hash matrix and the workload");
  sub->add_option("--jobs", c.jobs, "Concurrent simulations")->check(CLI::PositiveNumber);
  sub->add_option("--output", c.output, "Output directory");
  sub->add_option("--format", c.format, "Stdout format")->check(CLI::IsMember({"csv", "json-tree"}));
  sub->add_flag("-q,--quiet", c.quiet, "No diagnostics on stderr");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Cycle-level simulator for a replicated XOR-banked parallel hash table"};
  app.require_subcommand(1);
  Common common;

  auto* simulate = app.add_subcommand("simulate", "Run one simulation and write reports");
  std::string trace_path;
  std::optional<std::uint64_t> sim_queries;
  bool per_query = false;
  add_common(simulate, common);
  simulate->add_option("--trace", trace_path, "Trace file (.gz accepted); default generates one");
  simulate->add_option("--queries", sim_queries, "Generated trace length");
  simulate->add_flag("--per-query", per_query, "Also write results.csv");

  auto* sweep = app.add_subcommand("sweep", "One simulation per grid point of the sweep ranges");
  add_common(sweep, common);

  auto* verify = app.add_subcommand("verify", "Relaxed-consistency check against the sequential oracle");
  std::optional<std::size_t> trials;
  std::vector<double> theta;
  bool inject_fault = false;
  add_common(verify, common);
  verify->add_option("--trials", trials, "Number of seeded trials");
  verify->add_option("--theta", theta, "Error thresholds for the tail bound");
  verify->add_flag("--inject-fault", inject_fault, "Corrupt one ring write (negative control)");

  auto* plan_cmd = app.add_subcommand("plan", "SRAM capacity planning");
  std::string device;
  add_common(plan_cmd, common);
  plan_cmd->add_option("--device", device, "Built-in profile name or profile JSON file");

  auto* gen = app.add_subcommand("gen-trace", "Write a generated trace");
  std::string gen_out;
  std::optional<std::uint64_t> gen_queries;
  add_common(gen, common);
  gen->add_option("--out", gen_out, "Trace path ('-' or empty for stdout; .gz compresses)");
  gen->add_option("--queries", gen_queries, "Trace length");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitUsage;
  }

  try {
    if (*simulate) return cmd_simulate(common, trace_path, sim_queries, per_query);
    if (*sweep) return cmd_sweep(common);
    if (*verify) return cmd_verify(common, trials, theta, inject_fault);
    if (*plan_cmd) return cmd_plan(common, device);
    if (*gen) return cmd_gen_trace(common, gen_out, gen_queries);
  } catch (const UsageError& e) {
    std::cerr << "xorht: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "xorht: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "xorht: " << e.what() << '\n';
    return kExitRuntime;
  }
  return kExitUsage;
}
