#include "locsim/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <set>
#include <sstream>
#include <thread>

#include <fmt/format.h>
#include <json.hpp>

#include "locsim/cost_model.hpp"
#include "locsim/error.hpp"
#include "locsim/placement.hpp"
#include "locsim/workload.hpp"

namespace locsim {

namespace {

std::string num(double v) { return fmt::format("{:.9g}", v); }

// Round-trips through the 9-significant-digit rendering so JSON output is
// stable across platforms.
double rounded(double v) { return std::stod(num(v)); }

double rel_delta(double actual, double expected) {
  if (expected == 0.0) return actual == 0.0 ? 0.0 : std::abs(actual);
  return std::abs(actual - expected) / std::abs(expected);
}

std::vector<WorkflowLine> generated_workflow(std::size_t transfers, std::size_t vm_count) {
  std::vector<WorkflowLine> lines;
  lines.reserve(transfers);
  for (std::size_t i = 0; i < transfers; ++i) lines.push_back(WorkflowLine{i, i, i % vm_count, i + 1});
  return lines;
}

}  // namespace

SimulationReport run_experiment(const ScenarioConfig& cfg, const ExperimentInputs& inputs) {
  cfg.validate();
  const Topology topology = build_topology(cfg.topology_spec());
  VmRegistry vms(topology, provision_vms(topology, cfg.vm_spec(topology)));
  const FileSize chunk(cfg.chunk_size_mb);

  const auto lines = inputs.workflow_text ? parse_workflow(*inputs.workflow_text)
                                          : generated_workflow(cfg.transfers, cfg.vm_spec(topology).count);
  if (lines.empty()) throw Error(ErrorCode::ConfigError, "workflow: no transfers");

  SimulationReport report;
  report.config = cfg;

  NameNodeTable table(topology);
  if (inputs.placement_text) {
    table = parse_placement_csv(topology, *inputs.placement_text);
  } else {
    std::vector<Consumer> consumers;
    std::set<FileId> seen;
    for (const auto& line : lines) {
      if (seen.insert(line.file_id).second) consumers.push_back(Consumer{line.file_id, vms.at(line.vm_id).host});
    }
    Placement placement = place_for_mix_detailed(topology, consumers, cfg.mix, cfg.seed);
    report.apportioned = placement.counts;
    table = std::move(placement.table);
  }
  report.placement_csv = format_placement_csv(table);

  std::vector<ApplicationCloudlet> apps;
  apps.reserve(lines.size());
  for (const auto& line : lines) apps.push_back(build_default_app(line, table, vms, chunk, cfg.execute_work_s));

  SimulationOutcome outcome = simulate(topology, vms, apps, cfg.contention, inputs.trace);
  report.records = std::move(outcome.records);
  report.final_time = outcome.final_time;
  report.events = outcome.events;
  report.trace = std::move(outcome.trace);
  if (inputs.trace) report.trace_hash = trace_hash(report.trace);

  const ElementCosts elem = uniform_element_costs(chunk, {cfg.bandwidth, cfg.delay}, cfg.host_self(), cfg.switch_delay());
  for (auto c : kAllLocalityClasses) {
    report.classes[index_of(c)].expected_cost = closed_form_cost(c, elem.host, elem.sw, elem.channel);
  }

  for (const auto& r : report.records) {
    ClassSummary& cs = report.classes[index_of(r.locality)];
    ++cs.count;
    cs.total_cost += r.cost;
    const double analytical = path_cost(build_path(topology, r.src_host, r.dst_host), chunk).total;
    cs.max_path_delta = std::max(cs.max_path_delta, rel_delta(r.cost, analytical));
    report.total_cost += r.cost;
  }
  for (auto& cs : report.classes) {
    if (cs.count == 0) continue;
    cs.mean_cost = cs.total_cost / static_cast<double>(cs.count);
    cs.percentage = report.total_cost > 0.0 ? cs.total_cost / report.total_cost * 100.0 : 0.0;
    cs.closed_form_delta = rel_delta(cs.mean_cost, cs.expected_cost);
    report.max_oracle_delta = std::max({report.max_oracle_delta, cs.max_path_delta, cs.closed_form_delta});
  }
  report.oracle_checked = cfg.contention == ContentionMode::None;
  report.reconciled = !report.oracle_checked || report.max_oracle_delta <= kOracleTolerance;
  return report;
}

std::string format_transfers_csv(const SimulationReport& r) {
  std::string out = "app_id,file_id,src_host,dst_host,class,start_s,end_s,cost_s\n";
  for (const auto& t : r.records) {
    out += fmt::format("{},{},{},{},{},{},{},{}\n", t.app_id, t.file_id, t.src_host.value, t.dst_host.value,
                       to_string(t.locality), num(t.start), num(t.end), num(t.cost));
  }
  return out;
}

std::string format_summary_json(const SimulationReport& r) {
  using nlohmann::ordered_json;
  ordered_json out;
  out["scenario"] = ordered_json::parse(scenario_to_json(r.config, -1));
  out["seed"] = r.config.seed;
  out["transfers"] = r.records.size();
  out["total_cost_s"] = rounded(r.total_cost);
  out["final_time_s"] = rounded(r.final_time);
  out["events"] = r.events;
  ordered_json classes;
  for (auto c : kAllLocalityClasses) {
    const ClassSummary& cs = r.classes[index_of(c)];
    ordered_json j;
    j["count"] = cs.count;
    if (r.apportioned) j["apportioned"] = (*r.apportioned)[index_of(c)];
    j["total_cost_s"] = rounded(cs.total_cost);
    j["mean_cost_s"] = rounded(cs.mean_cost);
    j["percentage"] = rounded(cs.percentage);
    j["expected_cost_s"] = rounded(cs.expected_cost);
    j["closed_form_rel_delta"] = rounded(cs.closed_form_delta);
    j["max_path_rel_delta"] = rounded(cs.max_path_delta);
    classes[std::string(to_string(c))] = j;
  }
  out["classes"] = classes;
  ordered_json oracle;
  oracle["checked"] = r.oracle_checked;
  oracle["tolerance"] = kOracleTolerance;
  oracle["max_rel_delta"] = rounded(r.max_oracle_delta);
  oracle["reconciled"] = r.reconciled;
  out["oracle"] = oracle;
  if (!r.trace.empty()) out["trace_hash"] = fmt::format("{:016x}", r.trace_hash);
  return out.dump(2) + "\n";
}

std::string format_summary_text(const SimulationReport& r) {
  std::string out;
  out += fmt::format("transfers: {}   seed: {}   contention: {}\n", r.records.size(), r.config.seed,
                     to_string(r.config.contention));
  out += fmt::format("{:<10} {:>8} {:>14} {:>12} {:>12} {:>12}\n", "class", "count", "total_s", "mean_s", "expected_s",
                     "share_%");
  for (auto c : kAllLocalityClasses) {
    const ClassSummary& cs = r.classes[index_of(c)];
    out += fmt::format("{:<10} {:>8} {:>14} {:>12} {:>12} {:>12}\n", to_string(c), cs.count, num(cs.total_cost),
                       num(cs.mean_cost), num(cs.expected_cost), num(cs.percentage));
  }
  out += fmt::format("total cost: {} s   simulated makespan: {} s   events: {}\n", num(r.total_cost), num(r.final_time),
                     r.events);
  if (r.oracle_checked) {
    out += fmt::format("oracle: max relative delta {} ({})\n", num(r.max_oracle_delta),
                       r.reconciled ? "reconciled" : "MISMATCH");
  } else {
    out += "oracle: not enforced under fair_share contention\n";
  }
  return out;
}

void emit_report(const SimulationReport& r, const std::filesystem::path& out_dir) {
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw Error(ErrorCode::IoError, "cannot create " + out_dir.string() + ": " + ec.message());
  write_text_file(out_dir / "transfers.csv", format_transfers_csv(r));
  write_text_file(out_dir / "summary.json", format_summary_json(r));
  write_text_file(out_dir / "summary.txt", format_summary_text(r));
  write_text_file(out_dir / "placement.csv", r.placement_csv);
  if (!r.trace.empty()) {
    std::string trace = "time\tseq\ttarget\tkind\tdetail\n";
    for (const auto& line : r.trace) (trace += line) += '\n';
    write_text_file(out_dir / "trace.tsv", trace);
  }
}

std::vector<LocalityMix> parse_mix_grid(std::string_view spec) {
  const auto bad = [&](const std::string& why) -> Error {
    return Error(ErrorCode::ConfigError, "mix-grid: " + why + " in '" + std::string(spec) + "'");
  };
  std::vector<LocalityMix> grid;
  if (spec.starts_with("step=")) {
    double step = 0.0;
    try {
      step = std::stod(std::string(spec.substr(5)));
    } catch (const std::exception&) {
      throw bad("step is not a number");
    }
    if (!(step > 0.0 && step <= 1.0)) throw bad("step must be in (0, 1]");
    const auto n = static_cast<std::size_t>(std::llround(1.0 / step));
    if (std::abs(static_cast<double>(n) * step - 1.0) > 1e-9) throw bad("1/step must be an integer");
    const double dn = static_cast<double>(n);
    for (std::size_t i = 0; i <= n; ++i) {
      for (std::size_t j = 0; i + j <= n; ++j) {
        for (std::size_t k = 0; i + j + k <= n; ++k) {
          const std::size_t l = n - i - j - k;
          grid.push_back(LocalityMix::of(i / dn, j / dn, k / dn, l / dn));
        }
      }
    }
    return grid;
  }
  std::size_t start = 0;
  while (start <= spec.size()) {
    const auto semi = spec.find(';', start);
    const std::string item(spec.substr(start, semi == std::string_view::npos ? std::string_view::npos : semi - start));
    start = semi == std::string_view::npos ? spec.size() + 1 : semi + 1;
    if (item.find_first_not_of(" \t") == std::string::npos) continue;
    std::array<double, kLocalityClassCount> f{};
    std::istringstream in(item);
    for (std::size_t c = 0; c < kLocalityClassCount; ++c) {
      if (!(in >> f[c])) throw bad("expected four comma-separated fractions");
      char comma = 0;
      if (c + 1 < kLocalityClassCount && !(in >> comma && comma == ',')) throw bad("expected four comma-separated fractions");
    }
    std::string rest;
    if (in >> rest) throw bad("trailing text '" + rest + "'");
    try {
      grid.push_back(LocalityMix::of(f[0], f[1], f[2], f[3]));
    } catch (const Error& e) {
      throw bad(e.what());
    }
  }
  if (grid.empty()) throw bad("no mixes");
  return grid;
}

std::vector<SweepPoint> run_sweep(const ScenarioConfig& base, const std::vector<LocalityMix>& grid,
                                  const std::filesystem::path& out_dir, unsigned max_threads) {
  if (max_threads == 0) max_threads = std::max(1u, std::thread::hardware_concurrency());
  std::vector<SweepPoint> points(grid.size());

  auto run_one = [&](std::size_t i) {
    SweepPoint& p = points[i];
    p.mix = grid[i];
    try {
      ScenarioConfig cfg = base;
      cfg.mix = grid[i];
      p.report = run_experiment(cfg);
      emit_report(*p.report, out_dir / fmt::format("run_{:03}", i));
    } catch (const Error& e) {
      p.error = e.what();
    }
  };

  for (std::size_t begin = 0; begin < grid.size(); begin += max_threads) {
    std::vector<std::future<void>> batch;
    for (std::size_t i = begin; i < std::min(grid.size(), begin + max_threads); ++i) {
      batch.push_back(std::async(std::launch::async, run_one, i));
    }
    for (auto& f : batch) f.get();
  }

  std::string csv = "run,node_frac,rack_frac,aggregate_frac,root_frac,node_pct,rack_pct,aggregate_pct,root_pct,total_cost_s,status\n";
  for (std::size_t i = 0; i < points.size(); ++i) {
    const auto& p = points[i];
    csv += fmt::format("{:03}", i);
    for (double f : p.mix.fractions) csv += "," + num(f);
    if (p.report) {
      for (const auto& cs : p.report->classes) csv += "," + num(cs.percentage);
      csv += "," + num(p.report->total_cost);
      csv += p.report->reconciled ? ",ok\n" : ",oracle_mismatch\n";
    } else {
      std::string msg = p.error;
      std::replace(msg.begin(), msg.end(), '"', '\'');
      csv += ",,,,,,\"" + msg + "\"\n";
    }
  }
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw Error(ErrorCode::IoError, "cannot create " + out_dir.string() + ": " + ec.message());
  write_text_file(out_dir / "sweep.csv", csv);
  return points;
}

}  // namespace locsim
