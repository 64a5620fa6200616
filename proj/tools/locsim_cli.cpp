#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "locsim/cost_model.hpp"
#include "locsim/error.hpp"
#include "locsim/experiment.hpp"
#include "locsim/scenario.hpp"
#include "locsim/topology.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitOracle = 2;
constexpr int kExitIo = 3;

int exit_code_for(locsim::ErrorCode code) {
  switch (code) {
    case locsim::ErrorCode::OracleMismatch: return kExitOracle;
    case locsim::ErrorCode::IoError: return kExitIo;
    default: return kExitConfig;
  }
}

int cmd_run(const std::string& scenario, const std::optional<std::string>& workflow,
            const std::optional<std::string>& placement, const std::string& out, bool trace) {
  const auto cfg = locsim::load_scenario(scenario);
  locsim::ExperimentInputs inputs;
  if (workflow) inputs.workflow_text = locsim::read_text_file(*workflow);
  if (placement) inputs.placement_text = locsim::read_text_file(*placement);
  inputs.trace = trace;
  const auto report = locsim::run_experiment(cfg, inputs);
  locsim::emit_report(report, out);
  std::cout << locsim::format_summary_text(report);
  if (!report.reconciled) {
    std::cerr << fmt::format("error: simulated costs diverge from the analytical model (max relative delta {:.9g})\n",
                             report.max_oracle_delta);
    return kExitOracle;
  }
  return kExitOk;
}

int cmd_oracle(const std::string& class_name, double chunk_mb, double bw, double delay) {
  const auto cls = locsim::parse_locality_class(class_name);
  if (!cls) throw locsim::Error(locsim::ErrorCode::ConfigError, "--class must be node, rack, aggregate or root");
  if (!(bw > 0.0)) throw locsim::Error(locsim::ErrorCode::ConfigError, "--bw must be > 0");
  if (!(delay >= 0.0)) throw locsim::Error(locsim::ErrorCode::ConfigError, "--delay must be >= 0");
  const locsim::LinkParams link{bw, delay};
  const auto elem = locsim::uniform_element_costs(locsim::FileSize(chunk_mb), link, link, delay);
  const double cost = locsim::closed_form_cost(*cls, elem.host, elem.sw, elem.channel);
  std::cout << fmt::format("class={} path_moves={} host_s={:.9g} switch_s={:.9g} channel_s={:.9g} cost_s={:.9g}\n",
                           locsim::to_string(*cls), locsim::path_length(*cls), elem.host, elem.sw, elem.channel, cost);
  return kExitOk;
}

int cmd_validate(const std::string& scenario) {
  const auto cfg = locsim::load_scenario(scenario);
  const auto topology = locsim::build_topology(cfg.topology_spec());
  const auto counts = locsim::apportion(cfg.mix, cfg.transfers);
  std::cout << fmt::format("ok: {} nodes ({} aggregate, {} edge, {} hosts), {} transfers, mix counts {}/{}/{}/{}\n",
                           topology.node_count(), topology.aggregate_switches().size(),
                           topology.edge_switches().size(), topology.hosts().size(), cfg.transfers, counts[0],
                           counts[1], counts[2], counts[3]);
  return kExitOk;
}

int cmd_sweep(const std::string& scenario, const std::string& grid_spec, const std::string& out) {
  const auto cfg = locsim::load_scenario(scenario);
  const auto grid = locsim::parse_mix_grid(grid_spec);
  const auto points = locsim::run_sweep(cfg, grid, out);
  int rc = kExitOk;
  for (std::size_t i = 0; i < points.size(); ++i) {
    const auto& p = points[i];
    if (!p.report) {
      std::cerr << fmt::format("run_{:03}: {}\n", i, p.error);
      rc = std::max(rc, kExitConfig);
    } else if (!p.report->reconciled) {
      std::cerr << fmt::format("run_{:03}: oracle mismatch\n", i);
      rc = kExitOracle;
    }
  }
  std::cout << fmt::format("{} runs written to {}\n", points.size(), out);
  return rc;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Data-locality simulator for three-tier data-center networks"};
  app.require_subcommand(1);

  std::string scenario;
  std::string out;
  std::optional<std::string> workflow;
  std::optional<std::string> placement;
  bool trace = false;
  auto* run = app.add_subcommand("run", "Simulate one scenario and write reports");
  run->add_option("--scenario", scenario, "Scenario JSON file")->required();
  run->add_option("--workflow", workflow, "Workflow file (app_id,file_id,vm_id per line)");
  run->add_option("--placement", placement, "Placement CSV (file_id,file_host); bypasses mix placement");
  run->add_option("--out", out, "Output directory")->required();
  run->add_flag("--trace", trace, "Write trace.tsv with one line per processed event");

  std::string class_name;
  double chunk_mb = 64.0;
  double bw = 100.0;
  double delay = 0.0;
  auto* oracle = app.add_subcommand("oracle", "Closed-form cost of one transfer");
  oracle->add_option("--class", class_name, "node | rack | aggregate | root")->required();
  oracle->add_option("--chunk-mb", chunk_mb, "Chunk size in MB")->required();
  oracle->add_option("--bw", bw, "Bandwidth in MB/s")->required();
  oracle->add_option("--delay", delay, "Per-move delay in seconds");

  auto* validate = app.add_subcommand("validate", "Check a scenario file");
  validate->add_option("--scenario", scenario, "Scenario JSON file")->required();

  std::string grid;
  auto* sweep = app.add_subcommand("sweep", "Run a scenario over a grid of locality mixes");
  sweep->add_option("--scenario", scenario, "Scenario JSON file")->required();
  sweep->add_option("--mix-grid", grid, "step=<s> or n,r,a,o;n,r,a,o;...")->required();
  sweep->add_option("--out", out, "Output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (*run) return cmd_run(scenario, workflow, placement, out, trace);
    if (*oracle) return cmd_oracle(class_name, chunk_mb, bw, delay);
    if (*validate) return cmd_validate(scenario);
    if (*sweep) return cmd_sweep(scenario, grid, out);
  } catch (const locsim::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfig;
  }
  return kExitOk;
}
