#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "locsim/scenario.hpp"
#include "locsim/simulator.hpp"

namespace locsim {

// Relative tolerance for simulated-vs-analytical agreement.
inline constexpr double kOracleTolerance = 1e-9;

struct ClassSummary {
  std::size_t count = 0;
  double total_cost = 0.0;
  double mean_cost = 0.0;
  double percentage = 0.0;  // of the grand total cost
  // Closed-form expectation for one transfer of this class.
  double expected_cost = 0.0;
  // |mean - expected| / expected; 0 for empty classes.
  double closed_form_delta = 0.0;
  // max over records of |cost - move-by-move path cost| / path cost.
  double max_path_delta = 0.0;
};

struct SimulationReport {
  ScenarioConfig config;
  std::vector<TransferRecord> records;
  std::array<ClassSummary, kLocalityClassCount> classes{};
  double total_cost = 0.0;
  double final_time = 0.0;
  std::size_t events = 0;
  // Per-class counts requested by placement; empty when a placement file was used.
  std::optional<std::array<std::size_t, kLocalityClassCount>> apportioned;
  std::string placement_csv;
  // Reconciliation is only enforced for ContentionMode::None.
  bool oracle_checked = false;
  bool reconciled = true;
  double max_oracle_delta = 0.0;
  std::vector<std::string> trace;
  std::uint64_t trace_hash = 0;
};

struct ExperimentInputs {
  std::optional<std::string> workflow_text;
  std::optional<std::string> placement_text;
  bool trace = false;
};

// Builds topology, VMs, workload and placement from `cfg`, simulates, and
// reconciles each transfer against the analytical path cost.
SimulationReport run_experiment(const ScenarioConfig& cfg, const ExperimentInputs& inputs = {});

// transfers.csv, summary.json, summary.txt, placement.csv, and trace.tsv when traced.
void emit_report(const SimulationReport& r, const std::filesystem::path& out_dir);

std::string format_transfers_csv(const SimulationReport& r);
std::string format_summary_json(const SimulationReport& r);
std::string format_summary_text(const SimulationReport& r);

// `step=<s>` or `n,r,a,o;n,r,a,o;...`.
std::vector<LocalityMix> parse_mix_grid(std::string_view spec);

struct SweepPoint {
  LocalityMix mix;
  std::optional<SimulationReport> report;
  std::string error;
};

// Independent runs, executed concurrently; each result written under out_dir/run_NNN.
std::vector<SweepPoint> run_sweep(const ScenarioConfig& base, const std::vector<LocalityMix>& grid,
                                  const std::filesystem::path& out_dir, unsigned max_threads = 0);

}  // namespace locsim
