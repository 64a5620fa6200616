#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "locsim/placement.hpp"
#include "locsim/simulator.hpp"
#include "locsim/topology.hpp"
#include "locsim/vm.hpp"

namespace locsim {

// Everything one experiment needs. Loaded from JSON; see README for the schema.
struct ScenarioConfig {
  std::vector<std::size_t> edge_fanout;  // per aggregate
  std::vector<std::size_t> host_fanout;  // per edge switch
  PortLimits port_limits;

  double bandwidth = 100.0;  // MB/s, every parent link
  double delay = 0.0;        // s, every parent link
  // Self-move parameters; unset means "same as the link".
  std::optional<double> host_self_bandwidth;
  std::optional<double> host_self_delay;
  std::optional<double> switch_self_delay;

  double chunk_size_mb = 64.0;
  std::size_t transfers = 1;
  LocalityMix mix;
  // count == 0 means one VM per host.
  VmSpec vms{0, 1024.0, 1};
  std::uint64_t seed = 1;
  ContentionMode contention = ContentionMode::None;
  double execute_work_s = 0.0;

  static ScenarioConfig uniform(std::size_t aggregates, std::size_t edges_per_aggregate, std::size_t hosts_per_edge,
                                double bandwidth, double chunk_size_mb, std::size_t transfers, LocalityMix mix,
                                std::uint64_t seed = 1);

  // Throws ConfigError naming the offending field.
  void validate() const;

  TopologySpec topology_spec() const;
  VmSpec vm_spec(const Topology& t) const;
  LinkParams host_self() const { return {host_self_bandwidth.value_or(bandwidth), host_self_delay.value_or(delay)}; }
  double switch_delay() const { return switch_self_delay.value_or(delay); }
};

ScenarioConfig parse_scenario(std::string_view json_text);
ScenarioConfig load_scenario(const std::filesystem::path& path);
std::string scenario_to_json(const ScenarioConfig& cfg, int indent = 2);

// File helpers that map failures to IoError.
std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, std::string_view text);

}  // namespace locsim
