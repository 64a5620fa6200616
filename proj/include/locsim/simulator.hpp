#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "locsim/engine.hpp"
#include "locsim/topology.hpp"
#include "locsim/workload.hpp"

namespace locsim {

enum class ContentionMode : std::uint8_t { None, FairShare };

std::string_view to_string(ContentionMode m) noexcept;

struct TransferRecord {
  AppId app_id = 0;
  FileId file_id = 0;
  NodeId src_host;
  NodeId dst_host;
  LocalityClass locality = LocalityClass::NodeLocal;
  double start = 0.0;
  double end = 0.0;
  double cost = 0.0;  // end - start
};

struct SimulationOutcome {
  std::vector<TransferRecord> records;  // one per Send stage, in application order
  double final_time = 0.0;
  std::size_t events = 0;
  std::vector<std::string> trace;
};

// Runs every application to completion on a private engine. Each Send stage
// becomes one transfer along build_path(src, dst). Under ContentionMode::None
// a transfer takes exactly path_cost(...).total seconds.
SimulationOutcome simulate(const Topology& topology, const VmRegistry& vms,
                           const std::vector<ApplicationCloudlet>& apps, ContentionMode contention,
                           bool trace = false);

}  // namespace locsim
