#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "locsim/topology.hpp"

namespace locsim {

using VmId = std::uint64_t;

struct Vm {
  VmId vm_id = 0;
  NodeId host;
  double ram_mb = 1024.0;
  std::uint32_t pe_count = 1;

  bool operator==(const Vm&) const = default;
};

struct VmSpec {
  std::size_t count = 1;
  double ram_mb = 1024.0;
  std::uint32_t pe_count = 1;
};

// Round-robin over hosts in ascending id order: vm i lands on hosts()[i % n].
std::vector<Vm> provision_vms(const Topology& t, const VmSpec& spec);

// VMs known to the broker, including sender VMs synthesized on replica hosts.
class VmRegistry {
 public:
  VmRegistry(const Topology& t, std::vector<Vm> vms);

  const Vm& at(VmId id) const;
  bool contains(VmId id) const noexcept { return by_id_.contains(id); }
  std::size_t size() const noexcept { return by_id_.size(); }

  // Lowest-id VM on `host`, creating one with the next free id if none exists.
  const Vm& vm_on_host(NodeId host);

  const std::map<VmId, Vm>& all() const noexcept { return by_id_; }

 private:
  const Topology* topology_;
  std::map<VmId, Vm> by_id_;
  std::map<NodeId, VmId> first_on_host_;
  double default_ram_mb_ = 1024.0;
  std::uint32_t default_pe_ = 1;
};

}  // namespace locsim
