#include "locsim/vm.hpp"

#include <string>

#include "locsim/error.hpp"

namespace locsim {

std::vector<Vm> provision_vms(const Topology& t, const VmSpec& spec) {
  if (spec.count == 0) throw Error(ErrorCode::InvalidParameter, "vm count must be >= 1");
  if (spec.pe_count == 0) throw Error(ErrorCode::InvalidParameter, "vm pe_count must be >= 1");
  if (!(spec.ram_mb > 0.0)) throw Error(ErrorCode::InvalidParameter, "vm ram must be > 0");
  const auto hosts = t.hosts();
  std::vector<Vm> vms;
  vms.reserve(spec.count);
  for (std::size_t i = 0; i < spec.count; ++i) vms.push_back(Vm{i, hosts[i % hosts.size()], spec.ram_mb, spec.pe_count});
  return vms;
}

VmRegistry::VmRegistry(const Topology& t, std::vector<Vm> vms) : topology_(&t) {
  for (auto& vm : vms) {
    if (!t.is_host(vm.host)) throw Error(ErrorCode::NotAHost, "vm " + std::to_string(vm.vm_id) + " not on a host");
    const VmId id = vm.vm_id;
    if (by_id_.contains(id)) throw Error(ErrorCode::InvalidParameter, "duplicate vm id " + std::to_string(id));
    default_ram_mb_ = vm.ram_mb;
    default_pe_ = vm.pe_count;
    by_id_.emplace(id, std::move(vm));
  }
  for (const auto& [id, vm] : by_id_) first_on_host_.try_emplace(vm.host, id);
}

const Vm& VmRegistry::at(VmId id) const {
  auto it = by_id_.find(id);
  if (it == by_id_.end()) throw Error(ErrorCode::UnknownVm, "vm " + std::to_string(id));
  return it->second;
}

const Vm& VmRegistry::vm_on_host(NodeId host) {
  if (auto it = first_on_host_.find(host); it != first_on_host_.end()) return by_id_.at(it->second);
  if (!topology_->is_host(host)) throw Error(ErrorCode::NotAHost, "node " + std::to_string(host.value));
  const VmId id = by_id_.empty() ? 0 : by_id_.rbegin()->first + 1;
  first_on_host_.emplace(host, id);
  return by_id_.emplace(id, Vm{id, host, default_ram_mb_, default_pe_}).first->second;
}

}  // namespace locsim
