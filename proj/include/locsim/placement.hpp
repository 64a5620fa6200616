#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "locsim/cost_model.hpp"
#include "locsim/topology.hpp"

namespace locsim {

using FileId = std::uint64_t;

struct ChunkFile {
  FileId file_id = 0;
  FileSize size{64.0};
};

// Name node: one replica host per file.
class NameNodeTable {
 public:
  explicit NameNodeTable(const Topology& topology) : topology_(&topology) {}

  void register_file(const ChunkFile& file, NodeId host);
  void register_file(FileId file_id, NodeId host);
  NodeId lookup(FileId file_id) const;
  bool contains(FileId file_id) const noexcept { return entries_.contains(file_id); }

  std::size_t size() const noexcept { return entries_.size(); }
  const std::map<FileId, NodeId>& entries() const noexcept { return entries_; }

  bool operator==(const NameNodeTable& other) const { return entries_ == other.entries_; }

 private:
  const Topology* topology_;
  std::map<FileId, NodeId> entries_;
};

struct LocalityMix {
  std::array<double, kLocalityClassCount> fractions{1.0, 0.0, 0.0, 0.0};

  static LocalityMix of(double node, double rack, double aggregate, double root);
  double operator[](LocalityClass c) const noexcept { return fractions[index_of(c)]; }
  // Throws InvalidParameter unless every fraction is in [0,1] and they sum to 1.
  void validate() const;
};

// Largest-remainder apportionment of `total` items over the mix. Ties on the
// remainder go to the nearer class.
std::array<std::size_t, kLocalityClassCount> apportion(const LocalityMix& mix, std::size_t total);

struct Consumer {
  FileId file_id = 0;
  NodeId host;
};

// Hosts at exactly class `c` from `consumer`, in ascending id order.
std::vector<NodeId> eligible_hosts(const Topology& t, NodeId consumer, LocalityClass c);

struct Placement {
  NameNodeTable table;
  // Class assigned to each consumer, parallel to the input list.
  std::vector<LocalityClass> assigned;
  std::array<std::size_t, kLocalityClassCount> counts{};
};

Placement place_for_mix_detailed(const Topology& t, std::span<const Consumer> consumers, const LocalityMix& mix,
                                 std::uint64_t seed);

inline NameNodeTable place_for_mix(const Topology& t, std::span<const Consumer> consumers, const LocalityMix& mix,
                                   std::uint64_t seed) {
  return place_for_mix_detailed(t, consumers, mix, seed).table;
}

// Placement CSV: header `file_id,file_host`, one row per file.
NameNodeTable parse_placement_csv(const Topology& t, std::string_view text);
std::string format_placement_csv(const NameNodeTable& table);

}  // namespace locsim
