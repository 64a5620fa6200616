#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace locsim {

// Dense index into a Topology, 0..node_count()-1.
struct NodeId {
  std::uint32_t value = 0;

  constexpr NodeId() = default;
  constexpr explicit NodeId(std::uint32_t v) : value(v) {}
  constexpr auto operator<=>(const NodeId&) const = default;
};

enum class NodeKind : std::uint8_t { Host, EdgeSwitch, AggregateSwitch, RootSwitch };

std::string_view to_string(NodeKind kind) noexcept;
constexpr bool is_switch(NodeKind kind) noexcept { return kind != NodeKind::Host; }

// Ordered by increasing network distance.
enum class LocalityClass : std::uint8_t { NodeLocal = 0, RackLocal = 1, AggregateLocal = 2, RootLocal = 3 };

inline constexpr std::size_t kLocalityClassCount = 4;
inline constexpr LocalityClass kAllLocalityClasses[kLocalityClassCount] = {
    LocalityClass::NodeLocal, LocalityClass::RackLocal, LocalityClass::AggregateLocal,
    LocalityClass::RootLocal};

constexpr std::size_t index_of(LocalityClass c) noexcept { return static_cast<std::size_t>(c); }

// Short names used on the CLI and in reports: node, rack, aggregate, root.
std::string_view to_string(LocalityClass c) noexcept;
std::optional<LocalityClass> parse_locality_class(std::string_view name) noexcept;

// Bandwidth in MB/s, delay in seconds.
struct LinkParams {
  double bandwidth = 0.0;
  double delay = 0.0;

  bool operator==(const LinkParams&) const = default;
};

struct Link {
  NodeId endpoint_a;
  NodeId endpoint_b;
  LinkParams params;
};

// Fan-out caps. std::nullopt means unbounded.
struct PortLimits {
  std::optional<std::size_t> root;
  std::optional<std::size_t> aggregate;
  std::optional<std::size_t> edge;
};

// Self-move parameters. A switch self-move only uses the delay; its
// bandwidth is carried along but never read or validated.
struct SelfParams {
  LinkParams host{100.0, 0.0};
  double switch_delay = 0.0;
};

// Construction recipe. Fan-out is given per parent: edge_fanout[i] is the
// number of edge switches under aggregate i, host_fanout[j] the number of
// hosts under edge switch j (edges numbered in declaration order).
struct TopologySpec {
  std::vector<std::size_t> edge_fanout;
  std::vector<std::size_t> host_fanout;
  LinkParams link{100.0, 0.0};
  SelfParams self;
  PortLimits port_limits;
  // Overrides keyed by the child endpoint of the parent link.
  std::map<NodeId, LinkParams> link_overrides;
  // Overrides keyed by node; for switches only .delay is meaningful.
  std::map<NodeId, LinkParams> self_overrides;

  static TopologySpec uniform(std::size_t aggregates, std::size_t edges_per_aggregate,
                              std::size_t hosts_per_edge, LinkParams link = {100.0, 0.0});

  std::size_t aggregate_count() const noexcept { return edge_fanout.size(); }
  std::size_t edge_count() const noexcept;
  std::size_t host_count() const noexcept;
};

// Immutable three-tier tree: root -> aggregates -> edges -> hosts.
// Ids are assigned root first, then aggregates, edges, hosts, each in
// declaration order.
class Topology {
 public:
  std::size_t node_count() const noexcept { return kinds_.size(); }
  std::size_t link_count() const noexcept { return node_count() - 1; }

  NodeKind kind(NodeId n) const;
  bool contains(NodeId n) const noexcept { return n.value < kinds_.size(); }
  bool is_host(NodeId n) const noexcept { return contains(n) && kinds_[n.value] == NodeKind::Host; }

  NodeId root() const noexcept { return NodeId{0}; }
  std::optional<NodeId> parent(NodeId n) const;
  std::span<const NodeId> children(NodeId n) const;

  // Parameters of the link between n and its parent.
  const LinkParams& uplink(NodeId n) const;
  const LinkParams& self_params(NodeId n) const;
  Link link_between(NodeId a, NodeId b) const;

  std::span<const NodeId> hosts() const noexcept { return hosts_; }
  std::span<const NodeId> edge_switches() const noexcept { return edges_; }
  std::span<const NodeId> aggregate_switches() const noexcept { return aggregates_; }

  // For a host: its edge switch and aggregate switch.
  NodeId edge_of(NodeId host) const;
  NodeId aggregate_of(NodeId host) const;

  // Hop count from n up to the root.
  std::size_t depth(NodeId n) const;

  bool operator==(const Topology&) const = default;

 private:
  friend Topology build_topology(const TopologySpec& spec);

  std::vector<NodeKind> kinds_;
  std::vector<std::optional<NodeId>> parents_;
  std::vector<std::vector<NodeId>> children_;
  std::vector<LinkParams> uplinks_;
  std::vector<LinkParams> self_;
  std::vector<NodeId> aggregates_;
  std::vector<NodeId> edges_;
  std::vector<NodeId> hosts_;
};

Topology build_topology(const TopologySpec& spec);

// One step of a path: a self-move (from == to) or a parent/child crossing.
struct Move {
  NodeId from;
  NodeId to;
  NodeKind from_kind = NodeKind::Host;
  LinkParams link;

  bool is_self() const noexcept { return from == to; }
  bool operator==(const Move&) const = default;
};

struct Path {
  std::vector<Move> moves;
  LocalityClass locality = LocalityClass::NodeLocal;

  std::size_t link_move_count() const noexcept;
};

// Number of moves in a canonical path of the given class: 1, 5, 9, 13.
constexpr std::size_t path_length(LocalityClass c) noexcept { return 4 * index_of(c) + 1; }

LocalityClass classify_locality(const Topology& t, NodeId a, NodeId b);

// Canonical route a -> lowest common ancestor -> b, with a self-move on every
// visited node interleaved between the link crossings.
Path build_path(const Topology& t, NodeId a, NodeId b);

}  // namespace locsim

template <>
struct std::hash<locsim::NodeId> {
  std::size_t operator()(const locsim::NodeId& n) const noexcept { return std::hash<std::uint32_t>{}(n.value); }
};
