#include "locsim/topology.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <string>

#include "locsim/error.hpp"

namespace locsim {

std::string_view to_string(NodeKind kind) noexcept {
  switch (kind) {
    case NodeKind::Host: return "host";
    case NodeKind::EdgeSwitch: return "edge";
    case NodeKind::AggregateSwitch: return "aggregate";
    case NodeKind::RootSwitch: return "root";
  }
  return "?";
}

std::string_view to_string(LocalityClass c) noexcept {
  switch (c) {
    case LocalityClass::NodeLocal: return "node";
    case LocalityClass::RackLocal: return "rack";
    case LocalityClass::AggregateLocal: return "aggregate";
    case LocalityClass::RootLocal: return "root";
  }
  return "?";
}

std::optional<LocalityClass> parse_locality_class(std::string_view name) noexcept {
  for (auto c : kAllLocalityClasses) {
    if (to_string(c) == name) return c;
  }
  return std::nullopt;
}

TopologySpec TopologySpec::uniform(std::size_t aggregates, std::size_t edges_per_aggregate,
                                   std::size_t hosts_per_edge, LinkParams link) {
  TopologySpec spec;
  spec.edge_fanout.assign(aggregates, edges_per_aggregate);
  spec.host_fanout.assign(aggregates * edges_per_aggregate, hosts_per_edge);
  spec.link = link;
  spec.self.host = link;
  spec.self.switch_delay = link.delay;
  return spec;
}

std::size_t TopologySpec::edge_count() const noexcept {
  return std::accumulate(edge_fanout.begin(), edge_fanout.end(), std::size_t{0});
}

std::size_t TopologySpec::host_count() const noexcept {
  return std::accumulate(host_fanout.begin(), host_fanout.end(), std::size_t{0});
}

namespace {

void check_link(const LinkParams& p, const std::string& what) {
  if (!(p.bandwidth > 0.0)) throw Error(ErrorCode::InvalidParameter, what + ": bandwidth must be > 0");
  if (!(p.delay >= 0.0)) throw Error(ErrorCode::InvalidParameter, what + ": delay must be >= 0");
}

void check_fanout(std::size_t count, const std::optional<std::size_t>& limit, std::string_view level) {
  if (count == 0) throw Error(ErrorCode::InvalidParameter, std::string(level) + " fan-out must be >= 1");
  if (limit && count > *limit) {
    throw Error(ErrorCode::PortLimitExceeded, std::string(level) + " fan-out " + std::to_string(count) +
                                                  " exceeds port limit " + std::to_string(*limit));
  }
}

}  // namespace

Topology build_topology(const TopologySpec& spec) {
  check_fanout(spec.aggregate_count(), spec.port_limits.root, "root");
  for (auto n : spec.edge_fanout) check_fanout(n, spec.port_limits.aggregate, "aggregate");
  if (spec.host_fanout.size() != spec.edge_count()) {
    throw Error(ErrorCode::InvalidParameter, "host_fanout has " + std::to_string(spec.host_fanout.size()) +
                                                 " entries for " + std::to_string(spec.edge_count()) +
                                                 " edge switches");
  }
  for (auto n : spec.host_fanout) check_fanout(n, spec.port_limits.edge, "edge");
  check_link(spec.link, "link");
  check_link(spec.self.host, "host self-move");
  if (!(spec.self.switch_delay >= 0.0)) throw Error(ErrorCode::InvalidParameter, "switch self delay must be >= 0");

  Topology t;
  const std::size_t total = 1 + spec.aggregate_count() + spec.edge_count() + spec.host_count();
  if (total > std::numeric_limits<std::uint32_t>::max()) throw Error(ErrorCode::InvalidParameter, "topology too large");
  t.kinds_.reserve(total);
  t.parents_.reserve(total);
  t.children_.resize(total);

  auto add = [&](NodeKind kind, std::optional<NodeId> parent) {
    NodeId id{static_cast<std::uint32_t>(t.kinds_.size())};
    t.kinds_.push_back(kind);
    t.parents_.push_back(parent);
    if (parent) t.children_[parent->value].push_back(id);
    return id;
  };

  const NodeId root = add(NodeKind::RootSwitch, std::nullopt);
  for (std::size_t i = 0; i < spec.aggregate_count(); ++i) t.aggregates_.push_back(add(NodeKind::AggregateSwitch, root));
  for (std::size_t i = 0; i < spec.aggregate_count(); ++i) {
    for (std::size_t j = 0; j < spec.edge_fanout[i]; ++j) t.edges_.push_back(add(NodeKind::EdgeSwitch, t.aggregates_[i]));
  }
  for (std::size_t e = 0; e < t.edges_.size(); ++e) {
    for (std::size_t j = 0; j < spec.host_fanout[e]; ++j) t.hosts_.push_back(add(NodeKind::Host, t.edges_[e]));
  }

  t.uplinks_.assign(total, spec.link);
  t.uplinks_[root.value] = LinkParams{};
  t.self_.resize(total);
  for (std::size_t i = 0; i < total; ++i) {
    t.self_[i] = t.kinds_[i] == NodeKind::Host ? spec.self.host : LinkParams{0.0, spec.self.switch_delay};
  }

  for (const auto& [node, params] : spec.link_overrides) {
    if (!t.contains(node)) throw Error(ErrorCode::UnknownNode, "link override for node " + std::to_string(node.value));
    if (node == root) throw Error(ErrorCode::InvalidParameter, "root switch has no parent link");
    check_link(params, "link override for node " + std::to_string(node.value));
    t.uplinks_[node.value] = params;
  }
  for (const auto& [node, params] : spec.self_overrides) {
    if (!t.contains(node)) throw Error(ErrorCode::UnknownNode, "self override for node " + std::to_string(node.value));
    if (t.kinds_[node.value] == NodeKind::Host) {
      check_link(params, "self override for host " + std::to_string(node.value));
      t.self_[node.value] = params;
    } else {
      if (!(params.delay >= 0.0)) throw Error(ErrorCode::InvalidParameter, "switch self delay must be >= 0");
      t.self_[node.value] = LinkParams{params.bandwidth, params.delay};
    }
  }
  return t;
}

NodeKind Topology::kind(NodeId n) const {
  if (!contains(n)) throw Error(ErrorCode::UnknownNode, "node " + std::to_string(n.value));
  return kinds_[n.value];
}

std::optional<NodeId> Topology::parent(NodeId n) const {
  if (!contains(n)) throw Error(ErrorCode::UnknownNode, "node " + std::to_string(n.value));
  return parents_[n.value];
}

std::span<const NodeId> Topology::children(NodeId n) const {
  if (!contains(n)) throw Error(ErrorCode::UnknownNode, "node " + std::to_string(n.value));
  return children_[n.value];
}

const LinkParams& Topology::uplink(NodeId n) const {
  if (!contains(n)) throw Error(ErrorCode::UnknownNode, "node " + std::to_string(n.value));
  if (!parents_[n.value]) throw Error(ErrorCode::InvalidParameter, "root switch has no parent link");
  return uplinks_[n.value];
}

const LinkParams& Topology::self_params(NodeId n) const {
  if (!contains(n)) throw Error(ErrorCode::UnknownNode, "node " + std::to_string(n.value));
  return self_[n.value];
}

Link Topology::link_between(NodeId a, NodeId b) const {
  if (!contains(a) || !contains(b)) throw Error(ErrorCode::UnknownNode, "link endpoint out of range");
  if (a == b) return Link{a, b, self_[a.value]};
  if (parents_[a.value] == b) return Link{a, b, uplinks_[a.value]};
  if (parents_[b.value] == a) return Link{a, b, uplinks_[b.value]};
  throw Error(ErrorCode::InvalidParameter,
              "no link between " + std::to_string(a.value) + " and " + std::to_string(b.value));
}

namespace {

void require_host(const Topology& t, NodeId n) {
  if (!t.contains(n)) throw Error(ErrorCode::UnknownNode, "node " + std::to_string(n.value));
  if (!t.is_host(n)) {
    throw Error(ErrorCode::NotAHost, "node " + std::to_string(n.value) + " is a " + std::string(to_string(t.kind(n))));
  }
}

}  // namespace

NodeId Topology::edge_of(NodeId host) const {
  require_host(*this, host);
  return *parents_[host.value];
}

NodeId Topology::aggregate_of(NodeId host) const { return *parents_[edge_of(host).value]; }

std::size_t Topology::depth(NodeId n) const {
  if (!contains(n)) throw Error(ErrorCode::UnknownNode, "node " + std::to_string(n.value));
  std::size_t d = 0;
  for (auto p = parents_[n.value]; p; p = parents_[p->value]) ++d;
  return d;
}

std::size_t Path::link_move_count() const noexcept {
  return static_cast<std::size_t>(std::count_if(moves.begin(), moves.end(), [](const Move& m) { return !m.is_self(); }));
}

LocalityClass classify_locality(const Topology& t, NodeId a, NodeId b) {
  require_host(t, a);
  require_host(t, b);
  if (a == b) return LocalityClass::NodeLocal;
  if (t.edge_of(a) == t.edge_of(b)) return LocalityClass::RackLocal;
  if (t.aggregate_of(a) == t.aggregate_of(b)) return LocalityClass::AggregateLocal;
  return LocalityClass::RootLocal;
}

Path build_path(const Topology& t, NodeId a, NodeId b) {
  const LocalityClass locality = classify_locality(t, a, b);

  // Hosts sit at equal depth, so climbing both sides in lockstep meets at the
  // lowest common ancestor.
  std::vector<NodeId> up{a};
  std::vector<NodeId> down{b};
  while (up.back() != down.back()) {
    up.push_back(*t.parent(up.back()));
    down.push_back(*t.parent(down.back()));
  }
  down.pop_back();
  up.insert(up.end(), down.rbegin(), down.rend());

  Path path;
  path.locality = locality;
  path.moves.reserve(2 * up.size() - 1);
  for (std::size_t i = 0; i < up.size(); ++i) {
    const NodeId n = up[i];
    path.moves.push_back(Move{n, n, t.kind(n), t.self_params(n)});
    if (i + 1 < up.size()) {
      const NodeId next = up[i + 1];
      path.moves.push_back(Move{n, next, t.kind(n), t.link_between(n, next).params});
    }
  }
  return path;
}

}  // namespace locsim
