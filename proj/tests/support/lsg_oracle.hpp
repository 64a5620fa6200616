#pragma once

// Test-only reference computations. These deliberately avoid build_path,
// move_cost and path_cost so they can check them.

#include <algorithm>
#include <cstdint>
#include <random>
#include <vector>

#include "locsim/topology.hpp"

namespace locsim::test_support {

// Ancestors of n from n itself up to the root.
inline std::vector<NodeId> ancestor_chain(const Topology& t, NodeId n) {
  std::vector<NodeId> chain{n};
  while (auto p = t.parent(chain.back())) chain.push_back(*p);
  return chain;
}

// Sum of per-move costs for a -> b, written directly from the move-cost rules:
// each distinct host endpoint pays size/bw_self + d_self, each switch on the
// route pays its self delay, each crossed link pays size/bw + d.
inline double brute_force_cost(const Topology& t, NodeId a, NodeId b, double size) {
  const auto host_self = [&](NodeId h) { return size / t.self_params(h).bandwidth + t.self_params(h).delay; };
  if (a == b) return host_self(a);

  const auto up_a = ancestor_chain(t, a);
  const auto up_b = ancestor_chain(t, b);
  std::size_t ia = 0;
  std::size_t ib = 0;
  // Find the lowest common ancestor by searching chain b for each element of chain a.
  for (ia = 0; ia < up_a.size(); ++ia) {
    auto it = std::find(up_b.begin(), up_b.end(), up_a[ia]);
    if (it != up_b.end()) {
      ib = static_cast<std::size_t>(it - up_b.begin());
      break;
    }
  }
  double cost = host_self(a) + host_self(b);
  for (std::size_t i = 1; i <= ia; ++i) {
    const LinkParams& l = t.uplink(up_a[i - 1]);
    cost += size / l.bandwidth + l.delay;
    cost += t.self_params(up_a[i]).delay;
  }
  for (std::size_t i = 1; i <= ib; ++i) {
    const LinkParams& l = t.uplink(up_b[i - 1]);
    cost += size / l.bandwidth + l.delay;
    if (i != ib) cost += t.self_params(up_b[i]).delay;  // the LCA was charged on a's side
  }
  return cost;
}

// Locality by ancestor comparison, independent of classify_locality.
inline LocalityClass brute_force_class(const Topology& t, NodeId a, NodeId b) {
  const auto up_a = ancestor_chain(t, a);
  const auto up_b = ancestor_chain(t, b);
  for (std::size_t level = 0; level < up_a.size(); ++level) {
    if (up_a[level] == up_b[level]) return static_cast<LocalityClass>(level);
  }
  return LocalityClass::RootLocal;
}

// Random small three-tier spec with non-uniform fan-out.
inline TopologySpec random_spec(std::mt19937_64& rng, std::size_t max_fanout = 4) {
  std::uniform_int_distribution<std::size_t> fan(1, max_fanout);
  TopologySpec spec;
  spec.edge_fanout.resize(fan(rng));
  for (auto& e : spec.edge_fanout) e = fan(rng);
  spec.host_fanout.resize(spec.edge_count());
  for (auto& h : spec.host_fanout) h = fan(rng);
  return spec;
}

}  // namespace locsim::test_support
