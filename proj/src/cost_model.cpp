#include "locsim/cost_model.hpp"

#include <cmath>
#include <numeric>
#include <string>

#include "locsim/error.hpp"

namespace locsim {

FileSize::FileSize(double megabytes) : megabytes_(megabytes) {
  if (!(megabytes > 0.0) || !std::isfinite(megabytes)) {
    throw Error(ErrorCode::InvalidParameter, "file size must be a finite value > 0, got " + std::to_string(megabytes));
  }
}

namespace {

double transfer_time(double size, const LinkParams& p, const Move& m) {
  if (!(p.bandwidth > 0.0)) {
    throw Error(ErrorCode::InvalidBandwidth, "move " + std::to_string(m.from.value) + "->" +
                                                 std::to_string(m.to.value) + " has bandwidth " +
                                                 std::to_string(p.bandwidth));
  }
  return size / p.bandwidth + p.delay;
}

}  // namespace

double move_cost(const Move& m, NodeKind kind_from, FileSize size) {
  if (!m.is_self() || kind_from == NodeKind::Host) return transfer_time(size.megabytes(), m.link, m);
  return m.link.delay;
}

CostBreakdown path_cost(const Path& p, FileSize size) {
  CostBreakdown out;
  for (const Move& m : p.moves) {
    const double c = move_cost(m, size);
    if (!m.is_self()) {
      out.channel += c;
    } else if (m.from_kind == NodeKind::Host) {
      out.host_self += c;
    } else {
      out.switch_self += c;
    }
    out.total += c;
  }
  return out;
}

double closed_form_cost(LocalityClass c, double host, double sw, double channel) noexcept {
  switch (c) {
    case LocalityClass::NodeLocal: return host;
    case LocalityClass::RackLocal: return 2 * host + sw + 2 * channel;
    case LocalityClass::AggregateLocal: return 2 * host + 3 * sw + 4 * channel;
    case LocalityClass::RootLocal: return 2 * host + 5 * sw + 6 * channel;
  }
  return 0.0;
}

double uniform_closed_form(LocalityClass c, double host) noexcept { return kUniformCoefficients[index_of(c)] * host; }

std::array<double, kLocalityClassCount> uniform_cost_shares() noexcept {
  const double sum = std::accumulate(kUniformCoefficients.begin(), kUniformCoefficients.end(), 0.0);
  std::array<double, kLocalityClassCount> shares{};
  for (std::size_t i = 0; i < shares.size(); ++i) shares[i] = kUniformCoefficients[i] / sum;
  return shares;
}

ElementCosts uniform_element_costs(FileSize size, const LinkParams& link, const LinkParams& host_self,
                                   double switch_delay) {
  const Move probe{};
  return ElementCosts{transfer_time(size.megabytes(), host_self, probe), switch_delay,
                      transfer_time(size.megabytes(), link, probe)};
}

}  // namespace locsim
