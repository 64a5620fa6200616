#pragma once

#include <array>

#include "locsim/topology.hpp"

namespace locsim {

// Payload size in megabytes; always strictly positive.
class FileSize {
 public:
  explicit FileSize(double megabytes);

  double megabytes() const noexcept { return megabytes_; }
  bool operator==(const FileSize&) const = default;

 private:
  double megabytes_;
};

// Seconds spent by each kind of move along a path, and their sum.
struct CostBreakdown {
  double host_self = 0.0;
  double switch_self = 0.0;
  double channel = 0.0;
  double total = 0.0;
};

// Cost of one move in seconds:
//   link move          size / bw + delay
//   host self-move     size / bw_self + delay_self
//   switch self-move   delay_self
double move_cost(const Move& m, NodeKind kind_from, FileSize size);
inline double move_cost(const Move& m, FileSize size) { return move_cost(m, m.from_kind, size); }

CostBreakdown path_cost(const Path& p, FileSize size);

// Closed forms for a homogeneous tree where every host self-move costs `host`,
// every switch self-move `sw` and every link crossing `channel`.
double closed_form_cost(LocalityClass c, double host, double sw, double channel) noexcept;

// Zero delays and one bandwidth everywhere: cost is host * {1, 4, 6, 8}.
double uniform_closed_form(LocalityClass c, double host) noexcept;

inline constexpr std::array<double, kLocalityClassCount> kUniformCoefficients{1.0, 4.0, 6.0, 8.0};

// Each class's share of the summed uniform coefficients (1/19, 4/19, 6/19, 8/19).
std::array<double, kLocalityClassCount> uniform_cost_shares() noexcept;

// Per-element costs (host self, switch self, channel) when every node and link
// carries the same parameters.
struct ElementCosts {
  double host = 0.0;
  double sw = 0.0;
  double channel = 0.0;
};

ElementCosts uniform_element_costs(FileSize size, const LinkParams& link, const LinkParams& host_self,
                                   double switch_delay);

}  // namespace locsim
