#include "locsim/placement.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numeric>
#include <sstream>

#include "locsim/error.hpp"
#include "locsim/random.hpp"

namespace locsim {

void NameNodeTable::register_file(FileId file_id, NodeId host) {
  if (!topology_->contains(host)) throw Error(ErrorCode::UnknownNode, "host " + std::to_string(host.value));
  if (!topology_->is_host(host)) {
    throw Error(ErrorCode::NotAHost, "cannot place file " + std::to_string(file_id) + " on " +
                                         std::string(to_string(topology_->kind(host))) + " switch " +
                                         std::to_string(host.value));
  }
  if (!entries_.emplace(file_id, host).second) {
    throw Error(ErrorCode::DuplicateFile, "file " + std::to_string(file_id) + " already on host " +
                                              std::to_string(entries_.at(file_id).value));
  }
}

void NameNodeTable::register_file(const ChunkFile& file, NodeId host) { register_file(file.file_id, host); }

NodeId NameNodeTable::lookup(FileId file_id) const {
  auto it = entries_.find(file_id);
  if (it == entries_.end()) throw Error(ErrorCode::UnknownFile, "file " + std::to_string(file_id));
  return it->second;
}

LocalityMix LocalityMix::of(double node, double rack, double aggregate, double root) {
  LocalityMix mix;
  mix.fractions = {node, rack, aggregate, root};
  mix.validate();
  return mix;
}

void LocalityMix::validate() const {
  double sum = 0.0;
  for (double f : fractions) {
    if (!(f >= 0.0 && f <= 1.0)) throw Error(ErrorCode::InvalidParameter, "mix fraction outside [0,1]");
    sum += f;
  }
  if (std::abs(sum - 1.0) > 1e-9) {
    throw Error(ErrorCode::InvalidParameter, "mix fractions sum to " + std::to_string(sum) + ", expected 1");
  }
}

std::array<std::size_t, kLocalityClassCount> apportion(const LocalityMix& mix, std::size_t total) {
  mix.validate();
  const double sum = std::accumulate(mix.fractions.begin(), mix.fractions.end(), 0.0);

  std::array<std::size_t, kLocalityClassCount> counts{};
  std::array<double, kLocalityClassCount> remainders{};
  std::size_t assigned = 0;
  for (std::size_t i = 0; i < kLocalityClassCount; ++i) {
    const double quota = mix.fractions[i] / sum * static_cast<double>(total);
    counts[i] = static_cast<std::size_t>(std::floor(quota));
    remainders[i] = quota - static_cast<double>(counts[i]);
    assigned += counts[i];
  }
  std::array<std::size_t, kLocalityClassCount> order{0, 1, 2, 3};
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return remainders[a] > remainders[b]; });
  for (std::size_t k = 0; assigned < total; k = (k + 1) % kLocalityClassCount) {
    ++counts[order[k]];
    ++assigned;
  }
  return counts;
}

std::vector<NodeId> eligible_hosts(const Topology& t, NodeId consumer, LocalityClass c) {
  std::vector<NodeId> out;
  if (c == LocalityClass::NodeLocal) {
    classify_locality(t, consumer, consumer);
    out.push_back(consumer);
    return out;
  }
  for (NodeId h : t.hosts()) {
    if (classify_locality(t, consumer, h) == c) out.push_back(h);
  }
  return out;
}

Placement place_for_mix_detailed(const Topology& t, std::span<const Consumer> consumers, const LocalityMix& mix,
                                 std::uint64_t seed) {
  Placement result{NameNodeTable(t), {}, apportion(mix, consumers.size())};

  std::vector<LocalityClass> classes;
  classes.reserve(consumers.size());
  for (auto c : kAllLocalityClasses) classes.insert(classes.end(), result.counts[index_of(c)], c);

  SeededRng rng(seed);
  rng.shuffle(std::span<LocalityClass>(classes));

  // Candidate lists depend only on (host, class); cache them.
  std::map<std::pair<NodeId, LocalityClass>, std::vector<NodeId>> cache;
  for (std::size_t i = 0; i < consumers.size(); ++i) {
    const Consumer& consumer = consumers[i];
    const LocalityClass cls = classes[i];
    auto [it, fresh] = cache.try_emplace({consumer.host, cls});
    if (fresh) it->second = eligible_hosts(t, consumer.host, cls);
    const auto& candidates = it->second;
    if (candidates.empty()) {
      throw Error(ErrorCode::InfeasibleMix, "no " + std::string(to_string(cls)) + "-local host for consumer host " +
                                                std::to_string(consumer.host.value) + " (file " +
                                                std::to_string(consumer.file_id) + ")");
    }
    result.table.register_file(consumer.file_id, candidates[rng.below(candidates.size())]);
  }
  result.assigned = std::move(classes);
  return result;
}

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

template <typename T>
bool parse_uint(std::string_view s, T& out) {
  s = trim(s);
  if (s.empty()) return false;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc{} && ptr == s.data() + s.size();
}

}  // namespace

NameNodeTable parse_placement_csv(const Topology& t, std::string_view text) {
  NameNodeTable table(t);
  std::size_t line_no = 0;
  bool header_seen = false;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view line = trim(text.substr(0, nl));
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    if (line.empty() || line.front() == '#') continue;
    if (!header_seen) {
      header_seen = true;
      if (line != "file_id,file_host") {
        throw Error(ErrorCode::ParseError, "line " + std::to_string(line_no) + ": expected header file_id,file_host");
      }
      continue;
    }
    const auto comma = line.find(',');
    FileId file = 0;
    std::uint32_t host = 0;
    if (comma == std::string_view::npos || !parse_uint(line.substr(0, comma), file) ||
        !parse_uint(line.substr(comma + 1), host)) {
      throw Error(ErrorCode::ParseError, "line " + std::to_string(line_no) + ": expected <file_id>,<file_host>");
    }
    table.register_file(file, NodeId{host});
  }
  return table;
}

std::string format_placement_csv(const NameNodeTable& table) {
  std::ostringstream out;
  out << "file_id,file_host\n";
  for (const auto& [file, host] : table.entries()) out << file << ',' << host.value << '\n';
  return out.str();
}

}  // namespace locsim
