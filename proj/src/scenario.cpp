#include "locsim/scenario.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "locsim/error.hpp"

namespace locsim {

using nlohmann::json;

namespace {

[[noreturn]] void config_error(std::string_view field, std::string_view reason) {
  throw Error(ErrorCode::ConfigError, std::string(field) + ": " + std::string(reason));
}

void reject_unknown(const json& obj, std::string_view where, std::initializer_list<std::string_view> allowed) {
  for (const auto& [key, _] : obj.items()) {
    bool ok = false;
    for (auto a : allowed) ok = ok || key == a;
    if (!ok) config_error(std::string(where).empty() ? key : std::string(where) + "." + key, "unknown key");
  }
}

double get_number(const json& obj, const char* key, std::string_view field) {
  const auto& v = obj.at(key);
  if (!v.is_number()) config_error(field, "must be a number");
  return v.get<double>();
}

std::uint64_t get_count(const json& v, std::string_view field) {
  if (!v.is_number_integer() || (!v.is_number_unsigned() && v.get<std::int64_t>() < 0)) {
    config_error(field, "must be a non-negative integer");
  }
  return v.get<std::uint64_t>();
}

std::vector<std::size_t> get_fanout(const json& v, std::size_t parents, std::string_view field) {
  std::vector<std::size_t> out;
  if (v.is_array()) {
    for (const auto& e : v) out.push_back(get_count(e, field));
    if (out.size() != parents) {
      config_error(field, "list has " + std::to_string(out.size()) + " entries, expected " + std::to_string(parents));
    }
  } else {
    out.assign(parents, get_count(v, field));
  }
  return out;
}

}  // namespace

ScenarioConfig ScenarioConfig::uniform(std::size_t aggregates, std::size_t edges_per_aggregate,
                                       std::size_t hosts_per_edge, double bandwidth, double chunk_size_mb,
                                       std::size_t transfers, LocalityMix mix, std::uint64_t seed) {
  ScenarioConfig cfg;
  cfg.edge_fanout.assign(aggregates, edges_per_aggregate);
  cfg.host_fanout.assign(aggregates * edges_per_aggregate, hosts_per_edge);
  cfg.bandwidth = bandwidth;
  cfg.chunk_size_mb = chunk_size_mb;
  cfg.transfers = transfers;
  cfg.mix = mix;
  cfg.seed = seed;
  cfg.validate();
  return cfg;
}

void ScenarioConfig::validate() const {
  if (edge_fanout.empty()) config_error("topology", "aggregates must be >= 1");
  std::size_t edges = 0;
  for (auto n : edge_fanout) {
    if (n == 0) config_error("topology", "edges_per_aggregate must be >= 1");
    edges += n;
  }
  if (host_fanout.size() != edges) config_error("topology", "hosts_per_edge does not match the edge count");
  for (auto n : host_fanout) {
    if (n == 0) config_error("topology", "hosts_per_edge must be >= 1");
  }
  if (port_limits.root && edge_fanout.size() > *port_limits.root) config_error("topology", "root port limit exceeded");
  for (auto n : edge_fanout) {
    if (port_limits.aggregate && n > *port_limits.aggregate) config_error("topology", "aggregate port limit exceeded");
  }
  for (auto n : host_fanout) {
    if (port_limits.edge && n > *port_limits.edge) config_error("topology", "edge port limit exceeded");
  }
  if (!(bandwidth > 0.0) || !std::isfinite(bandwidth)) config_error("bandwidth_mb_per_s", "must be > 0");
  if (!(delay >= 0.0) || !std::isfinite(delay)) config_error("delay_s", "must be >= 0");
  if (host_self_bandwidth && !(*host_self_bandwidth > 0.0)) config_error("self_moves.host_bandwidth_mb_per_s", "must be > 0");
  if (host_self_delay && !(*host_self_delay >= 0.0)) config_error("self_moves.host_delay_s", "must be >= 0");
  if (switch_self_delay && !(*switch_self_delay >= 0.0)) config_error("self_moves.switch_delay_s", "must be >= 0");
  if (!(chunk_size_mb > 0.0) || !std::isfinite(chunk_size_mb)) config_error("chunk_size_mb", "must be > 0");
  if (transfers == 0) config_error("transfers", "must be >= 1");
  try {
    mix.validate();
  } catch (const Error& e) {
    config_error("locality_mix", e.what());
  }
  if (vms.pe_count == 0) config_error("vms.pe_count", "must be >= 1");
  if (!(vms.ram_mb > 0.0)) config_error("vms.ram_mb", "must be > 0");
  if (!(execute_work_s >= 0.0)) config_error("execute_work_s", "must be >= 0");
}

TopologySpec ScenarioConfig::topology_spec() const {
  TopologySpec spec;
  spec.edge_fanout = edge_fanout;
  spec.host_fanout = host_fanout;
  spec.port_limits = port_limits;
  spec.link = LinkParams{bandwidth, delay};
  spec.self.host = host_self();
  spec.self.switch_delay = switch_delay();
  return spec;
}

VmSpec ScenarioConfig::vm_spec(const Topology& t) const {
  VmSpec s = vms;
  if (s.count == 0) s.count = t.hosts().size();
  return s;
}

ScenarioConfig parse_scenario(std::string_view json_text) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::parse_error& e) {
    config_error("<document>", e.what());
  }
  if (!root.is_object()) config_error("<document>", "top level must be an object");
  reject_unknown(root, "", {"topology", "bandwidth_mb_per_s", "delay_s", "self_moves", "chunk_size_mb", "transfers",
                            "locality_mix", "vms", "seed", "contention", "execute_work_s"});
  for (const char* required : {"topology", "bandwidth_mb_per_s", "chunk_size_mb", "transfers", "locality_mix"}) {
    if (!root.contains(required)) config_error(required, "missing");
  }

  ScenarioConfig cfg;
  try {
    const json& topo = root.at("topology");
    if (!topo.is_object()) config_error("topology", "must be an object");
    reject_unknown(topo, "topology", {"aggregates", "edges_per_aggregate", "hosts_per_edge", "port_limits"});
    for (const char* required : {"aggregates", "edges_per_aggregate", "hosts_per_edge"}) {
      if (!topo.contains(required)) config_error(std::string("topology.") + required, "missing");
    }
    const auto aggregates = get_count(topo.at("aggregates"), "topology.aggregates");
    if (aggregates == 0) config_error("topology", "aggregates must be >= 1");
    cfg.edge_fanout = get_fanout(topo.at("edges_per_aggregate"), aggregates, "topology.edges_per_aggregate");
    std::size_t edges = 0;
    for (auto n : cfg.edge_fanout) edges += n;
    cfg.host_fanout = get_fanout(topo.at("hosts_per_edge"), edges, "topology.hosts_per_edge");
    if (topo.contains("port_limits")) {
      const json& pl = topo.at("port_limits");
      reject_unknown(pl, "topology.port_limits", {"root", "aggregate", "edge"});
      if (pl.contains("root")) cfg.port_limits.root = get_count(pl.at("root"), "topology.port_limits.root");
      if (pl.contains("aggregate")) cfg.port_limits.aggregate = get_count(pl.at("aggregate"), "topology.port_limits.aggregate");
      if (pl.contains("edge")) cfg.port_limits.edge = get_count(pl.at("edge"), "topology.port_limits.edge");
    }

    cfg.bandwidth = get_number(root, "bandwidth_mb_per_s", "bandwidth_mb_per_s");
    if (root.contains("delay_s")) cfg.delay = get_number(root, "delay_s", "delay_s");
    if (root.contains("self_moves")) {
      const json& sm = root.at("self_moves");
      reject_unknown(sm, "self_moves", {"host_bandwidth_mb_per_s", "host_delay_s", "switch_delay_s"});
      if (sm.contains("host_bandwidth_mb_per_s")) {
        cfg.host_self_bandwidth = get_number(sm, "host_bandwidth_mb_per_s", "self_moves.host_bandwidth_mb_per_s");
      }
      if (sm.contains("host_delay_s")) cfg.host_self_delay = get_number(sm, "host_delay_s", "self_moves.host_delay_s");
      if (sm.contains("switch_delay_s")) cfg.switch_self_delay = get_number(sm, "switch_delay_s", "self_moves.switch_delay_s");
    }
    cfg.chunk_size_mb = get_number(root, "chunk_size_mb", "chunk_size_mb");
    cfg.transfers = get_count(root.at("transfers"), "transfers");

    const json& mix = root.at("locality_mix");
    if (!mix.is_object()) config_error("locality_mix", "must be an object");
    reject_unknown(mix, "locality_mix", {"node", "rack", "aggregate", "root"});
    for (auto c : kAllLocalityClasses) {
      const std::string key(to_string(c));
      cfg.mix.fractions[index_of(c)] = mix.contains(key) ? get_number(mix, key.c_str(), "locality_mix." + key) : 0.0;
    }

    if (root.contains("vms")) {
      const json& vms = root.at("vms");
      reject_unknown(vms, "vms", {"count", "ram_mb", "pe_count"});
      if (vms.contains("count")) {
        cfg.vms.count = get_count(vms.at("count"), "vms.count");
        if (cfg.vms.count == 0) config_error("vms.count", "must be >= 1");
      }
      if (vms.contains("ram_mb")) cfg.vms.ram_mb = get_number(vms, "ram_mb", "vms.ram_mb");
      if (vms.contains("pe_count")) cfg.vms.pe_count = static_cast<std::uint32_t>(get_count(vms.at("pe_count"), "vms.pe_count"));
    }
    if (root.contains("seed")) cfg.seed = get_count(root.at("seed"), "seed");
    if (root.contains("contention")) {
      const auto& v = root.at("contention");
      if (v == "none") {
        cfg.contention = ContentionMode::None;
      } else if (v == "fair_share") {
        cfg.contention = ContentionMode::FairShare;
      } else {
        config_error("contention", "must be \"none\" or \"fair_share\"");
      }
    }
    if (root.contains("execute_work_s")) cfg.execute_work_s = get_number(root, "execute_work_s", "execute_work_s");
  } catch (const json::exception& e) {
    config_error("<document>", e.what());
  }
  cfg.validate();
  return cfg;
}

ScenarioConfig load_scenario(const std::filesystem::path& path) { return parse_scenario(read_text_file(path)); }

std::string scenario_to_json(const ScenarioConfig& cfg, int indent) {
  json topo;
  topo["aggregates"] = cfg.edge_fanout.size();
  topo["edges_per_aggregate"] = cfg.edge_fanout;
  topo["hosts_per_edge"] = cfg.host_fanout;
  json limits = json::object();
  if (cfg.port_limits.root) limits["root"] = *cfg.port_limits.root;
  if (cfg.port_limits.aggregate) limits["aggregate"] = *cfg.port_limits.aggregate;
  if (cfg.port_limits.edge) limits["edge"] = *cfg.port_limits.edge;
  if (!limits.empty()) topo["port_limits"] = limits;

  json out;
  out["topology"] = topo;
  out["bandwidth_mb_per_s"] = cfg.bandwidth;
  out["delay_s"] = cfg.delay;
  json sm = json::object();
  if (cfg.host_self_bandwidth) sm["host_bandwidth_mb_per_s"] = *cfg.host_self_bandwidth;
  if (cfg.host_self_delay) sm["host_delay_s"] = *cfg.host_self_delay;
  if (cfg.switch_self_delay) sm["switch_delay_s"] = *cfg.switch_self_delay;
  if (!sm.empty()) out["self_moves"] = sm;
  out["chunk_size_mb"] = cfg.chunk_size_mb;
  out["transfers"] = cfg.transfers;
  json mix;
  for (auto c : kAllLocalityClasses) mix[std::string(to_string(c))] = cfg.mix[c];
  out["locality_mix"] = mix;
  json vms;
  if (cfg.vms.count != 0) vms["count"] = cfg.vms.count;
  vms["ram_mb"] = cfg.vms.ram_mb;
  vms["pe_count"] = cfg.vms.pe_count;
  out["vms"] = vms;
  out["seed"] = cfg.seed;
  out["contention"] = std::string(to_string(cfg.contention));
  out["execute_work_s"] = cfg.execute_work_s;
  return out.dump(indent);
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw Error(ErrorCode::IoError, "read failed: " + path.string());
  return ss.str();
}

void write_text_file(const std::filesystem::path& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + path.string());
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) throw Error(ErrorCode::IoError, "write failed: " + path.string());
}

}  // namespace locsim
