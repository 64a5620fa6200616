#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>

#include <json.hpp>

#include "locsim/error.hpp"
#include "locsim/experiment.hpp"
#include "locsim/scenario.hpp"

using namespace locsim;
namespace fs = std::filesystem;

namespace {

template <typename F>
Error error_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e;
  }
  ADD_FAILURE() << "expected locsim::Error";
  return Error(ErrorCode::InvalidParameter, "none");
}

constexpr const char* kHosts64 = R"({
  "topology": { "aggregates": 4, "edges_per_aggregate": 4, "hosts_per_edge": 4 },
  "bandwidth_mb_per_s": 100,
  "delay_s": 0,
  "chunk_size_mb": 64,
  "transfers": 1000,
  "locality_mix": { "node": 0.25, "rack": 0.25, "aggregate": 0.25, "root": 0.25 },
  "vms": { "count": 64 },
  "seed": 42
})";

nlohmann::json hosts64() { return nlohmann::json::parse(kHosts64); }

ScenarioConfig pure(std::size_t aggs, double bw, std::size_t transfers, LocalityClass c) {
  std::array<double, 4> f{};
  f[index_of(c)] = 1.0;
  return ScenarioConfig::uniform(aggs, 4, 4, bw, 64.0, transfers, LocalityMix{f}, 7);
}

fs::path scratch(const std::string& name) {
  auto dir = fs::temp_directory_path() / ("locsim_test_" + name);
  fs::remove_all(dir);
  return dir;
}

}  // namespace

TEST(Scenario, ParsesReferenceScenario) {
  const auto cfg = parse_scenario(kHosts64);
  EXPECT_EQ(cfg.edge_fanout, std::vector<std::size_t>(4, 4));
  EXPECT_EQ(cfg.host_fanout, std::vector<std::size_t>(16, 4));
  EXPECT_EQ(cfg.bandwidth, 100.0);
  EXPECT_EQ(cfg.transfers, 1000u);
  EXPECT_EQ(cfg.seed, 42u);
  EXPECT_EQ(cfg.vms.count, 64u);
  EXPECT_EQ(cfg.contention, ContentionMode::None);
  EXPECT_EQ(cfg.host_self().bandwidth, 100.0);
  // Round-trip through the writer.
  const auto again = parse_scenario(scenario_to_json(cfg));
  EXPECT_EQ(scenario_to_json(again), scenario_to_json(cfg));
}

TEST(Scenario, Rejections) {
  auto j = hosts64();
  j["locality_mix"] = {{"node", 0.3}, {"rack", 0.3}, {"aggregate", 0.3}, {"root", 0.0}};
  auto e = error_of([&] { parse_scenario(j.dump()); });
  EXPECT_EQ(e.code(), ErrorCode::ConfigError);
  EXPECT_NE(std::string(e.what()).find("locality_mix"), std::string::npos);

  j = hosts64();
  j["topology"]["hosts_per_edge"] = 0;
  EXPECT_EQ(error_of([&] { parse_scenario(j.dump()); }).code(), ErrorCode::ConfigError);

  j = hosts64();
  j["bandwith_mb_per_s"] = 10;
  EXPECT_EQ(error_of([&] { parse_scenario(j.dump()); }).code(), ErrorCode::ConfigError);

  j = hosts64();
  j["bandwidth_mb_per_s"] = -1;
  EXPECT_EQ(error_of([&] { parse_scenario(j.dump()); }).code(), ErrorCode::ConfigError);

  j = hosts64();
  j["contention"] = "max_min";
  EXPECT_EQ(error_of([&] { parse_scenario(j.dump()); }).code(), ErrorCode::ConfigError);

  EXPECT_EQ(error_of([] { parse_scenario("{not json"); }).code(), ErrorCode::ConfigError);
  EXPECT_EQ(error_of([] { load_scenario("/nonexistent/scenario.json"); }).code(), ErrorCode::IoError);
}

TEST(Scenario, PerSwitchFanoutLists) {
  auto j = hosts64();
  j["topology"] = {{"aggregates", 2}, {"edges_per_aggregate", {1, 2}}, {"hosts_per_edge", {3, 1, 2}}};
  const auto cfg = parse_scenario(j.dump());
  EXPECT_EQ(cfg.host_fanout, (std::vector<std::size_t>{3, 1, 2}));
  j["topology"]["hosts_per_edge"] = {3, 1};
  EXPECT_EQ(error_of([&] { parse_scenario(j.dump()); }).code(), ErrorCode::ConfigError);
}

TEST(ProvisionVms, RoundRobin) {
  const auto two = build_topology(TopologySpec::uniform(1, 1, 2));
  const auto vms = provision_vms(two, VmSpec{3, 1024.0, 1});
  ASSERT_EQ(vms.size(), 3u);
  EXPECT_EQ(vms[0].host, two.hosts()[0]);
  EXPECT_EQ(vms[1].host, two.hosts()[1]);
  EXPECT_EQ(vms[2].host, two.hosts()[0]);

  const auto t1 = build_topology(TopologySpec::uniform(4, 4, 4));
  const auto one_each = provision_vms(t1, VmSpec{64, 1024.0, 1});
  for (std::size_t i = 0; i < 64; ++i) EXPECT_EQ(one_each[i].host, t1.hosts()[i]);

  const auto t2 = build_topology(TopologySpec::uniform(6, 4, 4));
  EXPECT_EQ(provision_vms(t2, VmSpec{96, 1024.0, 1}).back().host, t2.hosts().back());
}

TEST(RunExperiment, PureMixesHitClosedForm) {
  const std::array<double, 4> want1{0.64, 2.56, 3.84, 5.12};
  for (auto c : kAllLocalityClasses) {
    const auto r = run_experiment(pure(4, 100.0, 200, c));
    EXPECT_TRUE(r.reconciled);
    EXPECT_EQ(r.classes[index_of(c)].count, 200u);
    EXPECT_NEAR(r.classes[index_of(c)].mean_cost, want1[index_of(c)], 1e-9 * want1[index_of(c)]);
  }
  const auto r = run_experiment(pure(6, 1000.0, 100, LocalityClass::RackLocal));
  EXPECT_NEAR(r.classes[1].mean_cost, 0.256, 1e-12);
}

TEST(RunExperiment, MixRealizedAndPercentagesAddUp) {
  auto cfg = ScenarioConfig::uniform(4, 4, 4, 100.0, 64.0, 1000, LocalityMix::of(0.1, 0.2, 0.3, 0.4), 3);
  const auto r = run_experiment(cfg);
  ASSERT_TRUE(r.apportioned.has_value());
  double pct = 0.0;
  for (auto c : kAllLocalityClasses) {
    EXPECT_EQ(r.classes[index_of(c)].count, (*r.apportioned)[index_of(c)]);
    pct += r.classes[index_of(c)].percentage;
    EXPECT_NEAR(r.classes[index_of(c)].percentage,
                100.0 * r.classes[index_of(c)].total_cost / r.total_cost, 1e-9);
  }
  EXPECT_NEAR(pct, 100.0, 1e-9);
  EXPECT_EQ(r.records.size(), 1000u);
}

TEST(RunExperiment, ReplayIsByteIdentical) {
  auto cfg = parse_scenario(kHosts64);
  ExperimentInputs in;
  in.trace = true;
  const auto a = run_experiment(cfg, in);
  const auto b = run_experiment(cfg, in);
  EXPECT_EQ(format_transfers_csv(a), format_transfers_csv(b));
  EXPECT_EQ(a.trace_hash, b.trace_hash);
  EXPECT_EQ(a.trace, b.trace);
  cfg.seed = 43;
  EXPECT_NE(format_transfers_csv(run_experiment(cfg)), format_transfers_csv(a));
}

TEST(RunExperiment, WorkflowAndPlacementInputs) {
  auto cfg = ScenarioConfig::uniform(1, 2, 2, 100.0, 64.0, 1, LocalityMix::of(1, 0, 0, 0));
  cfg.vms.count = 4;
  ExperimentInputs in;
  // Hosts are ids 4..7; vm k sits on host 4 + k.
  in.workflow_text = "# app, file, vm\n0, 10, 0\n1, 11, 0\n2, 12, 3\n";
  in.placement_text = "file_id,file_host\n10,4\n11,5\n12,4\n";
  const auto r = run_experiment(cfg, in);
  ASSERT_EQ(r.records.size(), 3u);
  EXPECT_EQ(r.records[0].locality, LocalityClass::NodeLocal);
  EXPECT_EQ(r.records[1].locality, LocalityClass::RackLocal);
  EXPECT_EQ(r.records[2].locality, LocalityClass::AggregateLocal);
  EXPECT_FALSE(r.apportioned.has_value());
  EXPECT_TRUE(r.reconciled);

  // Workflow without placement: placed by the mix against each file's consumer.
  in.placement_text.reset();
  cfg.mix = LocalityMix::of(0, 1, 0, 0);
  const auto placed = run_experiment(cfg, in);
  for (const auto& rec : placed.records) EXPECT_EQ(rec.locality, LocalityClass::RackLocal);

  in.workflow_text = "0, 10, 9\n";
  EXPECT_EQ(error_of([&] { run_experiment(cfg, in); }).code(), ErrorCode::UnknownVm);
}

TEST(RunExperiment, InfeasibleMixReported) {
  auto cfg = ScenarioConfig::uniform(1, 4, 4, 100.0, 64.0, 10, LocalityMix::of(0, 0, 0, 1));
  EXPECT_EQ(error_of([&] { run_experiment(cfg); }).code(), ErrorCode::InfeasibleMix);
}

TEST(RunExperiment, FairShareConservesTransfersAndNeverBeatsUncontended) {
  auto cfg = ScenarioConfig::uniform(2, 2, 2, 100.0, 64.0, 40, LocalityMix::of(0.25, 0.25, 0.25, 0.25), 5);
  const auto base = run_experiment(cfg);
  cfg.contention = ContentionMode::FairShare;
  const auto shared = run_experiment(cfg);
  ASSERT_EQ(shared.records.size(), base.records.size());
  EXPECT_FALSE(shared.oracle_checked);
  for (std::size_t i = 0; i < base.records.size(); ++i) {
    EXPECT_EQ(shared.records[i].locality, base.records[i].locality);
    EXPECT_GE(shared.records[i].cost, base.records[i].cost * (1 - 1e-9)) << i;
  }
  // A lone transfer sees no contention.
  cfg.transfers = 1;
  const auto lone = run_experiment(cfg);
  const auto lone_base = [&] {
    auto c = cfg;
    c.contention = ContentionMode::None;
    return run_experiment(c);
  }();
  EXPECT_NEAR(lone.records[0].cost, lone_base.records[0].cost, 1e-9);
}

TEST(EmitReport, WritesAllFiles) {
  auto cfg = ScenarioConfig::uniform(2, 2, 2, 100.0, 64.0, 20, LocalityMix::of(0.25, 0.25, 0.25, 0.25));
  ExperimentInputs in;
  in.trace = true;
  const auto r = run_experiment(cfg, in);
  const auto dir = scratch("emit");
  emit_report(r, dir);
  for (const char* f : {"transfers.csv", "summary.json", "summary.txt", "placement.csv", "trace.tsv"}) {
    EXPECT_TRUE(fs::exists(dir / f)) << f;
  }
  const auto summary = nlohmann::json::parse(read_text_file(dir / "summary.json"));
  EXPECT_TRUE(summary.at("oracle").at("reconciled").get<bool>());
  EXPECT_TRUE(summary.contains("trace_hash"));
  const auto csv = read_text_file(dir / "transfers.csv");
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "app_id,file_id,src_host,dst_host,class,start_s,end_s,cost_s");
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 21);
  // The written placement reproduces the run.
  const auto topo = build_topology(cfg.topology_spec());
  EXPECT_EQ(parse_placement_csv(topo, read_text_file(dir / "placement.csv")).size(), 20u);
  fs::remove_all(dir);
}

TEST(MixGrid, Parsing) {
  const auto step = parse_mix_grid("step=0.5");
  // Compositions of 2 into 4 parts.
  EXPECT_EQ(step.size(), 10u);
  for (const auto& m : step) EXPECT_NO_THROW(m.validate());
  const auto listed = parse_mix_grid("1,0,0,0; 0.5,0.5,0,0");
  ASSERT_EQ(listed.size(), 2u);
  EXPECT_EQ(listed[1].fractions[1], 0.5);
  EXPECT_THROW(parse_mix_grid("step=0.3"), Error);
  EXPECT_THROW(parse_mix_grid("1,0,0"), Error);
  EXPECT_THROW(parse_mix_grid("0.5,0.4,0,0"), Error);
}

TEST(Sweep, RunsEveryPointAndRecordsFailures) {
  auto cfg = ScenarioConfig::uniform(1, 2, 2, 100.0, 64.0, 8, LocalityMix::of(1, 0, 0, 0));
  const auto dir = scratch("sweep");
  const auto points = run_sweep(cfg, parse_mix_grid("1,0,0,0;0,1,0,0;0,0,0,1"), dir, 2);
  ASSERT_EQ(points.size(), 3u);
  EXPECT_TRUE(points[0].report.has_value());
  EXPECT_TRUE(points[1].report.has_value());
  EXPECT_FALSE(points[2].report.has_value());  // single aggregate: no root-local host
  EXPECT_NE(points[2].error.find("InfeasibleMix"), std::string::npos);
  EXPECT_TRUE(fs::exists(dir / "sweep.csv"));
  EXPECT_TRUE(fs::exists(dir / "run_000" / "summary.json"));
  fs::remove_all(dir);
}
