#include "locsim/simulator.hpp"

#include <map>
#include <set>

#include <fmt/format.h>

#include "locsim/cost_model.hpp"
#include "locsim/error.hpp"

namespace locsim {

std::string_view to_string(ContentionMode m) noexcept {
  switch (m) {
    case ContentionMode::None: return "none";
    case ContentionMode::FairShare: return "fair_share";
  }
  return "?";
}

namespace {

constexpr EntityId kNetwork = 0;

struct TaskState {
  std::size_t app = 0;
  const NetworkTask* task = nullptr;
  EntityId entity = 0;
  std::uint32_t stage = 0;
  bool finished = false;
  // Peers whose transfer to this task completed before the Receive was reached.
  std::multiset<TaskIndex> arrived;
};

struct TransferState {
  std::size_t sender = 0;    // index into tasks_
  std::size_t receiver = 0;  // index into tasks_
  std::uint32_t send_stage = 0;
  Path path;
  double size_mb = 0.0;
  double contention_free_cost = 0.0;
  double delay_total = 0.0;
  // Links crossed, keyed by child endpoint.
  std::vector<NodeId> links;
  double start = 0.0;
  double end = 0.0;
  bool started = false;
  bool completed = false;

  // fair_share bookkeeping
  double remaining = 1.0;
  double seconds_per_unit = 0.0;
  double last_update = 0.0;
  std::uint64_t generation = 0;
  bool in_data_phase = false;
};

class Runner {
 public:
  Runner(const Topology& t, const VmRegistry& vms, const std::vector<ApplicationCloudlet>& apps,
         ContentionMode contention)
      : topology_(t), vms_(vms), apps_(apps), contention_(contention) {
    for (std::size_t a = 0; a < apps.size(); ++a) {
      apps[a].validate();
      for (const auto& task : apps[a].tasks) {
        index_.emplace(std::pair{a, task.task_id}, tasks_.size());
        tasks_.push_back(TaskState{a, &task, static_cast<EntityId>(tasks_.size() + 1), 0, false, {}});
      }
    }
  }

  SimulationOutcome run(bool trace) {
    sim_.enable_trace(trace);
    for (std::size_t i = 0; i < tasks_.size(); ++i) enter_stage(i, 0);
    SimulationOutcome out;
    out.final_time = sim_.run([this](Simulation&, const SimEvent& ev) { dispatch(ev); });
    out.events = sim_.processed();
    check_conservation();

    out.records.reserve(transfers_.size());
    for (const auto& tr : transfers_) {
      const auto& app = apps_[tasks_[tr.sender].app];
      out.records.push_back(TransferRecord{app.app_id, app.file_id, tr.path.moves.front().from, tr.path.moves.back().to,
                                           tr.path.locality, tr.start, tr.end, tr.end - tr.start});
    }
    out.trace = sim_.trace();
    return out;
  }

 private:
  NodeId host_of(const TaskState& ts) const { return vms_.at(ts.task->vm_id).host; }

  NodeId child_endpoint(const Move& m) const {
    const auto p = topology_.parent(m.from);
    return p && *p == m.to ? m.from : m.to;
  }

  std::size_t task_index(std::size_t app, TaskIndex id) const { return index_.at({app, id}); }

  void enter_stage(std::size_t ti, std::uint32_t k) {
    TaskState& ts = tasks_[ti];
    ts.stage = k;
    const Stage& s = ts.task->stages.at(k);
    switch (s.kind) {
      case StageKind::Execute:
        sim_.schedule(s.work_amount, ts.entity, events::StageComplete{k});
        break;
      case StageKind::Send: {
        TransferState tr;
        tr.sender = ti;
        tr.receiver = task_index(ts.app, s.peer_task);
        tr.send_stage = k;
        tr.size_mb = s.data_size->megabytes();
        tr.path = build_path(topology_, host_of(ts), host_of(tasks_[tr.receiver]));
        tr.contention_free_cost = path_cost(tr.path, *s.data_size).total;
        for (const Move& m : tr.path.moves) {
          tr.delay_total += m.link.delay;
          if (!m.is_self()) tr.links.push_back(child_endpoint(m));
        }
        transfers_.push_back(std::move(tr));
        sim_.schedule(0.0, kNetwork, events::TransferStart{transfers_.size() - 1});
        break;
      }
      case StageKind::Receive:
        if (auto it = ts.arrived.find(s.peer_task); it != ts.arrived.end()) {
          ts.arrived.erase(it);
          sim_.schedule(0.0, ts.entity, events::StageComplete{k});
        }
        break;
      case StageKind::Finish:
        sim_.schedule(0.0, ts.entity, events::TaskFinish{});
        break;
    }
  }

  TaskState& task_for(EntityId entity) {
    if (entity == kNetwork || entity > tasks_.size()) throw Error(ErrorCode::DispatchFailure, "unknown entity");
    return tasks_[entity - 1];
  }

  TransferState& transfer(std::uint64_t id) {
    if (id >= transfers_.size()) throw Error(ErrorCode::DispatchFailure, fmt::format("unknown transfer {}", id));
    return transfers_[id];
  }

  void dispatch(const SimEvent& ev) {
    std::visit([&](const auto& e) { on(ev, e); }, ev.payload);
  }

  void on(const SimEvent& ev, const events::StageComplete& e) {
    TaskState& ts = task_for(ev.target);
    if (ts.finished || ts.stage != e.stage) {
      throw Error(ErrorCode::DispatchFailure, fmt::format("stage {} completed while task is at stage {}", e.stage, ts.stage));
    }
    enter_stage(ev.target - 1, e.stage + 1);
  }

  void on(const SimEvent& ev, const events::TaskFinish&) {
    TaskState& ts = task_for(ev.target);
    if (ts.finished) throw Error(ErrorCode::DispatchFailure, "task finished twice");
    ts.finished = true;
  }

  void on(const SimEvent&, const events::TransferStart& e) {
    TransferState& tr = transfer(e.transfer);
    if (tr.started) throw Error(ErrorCode::DispatchFailure, "transfer started twice");
    tr.started = true;
    tr.start = sim_.now();
    if (contention_ == ContentionMode::None) {
      sim_.schedule(tr.contention_free_cost, kNetwork, events::TransferComplete{e.transfer});
      return;
    }
    advance_active();
    tr.in_data_phase = true;
    tr.remaining = 1.0;
    active_.insert(e.transfer);
    for (NodeId l : tr.links) ++link_load_[l];
    reschedule_active();
  }

  void on(const SimEvent&, const events::TransferProgress& e) {
    TransferState& tr = transfer(e.transfer);
    if (!tr.in_data_phase || e.generation != tr.generation) return;
    advance_active();
    tr.in_data_phase = false;
    tr.remaining = 0.0;
    active_.erase(e.transfer);
    for (NodeId l : tr.links) --link_load_[l];
    sim_.schedule(tr.delay_total, kNetwork, events::TransferComplete{e.transfer});
    reschedule_active();
  }

  void on(const SimEvent&, const events::TransferComplete& e) {
    TransferState& tr = transfer(e.transfer);
    if (!tr.started || tr.completed) throw Error(ErrorCode::DispatchFailure, "transfer completed twice or before start");
    tr.completed = true;
    tr.end = sim_.now();

    TaskState& sender = tasks_[tr.sender];
    sim_.schedule(0.0, sender.entity, events::StageComplete{tr.send_stage});

    TaskState& receiver = tasks_[tr.receiver];
    const Stage& cur = receiver.task->stages.at(receiver.stage);
    if (!receiver.finished && cur.kind == StageKind::Receive && cur.peer_task == sender.task->task_id) {
      sim_.schedule(0.0, receiver.entity, events::StageComplete{receiver.stage});
    } else {
      receiver.arrived.insert(sender.task->task_id);
    }
  }

  // fair_share: charge elapsed time to every transfer in its data phase.
  void advance_active() {
    const double now = sim_.now();
    for (auto id : active_) {
      TransferState& tr = transfers_[id];
      tr.remaining -= (now - tr.last_update) / tr.seconds_per_unit;
      if (tr.remaining < 0.0) tr.remaining = 0.0;
      tr.last_update = now;
    }
  }

  void reschedule_active() {
    const double now = sim_.now();
    for (auto id : active_) {
      TransferState& tr = transfers_[id];
      double per_unit = 0.0;
      for (const Move& m : tr.path.moves) {
        if (!m.is_self()) {
          per_unit += tr.size_mb * static_cast<double>(link_load_.at(child_endpoint(m))) / m.link.bandwidth;
        } else if (m.from_kind == NodeKind::Host) {
          per_unit += tr.size_mb / m.link.bandwidth;
        }
      }
      tr.seconds_per_unit = per_unit;
      tr.last_update = now;
      ++tr.generation;
      sim_.schedule(tr.remaining * per_unit, kNetwork, events::TransferProgress{id, tr.generation});
    }
  }

  void check_conservation() const {
    for (std::size_t i = 0; i < transfers_.size(); ++i) {
      if (!transfers_[i].started || !transfers_[i].completed) {
        throw Error(ErrorCode::DispatchFailure, fmt::format("transfer {} never completed", i));
      }
    }
    for (const auto& ts : tasks_) {
      if (!ts.finished) {
        throw Error(ErrorCode::DispatchFailure, fmt::format("task {} of application {} never finished",
                                                            ts.task->task_id, apps_[ts.app].app_id));
      }
    }
  }

  const Topology& topology_;
  const VmRegistry& vms_;
  const std::vector<ApplicationCloudlet>& apps_;
  ContentionMode contention_;
  Simulation sim_;
  std::vector<TaskState> tasks_;
  std::map<std::pair<std::size_t, TaskIndex>, std::size_t> index_;
  std::vector<TransferState> transfers_;
  std::set<std::uint64_t> active_;
  std::map<NodeId, std::size_t> link_load_;
};

}  // namespace

SimulationOutcome simulate(const Topology& topology, const VmRegistry& vms,
                           const std::vector<ApplicationCloudlet>& apps, ContentionMode contention, bool trace) {
  Runner runner(topology, vms, apps, contention);
  return runner.run(trace);
}

}  // namespace locsim
