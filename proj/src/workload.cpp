#include "locsim/workload.hpp"

#include <charconv>
#include <set>
#include <sstream>

#include "locsim/error.hpp"

namespace locsim {

std::string_view to_string(StageKind k) noexcept {
  switch (k) {
    case StageKind::Send: return "send";
    case StageKind::Receive: return "receive";
    case StageKind::Execute: return "execute";
    case StageKind::Finish: return "finish";
  }
  return "?";
}

void ApplicationCloudlet::validate() const {
  const auto fail = [this](const std::string& why) {
    throw Error(ErrorCode::InvalidParameter, "application " + std::to_string(app_id) + ": " + why);
  };
  std::set<TaskIndex> ids;
  for (const auto& task : tasks) {
    if (!ids.insert(task.task_id).second) fail("duplicate task id " + std::to_string(task.task_id));
  }
  const auto find = [this](TaskIndex id) -> const NetworkTask* {
    for (const auto& t : tasks) {
      if (t.task_id == id) return &t;
    }
    return nullptr;
  };
  for (const auto& task : tasks) {
    if (task.stages.empty() || task.stages.back().kind != StageKind::Finish) {
      fail("task " + std::to_string(task.task_id) + " does not end with Finish");
    }
    for (std::size_t i = 0; i < task.stages.size(); ++i) {
      const Stage& s = task.stages[i];
      if (s.kind == StageKind::Finish && i + 1 != task.stages.size()) {
        fail("task " + std::to_string(task.task_id) + " has Finish before its last stage");
      }
      if (s.kind == StageKind::Execute && !(s.work_amount >= 0.0)) fail("negative execute work");
      if (s.kind != StageKind::Send && s.kind != StageKind::Receive) continue;
      if (!s.data_size) fail("transfer stage without data size");
      const NetworkTask* peer = find(s.peer_task);
      if (peer == nullptr) fail("unresolved peer task " + std::to_string(s.peer_task));
      const StageKind want = s.kind == StageKind::Send ? StageKind::Receive : StageKind::Send;
      std::size_t matches = 0;
      for (const Stage& ps : peer->stages) {
        if (ps.kind == want && ps.peer_task == task.task_id && ps.data_size == s.data_size) ++matches;
      }
      if (matches != 1) {
        fail("task " + std::to_string(task.task_id) + " " + std::string(to_string(s.kind)) +
             " has no unique matching " + std::string(to_string(want)) + " on task " + std::to_string(s.peer_task));
      }
    }
  }
}

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::uint64_t parse_field(std::string_view raw, std::size_t line_no, std::string_view name) {
  const std::string_view s = trim(raw);
  std::uint64_t v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc{} || ptr != s.data() + s.size()) {
    throw Error(ErrorCode::ParseError, "line " + std::to_string(line_no) + ": " + std::string(name) +
                                           " is not a non-negative integer: '" + std::string(s) + "'");
  }
  return v;
}

}  // namespace

std::vector<WorkflowLine> parse_workflow(std::string_view text) {
  std::vector<WorkflowLine> out;
  std::size_t line_no = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    const std::string_view line = trim(text.substr(0, nl));
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    if (line.empty() || line.front() == '#') continue;

    std::vector<std::string_view> fields;
    std::size_t start = 0;
    for (;;) {
      const auto comma = line.find(',', start);
      fields.push_back(line.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start));
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
    if (fields.size() != 3) {
      throw Error(ErrorCode::ParseError, "line " + std::to_string(line_no) + ": expected 3 fields, got " +
                                             std::to_string(fields.size()));
    }
    out.push_back(WorkflowLine{parse_field(fields[0], line_no, "app_id"), parse_field(fields[1], line_no, "file_id"),
                               parse_field(fields[2], line_no, "vm_id"), line_no});
  }
  return out;
}

std::string format_workflow(const std::vector<WorkflowLine>& lines) {
  std::ostringstream out;
  for (const auto& l : lines) out << l.app_id << ", " << l.file_id << ", " << l.vm_id << '\n';
  return out.str();
}

ApplicationCloudlet build_default_app(const WorkflowLine& line, const NameNodeTable& table, VmRegistry& vms,
                                      FileSize chunk_size, double work_amount) {
  const NodeId replica = table.lookup(line.file_id);
  const Vm& receiver_vm = vms.at(line.vm_id);
  const Vm& sender_vm = vms.vm_on_host(replica);

  ApplicationCloudlet app;
  app.app_id = line.app_id;
  app.file_id = line.file_id;
  app.tasks.push_back(NetworkTask{kSenderTask, sender_vm.vm_id,
                                  {Stage::execute(0.0), Stage::send(chunk_size, kReceiverTask), Stage::finish()}});
  app.tasks.push_back(NetworkTask{kReceiverTask, receiver_vm.vm_id,
                                  {Stage::receive(chunk_size, kSenderTask), Stage::execute(work_amount), Stage::finish()}});
  app.validate();
  return app;
}

}  // namespace locsim
