#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "locsim/cost_model.hpp"
#include "locsim/placement.hpp"
#include "locsim/vm.hpp"

namespace locsim {

using AppId = std::uint64_t;
using TaskIndex = std::uint32_t;

enum class StageKind : std::uint8_t { Send, Receive, Execute, Finish };

std::string_view to_string(StageKind k) noexcept;

struct Stage {
  StageKind kind = StageKind::Finish;
  std::optional<FileSize> data_size;  // Send / Receive
  TaskIndex peer_task = 0;            // Send / Receive
  double work_amount = 0.0;           // Execute, in simulated seconds

  static Stage send(FileSize size, TaskIndex peer) { return {StageKind::Send, size, peer, 0.0}; }
  static Stage receive(FileSize size, TaskIndex peer) { return {StageKind::Receive, size, peer, 0.0}; }
  static Stage execute(double work) { return {StageKind::Execute, std::nullopt, 0, work}; }
  static Stage finish() { return {}; }
};

struct NetworkTask {
  TaskIndex task_id = 0;
  VmId vm_id = 0;
  std::vector<Stage> stages;
};

struct ApplicationCloudlet {
  AppId app_id = 0;
  FileId file_id = 0;
  std::vector<NetworkTask> tasks;

  // Throws InvalidParameter on duplicate task ids, a missing or misplaced
  // Finish, unresolved peers, or a Send without a matching Receive.
  void validate() const;
};

struct WorkflowLine {
  AppId app_id = 0;
  FileId file_id = 0;
  VmId vm_id = 0;
  std::size_t line_no = 0;

  bool same_fields(const WorkflowLine& o) const noexcept {
    return app_id == o.app_id && file_id == o.file_id && vm_id == o.vm_id;
  }
};

// `app_id,file_id,vm_id` per line; blank lines and `#` comments skipped.
std::vector<WorkflowLine> parse_workflow(std::string_view text);
std::string format_workflow(const std::vector<WorkflowLine>& lines);

inline constexpr TaskIndex kSenderTask = 0;
inline constexpr TaskIndex kReceiverTask = 1;

// Two-task map read: the sender on a VM at the file's replica host runs
// [Execute(0), Send, Finish]; the receiver on line.vm_id runs
// [Receive, Execute(work_amount), Finish].
ApplicationCloudlet build_default_app(const WorkflowLine& line, const NameNodeTable& table, VmRegistry& vms,
                                      FileSize chunk_size, double work_amount = 0.0);

}  // namespace locsim
