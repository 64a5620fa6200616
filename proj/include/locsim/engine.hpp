#pragma once

#include <cstdint>
#include <deque>
#include <functional>
#include <optional>
#include <queue>
#include <string>
#include <variant>
#include <vector>

namespace locsim {

using EntityId = std::uint32_t;
using EventId = std::uint64_t;

namespace events {

struct TransferStart {
  std::uint64_t transfer = 0;
};
struct TransferComplete {
  std::uint64_t transfer = 0;
};
// Re-evaluation point for a transfer whose rate may have changed; stale
// generations are ignored by the receiver.
struct TransferProgress {
  std::uint64_t transfer = 0;
  std::uint64_t generation = 0;
};
struct StageComplete {
  std::uint32_t stage = 0;
};
struct TaskFinish {};

}  // namespace events

using Payload = std::variant<events::TransferStart, events::TransferComplete, events::TransferProgress,
                             events::StageComplete, events::TaskFinish>;

std::string_view kind_name(const Payload& p) noexcept;
std::string detail_of(const Payload& p);

struct SimEvent {
  double time = 0.0;
  EventId seq = 0;
  EntityId target = 0;
  Payload payload;
};

// One trace line: `time\tseq\ttarget\tkind\tdetail` with time at 9 significant digits.
std::string format_trace_line(const SimEvent& e);

// FNV-1a over the concatenated trace lines.
std::uint64_t trace_hash(const std::vector<std::string>& lines) noexcept;

// Future queue ordered by (time, seq) plus a FIFO of events whose time has
// come. run() moves every event stamped with the next timestamp into the
// deferred queue and drains it before the clock advances.
class Simulation {
 public:
  using Dispatcher = std::function<void(Simulation&, const SimEvent&)>;

  double now() const noexcept { return now_; }
  bool empty() const noexcept { return future_.empty() && deferred_.empty(); }
  std::size_t pending() const noexcept { return future_.size() + deferred_.size(); }

  // Enqueue at now() + delay. Throws NegativeDelay for delay < 0.
  EventId schedule(double delay, EntityId target, Payload payload);

  // Runs to exhaustion and returns the final clock. A dispatcher that throws
  // aborts the run with DispatchFailure naming the offending event.
  double run(const Dispatcher& dispatch);

  void enable_trace(bool on = true) { tracing_ = on; }
  const std::vector<std::string>& trace() const noexcept { return trace_; }
  std::size_t processed() const noexcept { return processed_; }

 private:
  struct Later {
    bool operator()(const SimEvent& a, const SimEvent& b) const noexcept {
      return a.time != b.time ? a.time > b.time : a.seq > b.seq;
    }
  };

  std::priority_queue<SimEvent, std::vector<SimEvent>, Later> future_;
  std::deque<SimEvent> deferred_;
  double now_ = 0.0;
  EventId next_seq_ = 0;
  std::size_t processed_ = 0;
  bool tracing_ = false;
  std::vector<std::string> trace_;
};

}  // namespace locsim
