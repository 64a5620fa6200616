#include "locsim/engine.hpp"

#include <cmath>

#include <fmt/format.h>

#include "locsim/error.hpp"

namespace locsim {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

}  // namespace

std::string_view kind_name(const Payload& p) noexcept {
  return std::visit(overloaded{
                        [](const events::TransferStart&) { return std::string_view("transfer_start"); },
                        [](const events::TransferComplete&) { return std::string_view("transfer_complete"); },
                        [](const events::TransferProgress&) { return std::string_view("transfer_progress"); },
                        [](const events::StageComplete&) { return std::string_view("stage_complete"); },
                        [](const events::TaskFinish&) { return std::string_view("task_finish"); },
                    },
                    p);
}

std::string detail_of(const Payload& p) {
  return std::visit(overloaded{
                        [](const events::TransferStart& e) { return fmt::format("transfer={}", e.transfer); },
                        [](const events::TransferComplete& e) { return fmt::format("transfer={}", e.transfer); },
                        [](const events::TransferProgress& e) {
                          return fmt::format("transfer={} gen={}", e.transfer, e.generation);
                        },
                        [](const events::StageComplete& e) { return fmt::format("stage={}", e.stage); },
                        [](const events::TaskFinish&) { return std::string("-"); },
                    },
                    p);
}

std::string format_trace_line(const SimEvent& e) {
  return fmt::format("{:.9g}\t{}\t{}\t{}\t{}", e.time, e.seq, e.target, kind_name(e.payload), detail_of(e.payload));
}

std::uint64_t trace_hash(const std::vector<std::string>& lines) noexcept {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto mix = [&h](unsigned char c) {
    h ^= c;
    h *= 0x100000001b3ULL;
  };
  for (const auto& line : lines) {
    for (char c : line) mix(static_cast<unsigned char>(c));
    mix('\n');
  }
  return h;
}

EventId Simulation::schedule(double delay, EntityId target, Payload payload) {
  if (!(delay >= 0.0) || !std::isfinite(delay)) {
    throw Error(ErrorCode::NegativeDelay, fmt::format("cannot schedule {} with delay {}", kind_name(payload), delay));
  }
  const EventId seq = next_seq_++;
  future_.push(SimEvent{now_ + delay, seq, target, std::move(payload)});
  return seq;
}

double Simulation::run(const Dispatcher& dispatch) {
  while (!future_.empty()) {
    const double t = future_.top().time;
    while (!future_.empty() && future_.top().time == t) {
      deferred_.push_back(future_.top());
      future_.pop();
    }
    now_ = t;
    while (!deferred_.empty()) {
      SimEvent ev = std::move(deferred_.front());
      deferred_.pop_front();
      if (tracing_) trace_.push_back(format_trace_line(ev));
      ++processed_;
      try {
        dispatch(*this, ev);
      } catch (const std::exception& ex) {
        throw Error(ErrorCode::DispatchFailure, fmt::format("event [{}] rejected: {}", format_trace_line(ev), ex.what()));
      }
    }
  }
  return now_;
}

}  // namespace locsim
