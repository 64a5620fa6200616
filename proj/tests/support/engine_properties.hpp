#pragma once

// Randomized event programs for checking the engine's ordering laws.

#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "locsim/engine.hpp"

namespace locsim::test_support {

struct EngineProgramResult {
  std::size_t events = 0;
  std::size_t starts = 0;
  std::optional<std::string> failure;
};

// Seeds a queue with transfer starts at coarse (tie-heavy) times. Each start
// schedules exactly one completion after a random delay, sometimes zero, and
// occasionally a further start. Checks, over the processed sequence:
//   - time never decreases and equals the clock at dispatch;
//   - at equal times, seq strictly increases (FIFO);
//   - each start is followed by exactly one completion, never before it.
inline EngineProgramResult run_random_event_program(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> coarse(0, 8);
  std::uniform_int_distribution<int> initial(1, 40);
  std::bernoulli_distribution zero_delay(0.25);
  std::bernoulli_distribution spawn(0.3);

  EngineProgramResult result;
  Simulation sim;
  std::uint64_t next_transfer = 0;
  const int n = initial(rng);
  for (int i = 0; i < n; ++i) sim.schedule(coarse(rng) * 0.5, 0, events::TransferStart{next_transfer++});

  std::map<std::uint64_t, int> started;
  std::map<std::uint64_t, int> completed;
  double last_time = -1.0;
  EventId last_seq = 0;
  bool have_last = false;

  const auto fail = [&](std::string why) {
    if (!result.failure) result.failure = std::move(why);
  };

  sim.run([&](Simulation& s, const SimEvent& e) {
    ++result.events;
    if (e.time != s.now()) fail("clock does not match event time");
    if (have_last) {
      if (e.time < last_time) fail("time decreased");
      if (e.time == last_time && e.seq <= last_seq) fail("equal-time events out of seq order");
    }
    have_last = true;
    last_time = e.time;
    last_seq = e.seq;

    if (const auto* st = std::get_if<events::TransferStart>(&e.payload)) {
      ++started[st->transfer];
      ++result.starts;
      const double delay = zero_delay(rng) ? 0.0 : coarse(rng) * 0.25;
      s.schedule(delay, 0, events::TransferComplete{st->transfer});
      if (spawn(rng) && next_transfer < 400) s.schedule(coarse(rng) * 0.5, 0, events::TransferStart{next_transfer++});
    } else if (const auto* done = std::get_if<events::TransferComplete>(&e.payload)) {
      if (started[done->transfer] != 1) fail("completion without a prior start");
      ++completed[done->transfer];
    }
  });

  if (started.size() != next_transfer) fail("not every scheduled start was processed");
  for (const auto& [id, count] : started) {
    if (count != 1) fail("transfer started more than once");
    if (completed[id] != 1) fail("transfer " + std::to_string(id) + " completed " + std::to_string(completed[id]) + " times");
  }
  return result;
}

}  // namespace locsim::test_support
