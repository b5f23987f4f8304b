#pragma once

#include <cstdint>
#include <functional>
#include <queue>
#include <vector>

namespace addrless::sim {

/// Virtual clock plus pending events. Events run in (time, insertion order);
/// time never moves backwards.
class SimClock {
 public:
  using Action = std::function<void()>;

  std::int64_t now() const noexcept { return now_; }

  /// Throws DomainError for a time in the past.
  void schedule_at(std::int64_t time_ms, Action action);
  void schedule_in(std::int64_t delay_ms, Action action) { schedule_at(now_ + delay_ms, std::move(action)); }

  /// Runs the earliest event. Returns false when the queue is empty.
  bool step();
  void run();

  std::size_t pending() const noexcept { return queue_.size(); }
  std::uint64_t executed() const noexcept { return executed_; }

 private:
  struct Event {
    std::int64_t time;
    std::uint64_t seq;
    Action action;
  };
  struct Later {
    bool operator()(const Event& a, const Event& b) const noexcept {
      return a.time != b.time ? a.time > b.time : a.seq > b.seq;
    }
  };

  std::int64_t now_ = 0;
  std::uint64_t next_seq_ = 0;
  std::uint64_t executed_ = 0;
  std::priority_queue<Event, std::vector<Event>, Later> queue_;
};

/// Seeded generator with platform-independent helpers, so a (scenario, seed)
/// pair replays identically everywhere.
class SimRng {
 public:
  explicit SimRng(std::uint64_t seed) noexcept;

  std::uint64_t next() noexcept;
  /// Uniform in [0, n); n > 0.
  std::uint64_t below(std::uint64_t n) noexcept;
  /// Uniform in [lo, hi].
  std::int64_t between(std::int64_t lo, std::int64_t hi) noexcept;
  /// Uniform in [0, 1).
  double unit() noexcept;
  bool chance(double p) noexcept { return p >= 1.0 || (p > 0.0 && unit() < p); }

 private:
  std::uint64_t s_[4];
};

}  // namespace addrless::sim
