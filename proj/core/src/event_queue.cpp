#include "addrless/event_queue.hpp"

#include <bit>
#include <string>

#include "addrless/errors.hpp"

namespace addrless::sim {

void SimClock::schedule_at(std::int64_t time_ms, Action action) {
  if (time_ms < now_) {
    throw DomainError("event scheduled at " + std::to_string(time_ms) + " ms, before now (" +
                      std::to_string(now_) + " ms)");
  }
  queue_.push(Event{time_ms, next_seq_++, std::move(action)});
}

bool SimClock::step() {
  if (queue_.empty()) return false;
  // Moving out of top() is fine: the heap ordering reads only time and seq.
  Event ev = std::move(const_cast<Event&>(queue_.top()));
  queue_.pop();
  now_ = ev.time;
  ++executed_;
  ev.action();
  return true;
}

void SimClock::run() {
  while (step()) {
  }
}

// xoshiro256** seeded through splitmix64.
SimRng::SimRng(std::uint64_t seed) noexcept {
  for (auto& s : s_) {
    seed += 0x9E3779B97F4A7C15ULL;
    std::uint64_t z = seed;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    s = z ^ (z >> 31);
  }
}

std::uint64_t SimRng::next() noexcept {
  const std::uint64_t result = std::rotl(s_[1] * 5, 7) * 9;
  const std::uint64_t t = s_[1] << 17;
  s_[2] ^= s_[0];
  s_[3] ^= s_[1];
  s_[1] ^= s_[2];
  s_[0] ^= s_[3];
  s_[2] ^= t;
  s_[3] = std::rotl(s_[3], 45);
  return result;
}

std::uint64_t SimRng::below(std::uint64_t n) noexcept {
  // Rejection keeps the draw unbiased.
  const std::uint64_t limit = ~0ULL - (~0ULL % n);
  std::uint64_t x;
  do {
    x = next();
  } while (x >= limit);
  return x % n;
}

std::int64_t SimRng::between(std::int64_t lo, std::int64_t hi) noexcept {
  if (hi <= lo) return lo;
  const auto span = static_cast<std::uint64_t>(hi) - static_cast<std::uint64_t>(lo);
  if (span == ~0ULL) return static_cast<std::int64_t>(next());
  return lo + static_cast<std::int64_t>(below(span + 1));
}

double SimRng::unit() noexcept { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

}  // namespace addrless::sim
