// Independent arithmetic for the toy-cipher scan experiments.
#pragma once

#include <cmath>
#include <cstdint>

namespace oracle {

// Salts s >= 0 whose send time t0 + s*step lies strictly inside
// (now - threshold, now).
inline std::int64_t live_salts(std::int64_t now, std::int64_t t0, std::int64_t step, std::int64_t threshold) {
  std::int64_t count = 0;
  const std::int64_t newest = (now - t0) / step;
  for (std::int64_t s = newest; s >= 0; --s) {
    const std::int64_t lag = now - (t0 + s * step);
    if (lag >= threshold) break;
    if (lag > 0) ++count;
  }
  return count;
}

struct HitExpectation {
  double mean = 0.0;
  double sigma = 0.0;
};

// Probe i arrives at first_arrival + i * interval and hits with probability
// live_salts / 2^16.
inline HitExpectation random_scan_expectation(std::int64_t probes, std::int64_t first_arrival, std::int64_t interval,
                                              std::int64_t t0, std::int64_t step, std::int64_t threshold) {
  HitExpectation e;
  double var = 0.0;
  for (std::int64_t i = 0; i < probes; ++i) {
    const double p =
        static_cast<double>(live_salts(first_arrival + i * interval, t0, step, threshold)) / 65536.0;
    e.mean += p;
    var += p * (1.0 - p);
  }
  e.sigma = std::sqrt(var);
  return e;
}

}  // namespace oracle
