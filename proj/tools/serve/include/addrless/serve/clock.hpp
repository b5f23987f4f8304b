#pragma once

#include <chrono>
#include <functional>

#include "addrless/codec.hpp"

namespace addrless::serve {

using Clock = std::function<TimeMs()>;

inline TimeMs wall_clock_ms() {
  return std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::system_clock::now().time_since_epoch())
      .count();
}

}  // namespace addrless::serve
