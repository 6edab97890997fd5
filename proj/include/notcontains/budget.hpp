#pragma once

#include <chrono>
#include <optional>

#include "notcontains/word.hpp"

namespace notcontains {

/// Optional wall-clock limit; check() throws CapExceeded("time-limit") once expired.
class Deadline {
 public:
  using Clock = std::chrono::steady_clock;

  Deadline() = default;
  explicit Deadline(std::chrono::milliseconds limit) : end_(Clock::now() + limit) {}

  static Deadline after_ms(std::size_t ms) {
    return ms == 0 ? Deadline{} : Deadline{std::chrono::milliseconds(ms)};
  }

  bool expired() const { return end_ && Clock::now() >= *end_; }

  void check() const {
    if (expired()) throw CapExceeded("time-limit");
  }

 private:
  std::optional<Clock::time_point> end_;
};

}  // namespace notcontains
