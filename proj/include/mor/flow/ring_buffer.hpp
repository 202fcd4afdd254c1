#pragma once

#include <cstdint>
#include <deque>
#include <functional>
#include <mutex>
#include <optional>
#include <shared_mutex>

#include "mor/core/types.hpp"

namespace mor::flow {

/// Holds the most recent `capacity` frames of a stream.
///
/// Single writer (push), any number of readers once a push has returned.
/// An optional access observer sees every index that is read, which lets
/// callers audit the online contract of downstream stages.
class FrameRingBuffer {
 public:
  using AccessObserver = std::function<void(std::int64_t)>;

  explicit FrameRingBuffer(std::size_t capacity = 6);

  /// Appends the next frame. Indices must increase by exactly one per push
  /// (the first push may start anywhere).
  void push(FrameRecord frame);

  /// Frame `index`, or NotEnoughHistory when it was never pushed or has been evicted.
  [[nodiscard]] FrameRecord at(std::int64_t index) const;
  [[nodiscard]] bool contains(std::int64_t index) const;

  /// Index of the newest frame, if any.
  [[nodiscard]] std::optional<std::int64_t> latest() const;
  [[nodiscard]] std::size_t capacity() const noexcept { return capacity_; }
  [[nodiscard]] std::size_t size() const;

  void set_access_observer(AccessObserver observer);

 private:
  std::size_t capacity_;
  std::deque<FrameRecord> frames_;
  AccessObserver observer_;
  mutable std::shared_mutex mutex_;
};

}  // namespace mor::flow
