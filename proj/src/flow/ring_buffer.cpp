#include "mor/flow/ring_buffer.hpp"

#include "mor/error.hpp"

namespace mor::flow {

FrameRingBuffer::FrameRingBuffer(std::size_t capacity) : capacity_(capacity) {
  if (capacity_ == 0) throw ConfigError("ring buffer capacity must be positive");
}

void FrameRingBuffer::push(FrameRecord frame) {
  std::unique_lock lock(mutex_);
  if (!frames_.empty() && frame.index != frames_.back().index + 1) {
    throw Error("ring buffer expects frame " + std::to_string(frames_.back().index + 1) +
                ", got " + std::to_string(frame.index));
  }
  frames_.push_back(std::move(frame));
  while (frames_.size() > capacity_) frames_.pop_front();
}

bool FrameRingBuffer::contains(std::int64_t index) const {
  std::shared_lock lock(mutex_);
  return !frames_.empty() && index >= frames_.front().index && index <= frames_.back().index;
}

FrameRecord FrameRingBuffer::at(std::int64_t index) const {
  AccessObserver observer;
  FrameRecord out;
  {
    std::shared_lock lock(mutex_);
    if (frames_.empty() || index < frames_.front().index || index > frames_.back().index) {
      throw NotEnoughHistory(index);
    }
    out = frames_[static_cast<std::size_t>(index - frames_.front().index)];
    observer = observer_;
  }
  if (observer) observer(index);
  return out;
}

std::optional<std::int64_t> FrameRingBuffer::latest() const {
  std::shared_lock lock(mutex_);
  if (frames_.empty()) return std::nullopt;
  return frames_.back().index;
}

std::size_t FrameRingBuffer::size() const {
  std::shared_lock lock(mutex_);
  return frames_.size();
}

void FrameRingBuffer::set_access_observer(AccessObserver observer) {
  std::unique_lock lock(mutex_);
  observer_ = std::move(observer);
}

}  // namespace mor::flow
