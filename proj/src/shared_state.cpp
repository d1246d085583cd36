#include "evfront/shared_state.hpp"

#include <algorithm>

namespace evfront {

namespace {

double micros_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double, std::micro>(std::chrono::steady_clock::now() - start).count();
}

}  // namespace

SharedSurfaceState::SharedSurfaceState(SensorGeometry geometry, std::size_t ring_capacity)
  : geometry_(geometry), state_(geometry, ring_capacity) {}

void SharedSurfaceState::apply(std::span<const Event> events, std::optional<Timestamp> read_through) {
  if (events.empty()) {
    if (read_through) mark_read_through(*read_through);
    return;
  }
  const auto wait_start = std::chrono::steady_clock::now();
  std::unique_lock lock(gate_);
  const double stalled = micros_since(wait_start);
  stats_.writer_stall_max_us = std::max(stats_.writer_stall_max_us, stalled);
  stats_.writer_stall_total_us += stalled;
  state_.apply(events);
  if (read_through) read_through_ = std::max(read_through_, *read_through);
  version_.fetch_add(1, std::memory_order_release);
  lock.unlock();
  updated_.notify_all();
}

void SharedSurfaceState::mark_read_through(Timestamp t) {
  std::lock_guard lock(gate_);
  read_through_ = std::max(read_through_, t);
}

Snapshot SharedSurfaceState::copy_locked() const {
  const auto start = std::chrono::steady_clock::now();
  Snapshot s{state_, version_.load(std::memory_order_relaxed), start, read_through_};
  const double took = micros_since(start);
  stats_.copy_max_us = std::max(stats_.copy_max_us, took);
  stats_.copy_total_us += took;
  ++stats_.snapshots;
  return s;
}

Snapshot SharedSurfaceState::freeze_snapshot() const {
  std::lock_guard lock(gate_);
  return copy_locked();
}

bool SharedSurfaceState::wait_and_freeze(std::uint64_t seen, Snapshot& out) const {
  std::unique_lock lock(gate_);
  updated_.wait(lock, [&] { return version_.load(std::memory_order_relaxed) > seen || closed_; });
  if (version_.load(std::memory_order_relaxed) <= seen) return false;
  out = copy_locked();
  return true;
}

void SharedSurfaceState::close() {
  {
    std::lock_guard lock(gate_);
    closed_ = true;
  }
  updated_.notify_all();
}

GateStats SharedSurfaceState::gate_stats() const {
  std::lock_guard lock(gate_);
  return stats_;
}

std::size_t preprocess_tick(SharedSurfaceState& state, std::vector<Event>& pending, Timestamp watermark,
                            std::optional<Timestamp> read_through) {
  const auto split = std::upper_bound(pending.begin(), pending.end(), watermark,
                                      [](Timestamp w, const Event& e) { return w < e.t; });
  const auto count = std::size_t(split - pending.begin());
  state.apply(std::span<const Event>(pending.data(), count), read_through);
  if (count == 0) return 0;
  pending.erase(pending.begin(), split);
  return count;
}

}  // namespace evfront
