#pragma once

#include "evfront/surface.hpp"

#include <atomic>
#include <chrono>
#include <condition_variable>
#include <cstdint>
#include <mutex>
#include <optional>
#include <span>
#include <vector>

namespace evfront {

/// Immutable copy of the shared surface state at one update version.
struct Snapshot {
  SurfaceState state;
  std::uint64_t version = 0;
  std::chrono::steady_clock::time_point taken_at{};  // when the copy began
  Timestamp source_read_through = 0;  // writer progress, see mark_read_through
};

struct GateStats {
  double writer_stall_max_us = 0.0;
  double writer_stall_total_us = 0.0;
  double copy_max_us = 0.0;
  double copy_total_us = 0.0;
  std::uint64_t snapshots = 0;
};

/// Timestamp grid and event ring shared between one preprocessing writer and
/// one frontend reader. Updates and snapshot copies exclude each other; a
/// snapshot therefore always equals the stream prefix at a single version.
class SharedSurfaceState {
public:
  SharedSurfaceState(SensorGeometry geometry, std::size_t ring_capacity);

  /// Applies one update batch and bumps the version if it is non-empty.
  /// Blocks while a snapshot is being copied. `read_through`, if given, is
  /// recorded atomically with the update (see mark_read_through).
  void apply(std::span<const Event> events, std::optional<Timestamp> read_through = std::nullopt);

  /// Records that the writer has consumed the source up to `t` (exclusive),
  /// whether or not that produced an update.
  void mark_read_through(Timestamp t);

  /// Copy-then-release: the gate is held only while copying.
  Snapshot freeze_snapshot() const;

  /// Waits until the version exceeds `seen` or `closed()` is called, then
  /// snapshots. Returns false if closed with nothing newer than `seen`.
  bool wait_and_freeze(std::uint64_t seen, Snapshot& out) const;

  /// Wakes waiters; no further updates are expected.
  void close();

  std::uint64_t version() const { return version_.load(std::memory_order_acquire); }
  SensorGeometry geometry() const { return geometry_; }
  GateStats gate_stats() const;

private:
  Snapshot copy_locked() const;

  SensorGeometry geometry_;
  mutable std::mutex gate_;
  mutable std::condition_variable updated_;
  SurfaceState state_;
  std::atomic<std::uint64_t> version_{0};
  Timestamp read_through_ = 0;
  bool closed_ = false;
  mutable GateStats stats_;
};

/// Applies the sorted prefix of `pending` with t <= watermark as one update
/// batch and erases it; newer events stay buffered. Returns the count applied.
std::size_t preprocess_tick(SharedSurfaceState& state, std::vector<Event>& pending, Timestamp watermark,
                            std::optional<Timestamp> read_through = std::nullopt);

}  // namespace evfront
