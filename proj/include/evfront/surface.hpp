#pragma once

#include "evfront/tensor.hpp"
#include "evfront/types.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace evfront {

/// Newest event time per pixel and polarity. Because the linear time-surface
/// decay is increasing in event time, this grid is all that is needed to
/// evaluate any window ending at or after the newest applied event.
struct TimestampGrid {
  SensorGeometry geometry;
  std::vector<Timestamp> last_t;   // [2][H][W], channel 0 = negative polarity
  std::vector<std::uint8_t> valid;  // same shape
  Timestamp latest_time = 0;
  Timestamp first_time = 0;
  std::uint64_t applied_count = 0;

  TimestampGrid() = default;
  explicit TimestampGrid(SensorGeometry g);

  std::size_t index(int channel, int y, int x) const {
    return (std::size_t(channel) * std::size_t(geometry.height) + std::size_t(y)) * std::size_t(geometry.width) +
           std::size_t(x);
  }
  bool empty() const { return applied_count == 0; }

  friend bool operator==(const TimestampGrid&, const TimestampGrid&) = default;
};

/// Fixed-capacity circular buffer of the most recent event times, both
/// polarities interleaved in arrival order.
class EventCountRing {
public:
  EventCountRing() = default;
  explicit EventCountRing(std::size_t capacity);

  void push(Timestamp t) {
    buffer_[head_] = t;
    head_ = head_ + 1 == buffer_.size() ? 0 : head_ + 1;
    if (size_ < buffer_.size()) ++size_;
  }

  std::size_t capacity() const { return buffer_.size(); }
  std::size_t size() const { return size_; }
  bool empty() const { return size_ == 0; }

  /// Timestamp `back` positions before the most recent entry (0 = newest).
  Timestamp from_newest(std::size_t back) const;

  /// Retained timestamps, oldest first.
  std::vector<Timestamp> contents() const;

  friend bool operator==(const EventCountRing&, const EventCountRing&) = default;

private:
  std::vector<Timestamp> buffer_;
  std::size_t head_ = 0;
  std::size_t size_ = 0;
};

enum class WindowMode { FixedDuration, ConstantCount };

struct WindowSpec {
  WindowMode mode = WindowMode::ConstantCount;
  std::vector<Timestamp> durations;        // µs, FixedDuration
  std::vector<double> normalized_counts;  // events per pixel, ConstantCount

  int K() const { return int(mode == WindowMode::FixedDuration ? durations.size() : normalized_counts.size()); }

  static WindowSpec constant_count(std::vector<double> counts = {0.03, 0.1, 0.3, 1.0});
  static WindowSpec fixed_duration(std::vector<Timestamp> durations);
};

/// Throws std::invalid_argument unless K >= 1 and the active list is strictly
/// increasing and positive.
void validate_window_spec(const WindowSpec& spec);

/// round(max N̄ · W·H) + 1: the smallest ring able to look back over the largest window.
std::size_t ring_capacity_for(const WindowSpec& spec, SensorGeometry geometry);

struct TimeSurface {
  int width = 0;
  int height = 0;
  std::vector<float> values;

  float at(int x, int y) const { return values[std::size_t(y) * width + x]; }
  friend bool operator==(const TimeSurface&, const TimeSurface&) = default;
};

/// 2K stacked surfaces: channels 0..K-1 negative polarity, K..2K-1 positive,
/// each block ordered by window k.
struct MctsTensor {
  Tensor3 channels;
  Timestamp tau = 0;
  std::vector<Timestamp> window_durations;

  int K() const { return int(window_durations.size()); }
  friend bool operator==(const MctsTensor&, const MctsTensor&) = default;
};

/// Thrown when an event would move time backwards. `position` is the index
/// within the rejected batch.
class StreamOrderError : public std::invalid_argument {
public:
  StreamOrderError(std::size_t position, const std::string& what) : std::invalid_argument(what), position_(position) {}
  std::size_t position() const { return position_; }

private:
  std::size_t position_;
};

/// O(1) per event. The batch is validated before any state changes.
void apply_events(TimestampGrid& grid, EventCountRing& ring, std::span<const Event> events);

/// The linear-decay surface value of one event of age `tau - t` in a window of `dt`.
inline float decay_value(Timestamp tau, Timestamp t, Timestamp dt) {
  return float(1.0 - double(tau - t) / double(dt));
}

/// Events newer than `tau` are treated as outside the window.
TimeSurface time_surface(const TimestampGrid& grid, Timestamp tau, Timestamp dt, Polarity polarity);

std::vector<std::int64_t> normalized_counts_to_absolute(const WindowSpec& spec, SensorGeometry geometry);

/// Window lengths holding the newest N events: tau - t[I - N], falling back
/// to tau - first_time while the ring holds N or fewer entries. Clamped to 1 µs.
std::vector<Timestamp> adaptive_windows(const EventCountRing& ring, Timestamp tau, std::span<const std::int64_t> counts,
                                        std::optional<Timestamp> first_time);

MctsTensor mcts(const TimestampGrid& grid, const EventCountRing& ring, Timestamp tau, const WindowSpec& spec);

/// Stacks surfaces for explicit window lengths.
MctsTensor mcts_with_windows(const TimestampGrid& grid, Timestamp tau, std::span<const Timestamp> windows);

/// Grid, ring and the single-writer update path used by ingest and replay.
struct SurfaceState {
  TimestampGrid grid;
  EventCountRing ring;

  SurfaceState() = default;
  SurfaceState(SensorGeometry g, std::size_t ring_capacity) : grid(g), ring(ring_capacity) {}

  void apply(std::span<const Event> events) { apply_events(grid, ring, events); }
  friend bool operator==(const SurfaceState&, const SurfaceState&) = default;
};

}  // namespace evfront
