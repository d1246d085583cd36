#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace evfront {

/// Microseconds since an arbitrary stream origin. Never negative.
using Timestamp = std::int64_t;

enum class Polarity : std::int8_t { Negative = -1, Positive = +1 };

inline constexpr int polarity_channel(Polarity p) { return p == Polarity::Positive ? 1 : 0; }

struct SensorGeometry {
  int width = 0;
  int height = 0;

  std::int64_t pixel_count() const { return std::int64_t(width) * height; }
  bool contains(int x, int y) const { return x >= 0 && y >= 0 && x < width && y < height; }
  bool valid() const { return width >= 1 && height >= 1; }

  friend bool operator==(const SensorGeometry&, const SensorGeometry&) = default;
};

struct Event {
  Timestamp t = 0;
  std::uint16_t x = 0;
  std::uint16_t y = 0;
  Polarity p = Polarity::Positive;

  friend bool operator==(const Event&, const Event&) = default;
};

struct EventBatch {
  std::vector<Event> events;
  SensorGeometry geometry;

  friend bool operator==(const EventBatch&, const EventBatch&) = default;
};

struct Point2f {
  float x = 0.f;
  float y = 0.f;

  friend bool operator==(const Point2f&, const Point2f&) = default;
};

/// Throws std::invalid_argument unless the events are time-ordered and inside the geometry.
void validate_batch(const EventBatch& batch);

}  // namespace evfront
