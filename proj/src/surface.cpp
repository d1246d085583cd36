#include "evfront/surface.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace evfront {

TimestampGrid::TimestampGrid(SensorGeometry g)
  : geometry(g), last_t(std::size_t(2 * g.pixel_count()), 0), valid(std::size_t(2 * g.pixel_count()), 0) {
  if (!g.valid()) throw std::invalid_argument("TimestampGrid: geometry must be at least 1x1");
}

EventCountRing::EventCountRing(std::size_t capacity) : buffer_(capacity, 0) {
  if (capacity == 0) throw std::invalid_argument("EventCountRing: capacity must be positive");
}

Timestamp EventCountRing::from_newest(std::size_t back) const {
  if (back >= size_) throw std::out_of_range("EventCountRing: look-back beyond retained events");
  const std::size_t cap = buffer_.size();
  return buffer_[(head_ + cap - 1 - back) % cap];
}

std::vector<Timestamp> EventCountRing::contents() const {
  std::vector<Timestamp> out(size_);
  for (std::size_t i = 0; i < size_; ++i) out[i] = from_newest(size_ - 1 - i);
  return out;
}

WindowSpec WindowSpec::constant_count(std::vector<double> counts) {
  WindowSpec s;
  s.mode = WindowMode::ConstantCount;
  s.normalized_counts = std::move(counts);
  return s;
}

WindowSpec WindowSpec::fixed_duration(std::vector<Timestamp> durations) {
  WindowSpec s;
  s.mode = WindowMode::FixedDuration;
  s.durations = std::move(durations);
  return s;
}

void validate_window_spec(const WindowSpec& spec) {
  if (spec.K() < 1) throw std::invalid_argument("window spec needs at least one window");
  auto check = [](const auto& list) {
    if (!(list.front() > 0)) throw std::invalid_argument("window sizes must be positive");
    for (std::size_t i = 1; i < list.size(); ++i)
      if (!(list[i] > list[i - 1])) throw std::invalid_argument("window sizes must be strictly increasing");
  };
  if (spec.mode == WindowMode::FixedDuration)
    check(spec.durations);
  else
    check(spec.normalized_counts);
}

std::size_t ring_capacity_for(const WindowSpec& spec, SensorGeometry geometry) {
  if (spec.mode == WindowMode::FixedDuration || spec.normalized_counts.empty()) return 1;
  const auto counts = normalized_counts_to_absolute(spec, geometry);
  return std::size_t(*std::max_element(counts.begin(), counts.end())) + 1;
}

void apply_events(TimestampGrid& grid, EventCountRing& ring, std::span<const Event> events) {
  Timestamp prev = grid.latest_time;
  bool have_prev = !grid.empty();
  for (std::size_t i = 0; i < events.size(); ++i) {
    const Event& e = events[i];
    if (have_prev && e.t < prev)
      throw StreamOrderError(i, "event " + std::to_string(i) + " at t=" + std::to_string(e.t) +
                                    " is older than the newest applied time " + std::to_string(prev));
    if (e.t < 0) throw StreamOrderError(i, "negative timestamp at event " + std::to_string(i));
    if (!grid.geometry.contains(e.x, e.y))
      throw std::invalid_argument("event " + std::to_string(i) + " outside sensor geometry");
    prev = e.t;
    have_prev = true;
  }

  for (const Event& e : events) {
    const std::size_t idx = grid.index(polarity_channel(e.p), e.y, e.x);
    grid.last_t[idx] = e.t;
    grid.valid[idx] = 1;
    if (grid.applied_count == 0) grid.first_time = e.t;
    grid.latest_time = e.t;
    ++grid.applied_count;
    ring.push(e.t);
  }
}

namespace {

void fill_surface(const TimestampGrid& grid, Timestamp tau, Timestamp dt, int channel, std::span<float> out) {
  const std::size_t n = std::size_t(grid.geometry.pixel_count());
  const std::size_t base = std::size_t(channel) * n;
  const Timestamp oldest = tau - dt;
  for (std::size_t i = 0; i < n; ++i) {
    const Timestamp t = grid.last_t[base + i];
    out[i] = grid.valid[base + i] && t >= oldest && t <= tau ? std::max(0.f, decay_value(tau, t, dt)) : 0.f;
  }
}

}  // namespace

TimeSurface time_surface(const TimestampGrid& grid, Timestamp tau, Timestamp dt, Polarity polarity) {
  if (dt <= 0) throw std::invalid_argument("time_surface: window must be positive");
  TimeSurface ts{grid.geometry.width, grid.geometry.height, std::vector<float>(std::size_t(grid.geometry.pixel_count()))};
  fill_surface(grid, tau, dt, polarity_channel(polarity), ts.values);
  return ts;
}

std::vector<std::int64_t> normalized_counts_to_absolute(const WindowSpec& spec, SensorGeometry geometry) {
  if (spec.mode != WindowMode::ConstantCount) throw std::invalid_argument("normalized counts need constant-count mode");
  std::vector<std::int64_t> counts;
  counts.reserve(spec.normalized_counts.size());
  for (double n : spec.normalized_counts)
    counts.push_back(std::max<std::int64_t>(1, std::llround(n * double(geometry.pixel_count()))));
  return counts;
}

std::vector<Timestamp> adaptive_windows(const EventCountRing& ring, Timestamp tau, std::span<const std::int64_t> counts,
                                        std::optional<Timestamp> first_time) {
  if (ring.empty() && !first_time) throw std::invalid_argument("adaptive_windows: no events observed");
  std::vector<Timestamp> windows;
  windows.reserve(counts.size());
  for (std::int64_t n : counts) {
    if (n < 0) throw std::invalid_argument("adaptive_windows: negative event count");
    if (std::size_t(n) >= ring.capacity())
      throw std::invalid_argument("adaptive_windows: ring capacity smaller than N + 1");
    Timestamp dt;
    if (ring.size() > std::size_t(n))
      dt = tau - ring.from_newest(std::size_t(n));
    else if (first_time)
      dt = tau - *first_time;
    else
      dt = tau - ring.from_newest(ring.size() - 1);
    windows.push_back(std::max<Timestamp>(1, dt));
  }
  return windows;
}

MctsTensor mcts_with_windows(const TimestampGrid& grid, Timestamp tau, std::span<const Timestamp> windows) {
  const int K = int(windows.size());
  if (K < 1) throw std::invalid_argument("mcts: at least one window required");
  MctsTensor out;
  out.tau = tau;
  out.window_durations.assign(windows.begin(), windows.end());
  out.channels = Tensor3(2 * K, grid.geometry.height, grid.geometry.width);
  for (int k = 0; k < K; ++k) {
    if (windows[k] <= 0) throw std::invalid_argument("mcts: window must be positive");
    fill_surface(grid, tau, windows[k], 0, out.channels.plane(k));
    fill_surface(grid, tau, windows[k], 1, out.channels.plane(K + k));
  }
  return out;
}

MctsTensor mcts(const TimestampGrid& grid, const EventCountRing& ring, Timestamp tau, const WindowSpec& spec) {
  validate_window_spec(spec);
  if (spec.mode == WindowMode::FixedDuration) return mcts_with_windows(grid, tau, spec.durations);
  if (grid.empty()) throw std::invalid_argument("mcts: constant-count mode needs at least one applied event");
  const auto counts = normalized_counts_to_absolute(spec, grid.geometry);
  const auto windows = adaptive_windows(ring, tau, counts, grid.first_time);
  return mcts_with_windows(grid, tau, windows);
}

}  // namespace evfront
