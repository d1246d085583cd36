#include "evfront/stream_ops.hpp"

#include <cmath>
#include <stdexcept>

namespace evfront {

EventBatch downsample(const EventBatch& batch, SensorGeometry target) {
  const SensorGeometry src = batch.geometry;
  if (!target.valid() || src.width % target.width != 0 || src.height % target.height != 0)
    throw std::invalid_argument("downsample: target must divide source by an integer factor per axis");

  EventBatch out;
  out.geometry = target;
  out.events.reserve(batch.events.size());
  for (Event e : batch.events) {
    e.x = std::uint16_t(int(e.x) * target.width / src.width);
    e.y = std::uint16_t(int(e.y) * target.height / src.height);
    out.events.push_back(e);
  }
  return out;
}

EventBatch rate_limit(const EventBatch& batch, double max_rate, Timestamp window_us) {
  if (!(max_rate > 0.0) || window_us <= 0) throw std::invalid_argument("rate_limit: rate and window must be positive");
  const auto cap = std::size_t(std::floor(max_rate * double(window_us) / 1e6));

  EventBatch out;
  out.geometry = batch.geometry;
  const auto& ev = batch.events;
  for (std::size_t begin = 0; begin < ev.size();) {
    const Timestamp window = ev[begin].t / window_us;
    std::size_t end = begin;
    while (end < ev.size() && ev[end].t / window_us == window) ++end;
    const std::size_t n = end - begin;
    if (n <= cap) {
      out.events.insert(out.events.end(), ev.begin() + std::ptrdiff_t(begin), ev.begin() + std::ptrdiff_t(end));
    } else {
      for (std::size_t j = 0; j < cap; ++j) out.events.push_back(ev[begin + j * n / cap]);
    }
    begin = end;
  }
  return out;
}

}  // namespace evfront
