#pragma once

#include "evfront/types.hpp"

namespace evfront {

/// Maps each event to (x·tw/sw, y·th/sh). Requires integer per-axis factors.
EventBatch downsample(const EventBatch& batch, SensorGeometry target);

inline constexpr Timestamp default_rate_window_us = 1000;

/// Deterministic decimation to at most floor(max_rate·window/1e6) events per
/// aligned window of `window_us`, keeping indices floor(j·n/c).
EventBatch rate_limit(const EventBatch& batch, double max_rate, Timestamp window_us = default_rate_window_us);

}  // namespace evfront
