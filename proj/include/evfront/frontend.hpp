#pragma once

#include "evfront/keypoints.hpp"
#include "evfront/matching.hpp"
#include "evfront/shared_state.hpp"
#include "evfront/superlite.hpp"

#include <memory>
#include <optional>

namespace evfront {

enum class DetectorKind { Classical, Learned };

struct PipelineConfig {
  Timestamp tick_us = 1000;
  WindowSpec window_spec = WindowSpec::constant_count();
  DetectorKind detector = DetectorKind::Classical;
  std::shared_ptr<const SuperLite> network;  // required for Learned
  int classical_pair = 2;                    // window k used by the classical detector
  NmsParams nms;
  double max_match_distance = kDefaultMaxMatchDistance;
  Timestamp watermark_lag_us = 0;
  QuantizationScheme quantization;
  Timestamp metrics_interval_us = 300'000'000;
  /// Test hook: detection is stretched to this multiple of its measured time.
  double detector_slowdown = 1.0;
};

/// Throws std::invalid_argument on inconsistent settings.
void validate_config(const PipelineConfig& config, SensorGeometry geometry);

struct StageTimings {
  double mcts_preparation_us = 0.0;
  double keypoint_detection_us = 0.0;
  double matching_us = 0.0;
  double total_us = 0.0;
};

struct FrameResult {
  Timestamp tau = 0;
  std::uint64_t version = 0;
  KeypointSet keypoints;
  QuantizedDescriptors descriptors;
  std::vector<Match> matches_to_previous;
  StageTimings timings;
};

/// One frontend iteration on a frozen snapshot: MCTS at the newest applied
/// event time, detection, quantization and matching against `previous`.
FrameResult frontend_step(const Snapshot& snapshot, const FrameResult* previous, const PipelineConfig& config);

}  // namespace evfront
