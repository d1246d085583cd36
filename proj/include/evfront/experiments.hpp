#pragma once

#include "evfront/pipeline.hpp"
#include "evfront/surface.hpp"
#include "evfront/synth.hpp"

#include <vector>

namespace evfront {

/// A vertical edge swept at `speed` and `speed·factor`, compared at the
/// instants the edge reaches the same column. The fixed-window baseline uses
/// the windows the constant-count variant realizes at the slower speed, so
/// both representations coincide there.
struct MotionInvarianceParams {
  SensorGeometry geometry{100, 100};
  double speed = 50.0;  // px/s
  double factor = 3.0;
  int edge_column = 80;
  std::vector<double> normalized_counts = {0.03, 0.1, 0.3, 1.0};
  int required_pairs = 3;
};

struct MotionInvarianceReport {
  Timestamp tau_slow = 0, tau_fast = 0;
  std::vector<Timestamp> windows_slow;  // realized at `speed`; also the fixed-window list
  std::vector<Timestamp> windows_fast;  // realized at `speed·factor`
  std::vector<double> constant_count_l1;  // per channel pair
  std::vector<double> fixed_window_l1;
  int pairs_passed = 0;
  bool pass = false;
};

/// Mean absolute difference over both polarity channels of window k.
double channel_pair_l1(const MctsTensor& a, const MctsTensor& b, int k);

MotionInvarianceReport run_motion_invariance(const MotionInvarianceParams& params);

/// Matches of each result against its predecessor, checked against the
/// synthetic scene's exact translation.
struct TrackingReport {
  std::vector<std::size_t> matches;  // per result; entry 0 is always 0
  std::vector<std::size_t> inliers;
  std::vector<std::vector<std::uint8_t>> flags;
  std::size_t total_matches = 0, total_inliers = 0;
  double inlier_ratio = 0.0;  // pooled over all results; 0 without matches
};

TrackingReport evaluate_tracking(const std::vector<FrameResult>& results, const MotionSpec& motion,
                                 float threshold = kDefaultInlierThreshold);

/// Lowest pooled inlier ratio over any `length` consecutive results, or
/// nullopt when there are fewer results or a run has no matches at all.
std::optional<double> min_window_inlier_ratio(const TrackingReport& report, std::size_t length);

}  // namespace evfront
