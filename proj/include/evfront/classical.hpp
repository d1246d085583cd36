#pragma once

#include "evfront/keypoints.hpp"
#include "evfront/surface.hpp"

namespace evfront {

inline constexpr int kPatchSize = 8;

struct ClassicalDetection {
  KeypointSet keypoints;
  Descriptors descriptors;
};

/// Max of the polarity channels of window `k` (0-based).
Heatmap merged_channel_pair(const MctsTensor& tensor, int k);

/// Harris response, det - 0.04·trace², over a 3×3 box-summed structure tensor
/// of central-difference gradients (edges clamped).
Heatmap harris_response(const Heatmap& image);

/// Corners on the merged channel pair `k`, described by the mean-subtracted,
/// normalized 8×8 patch around each keypoint.
ClassicalDetection classical_detect(const MctsTensor& tensor, int k, const NmsParams& params);

}  // namespace evfront
