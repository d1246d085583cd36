#pragma once

#include "evfront/types.hpp"

#include <cstdint>
#include <functional>
#include <vector>

namespace evfront {

enum class MotionPattern { VerticalEdge, GridOfCorners };

/// A pattern translating at constant velocity over a dark background.
///
/// VerticalEdge is a one-pixel-wide bright bar spanning all rows; it enters
/// from the left (vx > 0) or right (vx < 0) border. GridOfCorners places one
/// bright blob in every `cell`×`cell` lattice cell: the union of `parts`
/// overlapping rectangles with sides in [min_size, max_size], drawn
/// deterministically from `seed` and rejected until all polygon vertices are
/// at least `corner_spacing` pixels apart. Pixels emit +1 when a bright
/// region arrives and -1 when it leaves.
struct MotionSpec {
  MotionPattern pattern = MotionPattern::VerticalEdge;
  double vx = 100.0;  // px/s
  double vy = 0.0;    // px/s
  double duration = 1.0;  // s
  int cell = 32;
  int min_size = 8;
  int max_size = 16;
  int parts = 1;
  double corner_spacing = 5.0;
  std::uint64_t seed = 0;
};

/// Throws std::invalid_argument on zero velocity, non-positive duration or a
/// rectangle size that does not fit its lattice cell.
void validate_motion(const MotionSpec& spec);

EventBatch synthesize(const MotionSpec& spec, SensorGeometry geometry, Timestamp start_time);

/// Image-plane vertices of the GridOfCorners blobs at `t`, in pixel-centre
/// coordinates, restricted to points at least `margin` pixels inside the frame.
std::vector<Point2f> ground_truth_corners(const MotionSpec& spec, SensorGeometry geometry,
                                          Timestamp start_time, Timestamp t, float margin = 0.f);

using PointWarp = std::function<Point2f(Point2f)>;

/// Exact pixel motion of the synthetic scene between two stream times.
PointWarp translation_warp(const MotionSpec& spec, Timestamp from, Timestamp to);

}  // namespace evfront
