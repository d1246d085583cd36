#pragma once

#include "evfront/tensor.hpp"

#include <cstdint>
#include <vector>

namespace evfront {

/// Full-resolution score image. Detection heads produce probabilities; the
/// classical detector fills it with corner responses.
struct Heatmap {
  int width = 0;
  int height = 0;
  std::vector<float> scores;

  float at(int x, int y) const { return scores[std::size_t(y) * width + x]; }
  friend bool operator==(const Heatmap&, const Heatmap&) = default;
};

struct Keypoint {
  float x = 0.f;
  float y = 0.f;
  float score = 0.f;

  friend bool operator==(const Keypoint&, const Keypoint&) = default;
};

/// Ordered by descending score.
using KeypointSet = std::vector<Keypoint>;

struct NmsParams {
  int radius = 4;
  float threshold = 0.015f;
  int max_keypoints = 500;
};

/// Keeps pixels scoring >= threshold that strictly exceed every other pixel
/// in their (2r+1)² neighbourhood; ties resolved in row-major order.
KeypointSet nms(const Heatmap& heatmap, const NmsParams& params);

/// N×D, each row unit length or all-zero with `zero_rows[i]` set.
struct Descriptors {
  int dim = 0;
  std::vector<float> values;
  std::vector<std::uint8_t> zero_rows;

  std::size_t size() const { return dim == 0 ? 0 : values.size() / std::size_t(dim); }
  const float* row(std::size_t i) const { return values.data() + i * std::size_t(dim); }
  float* row(std::size_t i) { return values.data() + i * std::size_t(dim); }
};

/// Normalizes each row in place; flags rows with zero norm.
void normalize_rows(Descriptors& d);

struct DescriptorMap {
  Tensor3 values;  // D × H/c × W/c, unnormalized
};

/// Bilinear sampling at ((x+0.5)/c - 0.5, (y+0.5)/c - 0.5) with edge clamping,
/// then L2 normalization.
Descriptors interpolate_descriptors(const DescriptorMap& map, const KeypointSet& keypoints, int cell);

}  // namespace evfront
