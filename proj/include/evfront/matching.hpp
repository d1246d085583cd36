#pragma once

#include "evfront/keypoints.hpp"
#include "evfront/synth.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace evfront {

/// Symmetric scaling onto [-127, 127]. The default suits unit-norm rows.
struct QuantizationScheme {
  float scale = 127.f;

  friend bool operator==(const QuantizationScheme&, const QuantizationScheme&) = default;
};

struct QuantizedDescriptors {
  int dim = 0;
  std::vector<std::int8_t> values;  // N×D
  QuantizationScheme scheme;

  std::size_t size() const { return dim == 0 ? 0 : values.size() / std::size_t(dim); }
  std::span<const std::int8_t> row(std::size_t i) const {
    return {values.data() + i * std::size_t(dim), std::size_t(dim)};
  }
};

/// scale = 127 / max |component|. Throws on an empty or all-zero sample.
QuantizationScheme calibrate_scale(const Descriptors& sample);

/// clamp(round(d·s), -127, 127) with halves rounded away from zero.
std::int8_t quantize_value(float d, float scale);
QuantizedDescriptors quantize(const Descriptors& desc, const QuantizationScheme& scheme);

/// 1 - a·b / (|a||b|) from exact integer dot products. The scheme's scale
/// cancels and is never applied. Any zero vector gives 2.
double cosine_distance(std::span<const std::int8_t> a, std::span<const std::int8_t> b);

/// Reference float cosine distance.
double cosine_distance(std::span<const float> a, std::span<const float> b);

struct Match {
  int index_a = 0;
  int index_b = 0;
  double distance = 0.0;

  friend bool operator==(const Match&, const Match&) = default;
};

inline constexpr double kDefaultMaxMatchDistance = 0.7;

/// Pairs that are each other's nearest neighbour (lowest index on ties) with
/// distance <= max_distance, ordered by index_a.
std::vector<Match> match_mutual_nn(const QuantizedDescriptors& a, const QuantizedDescriptors& b,
                                   double max_distance = kDefaultMaxMatchDistance);

inline constexpr float kDefaultInlierThreshold = 5.f;

/// Inlier iff |warp(kp_a) - kp_b| < threshold, or the two coincide exactly.
std::vector<std::uint8_t> verify_matches(std::span<const Match> matches, const KeypointSet& kps_a,
                                         const KeypointSet& kps_b, const PointWarp& warp,
                                         float threshold = kDefaultInlierThreshold);

}  // namespace evfront
