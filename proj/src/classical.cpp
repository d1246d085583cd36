#include "evfront/classical.hpp"

#include <algorithm>
#include <stdexcept>

namespace evfront {

Heatmap merged_channel_pair(const MctsTensor& tensor, int k) {
  const int K = tensor.channels.channels / 2;
  if (k < 0 || k >= K) throw std::invalid_argument("channel pair index out of range");
  Heatmap m{tensor.channels.width, tensor.channels.height, {}};
  const auto neg = tensor.channels.plane(k);
  const auto pos = tensor.channels.plane(K + k);
  m.scores.resize(neg.size());
  for (std::size_t i = 0; i < neg.size(); ++i) m.scores[i] = std::max(neg[i], pos[i]);
  return m;
}

Heatmap harris_response(const Heatmap& image) {
  const int W = image.width, H = image.height;
  const std::size_t n = std::size_t(W) * H;
  std::vector<float> ixx(n), iyy(n), ixy(n);
  auto px = [&](int x, int y) { return image.at(std::clamp(x, 0, W - 1), std::clamp(y, 0, H - 1)); };
  for (int y = 0; y < H; ++y)
    for (int x = 0; x < W; ++x) {
      const float gx = 0.5f * (px(x + 1, y) - px(x - 1, y));
      const float gy = 0.5f * (px(x, y + 1) - px(x, y - 1));
      const std::size_t i = std::size_t(y) * W + x;
      ixx[i] = gx * gx;
      iyy[i] = gy * gy;
      ixy[i] = gx * gy;
    }

  Heatmap response{W, H, std::vector<float>(n, 0.f)};
  for (int y = 0; y < H; ++y)
    for (int x = 0; x < W; ++x) {
      float a = 0, b = 0, c = 0;
      for (int yy = std::max(0, y - 1); yy <= std::min(H - 1, y + 1); ++yy)
        for (int xx = std::max(0, x - 1); xx <= std::min(W - 1, x + 1); ++xx) {
          const std::size_t i = std::size_t(yy) * W + xx;
          a += ixx[i];
          b += iyy[i];
          c += ixy[i];
        }
      const float trace = a + b;
      response.scores[std::size_t(y) * W + x] = a * b - c * c - 0.04f * trace * trace;
    }
  return response;
}

ClassicalDetection classical_detect(const MctsTensor& tensor, int k, const NmsParams& params) {
  const Heatmap merged = merged_channel_pair(tensor, k);
  ClassicalDetection out;
  out.keypoints = nms(harris_response(merged), params);

  const int W = merged.width, H = merged.height, half = kPatchSize / 2;
  out.descriptors.dim = kPatchSize * kPatchSize;
  out.descriptors.values.reserve(out.keypoints.size() * std::size_t(out.descriptors.dim));
  for (const Keypoint& kp : out.keypoints) {
    const int cx = int(kp.x), cy = int(kp.y);
    float patch[kPatchSize * kPatchSize];
    float mean = 0.f;
    for (int dy = 0; dy < kPatchSize; ++dy)
      for (int dx = 0; dx < kPatchSize; ++dx) {
        const float v = merged.at(std::clamp(cx - half + dx, 0, W - 1), std::clamp(cy - half + dy, 0, H - 1));
        patch[dy * kPatchSize + dx] = v;
        mean += v;
      }
    mean /= float(kPatchSize * kPatchSize);
    for (float v : patch) out.descriptors.values.push_back(v - mean);
  }
  normalize_rows(out.descriptors);
  return out;
}

}  // namespace evfront
