#include "evfront/keypoints.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace evfront {

KeypointSet nms(const Heatmap& heatmap, const NmsParams& params) {
  if (params.radius < 1) throw std::invalid_argument("nms: radius must be >= 1");
  const int W = heatmap.width, H = heatmap.height, r = params.radius;

  KeypointSet points;
  for (int y = 0; y < H; ++y) {
    for (int x = 0; x < W; ++x) {
      const float s = heatmap.at(x, y);
      if (!(s >= params.threshold)) continue;
      bool strict_max = true;
      for (int yy = std::max(0, y - r); yy <= std::min(H - 1, y + r) && strict_max; ++yy)
        for (int xx = std::max(0, x - r); xx <= std::min(W - 1, x + r); ++xx)
          if ((xx != x || yy != y) && !(heatmap.at(xx, yy) < s)) {
            strict_max = false;
            break;
          }
      if (strict_max) points.push_back({float(x), float(y), s});
    }
  }
  // Candidates were collected in row-major order; stable sort keeps it for ties.
  std::stable_sort(points.begin(), points.end(), [](const Keypoint& a, const Keypoint& b) { return a.score > b.score; });
  if (points.size() > std::size_t(std::max(0, params.max_keypoints))) points.resize(std::size_t(std::max(0, params.max_keypoints)));
  return points;
}

void normalize_rows(Descriptors& d) {
  const std::size_t n = d.size();
  d.zero_rows.assign(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    float* row = d.row(i);
    double sq = 0.0;
    for (int j = 0; j < d.dim; ++j) sq += double(row[j]) * row[j];
    if (sq == 0.0) {
      d.zero_rows[i] = 1;
      continue;
    }
    const auto inv = float(1.0 / std::sqrt(sq));
    for (int j = 0; j < d.dim; ++j) row[j] *= inv;
  }
}

Descriptors interpolate_descriptors(const DescriptorMap& map, const KeypointSet& keypoints, int cell) {
  const Tensor3& m = map.values;
  if (cell < 1 || m.height < 1 || m.width < 1) throw std::invalid_argument("interpolate_descriptors: empty map");
  Descriptors out;
  out.dim = m.channels;
  out.values.assign(keypoints.size() * std::size_t(m.channels), 0.f);

  for (std::size_t i = 0; i < keypoints.size(); ++i) {
    const float u = std::clamp((keypoints[i].x + 0.5f) / float(cell) - 0.5f, 0.f, float(m.width - 1));
    const float v = std::clamp((keypoints[i].y + 0.5f) / float(cell) - 0.5f, 0.f, float(m.height - 1));
    const int x0 = int(std::floor(u)), y0 = int(std::floor(v));
    const int x1 = std::min(x0 + 1, m.width - 1), y1 = std::min(y0 + 1, m.height - 1);
    const float fx = u - float(x0), fy = v - float(y0);
    const float w00 = (1 - fx) * (1 - fy), w01 = fx * (1 - fy), w10 = (1 - fx) * fy, w11 = fx * fy;
    float* row = out.row(i);
    for (int c = 0; c < m.channels; ++c)
      row[c] = w00 * m.at(c, y0, x0) + w01 * m.at(c, y0, x1) + w10 * m.at(c, y1, x0) + w11 * m.at(c, y1, x1);
  }
  normalize_rows(out);
  return out;
}

}  // namespace evfront
