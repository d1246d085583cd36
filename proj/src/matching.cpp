#include "evfront/matching.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace evfront {

QuantizationScheme calibrate_scale(const Descriptors& sample) {
  if (sample.values.empty()) throw std::invalid_argument("calibrate_scale: empty sample");
  float peak = 0.f;
  for (float v : sample.values) peak = std::max(peak, std::abs(v));
  if (peak == 0.f) throw std::invalid_argument("calibrate_scale: all-zero sample");
  return {127.f / peak};
}

std::int8_t quantize_value(float d, float scale) {
  const double q = std::round(double(d) * double(scale));  // std::round: halves away from zero
  return std::int8_t(std::clamp(q, -127.0, 127.0));
}

QuantizedDescriptors quantize(const Descriptors& desc, const QuantizationScheme& scheme) {
  if (!(scheme.scale > 0.f)) throw std::invalid_argument("quantize: scale must be positive");
  QuantizedDescriptors q;
  q.dim = desc.dim;
  q.scheme = scheme;
  q.values.resize(desc.values.size());
  std::transform(desc.values.begin(), desc.values.end(), q.values.begin(),
                 [s = scheme.scale](float v) { return quantize_value(v, s); });
  return q;
}

double cosine_distance(std::span<const std::int8_t> a, std::span<const std::int8_t> b) {
  if (a.size() != b.size()) throw std::invalid_argument("cosine_distance: dimension mismatch");
  std::int64_t dot = 0, na = 0, nb = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    dot += std::int32_t(a[i]) * b[i];
    na += std::int32_t(a[i]) * a[i];
    nb += std::int32_t(b[i]) * b[i];
  }
  if (na == 0 || nb == 0) return 2.0;
  // cos² = dot² / (na·nb) reduced to lowest terms is the same fraction for
  // any integer rescaling of either vector, so the real result is too.
  // |dot|, na, nb <= 64·127², so both products fit in 64 bits.
  const std::int64_t num = dot * dot, den = na * nb;
  const std::int64_t g = std::gcd(num, den);
  const double magnitude = std::sqrt(double(num / g) / double(den / g));
  const double cosine = dot < 0 ? -magnitude : magnitude;
  return std::clamp(1.0 - cosine, 0.0, 2.0);
}

double cosine_distance(std::span<const float> a, std::span<const float> b) {
  if (a.size() != b.size()) throw std::invalid_argument("cosine_distance: dimension mismatch");
  double dot = 0, na = 0, nb = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    dot += double(a[i]) * b[i];
    na += double(a[i]) * a[i];
    nb += double(b[i]) * b[i];
  }
  if (na == 0 || nb == 0) return 2.0;
  return std::clamp(1.0 - dot / std::sqrt(na * nb), 0.0, 2.0);
}

std::vector<Match> match_mutual_nn(const QuantizedDescriptors& a, const QuantizedDescriptors& b, double max_distance) {
  if (!(a.scheme == b.scheme)) throw std::invalid_argument("match_mutual_nn: quantization schemes differ");
  const std::size_t na = a.size(), nb = b.size();
  if (na == 0 || nb == 0) return {};
  if (a.dim != b.dim) throw std::invalid_argument("match_mutual_nn: descriptor dimensions differ");

  std::vector<double> dist(na * nb);
  for (std::size_t i = 0; i < na; ++i)
    for (std::size_t j = 0; j < nb; ++j) dist[i * nb + j] = cosine_distance(a.row(i), b.row(j));

  std::vector<std::size_t> best_b(na), best_a(nb);
  for (std::size_t i = 0; i < na; ++i) {
    std::size_t best = 0;
    for (std::size_t j = 1; j < nb; ++j)
      if (dist[i * nb + j] < dist[i * nb + best]) best = j;
    best_b[i] = best;
  }
  for (std::size_t j = 0; j < nb; ++j) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < na; ++i)
      if (dist[i * nb + j] < dist[best * nb + j]) best = i;
    best_a[j] = best;
  }

  std::vector<Match> matches;
  for (std::size_t i = 0; i < na; ++i) {
    const std::size_t j = best_b[i];
    const double d = dist[i * nb + j];
    if (best_a[j] == i && d <= max_distance) matches.push_back({int(i), int(j), d});
  }
  return matches;
}

std::vector<std::uint8_t> verify_matches(std::span<const Match> matches, const KeypointSet& kps_a,
                                         const KeypointSet& kps_b, const PointWarp& warp, float threshold) {
  std::vector<std::uint8_t> inliers;
  inliers.reserve(matches.size());
  for (const Match& m : matches) {
    const Point2f pa = warp({kps_a.at(std::size_t(m.index_a)).x, kps_a.at(std::size_t(m.index_a)).y});
    const Keypoint& kb = kps_b.at(std::size_t(m.index_b));
    const double d = std::hypot(double(pa.x) - kb.x, double(pa.y) - kb.y);
    inliers.push_back(d < threshold || d == 0.0);
  }
  return inliers;
}

}  // namespace evfront
