#include "evfront/experiments.hpp"

#include "evfront/synth.hpp"

#include <cmath>
#include <stdexcept>

namespace evfront {

double channel_pair_l1(const MctsTensor& a, const MctsTensor& b, int k) {
  const int K = a.K();
  if (b.K() != K || a.channels.plane_size() != b.channels.plane_size() || k < 0 || k >= K)
    throw std::invalid_argument("channel_pair_l1: incompatible tensors");
  double sum = 0.0;
  for (int c : {k, K + k}) {
    const auto pa = a.channels.plane(c), pb = b.channels.plane(c);
    for (std::size_t i = 0; i < pa.size(); ++i) sum += std::abs(double(pa[i]) - double(pb[i]));
  }
  return sum / double(2 * a.channels.plane_size());
}

namespace {

struct EdgeState {
  SurfaceState state;
  Timestamp tau = 0;
};

EdgeState sweep_edge(const MotionInvarianceParams& p, double speed, std::size_t ring_capacity) {
  MotionSpec spec;
  spec.pattern = MotionPattern::VerticalEdge;
  spec.vx = speed;
  spec.vy = 0.0;
  spec.duration = (p.edge_column + 2) / speed;
  const EventBatch batch = synthesize(spec, p.geometry, 0);

  EdgeState out{SurfaceState(p.geometry, ring_capacity), Timestamp(std::floor(p.edge_column * 1e6 / speed))};
  std::size_t n = 0;
  while (n < batch.events.size() && batch.events[n].t <= out.tau) ++n;
  out.state.apply(std::span<const Event>(batch.events.data(), n));
  return out;
}

}  // namespace

MotionInvarianceReport run_motion_invariance(const MotionInvarianceParams& p) {
  if (!(p.speed > 0.0) || !(p.factor > 0.0)) throw std::invalid_argument("motion invariance: speeds must be positive");
  if (p.edge_column < 1 || p.edge_column >= p.geometry.width)
    throw std::invalid_argument("motion invariance: edge column outside the sensor");

  const WindowSpec counts = WindowSpec::constant_count(p.normalized_counts);
  validate_window_spec(counts);
  const std::size_t capacity = ring_capacity_for(counts, p.geometry);
  const EdgeState slow = sweep_edge(p, p.speed, capacity);
  const EdgeState fast = sweep_edge(p, p.speed * p.factor, capacity);

  const MctsTensor ne_slow = mcts(slow.state.grid, slow.state.ring, slow.tau, counts);
  const MctsTensor ne_fast = mcts(fast.state.grid, fast.state.ring, fast.tau, counts);
  const MctsTensor dt_slow = mcts_with_windows(slow.state.grid, slow.tau, ne_slow.window_durations);
  const MctsTensor dt_fast = mcts_with_windows(fast.state.grid, fast.tau, ne_slow.window_durations);

  MotionInvarianceReport r;
  r.tau_slow = slow.tau;
  r.tau_fast = fast.tau;
  r.windows_slow = ne_slow.window_durations;
  r.windows_fast = ne_fast.window_durations;
  for (int k = 0; k < counts.K(); ++k) {
    const double ne = channel_pair_l1(ne_slow, ne_fast, k);
    const double dt = channel_pair_l1(dt_slow, dt_fast, k);
    r.constant_count_l1.push_back(ne);
    r.fixed_window_l1.push_back(dt);
    // Equal speeds give identical tensors in both modes; that counts as agreement.
    if (ne < dt || (ne == 0.0 && dt == 0.0)) ++r.pairs_passed;
  }
  r.pass = r.pairs_passed >= std::min(p.required_pairs, counts.K());
  return r;
}

TrackingReport evaluate_tracking(const std::vector<FrameResult>& results, const MotionSpec& motion, float threshold) {
  TrackingReport r;
  for (std::size_t i = 0; i < results.size(); ++i) {
    std::vector<std::uint8_t> flags;
    if (i > 0)
      flags = verify_matches(results[i].matches_to_previous, results[i - 1].keypoints, results[i].keypoints,
                             translation_warp(motion, results[i - 1].tau, results[i].tau), threshold);
    std::size_t good = 0;
    for (std::uint8_t f : flags) good += f;
    r.matches.push_back(flags.size());
    r.inliers.push_back(good);
    r.total_matches += flags.size();
    r.total_inliers += good;
    r.flags.push_back(std::move(flags));
  }
  if (r.total_matches > 0) r.inlier_ratio = double(r.total_inliers) / double(r.total_matches);
  return r;
}

std::optional<double> min_window_inlier_ratio(const TrackingReport& report, std::size_t length) {
  if (length == 0 || report.matches.size() < length) return std::nullopt;
  std::optional<double> worst;
  for (std::size_t start = 0; start + length <= report.matches.size(); ++start) {
    std::size_t m = 0, g = 0;
    for (std::size_t i = start; i < start + length; ++i) {
      m += report.matches[i];
      g += report.inliers[i];
    }
    if (m == 0) return std::nullopt;
    const double ratio = double(g) / double(m);
    if (!worst || ratio < *worst) worst = ratio;
  }
  return worst;
}

}  // namespace evfront
