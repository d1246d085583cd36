#include "evfront/frontend.hpp"

#include "evfront/classical.hpp"

#include <chrono>
#include <stdexcept>
#include <thread>

namespace evfront {

namespace {

using Clock = std::chrono::steady_clock;

double elapsed_us(Clock::time_point a, Clock::time_point b) {
  return std::chrono::duration<double, std::micro>(b - a).count();
}

}  // namespace

void validate_config(const PipelineConfig& config, SensorGeometry geometry) {
  if (config.tick_us <= 0) throw std::invalid_argument("pipeline: tick must be positive");
  if (config.watermark_lag_us < 0) throw std::invalid_argument("pipeline: watermark lag must be non-negative");
  if (config.metrics_interval_us <= 0) throw std::invalid_argument("pipeline: metrics interval must be positive");
  if (!(config.detector_slowdown >= 1.0)) throw std::invalid_argument("pipeline: detector slowdown must be >= 1");
  if (!(config.quantization.scale > 0.f)) throw std::invalid_argument("pipeline: quantization scale must be positive");
  validate_window_spec(config.window_spec);
  if (config.detector == DetectorKind::Classical) {
    if (config.classical_pair < 0 || config.classical_pair >= config.window_spec.K())
      throw std::invalid_argument("pipeline: classical channel pair out of range");
  } else {
    if (!config.network) throw std::invalid_argument("pipeline: learned detector needs weights");
    const SuperLiteSpec& spec = config.network->spec();
    if (spec.input_channels != 2 * config.window_spec.K())
      throw std::invalid_argument("pipeline: network expects " + std::to_string(spec.input_channels) +
                                  " input channels but the window spec yields " +
                                  std::to_string(2 * config.window_spec.K()));
    if (geometry.width % spec.cell() != 0 || geometry.height % spec.cell() != 0)
      throw std::invalid_argument("pipeline: sensor size must be a multiple of " + std::to_string(spec.cell()));
  }
}

FrameResult frontend_step(const Snapshot& snapshot, const FrameResult* previous, const PipelineConfig& config) {
  const auto t0 = Clock::now();
  FrameResult result;
  result.version = snapshot.version;
  result.tau = snapshot.state.grid.latest_time;

  const MctsTensor tensor = mcts(snapshot.state.grid, snapshot.state.ring, result.tau, config.window_spec);
  const auto t1 = Clock::now();

  Descriptors descriptors;
  if (config.detector == DetectorKind::Classical) {
    ClassicalDetection det = classical_detect(tensor, config.classical_pair, config.nms);
    result.keypoints = std::move(det.keypoints);
    descriptors = std::move(det.descriptors);
  } else {
    if (!config.network) throw std::invalid_argument("frontend_step: learned detector needs weights");
    const ForwardOutput out = config.network->forward(tensor);
    result.keypoints = nms(out.heatmap, config.nms);
    descriptors = interpolate_descriptors(out.descriptors, result.keypoints, config.network->spec().cell());
  }
  result.descriptors = quantize(descriptors, config.quantization);
  auto t2 = Clock::now();
  if (config.detector_slowdown > 1.0) {
    std::this_thread::sleep_for(std::chrono::duration<double, std::micro>((config.detector_slowdown - 1.0) *
                                                                          elapsed_us(t1, t2)));
    t2 = Clock::now();
  }

  if (previous) result.matches_to_previous = match_mutual_nn(previous->descriptors, result.descriptors,
                                                             config.max_match_distance);
  const auto t3 = Clock::now();

  result.timings = {elapsed_us(t0, t1), elapsed_us(t1, t2), elapsed_us(t2, t3), elapsed_us(t0, t3)};
  return result;
}

}  // namespace evfront
