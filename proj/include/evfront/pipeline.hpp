#pragma once

#include "evfront/frontend.hpp"

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace evfront {

/// Pull-based event stream. Implementations may throw on I/O failure.
class EventSource {
public:
  virtual ~EventSource() = default;
  virtual SensorGeometry geometry() const = 0;
  /// Time of the first event, or nullopt for an empty stream.
  virtual std::optional<Timestamp> first_time() = 0;
  /// Appends events with t < until; returns false once the stream is exhausted.
  virtual bool read_until(Timestamp until, std::vector<Event>& out) = 0;
};

class BatchSource : public EventSource {
public:
  explicit BatchSource(const EventBatch& batch) : batch_(batch) {}

  SensorGeometry geometry() const override { return batch_.geometry; }
  std::optional<Timestamp> first_time() override;
  bool read_until(Timestamp until, std::vector<Event>& out) override;

private:
  const EventBatch& batch_;
  std::size_t next_ = 0;
};

enum class Pacing { AsFastAsPossible, WallClock };

struct ReplayOptions {
  Pacing pacing = Pacing::AsFastAsPossible;
  double speed = 1.0;  // stream seconds per wall second, WallClock only
};

struct StageStats {
  double mean_us = 0.0;
  double max_us = 0.0;
};

/// Per-result bookkeeping. Stream times in µs.
struct IterationTrace {
  std::uint64_t version = 0;             // snapshot version
  std::uint64_t completion_version = 0;  // shared version when the iteration finished
  Timestamp tau = 0;
  Timestamp newest_ingested = 0;  // newest event read from the source at emission
  double staleness_us = 0.0;
  double iteration_us = 0.0;  // wall time from snapshot to emission
  // Wall-clock replay only: how far the writer was behind its tick schedule
  // when the snapshot was taken (stream µs). Zero while it keeps up.
  double writer_lag_us = 0.0;
};

struct IntervalTimings {
  Timestamp start = 0;  // stream time of the interval start
  std::size_t results = 0;
  StageTimings mean;
};

struct Metrics {
  std::size_t results_emitted = 0;
  std::size_t ticks = 0;
  std::uint64_t versions_applied = 0;
  std::uint64_t events_ingested = 0;
  std::uint64_t events_applied = 0;
  StageStats mcts_preparation, keypoint_detection, matching, total;
  double wall_time_s = 0.0;
  double iteration_rate_hz = 0.0;
  double staleness_mean_us = 0.0;
  double staleness_max_us = 0.0;
  double writer_lag_max_us = 0.0;
  GateStats gate;
  std::vector<IterationTrace> iterations;
  std::vector<IntervalTimings> intervals;
  std::string source_error;
};

struct PipelineRun {
  std::vector<FrameResult> results;
  Metrics metrics;
};

/// Two threads: a preprocessing writer that ingests one tick of stream time
/// per step and applies events up to the watermark, and a frontend consumer
/// that snapshots the newest state whenever it is free.
PipelineRun run_pipeline(EventSource& source, const PipelineConfig& config, const ReplayOptions& replay = {});

/// Single-threaded replay of the same tick sequence; a frontend iteration runs
/// right after the tick that reaches each listed version.
PipelineRun run_pipeline_scripted(EventSource& source, const PipelineConfig& config,
                                  std::span<const std::uint64_t> snapshot_versions);

/// Scripted replay snapshotting every `every`-th version.
PipelineRun run_pipeline_deterministic(EventSource& source, const PipelineConfig& config, std::uint64_t every = 1);

}  // namespace evfront
