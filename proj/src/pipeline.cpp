#include "evfront/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <chrono>
#include <functional>
#include <limits>
#include <map>
#include <thread>
#include <unordered_set>

namespace evfront {

std::optional<Timestamp> BatchSource::first_time() {
  if (batch_.events.empty()) return std::nullopt;
  return batch_.events.front().t;
}

bool BatchSource::read_until(Timestamp until, std::vector<Event>& out) {
  const auto& ev = batch_.events;
  while (next_ < ev.size() && ev[next_].t < until) out.push_back(ev[next_++]);
  return next_ < ev.size();
}

namespace {

using Clock = std::chrono::steady_clock;

double elapsed_us(Clock::time_point a, Clock::time_point b) {
  return std::chrono::duration<double, std::micro>(b - a).count();
}

// Preprocessing side: pulls one tick of stream time from the source per step
// and applies the watermark-gated prefix of the pending buffer.
class TickDriver {
public:
  TickDriver(EventSource& source, const PipelineConfig& config, Timestamp origin)
    : source_(source), config_(config), origin_(origin) {}

  /// Returns false once the stream has been fully read and drained.
  bool step(SharedSurfaceState& state) {
    const Timestamp boundary = origin_ + Timestamp(ticks_ + 1) * config_.tick_us;
    ++ticks_;

    const std::size_t before = pending_.size();
    bool more = false;
    try {
      more = source_.read_until(boundary, pending_);
    } catch (const std::exception& e) {
      error_ = e.what();
      more = false;
    }
    ingested_ += pending_.size() - before;
    if (!pending_.empty()) newest_ingested_.store(std::max(newest_ingested_.load(), pending_.back().t));

    const Timestamp watermark =
        !more ? std::numeric_limits<Timestamp>::max()
              : (pending_.empty() ? std::numeric_limits<Timestamp>::min() : pending_.back().t - config_.watermark_lag_us);
    applied_ += preprocess_tick(state, pending_, watermark, boundary);
    return more;
  }

  std::size_t ticks() const { return ticks_; }
  std::uint64_t ingested() const { return ingested_; }
  std::uint64_t applied() const { return applied_; }
  Timestamp newest_ingested() const { return newest_ingested_.load(); }
  const std::string& error() const { return error_; }

private:
  EventSource& source_;
  const PipelineConfig& config_;
  Timestamp origin_;
  std::vector<Event> pending_;
  std::size_t ticks_ = 0;
  std::uint64_t ingested_ = 0;
  std::uint64_t applied_ = 0;
  std::atomic<Timestamp> newest_ingested_{0};
  std::string error_;
};

StageStats stage_stats(const std::vector<FrameResult>& results, double StageTimings::*field) {
  StageStats s;
  for (const FrameResult& r : results) {
    s.mean_us += r.timings.*field;
    s.max_us = std::max(s.max_us, r.timings.*field);
  }
  if (!results.empty()) s.mean_us /= double(results.size());
  return s;
}

void finalize_metrics(PipelineRun& run, const TickDriver& driver, const SharedSurfaceState& state,
                      const PipelineConfig& config, Timestamp origin, double wall_s) {
  Metrics& m = run.metrics;
  m.results_emitted = run.results.size();
  m.ticks = driver.ticks();
  m.versions_applied = state.version();
  m.events_ingested = driver.ingested();
  m.events_applied = driver.applied();
  m.source_error = driver.error();
  m.gate = state.gate_stats();
  m.wall_time_s = wall_s;
  m.iteration_rate_hz = wall_s > 0 ? double(run.results.size()) / wall_s : 0.0;
  m.mcts_preparation = stage_stats(run.results, &StageTimings::mcts_preparation_us);
  m.keypoint_detection = stage_stats(run.results, &StageTimings::keypoint_detection_us);
  m.matching = stage_stats(run.results, &StageTimings::matching_us);
  m.total = stage_stats(run.results, &StageTimings::total_us);

  for (const IterationTrace& it : m.iterations) {
    m.staleness_mean_us += it.staleness_us;
    m.staleness_max_us = std::max(m.staleness_max_us, it.staleness_us);
    m.writer_lag_max_us = std::max(m.writer_lag_max_us, it.writer_lag_us);
  }
  if (!m.iterations.empty()) m.staleness_mean_us /= double(m.iterations.size());

  std::map<Timestamp, IntervalTimings> buckets;
  for (const FrameResult& r : run.results) {
    const Timestamp start = origin + (r.tau - origin) / config.metrics_interval_us * config.metrics_interval_us;
    IntervalTimings& b = buckets[start];
    b.start = start;
    ++b.results;
    b.mean.mcts_preparation_us += r.timings.mcts_preparation_us;
    b.mean.keypoint_detection_us += r.timings.keypoint_detection_us;
    b.mean.matching_us += r.timings.matching_us;
    b.mean.total_us += r.timings.total_us;
  }
  for (auto& [start, b] : buckets) {
    const double n = double(b.results);
    b.mean.mcts_preparation_us /= n;
    b.mean.keypoint_detection_us /= n;
    b.mean.matching_us /= n;
    b.mean.total_us /= n;
    m.intervals.push_back(b);
  }
}

struct Frontend {
  const PipelineConfig& config;
  PipelineRun& run;
  double writer_lag_us = 0.0;

  void iterate(const Snapshot& snap, Clock::time_point frozen_at, const SharedSurfaceState& state,
               const TickDriver& driver) {
    const FrameResult* previous = run.results.empty() ? nullptr : &run.results.back();
    FrameResult result = frontend_step(snap, previous, config);
    IterationTrace trace;
    trace.version = snap.version;
    trace.completion_version = state.version();
    trace.tau = result.tau;
    trace.newest_ingested = driver.newest_ingested();
    trace.staleness_us = double(std::max<Timestamp>(0, trace.newest_ingested - trace.tau));
    trace.iteration_us = elapsed_us(frozen_at, Clock::now());
    trace.writer_lag_us = writer_lag_us;
    run.metrics.iterations.push_back(trace);
    run.results.push_back(std::move(result));
  }
};

PipelineRun run_single_threaded(EventSource& source, const PipelineConfig& config,
                                const std::function<bool(std::uint64_t)>& wants_snapshot) {
  validate_config(config, source.geometry());
  PipelineRun run;
  const auto origin = source.first_time();
  if (!origin) return run;

  SharedSurfaceState state(source.geometry(), ring_capacity_for(config.window_spec, source.geometry()));
  TickDriver driver(source, config, *origin);
  Frontend frontend{config, run};
  const auto wall_start = Clock::now();
  std::uint64_t seen = 0;
  for (bool more = true; more;) {
    more = driver.step(state);
    const std::uint64_t v = state.version();
    if (v != seen && wants_snapshot(v)) {
      const Snapshot snap = state.freeze_snapshot();
      frontend.iterate(snap, snap.taken_at, state, driver);
    }
    seen = v;
  }
  finalize_metrics(run, driver, state, config, *origin, elapsed_us(wall_start, Clock::now()) * 1e-6);
  return run;
}

}  // namespace

PipelineRun run_pipeline(EventSource& source, const PipelineConfig& config, const ReplayOptions& replay) {
  validate_config(config, source.geometry());
  if (!(replay.speed > 0.0)) throw std::invalid_argument("pipeline: replay speed must be positive");
  PipelineRun run;
  const auto origin = source.first_time();
  if (!origin) return run;

  SharedSurfaceState state(source.geometry(), ring_capacity_for(config.window_spec, source.geometry()));
  TickDriver driver(source, config, *origin);
  std::atomic<bool> stop{false};
  const auto wall_start = Clock::now();

  std::exception_ptr writer_error;
  std::thread writer([&] {
    try {
    const auto tick_wall = std::chrono::duration<double, std::micro>(double(config.tick_us) / replay.speed);
    for (std::size_t i = 1; !stop.load(std::memory_order_relaxed); ++i) {
      if (replay.pacing == Pacing::WallClock)
        std::this_thread::sleep_until(wall_start + std::chrono::duration_cast<Clock::duration>(tick_wall * double(i)));
      if (!driver.step(state)) break;
    }
    } catch (...) {
      writer_error = std::current_exception();
    }
    state.close();
  });

  Frontend frontend{config, run};
  try {
    Snapshot snap;
    std::uint64_t seen = 0;
    while (state.wait_and_freeze(seen, snap)) {
      const auto frozen_at = snap.taken_at;
      if (replay.pacing == Pacing::WallClock) {
        const double due = double(*origin) + elapsed_us(wall_start, frozen_at) * replay.speed;
        // On schedule, the newest boundary trails `due` by less than a tick.
        frontend.writer_lag_us = std::max(0.0, due - double(config.tick_us) - double(snap.source_read_through));
      }
      frontend.iterate(snap, frozen_at, state, driver);
      seen = snap.version;
    }
  } catch (...) {
    stop = true;
    writer.join();
    throw;
  }
  writer.join();
  if (writer_error) std::rethrow_exception(writer_error);
  finalize_metrics(run, driver, state, config, *origin, elapsed_us(wall_start, Clock::now()) * 1e-6);
  return run;
}

PipelineRun run_pipeline_scripted(EventSource& source, const PipelineConfig& config,
                                  std::span<const std::uint64_t> snapshot_versions) {
  const std::unordered_set<std::uint64_t> wanted(snapshot_versions.begin(), snapshot_versions.end());
  return run_single_threaded(source, config, [&wanted](std::uint64_t v) { return wanted.count(v) > 0; });
}

PipelineRun run_pipeline_deterministic(EventSource& source, const PipelineConfig& config, std::uint64_t every) {
  if (every == 0) throw std::invalid_argument("pipeline: snapshot period must be >= 1");
  return run_single_threaded(source, config, [every](std::uint64_t v) { return v % every == 0; });
}

}  // namespace evfront
