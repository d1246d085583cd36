#include "cli.hpp"

#include "evfront/bench.hpp"
#include "evfront/event_io.hpp"
#include "evfront/experiments.hpp"
#include "evfront/export.hpp"
#include "evfront/mcts_io.hpp"
#include "evfront/pipeline.hpp"
#include "evfront/stream_ops.hpp"
#include "evfront/superlite.hpp"
#include "evfront/synth.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>

namespace evfront::cli {

namespace fs = std::filesystem;

namespace {

// Bad flags, bad values, missing files, unreadable input: exit 2.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  return s.substr(b, s.find_last_not_of(" \t\r") - b + 1);
}

void require_input(const std::string& path) {
  if (!fs::is_regular_file(path)) throw UsageError("input file not found: " + path);
}

void require_output(const std::string& path) {
  const fs::path parent = fs::path(path).parent_path();
  if (!parent.empty() && !fs::is_directory(parent)) throw UsageError("output directory does not exist: " + parent.string());
}

bool looks_binary(std::span<const std::byte> bytes) {
  return bytes.size() >= 4 && std::memcmp(bytes.data(), "EVT1", 4) == 0;
}

EventBatch load_events(const std::string& path, SensorGeometry csv_geometry) {
  const auto bytes = read_file(path);
  const bool binary = looks_binary(bytes);
  if (!binary && !csv_geometry.valid())
    throw UsageError(path + ": CSV input needs --width and --height");
  try {
    return parse_events(bytes, binary ? EventFormat::BinaryV1 : EventFormat::Csv, csv_geometry);
  } catch (const ParseError& e) {
    throw UsageError(path + ": " + e.what() + (binary ? " (byte offset " : " (line ") + std::to_string(e.offset()) + ")");
  }
}

EventFormat format_for_output(const std::string& path, const std::string& requested) {
  if (requested == "binary") return EventFormat::BinaryV1;
  if (requested == "csv") return EventFormat::Csv;
  return fs::path(path).extension() == ".csv" ? EventFormat::Csv : EventFormat::BinaryV1;
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw UsageError("cannot write " + path);
  f << text;
}

WindowSpec window_spec_from(const std::string& mode, const std::vector<double>& counts,
                            const std::vector<Timestamp>& durations) {
  WindowSpec spec = mode == "fixed" ? WindowSpec::fixed_duration(durations) : WindowSpec::constant_count(counts);
  validate_window_spec(spec);
  return spec;
}

// ---- synth ------------------------------------------------------------------

struct SynthArgs {
  std::string pattern = "edge";
  MotionSpec motion;
  int width = 64, height = 64;
  Timestamp start_us = 0;
  std::string format = "auto";
  std::string output;
};

void add_synth(CLI::App& app, SynthArgs& a) {
  app.add_option("--pattern", a.pattern, "edge or grid")->check(CLI::IsMember({"edge", "grid"}));
  app.add_option("--vx", a.motion.vx, "px/s");
  app.add_option("--vy", a.motion.vy, "px/s");
  app.add_option("--duration", a.motion.duration, "seconds");
  app.add_option("--width", a.width);
  app.add_option("--height", a.height);
  app.add_option("--start-us", a.start_us);
  app.add_option("--seed", a.motion.seed);
  app.add_option("--cell", a.motion.cell, "grid lattice cell, px");
  app.add_option("--min-size", a.motion.min_size);
  app.add_option("--max-size", a.motion.max_size);
  app.add_option("--parts", a.motion.parts, "rectangles per grid blob");
  app.add_option("--corner-spacing", a.motion.corner_spacing);
  app.add_option("--format", a.format, "binary, csv, or auto (by extension)")
      ->check(CLI::IsMember({"auto", "binary", "csv"}));
  app.add_option("-o,--output", a.output)->required();
}

int cmd_synth(SynthArgs& a, std::ostream& out) {
  a.motion.pattern = a.pattern == "grid" ? MotionPattern::GridOfCorners : MotionPattern::VerticalEdge;
  const SensorGeometry g{a.width, a.height};
  if (!g.valid() || g.width > 65535 || g.height > 65535) throw UsageError("synth: invalid sensor size");
  require_output(a.output);
  const EventBatch batch = synthesize(a.motion, g, a.start_us);
  write_file(a.output, write_events(batch, format_for_output(a.output, a.format)));
  const Timestamp span = batch.events.empty() ? 0 : batch.events.back().t - batch.events.front().t;
  out << "events " << batch.events.size() << " duration_us " << span << " -> " << a.output << '\n';
  return kOk;
}

// ---- convert ----------------------------------------------------------------

struct ConvertArgs {
  std::string input, output, format = "auto", downsample;
  int width = 0, height = 0;
  double max_rate = 0.0;
  Timestamp rate_window_us = default_rate_window_us;
};

void add_convert(CLI::App& app, ConvertArgs& a) {
  app.add_option("-i,--input", a.input)->required();
  app.add_option("-o,--output", a.output)->required();
  app.add_option("--format", a.format, "output format: binary, csv, or auto (by extension)")
      ->check(CLI::IsMember({"auto", "binary", "csv"}));
  app.add_option("--width", a.width, "sensor width for CSV input");
  app.add_option("--height", a.height, "sensor height for CSV input");
  app.add_option("--downsample", a.downsample, "target WxH, e.g. 32x24");
  app.add_option("--max-rate", a.max_rate, "events/s; 0 disables");
  app.add_option("--rate-window-us", a.rate_window_us);
}

SensorGeometry parse_size(const std::string& s) {
  int w = 0, h = 0;
  char x = 0;
  std::istringstream is(s);
  if (!(is >> w >> x >> h) || (x != 'x' && x != 'X') || !is.eof()) throw UsageError("expected WxH, got '" + s + "'");
  return {w, h};
}

int cmd_convert(const ConvertArgs& a, std::ostream& out) {
  require_input(a.input);
  require_output(a.output);
  std::optional<SensorGeometry> target;
  if (!a.downsample.empty()) target = parse_size(a.downsample);
  if (a.max_rate < 0.0) throw UsageError("convert: --max-rate must be >= 0");
  EventBatch batch = load_events(a.input, {a.width, a.height});
  const std::size_t before = batch.events.size();
  if (target) batch = downsample(batch, *target);
  if (a.max_rate > 0.0) batch = rate_limit(batch, a.max_rate, a.rate_window_us);
  write_file(a.output, write_events(batch, format_for_output(a.output, a.format)));
  out << "events " << before << " -> " << batch.events.size() << " geometry " << batch.geometry.width << 'x'
      << batch.geometry.height << " -> " << a.output << '\n';
  return kOk;
}

// ---- surface ----------------------------------------------------------------

struct SurfaceArgs {
  std::string input, prefix, mode = "count";
  int width = 0, height = 0;
  Timestamp tau = 0;
  std::vector<double> counts = {0.03, 0.1, 0.3, 1.0};
  std::vector<Timestamp> durations;
};

void add_surface(CLI::App& app, SurfaceArgs& a) {
  app.add_option("-i,--input", a.input)->required();
  app.add_option("--tau", a.tau, "evaluation time, µs")->required();
  app.add_option("--mode", a.mode, "count (constant event count) or fixed (durations)")
      ->check(CLI::IsMember({"count", "fixed"}));
  app.add_option("--counts", a.counts, "normalized event counts per window")->delimiter(',');
  app.add_option("--durations", a.durations, "window durations, µs")->delimiter(',');
  app.add_option("--width", a.width, "sensor width for CSV input");
  app.add_option("--height", a.height, "sensor height for CSV input");
  app.add_option("-o,--output-prefix", a.prefix, "writes <prefix>_chNN.pgm and <prefix>.mcts")->required();
}

int cmd_surface(const SurfaceArgs& a, std::ostream& out) {
  require_input(a.input);
  require_output(a.prefix);
  WindowSpec spec;
  try {
    spec = window_spec_from(a.mode, a.counts, a.durations);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  const EventBatch batch = load_events(a.input, {a.width, a.height});
  std::size_t n = 0;
  while (n < batch.events.size() && batch.events[n].t <= a.tau) ++n;
  if (spec.mode == WindowMode::ConstantCount && n == 0)
    throw UsageError("surface: tau precedes the first event; constant-count windows are undefined");

  SurfaceState state(batch.geometry, ring_capacity_for(spec, batch.geometry));
  state.apply(std::span<const Event>(batch.events.data(), n));
  const MctsTensor tensor = mcts(state.grid, state.ring, a.tau, spec);
  const auto paths = write_mcts_pgms(tensor, a.prefix);
  write_file(a.prefix + ".mcts", encode_mcts_dump(tensor));

  out << "events_applied " << n << " tau " << a.tau << '\n';
  for (int k = 0; k < tensor.K(); ++k) out << "window " << k << " dt_us " << tensor.window_durations[std::size_t(k)] << '\n';
  out << "wrote " << paths.size() << " channel images and " << a.prefix << ".mcts\n";
  return kOk;
}

// ---- run --------------------------------------------------------------------

struct RunArgs {
  std::string input, detector = "classical", weights, mode = "count", pacing = "fast", schedule = "concurrent";
  std::string results, metrics, metrics_csv;
  int width = 0, height = 0;
  std::optional<std::uint64_t> random_weights;
  std::vector<double> counts = {0.03, 0.1, 0.3, 1.0};
  std::vector<Timestamp> durations;
  PipelineConfig config;
  double speed = 1.0;
  std::uint64_t every = 1;
  bool elide = false;
  std::optional<double> gt_vx, gt_vy;
  float inlier_threshold = kDefaultInlierThreshold;
};

void add_run(CLI::App& app, RunArgs& a) {
  app.add_option("-i,--input", a.input)->required();
  app.add_option("--width", a.width, "sensor width for CSV input");
  app.add_option("--height", a.height, "sensor height for CSV input");
  app.add_option("--detector", a.detector)->check(CLI::IsMember({"classical", "learned"}));
  app.add_option("--weights", a.weights, "SLWT weight file for the learned detector");
  app.add_option("--random-weights", a.random_weights, "seed for random learned weights");
  app.add_option("--mode", a.mode)->check(CLI::IsMember({"count", "fixed"}));
  app.add_option("--counts", a.counts)->delimiter(',');
  app.add_option("--durations", a.durations)->delimiter(',');
  app.add_option("--tick-us", a.config.tick_us);
  app.add_option("--watermark-lag-us", a.config.watermark_lag_us);
  app.add_option("--classical-pair", a.config.classical_pair, "window index k for the classical detector");
  app.add_option("--nms-radius", a.config.nms.radius);
  app.add_option("--nms-threshold", a.config.nms.threshold);
  app.add_option("--max-keypoints", a.config.nms.max_keypoints);
  app.add_option("--max-distance", a.config.max_match_distance);
  app.add_option("--quant-scale", a.config.quantization.scale);
  app.add_option("--interval-us", a.config.metrics_interval_us, "metrics aggregation interval");
  app.add_option("--slowdown", a.config.detector_slowdown, "stretch detection time (testing)");
  app.add_option("--pacing", a.pacing)->check(CLI::IsMember({"fast", "wallclock"}));
  app.add_option("--speed", a.speed, "stream seconds per wall second with wallclock pacing");
  app.add_option("--schedule", a.schedule, "concurrent, or deterministic (single-threaded)")
      ->check(CLI::IsMember({"concurrent", "deterministic"}));
  app.add_option("--every", a.every, "deterministic schedule: snapshot every n-th version");
  app.add_option("--results", a.results, "FrameResult JSON lines");
  app.add_flag("--elide-descriptors", a.elide);
  app.add_option("--metrics", a.metrics, "metrics JSON");
  app.add_option("--metrics-csv", a.metrics_csv, "per-interval stage timings");
  app.add_option("--gt-vx", a.gt_vx, "verify matches against a known translation, px/s");
  app.add_option("--gt-vy", a.gt_vy);
  app.add_option("--inlier-threshold", a.inlier_threshold, "px");
}

// The network needs multiples of its cell size; events beyond are dropped.
EventBatch crop_to_cell(const EventBatch& b, int cell, std::ostream& err) {
  const SensorGeometry g{b.geometry.width / cell * cell, b.geometry.height / cell * cell};
  if (g == b.geometry) return b;
  if (!g.valid()) throw UsageError("run: sensor is smaller than one " + std::to_string(cell) + " px cell");
  err << "note: cropping " << b.geometry.width << 'x' << b.geometry.height << " to " << g.width << 'x' << g.height
      << " for the learned detector\n";
  EventBatch out;
  out.geometry = g;
  for (const Event& e : b.events)
    if (g.contains(e.x, e.y)) out.events.push_back(e);
  return out;
}

int cmd_run(RunArgs& a, std::ostream& out, std::ostream& err) {
  require_input(a.input);
  for (const std::string* p : {&a.results, &a.metrics, &a.metrics_csv})
    if (!p->empty()) require_output(*p);
  if (!a.weights.empty()) require_input(a.weights);
  if (a.gt_vx.has_value() != a.gt_vy.has_value()) throw UsageError("run: give both --gt-vx and --gt-vy");
  if (a.every == 0) throw UsageError("run: --every must be >= 1");

  PipelineConfig& c = a.config;
  c.detector = a.detector == "learned" ? DetectorKind::Learned : DetectorKind::Classical;
  try {
    c.window_spec = window_spec_from(a.mode, a.counts, a.durations);
    if (c.detector == DetectorKind::Learned) {
      if (!a.weights.empty()) {
        c.network = std::make_shared<SuperLite>(load_weights(read_file(a.weights)));
      } else if (a.random_weights) {
        SuperLiteSpec spec;
        spec.input_channels = 2 * c.window_spec.K();
        c.network = std::make_shared<SuperLite>(random_weights(spec, *a.random_weights));
      } else {
        throw UsageError("run: the learned detector needs --weights or --random-weights");
      }
    }
  } catch (const WeightFormatError& e) {
    throw UsageError(a.weights + ": " + e.what());
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }

  EventBatch batch = load_events(a.input, {a.width, a.height});
  if (c.network) batch = crop_to_cell(batch, c.network->spec().cell(), err);
  try {
    validate_config(c, batch.geometry);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }

  ReplayOptions replay;
  replay.pacing = a.pacing == "wallclock" ? Pacing::WallClock : Pacing::AsFastAsPossible;
  replay.speed = a.speed;
  if (!(a.speed > 0.0)) throw UsageError("run: --speed must be positive");
  BatchSource source(batch);
  const PipelineRun run =
      a.schedule == "deterministic" ? run_pipeline_deterministic(source, c, a.every) : run_pipeline(source, c, replay);

  std::optional<TrackingReport> tracking;
  if (a.gt_vx) {
    MotionSpec motion;
    motion.vx = *a.gt_vx;
    motion.vy = *a.gt_vy;
    tracking = evaluate_tracking(run.results, motion, a.inlier_threshold);
  }
  if (!a.results.empty()) {
    std::ofstream f(a.results, std::ios::binary);
    for (std::size_t i = 0; i < run.results.size(); ++i)
      f << frame_result_json(run.results[i], a.elide, tracking ? &tracking->flags[i] : nullptr).dump() << '\n';
  }
  if (!a.metrics.empty()) {
    nlohmann::json m = metrics_json(run.metrics);
    if (tracking) m["verification"] = {{"matches", tracking->total_matches},
                                       {"inliers", tracking->total_inliers},
                                       {"inlier_ratio", tracking->inlier_ratio},
                                       {"threshold_px", a.inlier_threshold}};
    write_text(a.metrics, m.dump(2) + "\n");
  }
  if (!a.metrics_csv.empty()) write_text(a.metrics_csv, metrics_interval_csv(run.metrics));

  std::size_t matches = 0;
  for (const FrameResult& r : run.results) matches += r.matches_to_previous.size();
  out << "results " << run.results.size() << " versions " << run.metrics.versions_applied << " matches " << matches;
  if (tracking) out << " verified " << tracking->total_inliers << " inlier_ratio " << tracking->inlier_ratio;
  out << '\n';
  if (!run.metrics.source_error.empty()) err << "source error: " << run.metrics.source_error << '\n';
  if (run.results.empty()) {
    err << "run: no results\n";
    return kEmpty;
  }
  return kOk;
}

// ---- verify -----------------------------------------------------------------

struct VerifyArgs {
  MotionInvarianceParams params;
  int width = 100, height = 100;
  std::string report;
};

void add_verify(CLI::App& app, VerifyArgs& a) {
  app.add_option("--speed", a.params.speed, "slow edge speed, px/s");
  app.add_option("--factor", a.params.factor, "fast speed = speed·factor");
  app.add_option("--width", a.width);
  app.add_option("--height", a.height);
  app.add_option("--edge-column", a.params.edge_column, "column the edge reaches at comparison time");
  app.add_option("--counts", a.params.normalized_counts)->delimiter(',');
  app.add_option("--required-pairs", a.params.required_pairs);
  app.add_option("--report", a.report, "JSON report path");
}

int cmd_verify(VerifyArgs& a, std::ostream& out) {
  if (!a.report.empty()) require_output(a.report);
  a.params.geometry = {a.width, a.height};
  MotionInvarianceReport r;
  try {
    r = run_motion_invariance(a.params);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  out << "speeds " << a.params.speed << " and " << a.params.speed * a.params.factor << " px/s, tau " << r.tau_slow
      << " / " << r.tau_fast << " us\n";
  out << "pair  dt_slow_us  dt_fast_us  l1_constant_count  l1_fixed_window\n";
  for (std::size_t k = 0; k < r.constant_count_l1.size(); ++k)
    out << k << "  " << r.windows_slow[k] << "  " << r.windows_fast[k] << "  " << r.constant_count_l1[k] << "  "
        << r.fixed_window_l1[k] << '\n';
  out << "pairs_passed " << r.pairs_passed << " of " << r.constant_count_l1.size() << " (need "
      << a.params.required_pairs << ")\nverdict " << (r.pass ? "PASS" : "FAIL") << '\n';
  if (!a.report.empty()) {
    const nlohmann::json j{{"speed", a.params.speed},
                           {"factor", a.params.factor},
                           {"tau_slow_us", r.tau_slow},
                           {"tau_fast_us", r.tau_fast},
                           {"windows_slow_us", r.windows_slow},
                           {"windows_fast_us", r.windows_fast},
                           {"l1_constant_count", r.constant_count_l1},
                           {"l1_fixed_window", r.fixed_window_l1},
                           {"pairs_passed", r.pairs_passed},
                           {"required_pairs", a.params.required_pairs},
                           {"pass", r.pass}};
    write_text(a.report, j.dump(2) + "\n");
  }
  return kOk;
}

// ---- bench ------------------------------------------------------------------

struct BenchArgs {
  std::string workload = "all", output;
  int iterations = 5;
  std::size_t events = 1'000'000;
  std::vector<int> sizes = {64, 128};
  std::vector<std::size_t> set_sizes = {100, 500};
  std::uint64_t seed = 1;
};

void add_bench(CLI::App& app, BenchArgs& a) {
  app.add_option("--workload", a.workload)->check(CLI::IsMember({"all", "ingest", "mcts", "forward", "match"}));
  app.add_option("--iterations", a.iterations);
  app.add_option("--events", a.events, "ingest size N; rows for N and 2N are reported");
  app.add_option("--sizes", a.sizes, "square resolutions for mcts and forward")->delimiter(',');
  app.add_option("--set-sizes", a.set_sizes, "descriptor set sizes for match")->delimiter(',');
  app.add_option("--seed", a.seed);
  app.add_option("-o,--output", a.output, "CSV path (default stdout)");
}

int cmd_bench(const BenchArgs& a, std::ostream& out) {
  if (a.iterations < 1) throw UsageError("bench: --iterations must be >= 1");
  if (a.events < 1) throw UsageError("bench: --events must be >= 1");
  for (int s : a.sizes)
    if (s < 16 || s % 16 != 0) throw UsageError("bench: sizes must be positive multiples of 16");
  if (!a.output.empty()) require_output(a.output);
  const auto want = [&](const char* w) { return a.workload == "all" || a.workload == w; };
  std::vector<BenchRow> rows;
  if (want("ingest")) {
    rows.push_back(bench_ingest(a.events, a.iterations, a.seed));
    rows.push_back(bench_ingest(2 * a.events, a.iterations, a.seed));
  }
  if (want("mcts"))
    for (int s : a.sizes) rows.push_back(bench_mcts({s, s}, a.iterations, a.seed));
  if (want("forward"))
    for (int s : a.sizes) rows.push_back(bench_forward(s, a.iterations, a.seed));
  if (want("match"))
    for (std::size_t n : a.set_sizes) rows.push_back(bench_match(n, a.iterations, a.seed));
  const std::string csv = bench_csv(rows);
  if (a.output.empty())
    out << csv;
  else
    write_text(a.output, csv);
  return kOk;
}

}  // namespace

std::vector<std::string> apply_config_overlay(const std::vector<std::string>& args) {
  std::optional<std::string> path;
  std::size_t sub = args.size();
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (sub == args.size() && !args[i].starts_with("-")) sub = i;
    if (args[i] == "--config" && i + 1 < args.size()) path = args[i + 1];
    if (args[i].starts_with("--config=")) path = args[i].substr(9);
  }
  if (!path) return args;
  std::ifstream f(*path);
  if (!f) throw std::invalid_argument("cannot read config file " + *path);
  std::vector<std::string> tokens;
  std::string line;
  for (int n = 1; std::getline(f, line); ++n) {
    line = trim(line.substr(0, line.find('#')));
    if (line.empty()) continue;
    const auto eq = line.find('=');
    const std::string key = eq == std::string::npos ? "" : trim(line.substr(0, eq));
    if (key.empty() || key.starts_with("-"))
      throw std::invalid_argument(*path + ":" + std::to_string(n) + ": expected key=value");
    tokens.push_back("--" + key + "=" + trim(line.substr(eq + 1)));
  }
  std::vector<std::string> out(args.begin(), args.begin() + std::ptrdiff_t(std::min(sub + 1, args.size())));
  out.insert(out.end(), tokens.begin(), tokens.end());
  out.insert(out.end(), args.begin() + std::ptrdiff_t(std::min(sub + 1, args.size())), args.end());
  return out;
}

int run_cli(const std::vector<std::string>& raw_args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Event-camera keypoint frontend: synthesis, surfaces, detection and matching", "evfront"};
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  app.require_subcommand(1);
  app.fallthrough(false);

  std::string config_path;
  const auto add_config = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "flat key=value file; command-line flags take precedence");
    return sub;
  };

  SynthArgs synth;
  ConvertArgs convert;
  SurfaceArgs surface;
  RunArgs run;
  VerifyArgs verify;
  BenchArgs bench;
  auto* s_synth = add_config(app.add_subcommand("synth", "write a synthetic event stream"));
  add_synth(*s_synth, synth);
  auto* s_convert = add_config(app.add_subcommand("convert", "convert, downsample or rate-limit an event file"));
  add_convert(*s_convert, convert);
  auto* s_surface = add_config(app.add_subcommand("surface", "build the multi-channel time surface at one time"));
  add_surface(*s_surface, surface);
  auto* s_run = add_config(app.add_subcommand("run", "run the detection and matching pipeline"));
  add_run(*s_run, run);
  auto* s_verify = add_config(app.add_subcommand("verify", "compare constant-count and fixed windows at two speeds"));
  add_verify(*s_verify, verify);
  auto* s_bench = add_config(app.add_subcommand("bench", "time ingest, surfaces, forward pass and matching"));
  add_bench(*s_bench, bench);

  try {
    std::vector<std::string> args = apply_config_overlay(raw_args);
    std::reverse(args.begin(), args.end());  // CLI11 consumes from the back
    app.parse(args);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\nrun with --help for usage\n";
    return kUsage;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }

  try {
    if (s_synth->parsed()) return cmd_synth(synth, out);
    if (s_convert->parsed()) return cmd_convert(convert, out);
    if (s_surface->parsed()) return cmd_surface(surface, out);
    if (s_run->parsed()) return cmd_run(run, out, err);
    if (s_verify->parsed()) return cmd_verify(verify, out);
    if (s_bench->parsed()) return cmd_bench(bench, out);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::invalid_argument& e) {
    // Validation failures from the library (bad motion spec, window lists, ...).
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return kInternal;
  }
  return kInternal;
}

}  // namespace evfront::cli
