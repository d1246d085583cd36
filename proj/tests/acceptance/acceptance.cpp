// Acceptance run: one PASS/FAIL line per primary criterion, exit 0 iff all pass.
// Every check compares against an oracle written here, not against the
// library's own helpers for the same quantity.

#include "evfront/bench.hpp"
#include "evfront/event_io.hpp"
#include "evfront/experiments.hpp"
#include "evfront/matching.hpp"
#include "evfront/mcts_io.hpp"
#include "evfront/pipeline.hpp"
#include "evfront/shared_state.hpp"
#include "evfront/superlite.hpp"
#include "evfront/surface.hpp"
#include "evfront/synth.hpp"
#include "test_util.hpp"

#include <algorithm>
#include <bit>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <thread>

using namespace evfront;

namespace {

struct Verdict {
  bool pass = false;
  std::string detail;
};

template <typename... T>
std::string fmt(const char* f, T... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

// ---- 1: time surface from the grid vs the maximum over all in-window events --

Verdict time_surface_oracle() {
  std::mt19937_64 rng(101);
  std::size_t values = 0, mismatches = 0, in_window = 0;
  for (int stream = 0; stream < 200; ++stream) {
    const SensorGeometry g{1 + int(rng() % 32), 1 + int(rng() % 32)};
    const std::size_t n = 1 + rng() % 10000;
    const EventBatch b = testutil::random_batch(rng, g, n, Timestamp(1 + rng() % 200000));
    for (int probe = 0; probe < 4; ++probe) {
      // A prefix ending at some event, evaluated at or after its newest time.
      const std::size_t end = 1 + rng() % n;
      const Timestamp latest = b.events[end - 1].t;
      const Timestamp tau = latest + (probe % 2 ? Timestamp(rng() % 1000) : 0);
      const Timestamp dt = 1 + Timestamp(rng() % std::uint64_t(std::max<Timestamp>(2, latest + 100)));
      TimestampGrid grid(g);
      EventCountRing ring(4);
      apply_events(grid, ring, std::span<const Event>(b.events.data(), end));

      for (Polarity p : {Polarity::Negative, Polarity::Positive}) {
        std::vector<float> expected(std::size_t(g.pixel_count()), 0.f);
        for (std::size_t i = 0; i < end; ++i) {
          const Event& e = b.events[i];
          if (e.p != p || e.t > tau || e.t < tau - dt) continue;
          float& v = expected[std::size_t(e.y) * std::size_t(g.width) + e.x];
          v = std::max(v, float(1.0 - double(tau - e.t) / double(dt)));
          ++in_window;
        }
        const TimeSurface got = time_surface(grid, tau, dt, p);
        for (std::size_t i = 0; i < expected.size(); ++i) {
          ++values;
          mismatches += std::bit_cast<std::uint32_t>(got.values[i]) != std::bit_cast<std::uint32_t>(expected[i]);
        }
      }
    }
  }
  return {mismatches == 0 && in_window > 0,
          fmt("200 streams, %zu pixel values, %zu bitwise mismatches", values, mismatches)};
}

// ---- 2: adaptive window lengths ------------------------------------------------

Verdict adaptive_window_check() {
  std::vector<std::string> problems;
  {
    EventCountRing ring(64);
    for (Timestamp t = 0; t <= 100; t += 10) ring.push(t);
    const std::int64_t n4[] = {4};
    const auto w = adaptive_windows(ring, 100, n4, Timestamp(0));
    if (w.size() != 1 || w[0] != 40) problems.push_back("0..100 by 10 at N=4 did not give 40");
  }
  std::mt19937_64 rng(202);
  std::size_t checked = 0;
  for (int seq = 0; seq < 500; ++seq) {
    const std::size_t len = 3 + rng() % 300;
    std::vector<Timestamp> ts;
    Timestamp t = Timestamp(rng() % 1000);
    for (std::size_t i = 0; i < len; ++i) ts.push_back(t += 1 + Timestamp(rng() % 50));
    EventCountRing ring(len + rng() % 10);
    for (Timestamp x : ts) ring.push(x);
    const Timestamp tau = ts.back() + (seq % 3 == 0 ? Timestamp(rng() % 20) : 0);
    std::vector<std::int64_t> counts;
    for (std::int64_t c = 1 + std::int64_t(rng() % 3); c < std::int64_t(len) - 1; c += 1 + std::int64_t(rng() % 40))
      counts.push_back(c);
    const auto w = adaptive_windows(ring, tau, counts, ts.front());
    for (std::size_t k = 0; k < counts.size(); ++k) {
      const std::size_t I = len - 1, N = std::size_t(counts[k]);
      const Timestamp want = tau - ts[I - N];
      const auto inside = std::count_if(ts.begin(), ts.end(), [&](Timestamp x) { return x >= tau - w[k] && x <= tau; });
      if (w[k] != want) problems.push_back(fmt("sequence %d N=%zu: got %lld want %lld", seq, N, (long long)w[k], (long long)want));
      if (tau == ts.back() && std::size_t(inside) != N + 1)
        problems.push_back(fmt("sequence %d N=%zu: window holds %td events", seq, N, inside));
      ++checked;
    }
  }
  std::string detail = fmt("0..100/10 at N=4 gives 40; %zu random (sequence, N) cases", checked);
  if (!problems.empty()) detail += "; first problem: " + problems.front();
  return {problems.empty(), detail};
}

// ---- 3: motion invariance -------------------------------------------------------

Verdict motion_invariance() {
  const MotionInvarianceParams params;
  const MotionInvarianceReport r = run_motion_invariance(params);
  std::ostringstream os;
  os << "v=" << params.speed << " vs " << params.speed * params.factor << " px/s; L1 constant-count/fixed per pair:";
  for (std::size_t k = 0; k < r.constant_count_l1.size(); ++k)
    os << ' ' << fmt("%.2e/%.3f", r.constant_count_l1[k], r.fixed_window_l1[k]);
  int smaller = 0;  // recount independently of the report's verdict
  for (std::size_t k = 0; k < r.constant_count_l1.size(); ++k) smaller += r.constant_count_l1[k] < r.fixed_window_l1[k];
  os << "; strictly smaller on " << smaller << " of " << r.constant_count_l1.size();
  return {smaller >= 3 && r.constant_count_l1.size() == 4, os.str()};
}

// ---- 4: network contract -------------------------------------------------------

Tensor3 random_input(int c, int h, int w, std::mt19937_64& rng) {
  std::uniform_real_distribution<float> u(0.f, 1.f);
  Tensor3 t(c, h, w);
  for (float& v : t.data) v = u(rng) < 0.7f ? 0.f : u(rng);
  return t;
}

Verdict network_contract() {
  std::mt19937_64 rng(404);
  std::vector<std::string> problems;
  double worst_sum = 0, worst_norm = 0, worst_shift = 0;
  std::size_t rows = 0;
  for (auto [h, w] : {std::pair{64, 64}, {96, 112}, {128, 128}}) {
    const SuperLite net(random_weights({}, rng()));
    const Tensor3 x = random_input(8, h, w, rng);
    const ForwardOutput out = net.forward(x);
    if (out.heatmap.width != w || out.heatmap.height != h) problems.push_back("heatmap shape");
    const Tensor3& d = out.descriptors.values;
    if (d.channels != 64 || d.height != h / 16 || d.width != w / 16) problems.push_back("descriptor map shape");

    const Tensor3 probs = cell_softmax(net.detector_logits(net.encode(x)));
    for (int y = 0; y < probs.height; ++y)
      for (int q = 0; q < probs.width; ++q) {
        double s = 0;
        for (int c = 0; c < probs.channels; ++c) s += probs.at(c, y, q);
        worst_sum = std::max(worst_sum, std::abs(s - 1.0));
      }

    NmsParams nms_all;
    nms_all.threshold = 0.f;
    nms_all.max_keypoints = 1000;
    KeypointSet kps = nms(out.heatmap, nms_all);
    std::uniform_real_distribution<float> ux(0.f, float(w - 1)), uy(0.f, float(h - 1));
    for (int i = 0; i < 200; ++i) kps.push_back({ux(rng), uy(rng), 0.f});
    const Descriptors desc = interpolate_descriptors(out.descriptors, kps, 16);
    for (std::size_t i = 0; i < desc.size(); ++i) {
      if (desc.zero_rows[i]) continue;
      double n2 = 0;
      for (int k = 0; k < desc.dim; ++k) n2 += double(desc.row(i)[k]) * desc.row(i)[k];
      worst_norm = std::max(worst_norm, std::abs(std::sqrt(n2) - 1.0));
      ++rows;
    }

    for (auto [sy, sx] : {std::pair{0, 16}, {16, 0}, {16, 32}}) {
      Tensor3 shifted(8, h, w);
      for (int c = 0; c < 8; ++c)
        for (int y = sy; y < h; ++y)
          for (int q = sx; q < w; ++q) shifted.at(c, y, q) = x.at(c, y - sy, q - sx);
      const ForwardOutput s = net.forward(shifted);
      const int H = h / 16, W = w / 16;
      // Cells two or more away from every border see no padding.
      for (int i = 2; i < H - 2; ++i)
        for (int j = 2; j < W - 2; ++j) {
          const int si = i - sy / 16, sj = j - sx / 16;
          if (si < 2 || sj < 2 || si >= H - 2 || sj >= W - 2) continue;
          for (int k = 0; k < 64; ++k)
            worst_shift = std::max(worst_shift, double(std::abs(s.descriptors.values.at(k, i, j) - d.at(k, si, sj))));
          for (int py = 0; py < 16; ++py)
            for (int px = 0; px < 16; ++px)
              worst_shift = std::max(worst_shift, double(std::abs(s.heatmap.at(j * 16 + px, i * 16 + py) -
                                                                  out.heatmap.at(sj * 16 + px, si * 16 + py))));
        }
    }
  }
  const bool ok = problems.empty() && worst_sum <= 1e-5 && worst_norm <= 1e-4 && worst_shift <= 1e-6 && rows > 0;
  return {ok, fmt("shapes %s; max |softmax sum-1| %.1e; max |row norm-1| %.1e over %zu rows; max interior shift "
                  "difference %.1e",
                  problems.empty() ? "ok" : problems.front().c_str(), worst_sum, worst_norm, rows, worst_shift)};
}

// ---- 5: quantized matching -----------------------------------------------------

Descriptors random_unit(std::size_t n, std::mt19937_64& rng) {
  std::normal_distribution<float> g;
  Descriptors d;
  d.dim = 64;
  d.values.resize(n * 64);
  d.zero_rows.assign(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    double s = 0;
    for (int k = 0; k < 64; ++k) s += double(d.values[i * 64 + k] = g(rng)) * d.values[i * 64 + k];
    for (int k = 0; k < 64; ++k) d.values[i * 64 + k] = float(d.values[i * 64 + k] / std::sqrt(s));
  }
  return d;
}

double float_cosine_distance(const float* a, const float* b) {
  double dot = 0, na = 0, nb = 0;
  for (int k = 0; k < 64; ++k) {
    dot += double(a[k]) * b[k];
    na += double(a[k]) * a[k];
    nb += double(b[k]) * b[k];
  }
  return 1.0 - dot / std::sqrt(na * nb);
}

Verdict quantized_matching() {
  std::mt19937_64 rng(505);
  const QuantizationScheme s127;

  const Descriptors a = random_unit(1000, rng), b = random_unit(1000, rng);
  const auto qa = quantize(a, s127), qb = quantize(b, s127);
  double worst = 0;
  for (std::size_t i = 0; i < 1000; ++i)
    worst = std::max(worst, std::abs(cosine_distance(qa.row(i), qb.row(i)) - float_cosine_distance(a.row(i), b.row(i))));

  int eligible = 0, preserved = 0;
  while (eligible < 1000) {
    const Descriptors db = random_unit(100, rng), q = random_unit(1, rng);
    std::vector<double> f(100);
    for (std::size_t j = 0; j < 100; ++j) f[j] = float_cosine_distance(q.row(0), db.row(j));
    std::vector<double> sorted = f;
    std::sort(sorted.begin(), sorted.end());
    if (sorted[1] - sorted[0] < 0.05) continue;
    ++eligible;
    const auto qq = quantize(q, s127), qdb = quantize(db, s127);
    std::size_t best = 0;
    for (std::size_t j = 1; j < 100; ++j)
      if (cosine_distance(qq.row(0), qdb.row(j)) < cosine_distance(qq.row(0), qdb.row(best))) best = j;
    preserved += best == std::size_t(std::min_element(f.begin(), f.end()) - f.begin());
  }
  const double argmin_rate = double(preserved) / eligible;

  // Scale variation without clamping: descriptors on the s=127 code grid,
  // quantized at s = 127·k, give codes k·q and therefore the same distance.
  std::size_t scale_cases = 0, scale_mismatch = 0;
  for (int trial = 0; trial < 300; ++trial) {
    const int k = 1 + int(rng() % 10);
    const int limit = 127 / k;
    std::uniform_int_distribution<int> code(-limit, limit);
    Descriptors pair;
    pair.dim = 64;
    std::vector<int> codes(128);
    for (int& c : codes) c = code(rng);
    codes[0] = codes[64] = limit;  // no zero rows
    for (int c : codes) pair.values.push_back(float(c) / 127.f);
    pair.zero_rows = {0, 0};
    const auto base = quantize(pair, s127);
    const auto scaled = quantize(pair, QuantizationScheme{127.f * float(k)});
    bool codes_ok = true;
    for (std::size_t i = 0; i < 128; ++i) codes_ok &= scaled.values[i] == k * base.values[i] && base.values[i] == codes[i];
    ++scale_cases;
    scale_mismatch += !codes_ok || cosine_distance(base.row(0), base.row(1)) != cosine_distance(scaled.row(0), scaled.row(1));
  }

  return {worst <= 0.02 && argmin_rate >= 0.99 && scale_mismatch == 0,
          fmt("max |quantized-float| %.4f over 1000 pairs; argmin kept %d/%d (%.1f%%); scale variation %zu cases, %zu "
              "inexact",
              worst, preserved, eligible, 100.0 * argmin_rate, scale_cases, scale_mismatch)};
}

// ---- 6: snapshot atomicity under concurrency -------------------------------------

void random_pause(std::mt19937_64& rng) {
  switch (rng() % 4) {
    case 0: break;
    case 1: std::this_thread::yield(); break;
    case 2: {
      volatile std::uint64_t sink = 0;
      for (std::uint64_t i = 0, n = rng() % 5000; i < n; ++i) sink = sink + i;
      break;
    }
    default: std::this_thread::sleep_for(std::chrono::microseconds(rng() % 50));
  }
}

Verdict snapshot_atomicity() {
  std::size_t violations = 0, snapshots = 0, min_events = SIZE_MAX, min_distinct = SIZE_MAX;
  for (int run = 0; run < 20; ++run) {
    std::mt19937_64 rng(6000 + run);
    const SensorGeometry g = std::array{SensorGeometry{32, 24}, SensorGeometry{64, 48}, SensorGeometry{48, 48}}[run % 3];
    const std::size_t capacity = std::array<std::size_t, 3>{100, 1000, 5000}[rng() % 3];
    const EventBatch all = testutil::random_batch(rng, g, 100000 + rng() % 20000, 5'000'000);
    min_events = std::min(min_events, all.events.size());

    SharedSurfaceState shared(g, capacity);
    std::vector<std::size_t> prefix_end;  // events applied after each version
    std::thread writer([&, seed = rng()] {
      std::mt19937_64 wr(seed);
      std::vector<Event> pending;
      std::size_t next = 0, applied = 0;
      while (next < all.events.size()) {
        const std::size_t take = std::min<std::size_t>(1 + wr() % 3000, all.events.size() - next);
        pending.insert(pending.end(), all.events.begin() + std::ptrdiff_t(next), all.events.begin() + std::ptrdiff_t(next + take));
        next += take;
        const Timestamp lag = std::array<Timestamp, 3>{0, 100, 20000}[wr() % 3];
        const std::size_t n = preprocess_tick(shared, pending, pending.back().t - lag);
        if (n > 0) prefix_end.push_back(applied += n);
        random_pause(wr);
      }
      if (const std::size_t n = preprocess_tick(shared, pending, std::numeric_limits<Timestamp>::max()))
        prefix_end.push_back(applied += n);
      shared.close();
    });

    std::vector<Snapshot> snaps;
    std::mt19937_64 rr(rng());
    std::uint64_t seen = 0;
    while (snaps.size() < 300) {
      Snapshot s;
      if (rr() % 2) {
        if (!shared.wait_and_freeze(seen, s)) break;
      } else {
        s = shared.freeze_snapshot();
      }
      seen = s.version;
      snaps.push_back(std::move(s));
      random_pause(rr);
    }
    writer.join();

    std::sort(snaps.begin(), snaps.end(), [](const Snapshot& a, const Snapshot& b) { return a.version < b.version; });
    SurfaceState replay(g, capacity);
    std::size_t replayed = 0, distinct = 0;
    std::uint64_t last = UINT64_MAX;
    for (const Snapshot& s : snaps) {
      const std::size_t end = s.version == 0 ? 0 : prefix_end.at(s.version - 1);
      replay.apply(std::span<const Event>(all.events.data() + replayed, end - replayed));
      replayed = end;
      violations += !(s.state == replay);
      distinct += s.version != last;
      last = s.version;
    }
    snapshots += snaps.size();
    min_distinct = std::min(min_distinct, distinct);
  }
  return {violations == 0 && min_events >= 100000 && min_distinct >= 10,
          fmt("20 runs, >= %zu events each, %zu snapshots (>= %zu distinct versions per run), %zu violations", min_events,
              snapshots, min_distinct, violations)};
}

// ---- 7: end-to-end pipeline ------------------------------------------------------

Verdict pipeline_end_to_end() {
  const SensorGeometry g{128, 128};
  MotionSpec m;
  m.pattern = MotionPattern::GridOfCorners;
  m.vx = 60.0;
  m.vy = 40.0;
  m.duration = 1.0;
  m.seed = 7;
  const EventBatch b = synthesize(m, g, 0);
  const PipelineConfig config;

  // Independent check of each match against the exact scene translation.
  const auto score = [&](const std::vector<FrameResult>& rs, std::vector<std::size_t>& per_m, std::vector<std::size_t>& per_i) {
    for (std::size_t i = 0; i < rs.size(); ++i) {
      std::size_t good = 0;
      for (const Match& x : rs[i].matches_to_previous) {
        const double dt = double(rs[i].tau - rs[i - 1].tau) * 1e-6;
        const Keypoint& p = rs[i - 1].keypoints[std::size_t(x.index_a)];
        const Keypoint& q = rs[i].keypoints[std::size_t(x.index_b)];
        good += std::hypot(p.x + m.vx * dt - q.x, p.y + m.vy * dt - q.y) < 5.0;
      }
      per_m.push_back(rs[i].matches_to_previous.size());
      per_i.push_back(good);
    }
  };
  std::string detail;
  bool ok = true;
  for (int mode = 0; mode < 2; ++mode) {
    BatchSource src(b);
    ReplayOptions replay;
    replay.pacing = Pacing::WallClock;
    const PipelineRun run = mode == 0 ? run_pipeline_deterministic(src, config) : run_pipeline(src, config, replay);
    std::vector<std::size_t> pm, pi;
    score(run.results, pm, pi);
    std::size_t tm = 0, ti = 0;
    for (std::size_t i = 0; i < pm.size(); ++i) tm += pm[i], ti += pi[i];
    double worst10 = 1.0;
    for (std::size_t s = 0; s + 10 <= pm.size(); ++s) {
      std::size_t wm = 0, wi = 0;
      for (std::size_t i = s; i < s + 10; ++i) wm += pm[i], wi += pi[i];
      if (wm) worst10 = std::min(worst10, double(wi) / double(wm));
    }
    const double ratio = tm ? double(ti) / double(tm) : 0.0;
    ok &= run.results.size() >= 10 && ratio >= 0.8;
    detail += fmt("%s%s: %zu consecutive results, %zu/%zu inliers = %.3f (worst 10-result window %.3f)",
                  mode ? "; " : "", mode ? "concurrent wall-clock" : "single-threaded", run.results.size(), ti, tm,
                  ratio, worst10);
  }
  return {ok, detail};
}

// ---- 8: ingest cost ------------------------------------------------------------

Verdict ingest_cost() {
  const SensorGeometry g{640, 480};
  const std::size_t N = 1'000'000;
  const std::vector<Event> big = random_events(2 * N, g, 8);
  const std::vector<Event> small(big.begin(), big.begin() + std::ptrdiff_t(N));
  std::vector<double> tn, t2n;
  for (int i = 0; i < 5; ++i) {
    tn.push_back(time_ingest_us(small, g));
    t2n.push_back(time_ingest_us(big, g));
  }
  std::nth_element(tn.begin(), tn.begin() + 2, tn.end());
  std::nth_element(t2n.begin(), t2n.begin() + 2, t2n.end());
  const double ratio = t2n[2] / tn[2];
  return {ratio <= 2.5, fmt("median of 5: N=1e6 %.1f ms, 2N %.1f ms, ratio %.2f", tn[2] / 1e3, t2n[2] / 1e3, ratio)};
}

// ---- 9: format round trips -------------------------------------------------------

Verdict round_trips() {
  std::mt19937_64 rng(909);
  std::size_t cases = 0, failures = 0;
  for (int i = 0; i < 100; ++i) {
    const SensorGeometry g{1 + int(rng() % 2000), 1 + int(rng() % 2000)};
    const EventBatch b = testutil::random_batch(rng, g, rng() % 500, Timestamp(1) << (rng() % 50));
    for (EventFormat f : {EventFormat::BinaryV1, EventFormat::Csv}) {
      const auto bytes = write_events(b, f);
      const EventBatch back = parse_events(bytes, f, g);
      failures += !(back == b) || write_events(back, f) != bytes;
      ++cases;
    }
  }
  for (int i = 0; i < 50; ++i) {
    const int K = 1 + int(rng() % 4), h = 1 + int(rng() % 40), w = 1 + int(rng() % 40);
    MctsTensor t;
    t.tau = Timestamp(rng() % (std::uint64_t(1) << 50));
    for (int k = 0; k < K; ++k) t.window_durations.push_back(1 + Timestamp(rng() % 1'000'000));
    t.channels = Tensor3(2 * K, h, w);
    std::uniform_real_distribution<float> u(0.f, 1.f);
    for (float& v : t.channels.data) v = u(rng);
    const auto bytes = encode_mcts_dump(t);
    const MctsTensor back = decode_mcts_dump(bytes);
    failures += !(back == t) || encode_mcts_dump(back) != bytes;
    ++cases;
  }
  for (int i = 0; i < 30; ++i) {
    SuperLiteSpec spec;
    spec.input_channels = 1 + int(rng() % 10);
    for (int& wd : spec.encoder_widths) wd = 1 + int(rng() % 24);
    spec.descriptor_dim = 1 + int(rng() % 70);
    const WeightBundle wb = random_weights(spec, rng());
    const auto bytes = save_weights(wb);
    const WeightBundle back = load_weights(bytes);
    failures += !(back == wb) || save_weights(back) != bytes;
    ++cases;
  }
  return {failures == 0, fmt("%zu randomized instances (binary-v1, CSV, MCTS dump, SLWT), %zu failures", cases, failures)};
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    double limit_s;  // 0: none
    std::function<Verdict()> run;
  };
  const std::vector<Criterion> criteria = {
      {1, "time surface equals brute-force maximum", 30, time_surface_oracle},
      {2, "adaptive windows hold the newest N+1 events", 1, adaptive_window_check},
      {3, "constant-count surfaces are closer across speeds", 10, motion_invariance},
      {4, "network shapes, softmax, unit descriptors, shift equivariance", 20, network_contract},
      {5, "int8 matching fidelity, argmin, scale invariance", 10, quantized_matching},
      {6, "snapshot atomicity under concurrent stress", 60, snapshot_atomicity},
      {7, "grid-of-corners pipeline inlier ratio >= 0.8 at 5 px", 30, pipeline_end_to_end},
      {8, "ingest time(2N) <= 2.5 x time(N), N = 1e6", 0, ingest_cost},
      {9, "format round trips", 0, round_trips},
  };
  int failed = 0;
  for (const Criterion& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = c.run();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::string timing = fmt("%.2f s", secs);
    if (c.limit_s > 0) {
      timing += fmt(" of %.0f s", c.limit_s);
      if (secs >= c.limit_s) v.pass = false;
    }
    failed += !v.pass;
    std::printf("%s %d %s: %s [%s]\n", v.pass ? "PASS" : "FAIL", c.id, c.name, v.detail.c_str(), timing.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", int(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
