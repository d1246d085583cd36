#include "doctest.h"
#include "test_util.hpp"

#include "evfront/classical.hpp"
#include "evfront/keypoints.hpp"
#include "evfront/superlite.hpp"
#include "evfront/surface.hpp"
#include "evfront/synth.hpp"

#include <cmath>

using namespace evfront;

namespace {

Tensor3 random_input(int c, int h, int w, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<float> u(0.f, 1.f);
  Tensor3 t(c, h, w);
  for (float& v : t.data) v = u(rng) < 0.7f ? 0.f : u(rng);  // sparse like a time surface
  return t;
}

// Straightforward reference forward pass, double accumulation, written
// independently of the library's loop structure.
struct Reference {
  const WeightBundle& w;

  static std::vector<double> conv(const std::vector<double>& in, int C, int H, int W, const ConvLayer& l) {
    std::vector<double> out(std::size_t(l.out_channels) * H * W);
    const int p = l.kernel / 2;
    for (int o = 0; o < l.out_channels; ++o)
      for (int y = 0; y < H; ++y)
        for (int x = 0; x < W; ++x) {
          double s = l.bias[std::size_t(o)];
          for (int i = 0; i < C; ++i)
            for (int ky = 0; ky < l.kernel; ++ky)
              for (int kx = 0; kx < l.kernel; ++kx) {
                const int yy = y + ky - p, xx = x + kx - p;
                if (yy < 0 || xx < 0 || yy >= H || xx >= W) continue;
                s += double(l.weight[((std::size_t(o) * C + i) * l.kernel + ky) * l.kernel + kx]) *
                     in[(std::size_t(i) * H + yy) * W + xx];
              }
          out[(std::size_t(o) * H + y) * W + x] = s;
        }
    return out;
  }

  ForwardOutput run(const Tensor3& input) const {
    int C = input.channels, H = input.height, W = input.width;
    std::vector<double> x(input.data.begin(), input.data.end());
    for (const EncoderLayer& layer : w.encoder) {
      x = conv(x, C, H, W, layer.conv);
      C = layer.conv.out_channels;
      for (int c = 0; c < C; ++c)
        for (std::size_t i = 0; i < std::size_t(H) * W; ++i) {
          double& v = x[std::size_t(c) * H * W + i];
          v = (v - layer.norm.mean[c]) / std::sqrt(double(layer.norm.variance[c]) + layer.norm.epsilon) *
                  layer.norm.scale[c] +
              layer.norm.shift[c];
          v = std::max(0.0, v);
        }
      std::vector<double> pooled(std::size_t(C) * (H / 2) * (W / 2));
      for (int c = 0; c < C; ++c)
        for (int y = 0; y < H / 2; ++y)
          for (int xx = 0; xx < W / 2; ++xx) {
            double m = -1e300;
            for (int d = 0; d < 4; ++d) m = std::max(m, x[(std::size_t(c) * H + 2 * y + d / 2) * W + 2 * xx + d % 2]);
            pooled[(std::size_t(c) * (H / 2) + y) * (W / 2) + xx] = m;
          }
      x = std::move(pooled);
      H /= 2;
      W /= 2;
    }
    const int cell = w.spec.cell();
    const auto logits = conv(x, C, H, W, w.detector_head);
    const auto desc = conv(x, C, H, W, w.descriptor_head);
    ForwardOutput out;
    out.heatmap = {W * cell, H * cell, std::vector<float>(std::size_t(W) * cell * H * cell)};
    const int K = w.detector_head.out_channels;
    for (int y = 0; y < H; ++y)
      for (int xx = 0; xx < W; ++xx) {
        double mx = -1e300, sum = 0;
        for (int k = 0; k < K; ++k) mx = std::max(mx, logits[(std::size_t(k) * H + y) * W + xx]);
        for (int k = 0; k < K; ++k) sum += std::exp(logits[(std::size_t(k) * H + y) * W + xx] - mx);
        for (int k = 0; k + 1 < K; ++k) {
          const int py = y * cell + k / cell, px = xx * cell + k % cell;
          out.heatmap.scores[std::size_t(py) * W * cell + px] =
              float(std::exp(logits[(std::size_t(k) * H + y) * W + xx] - mx) / sum);
        }
      }
    out.descriptors.values = Tensor3(w.descriptor_head.out_channels, H, W);
    for (std::size_t i = 0; i < desc.size(); ++i) out.descriptors.values.data[i] = float(desc[i]);
    return out;
  }
};

KeypointSet brute_nms(const Heatmap& h, const NmsParams& p) {
  KeypointSet all;
  for (int y = 0; y < h.height; ++y)
    for (int x = 0; x < h.width; ++x) {
      const float v = h.at(x, y);
      if (!(v >= p.threshold)) continue;
      bool strict = true;
      for (int yy = y - p.radius; yy <= y + p.radius && strict; ++yy)
        for (int xx = x - p.radius; xx <= x + p.radius; ++xx)
          if ((xx != x || yy != y) && xx >= 0 && yy >= 0 && xx < h.width && yy < h.height && h.at(xx, yy) >= v) {
            strict = false;
            break;
          }
      if (strict) all.push_back({float(x), float(y), v});
    }
  std::stable_sort(all.begin(), all.end(), [](const Keypoint& a, const Keypoint& b) { return a.score > b.score; });
  if (int(all.size()) > p.max_keypoints) all.resize(std::size_t(p.max_keypoints));
  return all;
}

}  // namespace

TEST_CASE("forward shapes for 8x128x128") {
  const SuperLite net(random_weights({}, 1));
  const auto out = net.forward(random_input(8, 128, 128, 2));
  CHECK(out.heatmap.width == 128);
  CHECK(out.heatmap.height == 128);
  CHECK(out.descriptors.values.channels == 64);
  CHECK(out.descriptors.values.height == 8);
  CHECK(out.descriptors.values.width == 8);
}

TEST_CASE("shape rule holds for other sizes and rejects indivisible inputs") {
  const SuperLite net(random_weights({}, 3));
  for (auto [h, w] : {std::pair{16, 16}, {32, 80}, {64, 48}}) {
    const auto out = net.forward(random_input(8, h, w, 4));
    CHECK(out.heatmap.width == w);
    CHECK(out.heatmap.height == h);
    CHECK(out.descriptors.values.height == h / 16);
    CHECK(out.descriptors.values.width == w / 16);
  }
  CHECK_THROWS(net.forward(random_input(8, 40, 32, 5)));
  CHECK_THROWS(net.forward(random_input(6, 32, 32, 5)));
}

TEST_CASE("zero weights on zero input give a uniform 1/257 heatmap") {
  const SuperLite net(zero_weights({}));
  const auto out = net.forward(Tensor3(8, 32, 48));
  for (float v : out.heatmap.scores) CHECK(v == doctest::Approx(1.0 / 257.0).epsilon(1e-6));
}

TEST_CASE("cell softmax sums to one before the dustbin is dropped") {
  const SuperLite net(random_weights({}, 7));
  const Tensor3 probs = cell_softmax(net.detector_logits(net.encode(random_input(8, 64, 64, 8))));
  CHECK(probs.channels == 257);
  for (int y = 0; y < probs.height; ++y)
    for (int x = 0; x < probs.width; ++x) {
      double s = 0;
      for (int c = 0; c < probs.channels; ++c) s += probs.at(c, y, x);
      CHECK(std::abs(s - 1.0) <= 1e-5);
    }
}

TEST_CASE("depth to space uses channel dy*16+dx") {
  Tensor3 probs(257, 2, 3);
  probs.at(16 * 5 + 9, 1, 2) = 0.25f;
  probs.at(256, 0, 0) = 0.9f;  // dustbin is dropped
  const Heatmap h = depth_to_space(probs, 16);
  CHECK(h.width == 48);
  CHECK(h.height == 32);
  CHECK(h.at(2 * 16 + 9, 16 + 5) == 0.25f);
  CHECK(std::count_if(h.scores.begin(), h.scores.end(), [](float v) { return v != 0.f; }) == 1);
}

TEST_CASE("forward agrees with a naive reference implementation") {
  const WeightBundle w = random_weights({}, 11);
  const SuperLite net(w);
  const Tensor3 input = random_input(8, 32, 48, 12);
  const auto got = net.forward(input);
  const auto ref = Reference{w}.run(input);
  for (std::size_t i = 0; i < got.heatmap.scores.size(); ++i)
    CHECK(got.heatmap.scores[i] == doctest::Approx(ref.heatmap.scores[i]).epsilon(1e-4).scale(1e-6));
  for (std::size_t i = 0; i < got.descriptors.values.data.size(); ++i)
    CHECK(got.descriptors.values.data[i] == doctest::Approx(ref.descriptors.values.data[i]).epsilon(1e-4).scale(1e-4));
}

TEST_CASE("16-pixel shifts are exact on the interior") {
  const SuperLite net(random_weights({}, 13));
  const Tensor3 x = random_input(8, 96, 112, 14);
  for (auto [sy, sx] : {std::pair{0, 16}, {16, 0}, {16, 32}}) {
    Tensor3 y(8, 96, 112);  // shifted copy; the uncovered band stays zero
    for (int c = 0; c < 8; ++c)
      for (int r = sy; r < 96; ++r)
        for (int q = sx; q < 112; ++q) y.at(c, r, q) = x.at(c, r - sy, q - sx);
    const auto a = net.forward(x), b = net.forward(y);
    const int H = 96 / 16, W = 112 / 16, cy = sy / 16, cx = sx / 16;
    int compared = 0;
    for (int i = 2; i < H - 2; ++i)
      for (int j = 2; j < W - 2; ++j) {
        const int si = i - cy, sj = j - cx;  // cell in the unshifted map
        if (si < 2 || sj < 2 || si >= H - 2 || sj >= W - 2) continue;
        ++compared;
        for (int d = 0; d < 64; ++d) CHECK(b.descriptors.values.at(d, i, j) == a.descriptors.values.at(d, si, sj));
        for (int py = 0; py < 16; ++py)
          for (int px = 0; px < 16; ++px)
            CHECK(b.heatmap.at(j * 16 + px, i * 16 + py) == a.heatmap.at(sj * 16 + px, si * 16 + py));
      }
    CHECK(compared > 0);
  }
}

TEST_CASE("forward is deterministic") {
  const SuperLite a(random_weights({}, 15)), b(random_weights({}, 15));
  const Tensor3 in = random_input(8, 32, 32, 16);
  const auto x = a.forward(in), y = b.forward(in);
  CHECK(x.heatmap == y.heatmap);
  CHECK(x.descriptors.values == y.descriptors.values);
}

TEST_CASE("random weights respect the fan-in bound") {
  const WeightBundle w = random_weights({}, 17);
  for (const auto& layer : w.encoder) {
    const float bound = 1.f / std::sqrt(float(layer.conv.in_channels * 9));
    for (float v : layer.conv.weight) CHECK(std::abs(v) <= bound);
  }
  const float hb = 1.f / std::sqrt(128.f);
  for (float v : w.detector_head.weight) CHECK(std::abs(v) <= hb);
  CHECK(w.detector_head.out_channels == 257);
  CHECK(w.descriptor_head.out_channels == 64);
}

TEST_CASE("nms examples") {
  Heatmap h{10, 10, std::vector<float>(100, 0.f)};
  h.scores[3 * 10 + 4] = 0.5f;
  auto k = nms(h, {4, 0.1f, 10});
  REQUIRE(k.size() == 1);
  CHECK(k[0] == Keypoint{4.f, 3.f, 0.5f});

  h.scores[3 * 10 + 5] = 0.9f;
  h.scores[3 * 10 + 4] = 0.8f;
  k = nms(h, {4, 0.1f, 10});
  REQUIRE(k.size() == 1);
  CHECK(k[0].x == 5.f);

  Heatmap flat{8, 8, std::vector<float>(64, 0.3f)};
  CHECK(nms(flat, {1, 0.f, 10}).empty());

  Heatmap below{4, 4, std::vector<float>(16, 0.f)};
  below.scores[5] = 0.01f;
  CHECK(nms(below, {1, 0.015f, 10}).empty());
}

TEST_CASE("nms matches a brute-force oracle and keeps points apart") {
  std::mt19937_64 rng(18);
  for (int trial = 0; trial < 40; ++trial) {
    const int W = 5 + int(rng() % 60), H = 5 + int(rng() % 60);
    Heatmap h{W, H, std::vector<float>(std::size_t(W) * H)};
    for (float& v : h.scores) v = float(rng() % 50) / 50.f;  // many ties
    const NmsParams p{1 + int(rng() % 5), float(rng() % 20) / 50.f, 1 + int(rng() % 80)};
    const auto got = nms(h, p);
    CHECK(got == brute_nms(h, p));
    for (std::size_t i = 0; i < got.size(); ++i) {
      if (i > 0) CHECK(got[i - 1].score >= got[i].score);
      for (std::size_t j = i + 1; j < got.size(); ++j)
        CHECK(std::hypot(got[i].x - got[j].x, got[i].y - got[j].y) >= float(p.radius));
    }
  }
}

TEST_CASE("descriptor interpolation") {
  DescriptorMap map{Tensor3(3, 2, 2)};
  const float u[3] = {3.f, 0.f, 4.f}, v[3] = {0.f, 2.f, 0.f};
  for (int d = 0; d < 3; ++d) {
    map.values.at(d, 0, 0) = u[d];
    map.values.at(d, 0, 1) = v[d];
  }
  // Cell (0,0) centre: (x+0.5)/16 - 0.5 = 0 at x = 7.5.
  const KeypointSet kps = {{7.5f, 7.5f, 1.f}, {15.5f, 7.5f, 1.f}, {7.5f, 23.5f, 1.f}, {0.f, 0.f, 1.f}};
  const Descriptors d = interpolate_descriptors(map, kps, 16);
  REQUIRE(d.size() == 4);
  CHECK(d.row(0)[0] == doctest::Approx(0.6));
  CHECK(d.row(0)[1] == doctest::Approx(0.0));
  CHECK(d.row(0)[2] == doctest::Approx(0.8));
  // Midway: normalized (u+v)/2 = (1.5, 1, 2)/|.|
  const double n = std::sqrt(1.5 * 1.5 + 1 + 4);
  CHECK(d.row(1)[0] == doctest::Approx(1.5 / n));
  CHECK(d.row(1)[1] == doctest::Approx(1.0 / n));
  CHECK(d.row(1)[2] == doctest::Approx(2.0 / n));
  CHECK(d.zero_rows[2] == 1);  // row 1 of the map is all zero
  for (int k = 0; k < 3; ++k) CHECK(d.row(2)[k] == 0.f);
  CHECK(d.row(3)[0] == doctest::Approx(0.6));  // edge clamped
}

TEST_CASE("interpolated descriptors are unit norm") {
  const SuperLite net(random_weights({}, 19));
  const auto out = net.forward(random_input(8, 64, 64, 20));
  std::mt19937_64 rng(21);
  KeypointSet kps;
  for (int i = 0; i < 200; ++i) kps.push_back({float(rng() % 6400) / 100.f, float(rng() % 6400) / 100.f, 1.f});
  const Descriptors d = interpolate_descriptors(out.descriptors, kps, 16);
  for (std::size_t i = 0; i < d.size(); ++i) {
    if (d.zero_rows[i]) continue;
    double s = 0;
    for (int k = 0; k < d.dim; ++k) s += double(d.row(i)[k]) * d.row(i)[k];
    CHECK(std::abs(std::sqrt(s) - 1.0) <= 1e-4);
  }
}

TEST_CASE("weights round trip and format errors") {
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    SuperLiteSpec spec;
    if (seed == 2) spec.descriptor_dim = 32;
    if (seed == 3) spec.encoder_widths = {8, 16, 16, 24};
    const WeightBundle w = random_weights(spec, seed);
    CHECK(load_weights(save_weights(w)) == w);
  }
  auto bytes = save_weights(random_weights({}, 4));
  auto kind = [](std::span<const std::byte> b) {
    try {
      load_weights(b);
    } catch (const WeightFormatError& e) {
      return int(e.kind());
    }
    return -1;
  };
  CHECK(kind(std::span(bytes).first(bytes.size() - 4)) == int(WeightFormatError::Kind::ShapeMismatch));
  CHECK(kind(std::span(bytes).first(32)) == int(WeightFormatError::Kind::ShapeMismatch));
  std::vector<std::byte> zero_spec(bytes.begin(), bytes.begin() + 32);
  std::fill(zero_spec.begin() + 4, zero_spec.end(), std::byte(0));
  CHECK(kind(zero_spec) == int(WeightFormatError::Kind::InvalidSpec));
  auto bad = bytes;
  bad[0] = std::byte('X');
  CHECK(kind(bad) == int(WeightFormatError::Kind::BadMagic));
}

TEST_CASE("classical detector on a flat surface finds nothing") {
  MctsTensor m;
  m.channels = Tensor3(8, 32, 32);
  m.window_durations = {1, 2, 3, 4};
  const auto det = classical_detect(m, 1, {});
  CHECK(det.keypoints.empty());
  CHECK(det.descriptors.dim == 64);
}

TEST_CASE("classical detector recovers grid corners") {
  const SensorGeometry g{128, 128};
  MotionSpec spec;
  spec.pattern = MotionPattern::GridOfCorners;
  spec.vx = 60;
  spec.vy = 40;
  spec.seed = 7;
  const EventBatch b = synthesize(spec, g, 0);
  const WindowSpec ws = WindowSpec::constant_count();
  for (Timestamp tau : {300'000, 550'000, 800'000}) {
    SurfaceState s(g, ring_capacity_for(ws, g));
    const auto end = std::upper_bound(b.events.begin(), b.events.end(), tau, [](Timestamp t, const Event& e) { return t < e.t; });
    s.apply(std::span(b.events.begin(), end));
    const MctsTensor m = mcts(s.grid, s.ring, s.grid.latest_time, ws);
    const auto det = classical_detect(m, 2, {});
    CHECK(det.descriptors.dim == 64);
    CHECK(det.descriptors.size() == det.keypoints.size());
    const auto truth = ground_truth_corners(spec, g, 0, s.grid.latest_time, 6.f);
    REQUIRE(truth.size() >= 20);
    int recovered = 0;
    for (const Point2f& c : truth) {
      float best = 1e9f;
      for (const Keypoint& k : det.keypoints) best = std::min(best, std::hypot(k.x - c.x, k.y - c.y));
      recovered += best <= 2.f;
    }
    INFO("tau=" << tau << " recovered " << recovered << "/" << truth.size());
    CHECK(recovered * 10 >= int(truth.size()) * 9);
  }
}
