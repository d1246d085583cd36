#include "evfront/synth.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace evfront {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Rect {
  double x0, y0;  // top-left at motion start, pattern coordinates = pixel indices
  double w, h;
};

// A bright blob: the union of its parts.
using Shape = std::vector<Rect>;

// Interval of motion time (µs) during which integer coordinate `c` lies in
// the moving segment [start + v·s, start + v·s + len).
struct Coverage {
  double enter = -kInf;
  double exit = kInf;
  bool ever = true;
};

Coverage axis_coverage(int c, double start, double len, double v) {
  if (v == 0.0) {
    Coverage cov;
    cov.ever = c >= start && c < start + len;
    return cov;
  }
  // v in px/s; integral numerators over integral speeds give exact µs values.
  const double a = (c - start - len) * 1e6 / v;
  const double b = (c - start) * 1e6 / v;
  return v > 0 ? Coverage{a, b, true} : Coverage{b, a, true};
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

bool inside(const Shape& shape, double px, double py) {
  for (const Rect& r : shape)
    if (px >= r.x0 && px < r.x0 + r.w && py >= r.y0 && py < r.y0 + r.h) return true;
  return false;
}

// Vertices of the union outline, found by quadrant occupancy at every
// crossing of a part's vertical and horizontal edge lines. Requires edge lines
// to be more than one pixel apart (guaranteed by the generator).
std::vector<Point2f> shape_vertices(const Shape& shape) {
  std::vector<double> xs, ys;
  for (const Rect& r : shape) {
    xs.insert(xs.end(), {r.x0, r.x0 + r.w});
    ys.insert(ys.end(), {r.y0, r.y0 + r.h});
  }
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
  std::sort(ys.begin(), ys.end());
  ys.erase(std::unique(ys.begin(), ys.end()), ys.end());
  std::vector<Point2f> out;
  for (double y : ys)
    for (double x : xs) {
      const bool a = inside(shape, x - 0.5, y - 0.5), b = inside(shape, x + 0.5, y - 0.5);
      const bool c = inside(shape, x - 0.5, y + 0.5), d = inside(shape, x + 0.5, y + 0.5);
      const int n = a + b + c + d;
      if (n == 1 || n == 3 || (n == 2 && a == d)) out.push_back({float(x), float(y)});
    }
  return out;
}

bool well_separated(const std::vector<double>& v, double gap) {
  for (std::size_t i = 0; i < v.size(); ++i)
    for (std::size_t j = i + 1; j < v.size(); ++j)
      if (v[i] != v[j] && std::abs(v[i] - v[j]) < gap) return false;
  return true;
}

Shape lattice_shape(const MotionSpec& spec, std::int64_t i, std::int64_t j) {
  std::uint64_t h = splitmix64(spec.seed ^ splitmix64(std::uint64_t(i) * 0x100000001b3ull ^ std::uint64_t(j)));
  auto draw = [&h](int lo, int hi) {
    h = splitmix64(h);
    return lo + int(h % std::uint64_t(hi - lo + 1));
  };
  const int c = spec.cell;
  auto size = [&] { return draw(spec.min_size, spec.max_size); };

  Shape shape;
  for (int attempt = 0; attempt < 256; ++attempt) {
    shape.clear();
    const int w = size(), hh = size();
    shape.push_back({double(draw(1, c - w - 1)), double(draw(1, c - hh - 1)), double(w), double(hh)});
    for (int k = 1; k < spec.parts; ++k) {
      const Rect& a = shape.front();
      const int pw = size(), ph = size();
      // Overlap the first part by at least two pixels on each axis.
      const int xlo = std::max(1, int(a.x0) - pw + 2), xhi = std::min(c - pw - 1, int(a.x0 + a.w) - 2);
      const int ylo = std::max(1, int(a.y0) - ph + 2), yhi = std::min(c - ph - 1, int(a.y0 + a.h) - 2);
      if (xlo > xhi || ylo > yhi) break;
      shape.push_back({double(draw(xlo, xhi)), double(draw(ylo, yhi)), double(pw), double(ph)});
    }
    if (int(shape.size()) != spec.parts) continue;

    std::vector<double> xs, ys;
    for (const Rect& r : shape) {
      xs.insert(xs.end(), {r.x0, r.x0 + r.w});
      ys.insert(ys.end(), {r.y0, r.y0 + r.h});
    }
    if (!well_separated(xs, 2.0) || !well_separated(ys, 2.0)) continue;
    const auto verts = shape_vertices(shape);
    bool ok = true;
    for (std::size_t m = 0; m < verts.size() && ok; ++m)
      for (std::size_t n = m + 1; n < verts.size() && ok; ++n)
        ok = std::hypot(verts[m].x - verts[n].x, verts[m].y - verts[n].y) >= spec.corner_spacing;
    if (ok) break;
    if (attempt == 255) shape.resize(1);  // fall back to a single rectangle
  }

  // Dyadic sub-pixel phase so edges of different blobs cross pixel
  // boundaries at different instants.
  const double fx = draw(0, 63) / 64.0 + double(i * c);
  const double fy = draw(0, 63) / 64.0 + double(j * c);
  for (Rect& r : shape) {
    r.x0 += fx;
    r.y0 += fy;
  }
  return shape;
}

std::vector<Shape> scene_shapes(const MotionSpec& spec, SensorGeometry g) {
  if (spec.pattern == MotionPattern::VerticalEdge) {
    if (spec.vx == 0.0) return {};
    const double x0 = spec.vx > 0 ? -1.0 : double(g.width - 1);
    return {{{x0, -kInf, 1.0, kInf}}};
  }
  const double sx = spec.vx * spec.duration;
  const double sy = spec.vy * spec.duration;
  const auto lo = [&](double shift) { return std::int64_t(std::floor((-std::max(0.0, shift)) / spec.cell)) - 1; };
  const auto hi = [&](int extent, double shift) {
    return std::int64_t(std::ceil((extent - std::min(0.0, shift)) / spec.cell)) + 1;
  };
  std::vector<Shape> shapes;
  for (std::int64_t j = lo(sy); j <= hi(g.height, sy); ++j)
    for (std::int64_t i = lo(sx); i <= hi(g.width, sx); ++i) shapes.push_back(lattice_shape(spec, i, j));
  return shapes;
}

}  // namespace

void validate_motion(const MotionSpec& spec) {
  if (!(spec.duration > 0.0)) throw std::invalid_argument("motion duration must be positive");
  if (!std::isfinite(spec.vx) || !std::isfinite(spec.vy) || (spec.vx == 0.0 && spec.vy == 0.0))
    throw std::invalid_argument("motion velocity must be finite and non-zero");
  if (spec.pattern == MotionPattern::GridOfCorners) {
    if (spec.min_size < 4 || spec.max_size < spec.min_size || spec.max_size > spec.cell - 2)
      throw std::invalid_argument("rectangle sizes must satisfy 4 <= min <= max <= cell - 2");
    if (spec.parts < 1 || spec.parts > 8) throw std::invalid_argument("parts must be in [1, 8]");
    if (!(spec.corner_spacing >= 0.0)) throw std::invalid_argument("corner spacing must be non-negative");
  }
}

EventBatch synthesize(const MotionSpec& spec, SensorGeometry geometry, Timestamp start_time) {
  validate_motion(spec);
  if (!geometry.valid()) throw std::invalid_argument("sensor geometry must be at least 1x1");

  const double vx = spec.vx;
  const double vy = spec.vy;
  const double end_us = spec.duration * 1e6;

  EventBatch batch;
  batch.geometry = geometry;
  auto emit = [&](double s_us, int x, int y, Polarity p) {
    if (s_us < 0.0 || s_us > end_us) return;
    batch.events.push_back({start_time + Timestamp(std::floor(s_us)), std::uint16_t(x), std::uint16_t(y), p});
  };

  std::vector<std::pair<double, double>> spans;
  for (const Shape& shape : scene_shapes(spec, geometry)) {
    double bx0 = kInf, by0 = kInf, bx1 = -kInf, by1 = -kInf;
    for (const Rect& r : shape) {
      bx0 = std::min(bx0, r.x0), by0 = std::min(by0, r.y0);
      bx1 = std::max(bx1, r.x0 + r.w), by1 = std::max(by1, r.y0 + r.h);
    }
    // Pixel range swept by the blob over the whole motion.
    const double sx = vx * spec.duration, sy = vy * spec.duration;
    const bool full_rows = std::isinf(by1);
    const int xa = std::max(0, int(std::floor(bx0 + std::min(0.0, sx))) - 1);
    const int xb = std::min(geometry.width - 1, int(std::ceil(bx1 + std::max(0.0, sx))) + 1);
    const int ya = full_rows ? 0 : std::max(0, int(std::floor(by0 + std::min(0.0, sy))) - 1);
    const int yb = full_rows ? geometry.height - 1 : std::min(geometry.height - 1, int(std::ceil(by1 + std::max(0.0, sy))) + 1);

    for (int y = ya; y <= yb; ++y)
      for (int x = xa; x <= xb; ++x) {
        spans.clear();
        for (const Rect& r : shape) {
          const Coverage cy = full_rows ? Coverage{} : axis_coverage(y, r.y0, r.h, vy);
          if (!cy.ever) continue;
          const Coverage cx = axis_coverage(x, r.x0, r.w, vx);
          if (!cx.ever) continue;
          const double enter = std::max(cx.enter, cy.enter);
          const double exit = std::min(cx.exit, cy.exit);
          if (enter < exit) spans.emplace_back(enter, exit);
        }
        std::sort(spans.begin(), spans.end());
        // Overlapping or touching parts keep the pixel bright continuously.
        for (std::size_t k = 0; k < spans.size();) {
          double enter = spans[k].first, exit = spans[k].second;
          for (++k; k < spans.size() && spans[k].first <= exit; ++k) exit = std::max(exit, spans[k].second);
          emit(enter, x, y, Polarity::Positive);
          emit(exit, x, y, Polarity::Negative);
        }
      }
  }

  std::stable_sort(batch.events.begin(), batch.events.end(),
                   [](const Event& a, const Event& b) { return a.t < b.t; });
  return batch;
}

std::vector<Point2f> ground_truth_corners(const MotionSpec& spec, SensorGeometry geometry,
                                          Timestamp start_time, Timestamp t, float margin) {
  std::vector<Point2f> corners;
  if (spec.pattern != MotionPattern::GridOfCorners) return corners;
  const double s = double(t - start_time) * 1e-6;
  for (const Shape& shape : scene_shapes(spec, geometry))
    for (const Point2f& v : shape_vertices(shape)) {
      const double cx = v.x + spec.vx * s - 0.5;
      const double cy = v.y + spec.vy * s - 0.5;
      if (cx < margin || cy < margin || cx > geometry.width - 1 - margin || cy > geometry.height - 1 - margin)
        continue;
      corners.push_back({float(cx), float(cy)});
    }
  return corners;
}

PointWarp translation_warp(const MotionSpec& spec, Timestamp from, Timestamp to) {
  const double ds = double(to - from) * 1e-6;
  const float dx = float(spec.vx * ds);
  const float dy = float(spec.vy * ds);
  return [dx, dy](Point2f p) { return Point2f{p.x + dx, p.y + dy}; };
}

}  // namespace evfront
