#include "evfront/bench.hpp"

#include "evfront/matching.hpp"
#include "evfront/superlite.hpp"
#include "evfront/surface.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <random>
#include <sstream>
#include <stdexcept>

namespace evfront {

namespace {

using Clock = std::chrono::steady_clock;

template <typename Fn>
double time_us(Fn&& fn) {
  const auto start = Clock::now();
  fn();
  return std::chrono::duration<double, std::micro>(Clock::now() - start).count();
}

void require_iterations(int iterations) {
  if (iterations < 1) throw std::invalid_argument("bench: iterations must be >= 1");
}

}  // namespace

std::vector<Event> random_events(std::size_t n, SensorGeometry geometry, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> ux(0, geometry.width - 1), uy(0, geometry.height - 1), up(0, 1);
  std::uniform_int_distribution<int> gap(0, 2);
  std::vector<Event> events(n);
  Timestamp t = 0;
  for (Event& e : events) {
    t += gap(rng);
    e = {t, std::uint16_t(ux(rng)), std::uint16_t(uy(rng)), up(rng) ? Polarity::Positive : Polarity::Negative};
  }
  return events;
}

double time_ingest_us(const std::vector<Event>& events, SensorGeometry geometry) {
  SurfaceState state(geometry, ring_capacity_for(WindowSpec::constant_count(), geometry));
  return time_us([&] { state.apply(events); });
}

BenchRow summarize(std::string workload, std::int64_t n, const std::vector<double>& samples) {
  BenchRow row;
  row.workload = std::move(workload);
  row.n = n;
  row.iterations = int(samples.size());
  if (samples.empty()) return row;
  double sum = 0;
  for (double s : samples) sum += s;
  row.mean_us = sum / double(samples.size());
  double var = 0;
  for (double s : samples) var += (s - row.mean_us) * (s - row.mean_us);
  row.stddev_us = samples.size() > 1 ? std::sqrt(var / double(samples.size() - 1)) : 0.0;
  std::vector<double> sorted = samples;
  std::sort(sorted.begin(), sorted.end());
  const auto rank = std::size_t(std::ceil(0.99 * double(sorted.size())));
  row.p99_us = sorted[std::min(sorted.size() - 1, rank == 0 ? 0 : rank - 1)];
  return row;
}

BenchRow bench_ingest(std::size_t n, int iterations, std::uint64_t seed) {
  require_iterations(iterations);
  const SensorGeometry g{424, 240};
  const auto events = random_events(n, g, seed);
  std::vector<double> samples;
  for (int i = 0; i < iterations; ++i) samples.push_back(time_ingest_us(events, g));
  return summarize("ingest", std::int64_t(n), samples);
}

BenchRow bench_mcts(SensorGeometry g, int iterations, std::uint64_t seed) {
  require_iterations(iterations);
  const WindowSpec spec = WindowSpec::constant_count();
  SurfaceState state(g, ring_capacity_for(spec, g));
  state.apply(random_events(std::size_t(2 * g.pixel_count()), g, seed));
  std::vector<double> samples;
  for (int i = 0; i < iterations; ++i)
    samples.push_back(time_us([&] { (void)mcts(state.grid, state.ring, state.grid.latest_time, spec); }));
  return summarize("mcts", g.pixel_count(), samples);
}

BenchRow bench_forward(int size, int iterations, std::uint64_t seed) {
  require_iterations(iterations);
  const SuperLite net(random_weights(SuperLiteSpec{}, seed));
  Tensor3 input(net.spec().input_channels, size, size);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<float> u(0.f, 1.f);
  for (float& v : input.data) v = u(rng);
  std::vector<double> samples;
  for (int i = 0; i < iterations; ++i) samples.push_back(time_us([&] { (void)net.forward(input); }));
  return summarize("forward", std::int64_t(size) * size, samples);
}

BenchRow bench_match(std::size_t set_size, int iterations, std::uint64_t seed) {
  require_iterations(iterations);
  std::mt19937_64 rng(seed);
  std::normal_distribution<float> g;
  auto make = [&] {
    Descriptors d;
    d.dim = 64;
    d.values.resize(set_size * 64);
    for (float& v : d.values) v = g(rng);
    normalize_rows(d);
    return quantize(d, {});
  };
  const auto a = make(), b = make();
  std::vector<double> samples;
  for (int i = 0; i < iterations; ++i) samples.push_back(time_us([&] { (void)match_mutual_nn(a, b); }));
  return summarize("match", std::int64_t(set_size), samples);
}

std::string bench_csv(const std::vector<BenchRow>& rows) {
  std::ostringstream os;
  os << "workload,n,iterations,mean_us,p99_us,stddev_us\n";
  for (const BenchRow& r : rows)
    os << r.workload << ',' << r.n << ',' << r.iterations << ',' << r.mean_us << ',' << r.p99_us << ','
       << r.stddev_us << '\n';
  return os.str();
}

}  // namespace evfront
