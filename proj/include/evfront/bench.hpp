#pragma once

#include "evfront/types.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace evfront {

struct BenchRow {
  std::string workload;
  std::int64_t n = 0;  // events, pixels, or set size depending on workload
  int iterations = 0;
  double mean_us = 0.0;
  double p99_us = 0.0;
  double stddev_us = 0.0;
};

/// Sorted random events on `geometry`, reproducible from `seed`.
std::vector<Event> random_events(std::size_t n, SensorGeometry geometry, std::uint64_t seed);

/// Wall time to apply `events` to a fresh grid and ring, in µs.
double time_ingest_us(const std::vector<Event>& events, SensorGeometry geometry);

BenchRow summarize(std::string workload, std::int64_t n, const std::vector<double>& samples_us);

BenchRow bench_ingest(std::size_t events, int iterations, std::uint64_t seed = 1);
BenchRow bench_mcts(SensorGeometry geometry, int iterations, std::uint64_t seed = 1);
BenchRow bench_forward(int size, int iterations, std::uint64_t seed = 1);
BenchRow bench_match(std::size_t set_size, int iterations, std::uint64_t seed = 1);

/// workload,n,iterations,mean_us,p99_us,stddev_us
std::string bench_csv(const std::vector<BenchRow>& rows);

}  // namespace evfront
