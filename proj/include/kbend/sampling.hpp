#pragma once

// Sample sets and the point-parallel evaluation kernels.  Every kernel has a
// serial reference used by the tests and the benchmark.

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "kbend/chart.hpp"

namespace kbend {

enum class Exec { serial, parallel };

/// Tensor grid with counts[i] >= 2 nodes per axis, endpoints included.
std::vector<Vec> grid_samples(const Box& box, std::span<const int> counts);

/// Uniform samples in the box shrunk by `margin` (fraction of each side).
std::vector<Vec> random_samples(const Box& box, std::size_t count, std::uint64_t seed,
                                double margin = 0.05);

using PointKernel = std::function<double(const Vec&)>;

std::vector<double> map_points_serial(std::span<const Vec> points, const PointKernel& kernel);
std::vector<double> map_points_parallel(std::span<const Vec> points, const PointKernel& kernel);

inline std::vector<double> map_points(std::span<const Vec> points, const PointKernel& kernel,
                                      Exec exec = Exec::parallel) {
  return exec == Exec::parallel ? map_points_parallel(points, kernel)
                                : map_points_serial(points, kernel);
}

/// Runs body(i) for i in [0, n); the first exception thrown is rethrown.
void for_each_index(std::size_t n, const std::function<void(std::size_t)>& body,
                    Exec exec = Exec::parallel);

int worker_count();

}  // namespace kbend
