#include "kbend/sampling.hpp"

#include <exception>
#include <random>

#include <omp.h>

#include "kbend/holo.hpp"

namespace kbend {

std::vector<Vec> grid_samples(const Box& box, std::span<const int> counts) {
  const int d = box.dim();
  if (static_cast<int>(counts.size()) != d) throw DomainError("grid: one count per axis required");
  std::size_t total = 1;
  for (int c : counts) {
    if (c < 2) throw DomainError("grid: at least two nodes per axis");
    total *= static_cast<std::size_t>(c);
  }
  std::vector<Vec> out;
  out.reserve(total);
  std::vector<int> idx(static_cast<std::size_t>(d), 0);
  for (std::size_t n = 0; n < total; ++n) {
    Vec p(d);
    for (int i = 0; i < d; ++i) {
      const double t = static_cast<double>(idx[static_cast<std::size_t>(i)]) / (counts[static_cast<std::size_t>(i)] - 1);
      p[i] = box.lo[i] + t * (box.hi[i] - box.lo[i]);
    }
    out.push_back(std::move(p));
    for (int i = d - 1; i >= 0; --i) {
      if (++idx[static_cast<std::size_t>(i)] < counts[static_cast<std::size_t>(i)]) break;
      idx[static_cast<std::size_t>(i)] = 0;
    }
  }
  return out;
}

std::vector<Vec> random_samples(const Box& box, std::size_t count, std::uint64_t seed, double margin) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<Vec> out;
  out.reserve(count);
  for (std::size_t n = 0; n < count; ++n) {
    Vec p(box.dim());
    for (int i = 0; i < box.dim(); ++i) {
      const double w = box.hi[i] - box.lo[i];
      p[i] = box.lo[i] + margin * w + (1.0 - 2.0 * margin) * w * unit(rng);
    }
    out.push_back(std::move(p));
  }
  return out;
}

std::vector<double> map_points_serial(std::span<const Vec> points, const PointKernel& kernel) {
  std::vector<double> out(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) out[i] = kernel(points[i]);
  return out;
}

std::vector<double> map_points_parallel(std::span<const Vec> points, const PointKernel& kernel) {
  std::vector<double> out(points.size());
  for_each_index(points.size(), [&](std::size_t i) { out[i] = kernel(points[i]); });
  return out;
}

void for_each_index(std::size_t n, const std::function<void(std::size_t)>& body, Exec exec) {
  if (exec == Exec::serial) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::exception_ptr failure;
  const auto count = static_cast<std::int64_t>(n);
#pragma omp parallel for schedule(dynamic, 4)
  for (std::int64_t i = 0; i < count; ++i) {
    try {
      body(static_cast<std::size_t>(i));
    } catch (...) {
#pragma omp critical(kbend_for_each_failure)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
}

int worker_count() { return omp_get_max_threads(); }

}  // namespace kbend
