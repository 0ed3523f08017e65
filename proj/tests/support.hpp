#pragma once

#include <complex>
#include <cstdint>
#include <random>
#include <vector>

#include "kbend/chart.hpp"
#include "kbend/holo.hpp"

namespace kbtest {

using kbend::cplx;

inline std::vector<cplx> random_coeffs(std::mt19937_64& rng, int order, double scale = 1.0) {
  std::normal_distribution<double> nd(0.0, scale);
  std::vector<cplx> c(static_cast<std::size_t>(order) + 1);
  for (auto& x : c) x = {nd(rng), nd(rng)};
  return c;
}

inline kbend::TruncatedSeries random_series(std::mt19937_64& rng, int order, cplx base = {}) {
  return {base, random_coeffs(rng, order)};
}

inline double max_coeff_diff(const kbend::TruncatedSeries& a, const kbend::TruncatedSeries& b) {
  double m = 0.0;
  const int n = std::max(a.order(), b.order());
  for (int k = 0; k <= n; ++k) {
    const cplx x = k <= a.order() ? a[k] : cplx{};
    const cplx y = k <= b.order() ? b[k] : cplx{};
    m = std::max(m, std::abs(x - y));
  }
  return m;
}

inline kbend::Vec vec(std::initializer_list<double> xs) {
  kbend::Vec v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) v[i++] = x;
  return v;
}

}  // namespace kbtest
