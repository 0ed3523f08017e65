#include <doctest.h>

#include <atomic>
#include <cmath>
#include <stdexcept>

#include "kbend/builtin.hpp"
#include "kbend/geometry.hpp"
#include "kbend/sampling.hpp"
#include "kbend/weierstrass.hpp"

using namespace kbend;

TEST_CASE("grid samples cover the box with endpoints") {
  const Box box{Vec::Constant(2, -1.0), Vec::Constant(2, 1.0)};
  const std::vector<int> counts{3, 5};
  const auto g = grid_samples(box, counts);
  REQUIRE(g.size() == 15);
  CHECK((g.front() - box.lo).norm() == 0.0);
  CHECK((g.back() - box.hi).norm() == 0.0);
  const std::vector<int> bad{1, 5};
  CHECK_THROWS_AS(grid_samples(box, bad), DomainError);
}

TEST_CASE("random samples are deterministic and inside the shrunk box") {
  const Box box{Vec::Constant(3, 0.0), Vec::Constant(3, 2.0)};
  const auto a = random_samples(box, 100, 42);
  const auto b = random_samples(box, 100, 42);
  const auto c = random_samples(box, 100, 43);
  bool differs = false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK((a[i] - b[i]).norm() == 0.0);
    differs = differs || (a[i] - c[i]).norm() > 0.0;
    CHECK(a[i].minCoeff() >= 0.1);
    CHECK(a[i].maxCoeff() <= 1.9);
  }
  CHECK(differs);
}

TEST_CASE("parallel kernels match the serial reference bit for bit") {
  const ImmersionChart f = immersion_f(m4r5_seed());
  const auto pts = random_samples(f.box(), 300, 3);
  const PointKernel k = [&](const Vec& p) {
    const PointFrame fr = point_frame(f.jet(p));
    return std::abs(fr.A.trace()) + op_norm(fr.A, fr.G);
  };
  const auto s = map_points(pts, k, Exec::serial);
  const auto p = map_points(pts, k, Exec::parallel);
  REQUIRE(s.size() == p.size());
  for (std::size_t i = 0; i < s.size(); ++i) CHECK(s[i] == p[i]);
}

TEST_CASE("for_each_index visits every index once and rethrows") {
  std::vector<std::atomic<int>> hits(1000);
  for_each_index(hits.size(), [&](std::size_t i) { hits[i]++; });
  for (auto& h : hits) CHECK(h.load() == 1);
  for (Exec e : {Exec::serial, Exec::parallel}) {
    CHECK_THROWS_AS(for_each_index(
                        100,
                        [](std::size_t i) {
                          if (i == 37) throw std::runtime_error("boom");
                        },
                        e),
                    std::runtime_error);
  }
  CHECK(worker_count() >= 1);
}
