#include <doctest.h>

#include "kbend/holo.hpp"
#include "support.hpp"

using namespace kbend;
using kbtest::max_coeff_diff;

namespace {

const cplx I{0.0, 1.0};

TruncatedSeries poly(std::vector<cplx> c) { return {cplx{}, std::move(c)}; }
TruncatedSeries z_series(int order = 4) { return TruncatedSeries::identity({}, order); }

}  // namespace

TEST_CASE("addition") {
  CHECK(max_coeff_diff(poly({1, 1}) + poly({1, -1}), poly({2, 0})) == 0.0);
  const auto s = poly({3, I, -2});
  CHECK(max_coeff_diff(s + TruncatedSeries::zero({}, 2), s) == 0.0);
  CHECK(max_coeff_diff(z_series() + z_series(), 2.0 * z_series()) == 0.0);
  CHECK((poly({1, 2, 3}) + poly({1, 2})).order() == 1);
}

TEST_CASE("multiplication") {
  CHECK(max_coeff_diff(poly({1, 1, 0}) * poly({1, -1, 0}), poly({1, 0, -1})) == 0.0);
  const auto s = poly({3, I, -2});
  CHECK(max_coeff_diff(s * TruncatedSeries::constant(1.0, {}, 2), s) == 0.0);
  CHECK(max_coeff_diff(z_series(2) * z_series(2), poly({0, 0, 1})) == 0.0);
}

TEST_CASE("derivative and antiderivative") {
  CHECK(max_coeff_diff(series_diff(poly({0, 0, 1})), poly({0, 2})) == 0.0);
  CHECK(max_coeff_diff(series_diff(poly({7, 0, 0})), poly({0, 0})) == 0.0);
  const auto d0 = series_diff(poly({5}));
  CHECK(d0.order() == 0);
  CHECK(d0[0] == cplx{});

  CHECK(max_coeff_diff(series_int(poly({1}), 0.0), poly({0, 1})) == 0.0);
  CHECK(max_coeff_diff(series_int(poly({0, 1}), 0.0), poly({0, 0, 0.5})) == 0.0);
  CHECK(max_coeff_diff(series_int(poly({0}), 5.0), poly({5, 0})) == 0.0);
  CHECK(series_int(poly({1, 2, 3}), 0.0).order() == 3);
}

TEST_CASE("evaluation") {
  CHECK(series_eval(poly({1, 0, -1}), 0.0).value == cplx{1.0});
  CHECK(series_eval(z_series(), I).value == I);
  CHECK(std::abs(series_eval(poly({0, 1, 0, -1.0 / 3.0}), 1.0).value - 2.0 / 3.0) < 1e-15);

  const TruncatedSeries s({0.0}, {1.0, 1.0}, 0.5);
  CHECK_FALSE(series_eval(s, 0.4).outside_radius);
  CHECK(series_eval(s, 0.6).outside_radius);
}

TEST_CASE("vector dot product has no conjugation") {
  const auto one = poly({1, 0, 0});
  const auto zero = poly({0, 0, 0});
  CHECK(vdot(SeriesVector({one, zero}), SeriesVector({zero, one})).is_zero());

  const auto z = z_series(6);
  const auto z2 = z * z;
  const auto c1 = series_scale(series_sub(TruncatedSeries::constant(1.0, {}, 6), z2), 0.5);
  const auto c2 = series_scale(series_add(TruncatedSeries::constant(1.0, {}, 6), z2), 0.5 * I);
  const SeriesVector iso({c1, c2, z});
  CHECK(max_coeff_diff(vdot(iso, iso), TruncatedSeries::zero({}, 6)) < 1e-15);

  const SeriesVector zx({z, TruncatedSeries::zero({}, 6), TruncatedSeries::zero({}, 6)});
  CHECK(max_coeff_diff(vdot(zx, zx), z2) == 0.0);
}

TEST_CASE("basepoint and dimension mismatches are errors") {
  const TruncatedSeries a({0.0}, {1.0, 1.0});
  const TruncatedSeries b({1.0}, {1.0, 1.0});
  CHECK_THROWS_AS(series_add(a, b), DomainError);
  CHECK_THROWS_AS(series_mul(a, b), DomainError);
  CHECK_THROWS_AS(vdot(SeriesVector({a}), SeriesVector({a, a})), DomainError);
}

TEST_CASE("property: differentiating an antiderivative is exact") {
  std::mt19937_64 rng(101);
  for (int trial = 0; trial < 50; ++trial) {
    const auto a = kbtest::random_series(rng, 1 + trial % 20, {0.3, -0.2});
    const auto back = series_diff(series_int(a, {1.5, 2.0}));
    REQUIRE(back.order() == a.order());
    CHECK(max_coeff_diff(back, a) <= 1e-15 * (1.0 + a.order()));
  }
}

TEST_CASE("property: product evaluation within the truncation bound") {
  std::mt19937_64 rng(202);
  std::uniform_real_distribution<double> u(-0.5, 0.5);
  for (int trial = 0; trial < 50; ++trial) {
    const int order = 1 + trial % 12;
    const auto a = kbtest::random_series(rng, order);
    const auto b = kbtest::random_series(rng, order + trial % 3);
    const cplx z{u(rng), u(rng)};
    const cplx exact = series_eval(a, z).value * series_eval(b, z).value;
    const double err = std::abs(series_eval(a * b, z).value - exact);
    CHECK(err <= truncation_bound(a, b, z) + 1e-13);
  }
}

TEST_CASE("property: multiplication is commutative and bilinear; vdot is symmetric") {
  std::mt19937_64 rng(303);
  for (int trial = 0; trial < 30; ++trial) {
    const int order = 2 + trial % 10;
    const auto a = kbtest::random_series(rng, order);
    const auto b = kbtest::random_series(rng, order);
    const auto c = kbtest::random_series(rng, order);
    const cplx s{0.7, -1.3};
    CHECK(max_coeff_diff(a * b, b * a) < 1e-13);
    CHECK(max_coeff_diff((a + s * b) * c, a * c + s * (b * c)) < 1e-12);

    const SeriesVector u({a, b, c});
    const SeriesVector v({c, a, b});
    CHECK(max_coeff_diff(vdot(u, v), vdot(v, u)) < 1e-13);
  }
}
