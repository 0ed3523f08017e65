#include <doctest.h>

#include <cmath>
#include <random>

#include "kbend/builtin.hpp"
#include "kbend/geometry.hpp"
#include "kbend/sampling.hpp"
#include "kbend/weierstrass.hpp"
#include "support.hpp"

using namespace kbend;
using kbtest::vec;

namespace {

Jet2 jet_with(const Mat& d1) {
  Jet2 j = Jet2::zeros(Vec::Zero(d1.cols()), static_cast<int>(d1.rows()));
  j.d1 = d1;
  return j;
}

double det_with(const Vec& u, const Mat& v) {
  Mat m(v.rows(), v.cols() + 1);
  m << u, v;
  return m.determinant();
}

}  // namespace

TEST_CASE("generalized cross product") {
  Mat e12(3, 2);
  e12 << 1, 0, 0, 1, 0, 0;
  CHECK((generalized_cross(e12) - vec({0, 0, 1})).norm() == 0.0);
  Mat e21(3, 2);
  e21 << 0, 1, 1, 0, 0, 0;
  CHECK((generalized_cross(e21) - vec({0, 0, -1})).norm() == 0.0);
  Mat dep(3, 2);
  dep << 1, 2, 1, 2, 0, 0;
  CHECK(generalized_cross(dep).norm() == 0.0);
}

TEST_CASE("property: <cross(v), u> = det(u, v) and cross(v) is orthogonal to v") {
  std::mt19937_64 rng(11);
  std::normal_distribution<double> nd;
  for (int d = 1; d <= 5; ++d) {
    for (int t = 0; t < 20; ++t) {
      Mat v(d + 1, d);
      for (auto& x : v.reshaped()) x = nd(rng);
      Vec u(d + 1);
      for (auto& x : u) x = nd(rng);
      const Vec n = generalized_cross(v);
      CHECK(std::abs(n.dot(u) - det_with(u, v)) < 1e-12 * (1.0 + n.norm() * u.norm()));
      CHECK((v.transpose() * n).norm() < 1e-12 * (1.0 + n.norm()));
    }
  }
}

TEST_CASE("point frame of model charts") {
  SUBCASE("unit sphere with inward normal is umbilic, A = I") {
    const ImmersionChart s = unit_sphere_chart();
    for (const Vec& p : random_samples(s.box(), 10, 1)) {
      const PointFrame fr = point_frame(s.jet(p));
      CHECK((fr.A - Mat::Identity(2, 2)).norm() < 1e-13);
      CHECK((fr.N + s.jet(p).value).norm() < 1e-14);
    }
  }
  SUBCASE("plane: A = 0 and H = 0") {
    const PointFrame fr = point_frame(plane_chart().jet(vec({0.3, -0.2})));
    CHECK(fr.A.norm() == 0.0);
    CHECK(fr.H.norm() == 0.0);
  }
  SUBCASE("Enneper: principal curvatures +-2 sqrt2 / (1 + |z|^2)^2") {
    const ImmersionChart f = immersion_f(enneper_seed());
    for (const Vec& p : random_samples(f.box(), 20, 2)) {
      const PointFrame fr = point_frame(f.jet(p));
      const double lam = 2.0 * std::sqrt(2.0) / std::pow(1.0 + p.squaredNorm(), 2);
      CHECK(std::abs(fr.A.trace()) < 1e-12 * lam);
      CHECK(std::abs(std::abs(fr.principal[0]) - lam) < 1e-12 * lam);
      CHECK(std::abs(fr.principal[0] + fr.principal[1]) < 1e-12 * lam);
    }
  }
  SUBCASE("dependent partials are not an immersion") {
    Mat d1(3, 2);
    d1 << 1, 1, 0, 0, 0, 0;
    CHECK_THROWS_AS(point_frame(jet_with(d1)), NonImmersionError);
  }
}

TEST_CASE("frame invariants: G A self-adjoint, N normal, n = 1 minimal") {
  for (const auto& name : builtin_seed_names()) {
    CAPTURE(name);
    const ImmersionChart f = immersion_f(builtin_seed(name));
    for (const Vec& p : random_samples(f.box(), 30, 5)) {
      const Jet2 j = f.jet(p);
      const PointFrame fr = point_frame(j);
      const Mat GA = fr.G * fr.A;
      CHECK((GA - GA.transpose()).norm() < 1e-12 * GA.norm());
      for (int i = 0; i < j.dim(); ++i) CHECK(std::abs(fr.N.dot(j.d1.col(i))) < 1e-14 * j.d1.col(i).norm());
      CHECK(std::abs(fr.A.trace()) < 1e-10 * op_norm(fr.A, fr.G));
      CHECK(weingarten_residual(f, p, default_fd_step()) < 10 * std::pow(default_fd_step(), 2));
    }
  }
}

TEST_CASE("rank and relative nullity") {
  SUBCASE("n = 2 chart has rank two with a two-dimensional nullity") {
    const ImmersionChart f = immersion_f(m4r5_seed());
    for (const Vec& p : random_samples(f.box(), 50, 6)) {
      const PointFrame fr = point_frame(f.jet(p));
      const RankResult r = rank_and_nullity(fr);
      CHECK(r.rank == 2);
      CHECK_FALSE(r.indeterminate);
      REQUIRE(r.nullity_basis.cols() == 2);
      CHECK(op_norm(fr.A * r.nullity_basis * r.nullity_basis.transpose() * fr.G, fr.G) <
            1e-10 * op_norm(fr.A, fr.G));
      const Mat gram = r.nullity_basis.transpose() * fr.G * r.nullity_basis;
      CHECK((gram - Mat::Identity(2, 2)).norm() < 1e-12);
    }
  }
  SUBCASE("sphere and plane") {
    const RankResult s = rank_and_nullity(point_frame(unit_sphere_chart().jet(vec({0.0, 1.0}))));
    CHECK(s.rank == 2);
    CHECK(s.nullity_basis.cols() == 0);
    const RankResult p = rank_and_nullity(point_frame(plane_chart().jet(vec({0.0, 0.0}))));
    CHECK(p.rank == 0);
    CHECK(p.nullity_basis.cols() == 2);
  }
  SUBCASE("a curvature inside the ambiguity band is flagged") {
    auto frame_with = [](double k2) {
      Jet2 j = Jet2::zeros(Vec::Zero(2), 3);
      j.d1(0, 0) = 1.0;
      j.d1(1, 1) = 1.0;
      j.second(0, 0) = vec({0, 0, 1.0});
      j.second(1, 1) = vec({0, 0, k2});
      return point_frame(j);
    };
    CHECK(rank_and_nullity(frame_with(2e-7)).indeterminate);
    const RankResult r = rank_and_nullity(frame_with(1e-12));
    CHECK_FALSE(r.indeterminate);
    CHECK(r.rank == 1);
  }
}

TEST_CASE("Christoffel symbols") {
  const double h = default_fd_step();
  SUBCASE("flat chart") {
    CHECK(christoffel(plane_chart(), vec({0.2, 0.1}), h).max_abs() == 0.0);
  }
  SUBCASE("polar plane: Gamma^r_tt = -r and Gamma^t_rt = 1/r") {
    const ImmersionChart c = polar_plane_chart();
    for (double r : {0.7, 1.0, 1.6}) {
      const Christoffel g = christoffel(c, vec({r, 0.3}), h);
      CHECK(std::abs(g(0, 1, 1) + r) < 10 * h * h);
      CHECK(std::abs(g(1, 0, 1) - 1.0 / r) < 10 * h * h);
      CHECK(std::abs(g(0, 0, 0)) < 10 * h * h);
      for (int k = 0; k < 2; ++k) CHECK(g(k, 0, 1) == g(k, 1, 0));
    }
  }
  SUBCASE("finite differences agree with the exact 2-jet") {
    const ImmersionChart f = immersion_f(m4r5_seed());
    for (const Vec& p : random_samples(f.box(), 10, 7)) {
      const Christoffel a = christoffel(f, p, h);
      const Christoffel b = christoffel_exact(f.jet(p));
      double m = 0.0;
      for (int k = 0; k < 4; ++k)
        for (int i = 0; i < 4; ++i)
          for (int j = 0; j < 4; ++j) {
            m = std::max(m, std::abs(a(k, i, j) - b(k, i, j)));
            CHECK(a(k, i, j) == a(k, j, i));
          }
      CHECK(m < 1e-7 * (1.0 + b.max_abs()));
    }
  }
  SUBCASE("stencil outside the box is an error") {
    const ImmersionChart c = polar_plane_chart();
    CHECK_THROWS_AS(christoffel(c, vec({5.0, 0.0}), h), DomainError);
  }
}

TEST_CASE("Laplace-Beltrami") {
  const double h = default_second_step();
  SUBCASE("constant and quadratic on the flat chart") {
    const ImmersionChart c = plane_chart();
    CHECK(std::abs(laplace_beltrami(c, [](const Vec&) { return 3.0; }, vec({0.1, 0.2}), h)) < 1e-12);
    const double q = laplace_beltrami(c, [](const Vec& p) { return p.squaredNorm(); }, vec({0.1, 0.2}), h);
    CHECK(std::abs(q - 4.0) < 10 * h * h);
  }
  SUBCASE("degree-one harmonics on the round sphere are eigenfunctions for 2") {
    const ImmersionChart s = round_sphere_chart();
    const std::vector<ScalarField> harmonics{
        [](const Vec& p) { return std::cos(p[0]); },
        [](const Vec& p) { return std::sin(p[0]) * std::cos(p[1]); },
        [](const Vec& p) { return std::sin(p[0]) * std::sin(p[1]); }};
    for (const Vec& p : random_samples(s.box(), 20, 3)) {
      for (const auto& g : harmonics) {
        CHECK(std::abs(laplace_beltrami(s, g, p, h) + 2.0 * g(p)) < 10 * h * h);
      }
      const GradientField grad = [](const Vec& q) { return vec({-std::sin(q[0]), 0.0}); };
      const double lg = laplace_beltrami_from_gradient(s, grad, p, default_fd_step());
      CHECK(std::abs(lg + 2.0 * std::cos(p[0])) < 10 * std::pow(default_fd_step(), 2));
    }
  }
}

TEST_CASE("anticommutation with J") {
  const Mat J = family_complex_structure(1);
  SUBCASE("Weierstrass charts with the coordinate J") {
    for (const auto& name : builtin_seed_names()) {
      const WeierstrassSeed seed = builtin_seed(name);
      const ImmersionChart f = immersion_f(seed);
      for (const Vec& p : random_samples(f.box(), 20, 12)) {
        CHECK(anticommutation_residual(point_frame(f.jet(p)), family_complex_structure(seed.n)) < 1e-8);
      }
    }
  }
  SUBCASE("sphere: A = I commutes, residual 2") {
    const PointFrame fr = point_frame(unit_sphere_chart().jet(vec({0.0, 1.5708})));
    Mat Jg(2, 2);
    Jg << 0, -1, 1, 0;
    CHECK(std::abs(anticommutation_residual(fr, Jg) - 2.0) < 1e-5);
  }
  SUBCASE("A = 0 gives 0") {
    CHECK(anticommutation_residual(point_frame(plane_chart().jet(vec({0, 0}))), J) == 0.0);
  }
}

TEST_CASE("parallel J") {
  const double h = default_fd_step();
  SUBCASE("constant J on the flat chart") {
    const Mat J = family_complex_structure(1);
    CHECK(parallel_J_residual(plane_chart(), [&](const Vec&) { return J; }, vec({0.1, 0.1}), h) < 1e-14);
  }
  SUBCASE("coordinate J on Weierstrass charts, and a perturbed control") {
    for (const auto& name : builtin_seed_names()) {
      const WeierstrassSeed seed = builtin_seed(name);
      const ImmersionChart f = immersion_f(seed);
      const Mat J = family_complex_structure(seed.n);
      Mat K = Mat::Zero(J.rows(), J.cols());
      K(0, 1) = 1.0;
      for (const Vec& p : random_samples(f.box(), 10, 13)) {
        CHECK(parallel_J_residual(f, [&](const Vec&) { return J; }, p, h) < 10 * h * h);
        const EndoField bad = [&](const Vec& q) -> Mat { return J + 0.5 * q[0] * K; };
        CHECK(parallel_J_residual(f, bad, p, h) > 1e-2);
      }
    }
  }
}
