#include <doctest.h>

#include <cmath>
#include <numbers>

#include "kbend/builtin.hpp"
#include "kbend/geometry.hpp"
#include "kbend/sampling.hpp"
#include "kbend/weierstrass.hpp"
#include "support.hpp"

using namespace kbend;
using kbtest::max_coeff_diff;

namespace {

const cplx I{0.0, 1.0};

Eigen::VectorXcd isotropic_lift(const Eigen::VectorXcd& phi) {
  const cplx q = (phi.array() * phi.array()).sum();
  Eigen::VectorXcd out(phi.size() + 2);
  out << (1.0 - q) / 2.0, I * (1.0 + q) / 2.0, phi;
  return out;
}

// F for the Enneper data, integrated by hand.
Eigen::VectorXcd enneper_F(cplx z) {
  Eigen::VectorXcd F(3);
  F << (z - z * z * z / 3.0) / 2.0, I * (z + z * z * z / 3.0) / 2.0, z * z / 2.0;
  return F;
}

// F for the catenoid data in w = log z: (-cosh w, i sinh w, w), with F(2) = 0.
Eigen::VectorXcd catenoid_F(cplx z) {
  auto raw = [](cplx zz) {
    const cplx w = std::log(zz);
    Eigen::VectorXcd v(3);
    v << -std::cosh(w), I * std::sinh(w), w;
    return v;
  };
  return raw(z) - raw(2.0);
}

// m4r5: phi_1 by hand, delta = lift(phi_1), F = delta - delta(0) + w delta.
Eigen::VectorXcd m4r5_delta(cplx z) {
  Eigen::VectorXcd phi1(3);
  phi1 << (z - z * z * z / 3.0) / 2.0, I * (z + z * z * z / 3.0) / 2.0, z * z / 2.0;
  return isotropic_lift(phi1);
}

cplx to_z(const Vec& p) { return {p[0], p[1]}; }

double rel(const Vec& a, const Vec& b) { return (a - b).norm() / std::max(1.0, b.norm()); }

}  // namespace

TEST_CASE("chain of the Enneper data") {
  const WeierstrassChain c = build_chain(enneper_seed());
  REQUIRE(c.alphas.size() == 2);
  REQUIRE(c.alphas[1].dim() == 3);
  CHECK(max_coeff_diff(c.phis[0][0], TruncatedSeries({}, {0.0, 1.0})) == 0.0);
  CHECK(max_coeff_diff(c.alphas[1][0], TruncatedSeries({}, {0.5, 0.0, -0.5})) == 0.0);
  CHECK(max_coeff_diff(c.alphas[1][1], TruncatedSeries({}, {0.5 * I, 0.0, 0.5 * I})) == 0.0);
  CHECK(max_coeff_diff(c.alphas[1][2], TruncatedSeries({}, {0.0, 1.0})) == 0.0);
  CHECK(max_coeff_diff(vdot(c.alphas[1], c.alphas[1]), TruncatedSeries::zero({}, 8)) < 1e-15);
}

TEST_CASE("chain dimensions and phi = int alpha for n = 2") {
  const WeierstrassChain c = build_chain(m4r5_seed());
  REQUIRE(c.alphas.size() == 3);
  for (std::size_t r = 0; r < 3; ++r) {
    CHECK(c.alphas[r].dim() == 2 * r + 1);
    const SeriesVector back = vdiff(c.phis[r]);
    for (std::size_t k = 0; k < c.alphas[r].dim(); ++k) {
      CHECK(max_coeff_diff(back[k], c.alphas[r][k].truncated(back.order())) < 1e-14);
    }
  }
  CHECK(c.delta().dim() == 5);
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-0.3, 0.3);
  for (int t = 0; t < 20; ++t) {
    const cplx z{u(rng), u(rng)};
    CHECK((veval(c.delta(), z) - m4r5_delta(z)).norm() < 1e-14);
  }
}

TEST_CASE("holomorphic representative") {
  SUBCASE("Enneper F by term-wise integration") {
    const HolomorphicRep rep(enneper_seed());
    for (cplx z : {cplx{0.1, 0.2}, cplx{-0.4, 0.3}, cplx{0.5, -0.5}}) {
      CHECK((rep.evaluate(z, {}).value - enneper_F(z)).norm() < 1e-14);
    }
  }
  SUBCASE("w-derivatives are delta and F is affine in w") {
    const HolomorphicRep rep(m4r5_seed());
    const std::vector<cplx> w{{0.1, -0.05}};
    for (cplx z : {cplx{0.1, 0.2}, cplx{-0.3, 0.1}}) {
      const HoloJet j = rep.evaluate(z, w);
      CHECK((j.d1[1] - m4r5_delta(z)).norm() < 1e-14);
      CHECK(j.d2[1 * 2 + 1].norm() == 0.0);
      const Eigen::VectorXcd F = m4r5_delta(z) - m4r5_delta(0.0) + w[0] * m4r5_delta(z);
      CHECK((j.value - F).norm() < 1e-14);
    }
  }
}

TEST_CASE("Enneper metric matches the classical Weierstrass conformal factor") {
  const ImmersionChart f = immersion_f(enneper_seed());
  for (const Vec& p : random_samples(f.box(), 30, 9)) {
    const PointFrame fr = point_frame(f.jet(p));
    const double lam = (1.0 + to_z(p) * std::conj(to_z(p))).real() / 2.0;
    const Mat expect = 2.0 * lam * lam * Mat::Identity(2, 2);
    CHECK((fr.G - expect).norm() < 1e-13);
  }
  const PointFrame origin = point_frame(f.jet(Vec::Zero(2)));
  CHECK((origin.G - 0.5 * Mat::Identity(2, 2)).norm() < 1e-15);
}

TEST_CASE("catenoid and its conjugate against the closed forms") {
  const WeierstrassSeed seed = catenoid_seed();
  const ImmersionChart f = immersion_f(seed);
  const ImmersionChart fb = conjugate_fbar(seed);
  const std::vector<int> counts{10, 10};
  for (const Vec& p : grid_samples(f.box(), counts)) {
    const cplx z = to_z(p);
    const Eigen::VectorXcd F = std::sqrt(2.0) * catenoid_F(z);
    const Jet2 jf = f.jet(p);
    const Jet2 jb = fb.jet(p);
    CHECK(rel(jf.value, F.real()) < 1e-12);
    CHECK(rel(jb.value, F.imag()) < 1e-12);

    // Both metrics are 2 cosh^2(s) |dw|^2 with w = s + it = log z.
    const double s = std::log(std::abs(z));
    const double conf = 2.0 * std::cosh(s) * std::cosh(s) / std::norm(z);
    const PointFrame a = point_frame(jf);
    const PointFrame b = point_frame(jb);
    CHECK((a.G - conf * Mat::Identity(2, 2)).norm() < 1e-8 * conf);
    CHECK((b.G - conf * Mat::Identity(2, 2)).norm() < 1e-8 * conf);
    CHECK(std::abs(a.A.trace()) < 1e-8 * op_norm(a.A, a.G));
  }
}

TEST_CASE("f and fbar assemble sqrt2 F; associated family endpoints") {
  const WeierstrassSeed seed = m4r5_seed();
  const HolomorphicRep rep(seed);
  const ImmersionChart f = immersion_f(seed);
  const ImmersionChart fb = conjugate_fbar(seed);
  const ImmersionChart f0 = associated(seed, 0.0);
  const ImmersionChart f90 = associated(seed, std::numbers::pi / 2);
  for (const Vec& p : random_samples(f.box(), 20, 3)) {
    const Eigen::VectorXcd F = rep.evaluate(p).value;
    const Jet2 a = f.jet(p), b = fb.jet(p);
    CHECK((a.value - std::sqrt(2.0) * F.real()).norm() < 1e-14);
    CHECK((b.value - std::sqrt(2.0) * F.imag()).norm() < 1e-14);
    const Jet2 z0 = f0.jet(p), z90 = f90.jet(p);
    CHECK((z0.value - a.value).norm() == 0.0);
    CHECK((z0.d1 - a.d1).norm() == 0.0);
    CHECK((z90.value - b.value).norm() < 1e-15);
    CHECK((z90.d1 - b.d1).norm() < 1e-15);
  }
}

TEST_CASE("associated family: isometric, same normal, A(theta) = A o J_theta") {
  for (const auto& name : builtin_seed_names()) {
    CAPTURE(name);
    const WeierstrassSeed seed = builtin_seed(name);
    const ImmersionChart f = immersion_f(seed);
    const Mat J = family_complex_structure(seed.n);
    const auto pts = random_samples(f.box(), 50, 17);
    std::mt19937_64 rng(4);
    std::normal_distribution<double> nd;
    for (int k = 1; k < 6; ++k) {
      const double th = k * std::numbers::pi / 6;
      const ImmersionChart ft = associated(seed, th);
      const Mat Jt = std::cos(th) * Mat::Identity(2 * seed.n, 2 * seed.n) + std::sin(th) * J;
      for (const Vec& p : pts) {
        Vec X(2 * seed.n);
        for (auto& x : X) x = nd(rng);
        const Jet2 a = f.jet(p), b = ft.jet(p);
        CHECK(std::abs((b.d1 * X).norm() - (a.d1 * X).norm()) < 1e-10 * (a.d1 * X).norm());
        const PointFrame fa = point_frame(a), fb = point_frame(b);
        CHECK((fa.N - fb.N).norm() < 1e-10);
        CHECK(op_norm(fb.A - fa.A * Jt, fa.G) < 1e-8 * op_norm(fa.A, fa.G));
      }
    }
  }
}

TEST_CASE("second partials are symmetric and f is minimal") {
  for (const auto& name : builtin_seed_names()) {
    CAPTURE(name);
    const ImmersionChart f = immersion_f(builtin_seed(name));
    for (const Vec& p : random_samples(f.box(), 25, 8)) {
      const Jet2 j = f.jet(p);
      for (int a = 0; a < j.dim(); ++a)
        for (int b = 0; b < j.dim(); ++b) CHECK((j.second(a, b) - j.second(b, a)).norm() == 0.0);
      const PointFrame fr = point_frame(j);
      CHECK(std::abs(fr.A.trace()) < 1e-10 * op_norm(fr.A, fr.G));
    }
  }
}

TEST_CASE("integration constants translate the hypersurface") {
  WeierstrassSeed seed = enneper_seed();
  seed.F_constant = {cplx{1.0, 2.0}, cplx{0.0, -1.0}, cplx{0.5, 0.0}};
  const ImmersionChart f = immersion_f(enneper_seed());
  const ImmersionChart g = immersion_f(seed);
  const Vec shift = std::sqrt(2.0) * kbtest::vec({1.0, 0.0, 0.5});
  for (const Vec& p : random_samples(f.box(), 10, 2)) {
    CHECK((g.jet(p).value - f.jet(p).value - shift).norm() < 1e-14);
    CHECK((g.jet(p).d1 - f.jet(p).d1).norm() == 0.0);
  }
}

TEST_CASE("seed validation names the failing requirement") {
  SUBCASE("b_{n-1} vanishing") {
    WeierstrassSeed s = m4r5_seed();
    s.b[1] = TruncatedSeries({}, {0.0});
    CHECK_THROWS_WITH_AS(validate_seed(s), doctest::Contains("b_{n-1} is never zero"),
                         SeedValidationError);
    CHECK_THROWS_AS(build_chain(s), SeedValidationError);
  }
  SUBCASE("b_{n-1} with a zero inside the disc") {
    WeierstrassSeed s = enneper_seed();
    s.b[0] = TruncatedSeries({}, {-0.1, 1.0});  // zero at z = 0.1
    CHECK_THROWS_WITH(validate_seed(s), doctest::Contains("b_{n-1} is never zero"));
  }
  SUBCASE("alpha_0 and mu") {
    WeierstrassSeed s = enneper_seed();
    s.alpha0 = TruncatedSeries({}, {0.0});
    CHECK_THROWS_AS(validate_seed(s), SeedValidationError);
    s = enneper_seed();
    s.mu[0] = TruncatedSeries({}, {0.0, 1.0});
    CHECK_THROWS_AS(validate_seed(s), SeedValidationError);
  }
  SUBCASE("list lengths") {
    WeierstrassSeed s = m4r5_seed();
    s.b.pop_back();
    CHECK_THROWS_AS(validate_seed(s), SeedValidationError);
  }
}

TEST_CASE("evaluation outside the disc is flagged") {
  const HolomorphicRep rep(enneper_seed());
  CHECK(rep.evaluate(cplx{0.1, 0.0}, {}).in_domain);
  CHECK_FALSE(rep.evaluate(cplx{0.9, 0.0}, {}).in_domain);
}
