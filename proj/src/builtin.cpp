#include "kbend/builtin.hpp"

#include <cmath>
#include <numbers>

namespace kbend {

namespace {

TruncatedSeries poly(cplx base, std::vector<cplx> c) { return {base, std::move(c)}; }

}  // namespace

WeierstrassSeed enneper_seed(int trunc_order) {
  WeierstrassSeed s;
  s.n = 1;
  s.domainU = {cplx{0.0, 0.0}, 0.8};
  s.alpha0 = poly(s.domainU.center, {1.0});
  s.mu = {poly(s.domainU.center, {1.0})};
  s.b = {poly(s.domainU.center, {1.0})};
  s.trunc_order = trunc_order;
  return s;
}

WeierstrassSeed catenoid_seed(int trunc_order) {
  WeierstrassSeed s;
  s.n = 1;
  s.domainU = {cplx{2.0, 0.0}, 0.6};
  const cplx base = s.domainU.center;
  s.alpha0 = poly(base, {1.0});
  // z^-2 = sum_k (k+1) (-1)^k (z-2)^k / 2^(k+2)
  std::vector<cplx> inv_sq(static_cast<std::size_t>(trunc_order) + 1);
  for (int k = 0; k <= trunc_order; ++k) {
    inv_sq[static_cast<std::size_t>(k)] = (k % 2 ? -1.0 : 1.0) * (k + 1) / std::ldexp(1.0, k + 2);
  }
  s.mu = {poly(base, std::move(inv_sq))};
  s.b = {poly(base, {1.0})};
  s.phi_constants = {{base}};  // phi0 = z
  s.trunc_order = trunc_order;
  return s;
}

WeierstrassSeed m4r5_seed(int trunc_order) {
  WeierstrassSeed s;
  s.n = 2;
  s.domainU = {cplx{0.0, 0.0}, 0.5};
  const cplx base = s.domainU.center;
  s.alpha0 = poly(base, {1.0});
  s.mu = {poly(base, {1.0}), poly(base, {1.0})};
  s.b = {poly(base, {0.0}), poly(base, {1.0})};
  s.domainW = {{-0.2, 0.2}, {-0.2, 0.2}};
  s.trunc_order = trunc_order;
  return s;
}

WeierstrassSeed builtin_seed(const std::string& name, int trunc_order) {
  if (name == "enneper") return enneper_seed(trunc_order);
  if (name == "catenoid") return catenoid_seed(trunc_order);
  if (name == "m4r5") return m4r5_seed(trunc_order);
  throw DomainError("unknown built-in seed '" + name + "'");
}

std::vector<std::string> builtin_seed_names() { return {"enneper", "catenoid", "m4r5"}; }

ImmersionChart unit_sphere_chart() {
  auto eval = [](const Vec& p) {
    const double ph = p[0], th = p[1];
    const double st = std::sin(th), ct = std::cos(th), sp = std::sin(ph), cp = std::cos(ph);
    Jet2 j = Jet2::zeros(p, 3);
    j.value << st * cp, st * sp, ct;
    j.d1.col(0) << -st * sp, st * cp, 0.0;
    j.d1.col(1) << ct * cp, ct * sp, -st;
    j.second(0, 0) << -st * cp, -st * sp, 0.0;
    j.second(0, 1) << -ct * sp, ct * cp, 0.0;
    j.second(1, 0) = j.second(0, 1);
    j.second(1, 1) << -st * cp, -st * sp, -ct;
    return j;
  };
  Box box{Vec(2), Vec(2)};
  box.lo << -1.0, 0.5;
  box.hi << 1.0, 2.5;
  return ImmersionChart(2, 3, eval, box, {"phi", "theta"});
}

ImmersionChart round_sphere_chart(double radius) {
  auto eval = [radius](const Vec& p) {
    const double th = p[0], ph = p[1];
    const double st = std::sin(th), ct = std::cos(th), sp = std::sin(ph), cp = std::cos(ph);
    Jet2 j = Jet2::zeros(p, 3);
    j.value << st * cp, st * sp, ct;
    j.d1.col(0) << ct * cp, ct * sp, -st;
    j.d1.col(1) << -st * sp, st * cp, 0.0;
    j.second(0, 0) << -st * cp, -st * sp, -ct;
    j.second(0, 1) << -ct * sp, ct * cp, 0.0;
    j.second(1, 0) = j.second(0, 1);
    j.second(1, 1) << -st * cp, -st * sp, 0.0;
    return radius * j;
  };
  Box box{Vec(2), Vec(2)};
  box.lo << 0.5, -1.0;
  box.hi << 2.5, 1.0;
  return ImmersionChart(2, 3, eval, box, {"theta", "phi"});
}

ImmersionChart plane_chart() {
  auto eval = [](const Vec& p) {
    Jet2 j = Jet2::zeros(p, 3);
    j.value << p[0], p[1], 0.0;
    j.d1(0, 0) = 1.0;
    j.d1(1, 1) = 1.0;
    return j;
  };
  Box box{Vec::Constant(2, -1.0), Vec::Constant(2, 1.0)};
  return ImmersionChart(2, 3, eval, box, {"x", "y"});
}

ImmersionChart polar_plane_chart() {
  auto eval = [](const Vec& p) {
    const double r = p[0], t = p[1];
    const double c = std::cos(t), s = std::sin(t);
    Jet2 j = Jet2::zeros(p, 3);
    j.value << r * c, r * s, 0.0;
    j.d1.col(0) << c, s, 0.0;
    j.d1.col(1) << -r * s, r * c, 0.0;
    j.second(0, 1) << -s, c, 0.0;
    j.second(1, 0) = j.second(0, 1);
    j.second(1, 1) << -r * c, -r * s, 0.0;
    return j;
  };
  Box box{Vec(2), Vec(2)};
  box.lo << 0.5, -1.0;
  box.hi << 2.0, 1.0;
  return ImmersionChart(2, 3, eval, box, {"r", "theta"});
}

}  // namespace kbend
