#include "kbend/weierstrass.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>

namespace kbend {

namespace {

const cplx kI{0.0, 1.0};

// Pads (exactly) or truncates to the run's order and tags the disc radius.
TruncatedSeries normalize(const TruncatedSeries& s, int order, double radius) {
  std::vector<cplx> c(static_cast<std::size_t>(order) + 1, cplx{0.0, 0.0});
  for (int k = 0; k <= std::min(order, s.order()); ++k) c[static_cast<std::size_t>(k)] = s[k];
  return {s.basepoint(), std::move(c), radius};
}

std::vector<cplx> grid_points(const Disc& disc, int grid) {
  std::vector<cplx> pts{disc.center};
  const int rings = std::max(grid / 4, 1);
  for (int r = 1; r <= rings; ++r) {
    const double rad = disc.radius * static_cast<double>(r) / rings;
    for (int a = 0; a < grid; ++a) {
      const double t = 2.0 * std::numbers::pi * a / grid;
      pts.push_back(disc.center + std::polar(rad, t));
    }
  }
  return pts;
}

// Zeros of s inside the disc by the argument principle on its boundary.
int zeros_inside(const TruncatedSeries& s, const Disc& disc) {
  constexpr int kSteps = 512;
  double turn = 0.0;
  cplx prev = series_eval(s, disc.center + disc.radius).value;
  for (int a = 1; a <= kSteps; ++a) {
    const double t = 2.0 * std::numbers::pi * a / kSteps;
    const cplx cur = series_eval(s, disc.center + std::polar(disc.radius, t)).value;
    turn += std::arg(cur / prev);
    prev = cur;
  }
  return static_cast<int>(std::lround(turn / (2.0 * std::numbers::pi)));
}

void require_nonvanishing(const TruncatedSeries& s, const Disc& disc, int grid, double tol,
                          const std::string& what) {
  if (zeros_inside(s, disc) != 0) throw SeedValidationError(what);
  const auto pts = grid_points(disc, grid);
  double lo = std::numeric_limits<double>::infinity();
  double hi = 0.0;
  for (cplx z : pts) {
    const double m = std::abs(series_eval(s, z).value);
    lo = std::min(lo, m);
    hi = std::max(hi, m);
  }
  if (!(lo > tol * std::max(1.0, hi))) throw SeedValidationError(what);
}

}  // namespace

void validate_seed(const WeierstrassSeed& seed, double tol, int grid) {
  if (seed.n < 1) throw SeedValidationError("n must be a positive integer");
  if (seed.trunc_order < 1) throw SeedValidationError("trunc_order must be at least 1");
  if (static_cast<int>(seed.mu.size()) != seed.n) {
    throw SeedValidationError("mu must list exactly n functions mu_1..mu_n");
  }
  if (static_cast<int>(seed.b.size()) != seed.n) {
    throw SeedValidationError("b must list exactly n functions b_0..b_{n-1}");
  }
  if (!(seed.domainU.radius > 0.0)) throw SeedValidationError("domain radius must be positive");
  if (static_cast<int>(seed.domainW.size()) != 2 * (seed.n - 1)) {
    throw SeedValidationError("domain W must give 2(n-1) coordinate intervals");
  }
  for (const auto& iv : seed.domainW) {
    if (!(iv.lo <= 0.0 && 0.0 <= iv.hi && iv.lo < iv.hi)) {
      throw SeedValidationError("domain W must be a nondegenerate box containing 0");
    }
  }
  auto same_base = [&](const TruncatedSeries& s) { return s.basepoint() == seed.domainU.center; };
  bool ok = same_base(seed.alpha0);
  for (const auto& s : seed.mu) ok = ok && same_base(s);
  for (const auto& s : seed.b) ok = ok && same_base(s);
  if (!ok) throw SeedValidationError("every series must be expanded at the domain center");

  require_nonvanishing(seed.alpha0, seed.domainU, grid, tol, "alpha0 must be a nonzero holomorphic function on U");
  for (int r = 0; r < seed.n; ++r) {
    require_nonvanishing(seed.mu[static_cast<std::size_t>(r)], seed.domainU, grid, tol,
                         "mu_" + std::to_string(r + 1) + " must be nonzero on U");
  }
  require_nonvanishing(seed.b.back(), seed.domainU, grid, tol,
                       "b_{n-1} is never zero: b_" + std::to_string(seed.n - 1) +
                           " vanishes on the sampled domain");
}

WeierstrassChain build_chain(const WeierstrassSeed& seed) {
  validate_seed(seed);
  const int N = seed.trunc_order;
  const double rad = seed.domainU.radius;
  const cplx base = seed.domainU.center;
  auto constants = [&](int r) -> std::span<const cplx> {
    if (r < static_cast<int>(seed.phi_constants.size())) return seed.phi_constants[static_cast<std::size_t>(r)];
    return {};
  };

  WeierstrassChain chain;
  chain.alphas.emplace_back(std::vector{normalize(seed.alpha0, N, rad)});
  chain.phis.push_back(vint(chain.alphas.back(), constants(0)));
  const auto one = TruncatedSeries::constant(1.0, base, N + 1, rad);
  for (int r = 0; r < seed.n; ++r) {
    const SeriesVector& phi = chain.phis.back();
    const TruncatedSeries sq = vdot(phi, phi);
    std::vector<TruncatedSeries> comps;
    comps.reserve(phi.dim() + 2);
    comps.push_back(series_scale(one - sq, 0.5));
    comps.push_back(series_scale(one + sq, 0.5 * kI));
    for (const auto& c : phi.components()) comps.push_back(c);
    // Lift the phi block to the common order before scaling by mu.
    const auto mu = normalize(seed.mu[static_cast<std::size_t>(r)], N, rad);
    chain.alphas.push_back(vscale(mu, SeriesVector(std::move(comps))));
    chain.phis.push_back(vint(chain.alphas.back(), constants(r + 1)));
  }

  chain.delta_derivs.push_back(chain.alphas.back());
  for (int j = 1; j <= seed.n; ++j) chain.delta_derivs.push_back(vdiff(chain.delta_derivs.back()));
  return chain;
}

HolomorphicRep::HolomorphicRep(const WeierstrassSeed& seed)
    : n_(seed.n), seed_(seed), chain_(build_chain(seed)) {
  const int N = seed.trunc_order;
  const double rad = seed.domainU.radius;
  std::optional<SeriesVector> acc;
  for (int j = 0; j < n_; ++j) {
    const auto bj = normalize(seed.b[static_cast<std::size_t>(j)], N, rad);
    SeriesVector term = vscale(bj, chain_.delta_derivs[static_cast<std::size_t>(j)]);
    acc = acc ? vadd(*acc, term) : term;
  }
  F0z_ = *acc;
  F0_ = vint(F0z_, seed.F_constant);
  F0zz_ = vdiff(F0z_);
}

HoloJet HolomorphicRep::evaluate(cplx z, std::span<const cplx> w) const {
  if (static_cast<int>(w.size()) != n_ - 1) throw DomainError("expected n-1 fiber coordinates");
  const auto& dd = chain_.delta_derivs;
  bool outside = false;
  auto eval = [&](const SeriesVector& v) {
    bool o = false;
    Eigen::VectorXcd r = veval(v, z, &o);
    outside = outside || o;
    return r;
  };
  std::vector<Eigen::VectorXcd> delta;
  delta.reserve(dd.size());
  for (const auto& d : dd) delta.push_back(eval(d));

  HoloJet jet;
  const auto nn = static_cast<std::size_t>(n_);
  jet.value = eval(F0_);
  Eigen::VectorXcd fz = eval(F0z_);
  Eigen::VectorXcd fzz = eval(F0zz_);
  for (std::size_t j = 1; j < nn; ++j) {
    const cplx wj = w[j - 1];
    jet.value += wj * delta[j - 1];
    fz += wj * delta[j];
    fzz += wj * delta[j + 1];
  }
  const Eigen::VectorXcd zero = Eigen::VectorXcd::Zero(target_dim());
  jet.d1.assign(nn, zero);
  jet.d2.assign(nn * nn, zero);
  jet.d1[0] = fz;
  jet.d2[0] = fzz;
  for (std::size_t j = 1; j < nn; ++j) {
    jet.d1[j] = delta[j - 1];
    jet.d2[j] = delta[j];       // d2F / dz dw_j
    jet.d2[j * nn] = delta[j];  // d2F / dw_j dz
  }
  // The fiber box is enforced by the chart; only the disc is checked here.
  jet.in_domain = !outside;
  return jet;
}

HoloJet HolomorphicRep::evaluate(const Vec& coords) const {
  if (coords.size() != 2 * n_) throw DomainError("expected 2n real coordinates");
  std::vector<cplx> w;
  for (int j = 1; j < n_; ++j) w.emplace_back(coords[2 * j], coords[2 * j + 1]);
  return evaluate(cplx{coords[0], coords[1]}, w);
}

Mat family_complex_structure(int n) {
  Mat J = Mat::Zero(2 * n, 2 * n);
  for (int a = 0; a < n; ++a) {
    J(2 * a + 1, 2 * a) = -1.0;
    J(2 * a, 2 * a + 1) = 1.0;
  }
  return J;
}

Box seed_box(const WeierstrassSeed& seed) {
  const int d = 2 * seed.n;
  Box box{Vec(d), Vec(d)};
  const double half = 0.95 * seed.domainU.radius / std::numbers::sqrt2;
  box.lo[0] = seed.domainU.center.real() - half;
  box.hi[0] = seed.domainU.center.real() + half;
  box.lo[1] = seed.domainU.center.imag() - half;
  box.hi[1] = seed.domainU.center.imag() + half;
  for (int k = 2; k < d; ++k) {
    box.lo[k] = seed.domainW[static_cast<std::size_t>(k - 2)].lo;
    box.hi[k] = seed.domainW[static_cast<std::size_t>(k - 2)].hi;
  }
  return box;
}

std::vector<std::string> seed_coordinate_names(int n) {
  std::vector<std::string> names{"x", "y"};
  for (int j = 1; j < n; ++j) {
    names.push_back("u" + std::to_string(j));
    names.push_back("v" + std::to_string(j));
  }
  return names;
}

ImmersionChart real_part_chart(std::shared_ptr<const HolomorphicRep> rep, cplx multiplier) {
  const int n = rep->n();
  const int d = 2 * n;
  const int m = rep->target_dim();
  auto eval = [rep, multiplier, n, d, m](const Vec& p) {
    const HoloJet h = rep->evaluate(p);
    Jet2 j = Jet2::zeros(p, m);
    auto re = [&](const Eigen::VectorXcd& v, cplx c) -> Vec {
      return std::numbers::sqrt2 * (multiplier * c * v).real();
    };
    // d/dx_a acts as the holomorphic derivative, d/dy_a as i times it.
    auto factor = [](int r) { return (r % 2 == 0) ? cplx{1.0, 0.0} : cplx{0.0, 1.0}; };
    j.value = re(h.value, 1.0);
    for (int r = 0; r < d; ++r) {
      j.d1.col(r) = re(h.d1[static_cast<std::size_t>(r / 2)], factor(r));
      for (int s = 0; s < d; ++s) {
        j.second(r, s) = re(h.d2[static_cast<std::size_t>((r / 2) * n + s / 2)], factor(r) * factor(s));
      }
    }
    j.in_domain = h.in_domain;
    return j;
  };
  return ImmersionChart(d, m, std::move(eval), seed_box(rep->seed()), seed_coordinate_names(n),
                        family_complex_structure(n));
}

ImmersionChart immersion_f(const WeierstrassSeed& seed) {
  return real_part_chart(std::make_shared<const HolomorphicRep>(seed), 1.0);
}

ImmersionChart conjugate_fbar(const WeierstrassSeed& seed) {
  return real_part_chart(std::make_shared<const HolomorphicRep>(seed), cplx{0.0, -1.0});
}

ImmersionChart associated(const WeierstrassSeed& seed, double theta) {
  return real_part_chart(std::make_shared<const HolomorphicRep>(seed), std::polar(1.0, -theta));
}

}  // namespace kbend
