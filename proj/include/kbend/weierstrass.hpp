#pragma once

// Recursive Weierstrass-type representation of minimal Kaehler hypersurfaces
// M^2n -> R^(2n+1).
//
// Starting from a nonzero holomorphic alpha_0 with phi_0 = int alpha_0, each
// step picks a nonzero mu_{r+1} and sets
//
//   alpha_{r+1} = mu_{r+1} ((1 - phi_r.phi_r)/2, i (1 + phi_r.phi_r)/2, phi_r),
//   phi_{r+1}   = int alpha_{r+1},
//
// with the unconjugated product.  With delta = alpha_n the holomorphic
// representative is
//
//   F(z, w) = sum_j int b_j delta^(j) dz + sum_{j>=1} w_j delta^(j-1),
//
// and f = sqrt(2) Re F, fbar = sqrt(2) Im F.  Real chart coordinates are
// (x, y, u_1, v_1, ..., u_{n-1}, v_{n-1}) with z = x + iy, w_j = u_j + i v_j.

#include <memory>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "kbend/chart.hpp"
#include "kbend/holo.hpp"

namespace kbend {

class SeedValidationError : public DomainError {
 public:
  using DomainError::DomainError;
};

struct Disc {
  cplx center{0.0, 0.0};
  double radius = 1.0;
};

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
};

struct WeierstrassSeed {
  int n = 1;
  TruncatedSeries alpha0;
  std::vector<TruncatedSeries> mu;  // mu_1 .. mu_n
  std::vector<TruncatedSeries> b;   // b_0 .. b_{n-1}
  // phi_constants[r] holds the integration constants of phi_r (dim 2r+1);
  // missing entries are zero.
  std::vector<std::vector<cplx>> phi_constants;
  std::vector<cplx> F_constant;  // dim 2n+1, missing entries are zero
  Disc domainU;
  std::vector<Interval> domainW;  // u_1, v_1, ..., u_{n-1}, v_{n-1}
  int trunc_order = 32;
};

/// Throws SeedValidationError naming the violated requirement.
void validate_seed(const WeierstrassSeed& seed, double tol = 1e-12, int grid = 16);

struct WeierstrassChain {
  std::vector<SeriesVector> alphas;        // alpha_0 .. alpha_n, dim 2r+1
  std::vector<SeriesVector> phis;          // phi_0 .. phi_n
  std::vector<SeriesVector> delta_derivs;  // delta^(0) .. delta^(n)

  const SeriesVector& delta() const { return delta_derivs.front(); }
};

WeierstrassChain build_chain(const WeierstrassSeed& seed);

/// Holomorphic 2-jet of F in the complex coordinates (z, w_1, ..., w_{n-1}).
struct HoloJet {
  Eigen::VectorXcd value;
  std::vector<Eigen::VectorXcd> d1;  // n entries
  std::vector<Eigen::VectorXcd> d2;  // n*n entries
  bool in_domain = true;
};

class HolomorphicRep {
 public:
  explicit HolomorphicRep(const WeierstrassSeed& seed);

  HoloJet evaluate(cplx z, std::span<const cplx> w) const;
  /// Real chart coordinates (x, y, u_1, v_1, ...).
  HoloJet evaluate(const Vec& coords) const;

  int n() const { return n_; }
  int target_dim() const { return 2 * n_ + 1; }
  const WeierstrassChain& chain() const { return chain_; }
  const WeierstrassSeed& seed() const { return seed_; }

 private:
  int n_;
  WeierstrassSeed seed_;
  WeierstrassChain chain_;
  SeriesVector F0_;    // sum_j int b_j delta^(j), plus the F constant
  SeriesVector F0z_;   // sum_j b_j delta^(j)
  SeriesVector F0zz_;
};

/// The complex structure with fbar_* = f_* o J in chart coordinates:
/// J(d/dx) = -d/dy, J(d/dy) = d/dx on every (x, y) and (u_j, v_j) pair.
Mat family_complex_structure(int n);

/// Sampling box: the square inscribed in the disc (shrunk slightly) times W.
Box seed_box(const WeierstrassSeed& seed);
std::vector<std::string> seed_coordinate_names(int n);

/// sqrt(2) Re(m F) as a chart; m = 1 gives f, m = -i gives fbar and
/// m = exp(-i theta) gives cos(theta) f + sin(theta) fbar.
ImmersionChart real_part_chart(std::shared_ptr<const HolomorphicRep> rep, cplx multiplier);

ImmersionChart immersion_f(const WeierstrassSeed& seed);
ImmersionChart conjugate_fbar(const WeierstrassSeed& seed);
ImmersionChart associated(const WeierstrassSeed& seed, double theta);

}  // namespace kbend
