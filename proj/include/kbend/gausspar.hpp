#pragma once

// Gauss parametrization of rank-two hypersurfaces.  A surface g in the unit
// sphere S^(m-1), a function gamma on it and an orthonormal frame of the
// normal bundle Lambda of g in the sphere give
//
//   Psi(x, w) = gamma(x) g(x) + g_* grad gamma(x) + sum_k w_k xi_k(x),
//
// whose unit normal is g(x) wherever Psi is regular.

#include <functional>
#include <span>
#include <vector>

#include "kbend/bending.hpp"
#include "kbend/chart.hpp"
#include "kbend/geometry.hpp"
#include "kbend/report.hpp"

namespace kbend {

class RankTwoStructureError : public DomainError {
 public:
  using DomainError::DomainError;
};

using FrameField = std::function<Mat(const Vec&)>;

struct SphereSurface {
  ImmersionChart g;  // dim 2, values on the unit sphere
  FrameField frame;  // ambient x (ambient - 3), orthonormal, normal to g and g_*
  /// Optional cheaper evaluator filling only value and d1 of the jet.
  std::function<Jet2(const Vec&)> first_order;

  Jet2 tangent_jet(const Vec& x) const { return first_order ? first_order(x) : g.jet(x); }

  int fiber_dim() const { return g.ambient() - 3; }
};

/// Largest violation at x of: |g| = 1, frame orthonormality, frame
/// orthogonal to g and to the partials of g.
double sphere_surface_defect(const SphereSurface& s, const Vec& x);
/// Throws DomainError when the defect exceeds tol at one of the points.
void validate_sphere_surface(const SphereSurface& s, std::span<const Vec> points,
                             double tol = 1e-10);

struct SupportFunction {
  ScalarField value;
  /// Coordinate partials of gamma; empty means fourth-order differences.
  std::function<Vec(const Vec&)> gradient;

  Vec grad(const Vec& x) const;
  SupportFunction scaled(double s) const;
};

SupportFunction constant_support(double c);

struct GaussSample {
  Jet2 jet;  // coordinates (x, w); w-partials are the frame vectors
  bool regular = true;
  double sigma_ratio = 0.0;  // smallest over largest singular value of the Jacobian
};

/// Value of Psi at (x, w).
Vec gauss_param_value(const SphereSurface& g, const SupportFunction& gamma, const Vec& x,
                      const Vec& w);
/// Psi with its 2-jet; regular iff sigma_ratio > regularity_tol.
GaussSample gauss_param(const SphereSurface& g, const SupportFunction& gamma, const Vec& x,
                        const Vec& w, double regularity_tol = 1e-8);

/// Psi as a chart on xbox x wbox.
ImmersionChart gauss_param_chart(const SphereSurface& g, const SupportFunction& gamma,
                                 const Box& wbox);

/// Sample coordinates are (x, w).  Residual: angle between the unit normal
/// of Psi and the line through g(x).  Non-regular samples are skipped.
ResidualReport gauss_map_identity_residual(const SphereSurface& g, const SupportFunction& gamma,
                                           std::span<const Vec> samples, double tolerance = 1e-8);
/// Negative control: the same angle measured against the unit tangent g_x.
ResidualReport gauss_map_tangent_control(const SphereSurface& g, const SupportFunction& gamma,
                                         std::span<const Vec> samples, double tolerance = 1e-8);

struct MinimalityReport {
  ResidualReport laplace;  // |Delta gamma + 2 gamma|
  ResidualReport trace;    // |trace A| of Psi
  // Samples where one quantity is below the tolerance and the other is not
  // above ten times it.
  std::size_t mixed = 0;
  bool jointly_small() const { return laplace.pass && trace.pass; }
  bool consistent() const { return mixed == 0; }
};

/// h <= 0 picks the Laplace-Beltrami default step; tolerance <= 0 means 10 h^2.
MinimalityReport minimality_criterion(const SphereSurface& g, const SupportFunction& gamma,
                                      std::span<const Vec> samples, double h = 0.0,
                                      double tolerance = 0.0, bool control = false);

struct LeafCluster {
  Vec normal;
  double support = 0.0;
  std::vector<std::size_t> members;
};

struct Extraction {
  std::vector<Vec> normals;     // g = N per sample
  std::vector<double> support;  // gamma = <f, N> per sample
  std::vector<LeafCluster> leaves;
  double nullity_constancy = 0.0;  // max |dN(v)| / |A| over unit nullity vectors v
  double support_spread = 0.0;     // max spread of gamma inside one leaf
};

/// Requires rank 2 at every sample.  Throws RankTwoStructureError when N
/// moves along the nullity by more than nullity_tol.
Extraction extract_from_hypersurface(const ImmersionChart& f, std::span<const Vec> samples,
                                     double nullity_tol = 1e-7, double cluster_tol = 1e-6);

/// (g, gamma) on the slice of f where coordinates 2.. are fixed to w0.  The
/// Lambda frame is the Gram-Schmidt projection of f_* along the fixed
/// coordinates at the slice center.
struct SliceGaussData {
  SphereSurface sphere;
  SupportFunction support;
  Box wbox;
};
SliceGaussData gauss_data_from_slice(const ImmersionChart& f, const Vec& w0);

struct RoundTrip {
  std::size_t points = 0;
  double max_distance = 0.0;        // |Psi(s, w) - f(p)|
  double max_support_error = 0.0;   // |gamma(s) - <f(p), N(p)>|
  double max_normal_error = 0.0;    // |g(s) - N(p)| after matching
};
/// Matches each sample p of f to the slice point s with g(s) = N(p), reads
/// off w_k = <f(p), xi_k(s)> and rebuilds f(p) through Psi.
RoundTrip gauss_round_trip(const ImmersionChart& f, const SliceGaussData& data,
                           std::span<const Vec> samples);

/// Totally geodesic S^2 in S^3 in coordinates (phi, theta), frame e_4.
SphereSurface totally_geodesic_sphere();
/// Clifford torus (cos x, sin x, cos y, sin y) / sqrt 2 in S^3.
SphereSurface clifford_torus();
/// gamma = a cos x + b sin y on the Clifford torus; Delta gamma = -2 gamma.
SupportFunction torus_harmonic_support(double a, double b);

}  // namespace kbend
