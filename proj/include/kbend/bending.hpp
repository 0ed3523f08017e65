#pragma once

// Infinitesimal bendings of hypersurfaces: the defining condition, Gauss-map
// preservation, the tensor B = d/dt A(t) by three routes, the fundamental
// equations and the triviality classification.

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "kbend/chart.hpp"
#include "kbend/geometry.hpp"
#include "kbend/report.hpp"

namespace kbend {

class PreconditionError : public DomainError {
 public:
  using DomainError::DomainError;
};

enum class Provenance { conjugate, trivial, cylinder, custom };
std::string to_string(Provenance p);

/// A vector field along a chart, given with its first and second partials.
class BendingField {
 public:
  using Evaluator = std::function<Jet2(const Vec&)>;

  BendingField(Evaluator eval, int ambient, Provenance provenance);
  static BendingField from_chart(const ImmersionChart& chart, Provenance provenance);

  Jet2 jet(const Vec& p) const;
  int ambient() const { return ambient_; }
  Provenance provenance() const { return provenance_; }

 private:
  Evaluator eval_;
  int ambient_;
  Provenance provenance_;
};

BendingField scaled(const BendingField& t, double s);
BendingField sum(const BendingField& a, const BendingField& b);

struct TrivialData {
  Mat D;  // skew-symmetric
  Vec w;
};

/// T = D f + w; rejects non-skew D.
BendingField make_trivial(const TrivialData& data, const ImmersionChart& f);
TrivialData random_trivial_data(int ambient, std::uint64_t seed, double scale = 1.0);

/// The cylinder f(y, z) = (g(y), z) over a profile chart, with z in `zbox`.
ImmersionChart make_cylinder(const ImmersionChart& profile, const Box& zbox);
/// The block field (T1(y), D z + w) on the cylinder chart.
BendingField make_cylinder_bending(const BendingField& profile_bending, int profile_dim,
                                   const TrivialData& killing);

/// Tangential part of T_* as an endomorphism in chart coordinates.
Mat tangential_endomorphism(const Jet2& f, const Jet2& t);
/// max_i |T_i| / |f_i|, the dimensionless size of the bending.
double bending_scale(const Jet2& f, const Jet2& t);

/// Step for the t-derivative: 1e-4 / sqrt(|A| * bending scale).
double default_bending_step(const PointFrame& frame, double bending_scale);

ResidualReport bending_residual(const ImmersionChart& f, const BendingField& t,
                                std::span<const Vec> points, double tolerance = 1e-10);

struct VariationReports {
  ResidualReport first_order;  // central t-difference of the metric of f + tT
  ResidualReport exact;        // g_t = g_0 + t^2 <T_*, T_*> at t = +-0.1
};
VariationReports variation_first_order_residual(const ImmersionChart& f, const BendingField& t,
                                                std::span<const Vec> points, double eps = 1e-3,
                                                double tolerance = 1e-10);

struct GaussPreservationReports {
  ResidualReport normal_component;  // max |<N, T_i>| / |T_i|
  ResidualReport normal_variation;  // |dN_t/dt| at t = 0, central differences
};
GaussPreservationReports gauss_preservation_residual(const ImmersionChart& f, const BendingField& t,
                                                     std::span<const Vec> points, double eps = 1e-4,
                                                     double tolerance = 1e-8);

/// B in chart coordinates as an endomorphism, with the metric at t = 0.
struct BTensor {
  Mat endo;
  Mat G;

  Mat lowered() const { return G * endo; }
  /// |lowered - lowered^T| / |lowered| (0 for B = 0).
  double asymmetry() const;
  /// Frobenius norm in a G-orthonormal frame.
  double norm() const;
};

BTensor B_by_fd(const ImmersionChart& f, const BendingField& t, const Vec& p, double eps = 0.0);
/// N-component of the covariant derivative of T_*, with Christoffel symbols
/// taken from the exact 2-jet of f.
BTensor B_by_formula(const ImmersionChart& f, const BendingField& t, const Vec& p);

struct BatResult {
  BTensor B;
  Mat T_star;
  double anticommutator = 0.0;  // |A T_* + T_* A| / (|A| |T_*|)
};
/// A o T_*; requires |<N, T_i>| / |T_i| <= gauss_tol at p.
BatResult B_by_BAT(const ImmersionChart& f, const BendingField& t, const Vec& p,
                   double gauss_tol = 1e-6);

/// Relative Frobenius distance between two B tensors, scaled by |A| times
/// the bending scale at p.
double B_deviation(const BTensor& a, const BTensor& b, double scale);

/// max over coordinate pairs of |B e_i ^ A e_j - B e_j ^ A e_i| / (|e_i| |e_j| |A| |B|),
/// all lengths measured with G.
double fundamental_equation_residual(const Mat& A, const Mat& B, const Mat& G);

/// max_{i,j} |(nabla_i S) e_j - (nabla_j S) e_i| / (|e_i| |e_j| |S|).
double codazzi_residual(const ImmersionChart& f, const EndoField& S, const Vec& p, double h);

/// max_{k,j} |(nabla_k T_*) e_j| / (|e_j| |T_*|), zero when T_* vanishes.
double parallel_Tstar_residual(const ImmersionChart& f, const BendingField& t, const Vec& p,
                               double h);

EndoField shape_operator_field(const ImmersionChart& f);
EndoField B_formula_field(const ImmersionChart& f, const BendingField& t);
EndoField tangential_field(const ImmersionChart& f, const BendingField& t);

struct RotationFit {
  double c = 0.0;
  double residual = 0.0;
};
/// Fits T_* restricted to (ker A)^perp against c R_{pi/2}.  The plane is
/// oriented by the chart's complex structure when it has one.
RotationFit rotation_coefficient(const ImmersionChart& f, const BendingField& t, const Vec& p,
                                 double rank_tol = 1e-7);

struct TrivialityVerdict {
  bool trivial = false;
  double residual = 0.0;
  double tolerance = 0.0;
};
TrivialityVerdict classify_triviality(const ImmersionChart& f, const BendingField& t,
                                      std::span<const Vec> points, double tol = 1e-6);

/// T = c fbar + D f + w recovered by least squares: c from the B tensors,
/// (D, w) from the remaining field values.
struct ConjugateDecomposition {
  double c = 0.0;
  TrivialData trivial;
  double residual = 0.0;  // max |T - c fbar - D f - w| / max |T|
};
ConjugateDecomposition decompose_bending(const ImmersionChart& f, const BendingField& fbar,
                                         const BendingField& t, std::span<const Vec> points);

}  // namespace kbend
