#pragma once

// Pointwise hypersurface geometry: metric, unit normal, second fundamental
// form, shape operator, relative nullity, Christoffel symbols and the
// covariant-derivative residuals built on them.

#include <functional>
#include <limits>
#include <vector>

#include "kbend/chart.hpp"
#include "kbend/holo.hpp"

namespace kbend {

class NonImmersionError : public DomainError {
 public:
  using DomainError::DomainError;
};

/// First-derivative step: cbrt(machine epsilon) times the coordinate scale.
double default_fd_step(double scale = 1.0);
/// Step for second differences of values: epsilon^(1/4) times the scale.
double default_second_step(double scale = 1.0);

/// The vector n with <n, u> = det(u, v_1, ..., v_d) for every u.  `v` is
/// (d+1) x d.  Dependent columns give the zero vector.
Vec generalized_cross(const Mat& v);

struct PointFrame {
  Vec coords;
  Mat G;
  Mat G_inv;
  Vec N;
  Mat H;
  Mat A;  // G^-1 H, acting on coordinate vectors
  // Principal curvatures sorted by decreasing magnitude, with G-orthonormal
  // principal directions as columns.
  Vec principal;
  Mat directions;

  int dim() const { return static_cast<int>(G.rows()); }
};

/// Orientation: N is the normalized generalized cross product of the
/// coordinate partials taken in index order.
PointFrame point_frame(const Jet2& jet, double regularity_tol = 1e-10);

/// Operator norm of an endomorphism measured in a G-orthonormal frame.
double op_norm(const Mat& endo, const Mat& G);
/// Frobenius norm of an endomorphism measured in a G-orthonormal frame.
double frob_norm(const Mat& endo, const Mat& G);
double g_norm(const Vec& v, const Mat& G);

struct RankResult {
  int rank = 0;
  Mat nullity_basis;  // d x (d - rank), G-orthonormal columns
  Vec magnitudes;     // |principal curvatures|, descending
  bool indeterminate = false;
};

RankResult rank_and_nullity(const PointFrame& frame, double tol = 1e-7);

/// Christoffel symbols of the second kind, gamma(k, i, j) = Gamma^k_ij.
class Christoffel {
 public:
  explicit Christoffel(int d) : d_(d), data_(static_cast<std::size_t>(d * d * d), 0.0) {}
  int dim() const { return d_; }
  double operator()(int k, int i, int j) const { return data_[index(k, i, j)]; }
  double& operator()(int k, int i, int j) { return data_[index(k, i, j)]; }
  double max_abs() const;

 private:
  std::size_t index(int k, int i, int j) const {
    return static_cast<std::size_t>((k * d_ + i) * d_ + j);
  }
  int d_;
  std::vector<double> data_;
};

/// Central differences of the induced metric with step h.
Christoffel christoffel(const ImmersionChart& chart, const Vec& p, double h);
/// From the exact 2-jet: Gamma^k_ij = G^kl <f_ij, f_l>.
Christoffel christoffel_exact(const Jet2& jet);

using ScalarField = std::function<double(const Vec&)>;
using EndoField = std::function<Mat(const Vec&)>;

/// Laplace-Beltrami of a scalar on a two-dimensional chart by central
/// differences with step h.
double laplace_beltrami(const ImmersionChart& chart, const ScalarField& gamma, const Vec& p,
                        double h);

using GradientField = std::function<Vec(const Vec&)>;
/// Same operator when the coordinate gradient of gamma is known: the
/// Hessian comes from central differences of the gradient.
double laplace_beltrami_from_gradient(const ImmersionChart& chart, const GradientField& grad,
                                      const Vec& p, double h);

/// (nabla_k S) for each coordinate direction k, by central differences of S
/// and finite-difference Christoffels.
std::vector<Mat> covariant_derivative(const ImmersionChart& chart, const EndoField& field,
                                      const Vec& p, double h);

/// ||A J + J A|| / ||A||; zero when A vanishes.
double anticommutation_residual(const PointFrame& frame, const Mat& J);

/// max_{X,Y coordinate} |(nabla_X J) Y| / sqrt(d).
double parallel_J_residual(const ImmersionChart& chart, const EndoField& J, const Vec& p, double h);

/// Max deviation of the coordinate derivative of N from -f_*(A e_i),
/// relative to the largest |f_*(A e_i)|.
double weingarten_residual(const ImmersionChart& chart, const Vec& p, double h);

}  // namespace kbend
