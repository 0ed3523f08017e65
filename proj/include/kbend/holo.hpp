#pragma once

// Truncated holomorphic power series about a fixed basepoint.
//
// A TruncatedSeries stores the Taylor coefficients c_0..c_N of a germ
// sum_k c_k (z - z0)^k.  All binary operations require a shared basepoint
// and truncate to the smaller operand order; nothing is ever recentered.

#include <complex>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace kbend {

using cplx = std::complex<double>;

/// Raised for incompatible operands (basepoint or dimension mismatch,
/// evaluation stencils leaving a chart, malformed input).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

class TruncatedSeries {
 public:
  static constexpr double kUnbounded = std::numeric_limits<double>::infinity();

  TruncatedSeries() : TruncatedSeries(cplx{0.0, 0.0}, {cplx{0.0, 0.0}}) {}
  TruncatedSeries(cplx basepoint, std::vector<cplx> coeffs, double radius = kUnbounded);

  static TruncatedSeries constant(cplx value, cplx basepoint, int order,
                                  double radius = kUnbounded);
  static TruncatedSeries zero(cplx basepoint, int order, double radius = kUnbounded) {
    return constant(cplx{0.0, 0.0}, basepoint, order, radius);
  }
  /// The coordinate function z itself, i.e. basepoint + (z - basepoint).
  static TruncatedSeries identity(cplx basepoint, int order, double radius = kUnbounded);

  cplx basepoint() const { return basepoint_; }
  int order() const { return static_cast<int>(coeffs_.size()) - 1; }
  double radius() const { return radius_; }
  std::span<const cplx> coeffs() const { return coeffs_; }
  cplx operator[](int k) const { return coeffs_[static_cast<std::size_t>(k)]; }

  /// Same coefficients with the highest ones dropped.
  TruncatedSeries truncated(int order) const;
  TruncatedSeries with_radius(double radius) const;

  bool is_zero() const;

 private:
  cplx basepoint_;
  std::vector<cplx> coeffs_;
  double radius_;
};

struct SeriesValue {
  cplx value;
  bool outside_radius = false;
};

TruncatedSeries series_add(const TruncatedSeries& a, const TruncatedSeries& b);
TruncatedSeries series_sub(const TruncatedSeries& a, const TruncatedSeries& b);
TruncatedSeries series_scale(const TruncatedSeries& a, cplx s);
TruncatedSeries series_mul(const TruncatedSeries& a, const TruncatedSeries& b);
// Order-0 input yields the zero series of order 0.
TruncatedSeries series_diff(const TruncatedSeries& a);
TruncatedSeries series_int(const TruncatedSeries& a, cplx constant);
SeriesValue series_eval(const TruncatedSeries& a, cplx z);

/// Bound on |eval(a)eval(b) - eval(a*b)| at z: the magnitude of the cross
/// terms a_i b_j (z - z0)^(i+j) dropped by truncation.
double truncation_bound(const TruncatedSeries& a, const TruncatedSeries& b, cplx z);

inline TruncatedSeries operator+(const TruncatedSeries& a, const TruncatedSeries& b) {
  return series_add(a, b);
}
inline TruncatedSeries operator-(const TruncatedSeries& a, const TruncatedSeries& b) {
  return series_sub(a, b);
}
inline TruncatedSeries operator*(const TruncatedSeries& a, const TruncatedSeries& b) {
  return series_mul(a, b);
}
inline TruncatedSeries operator*(cplx s, const TruncatedSeries& a) { return series_scale(a, s); }

/// A vector of series sharing basepoint and order.
class SeriesVector {
 public:
  SeriesVector() = default;
  explicit SeriesVector(std::vector<TruncatedSeries> components);

  std::size_t dim() const { return components_.size(); }
  int order() const { return components_.front().order(); }
  cplx basepoint() const { return components_.front().basepoint(); }
  const TruncatedSeries& operator[](std::size_t i) const { return components_[i]; }
  const std::vector<TruncatedSeries>& components() const { return components_; }

 private:
  std::vector<TruncatedSeries> components_;
};

/// Symmetric (unconjugated) bilinear product sum_k a_k b_k.
TruncatedSeries vdot(const SeriesVector& a, const SeriesVector& b);
SeriesVector vscale(const TruncatedSeries& s, const SeriesVector& v);
SeriesVector vadd(const SeriesVector& a, const SeriesVector& b);
SeriesVector vdiff(const SeriesVector& v);
/// Component-wise antiderivative; `constants` may be shorter than dim (missing
/// entries are zero).
SeriesVector vint(const SeriesVector& v, std::span<const cplx> constants = {});
Eigen::VectorXcd veval(const SeriesVector& v, cplx z, bool* outside_radius = nullptr);

}  // namespace kbend
