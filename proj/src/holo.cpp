#include "kbend/holo.hpp"

#include <algorithm>
#include <cmath>

namespace kbend {

namespace {

void require_same_basepoint(const TruncatedSeries& a, const TruncatedSeries& b) {
  if (a.basepoint() != b.basepoint()) {
    throw DomainError("series basepoints differ; recentering is not supported");
  }
}

}  // namespace

TruncatedSeries::TruncatedSeries(cplx basepoint, std::vector<cplx> coeffs, double radius)
    : basepoint_(basepoint), coeffs_(std::move(coeffs)), radius_(radius) {
  if (coeffs_.empty()) coeffs_.push_back(cplx{0.0, 0.0});
  if (!(radius_ > 0.0)) throw DomainError("series radius must be positive");
}

TruncatedSeries TruncatedSeries::constant(cplx value, cplx basepoint, int order, double radius) {
  std::vector<cplx> c(static_cast<std::size_t>(std::max(order, 0)) + 1, cplx{0.0, 0.0});
  c[0] = value;
  return {basepoint, std::move(c), radius};
}

TruncatedSeries TruncatedSeries::identity(cplx basepoint, int order, double radius) {
  auto s = constant(basepoint, basepoint, std::max(order, 1), radius);
  s.coeffs_[1] = 1.0;
  return s;
}

TruncatedSeries TruncatedSeries::truncated(int order) const {
  if (order >= this->order()) return *this;
  std::vector<cplx> c(coeffs_.begin(), coeffs_.begin() + std::max(order, 0) + 1);
  return {basepoint_, std::move(c), radius_};
}

TruncatedSeries TruncatedSeries::with_radius(double radius) const {
  return {basepoint_, coeffs_, radius};
}

bool TruncatedSeries::is_zero() const {
  return std::all_of(coeffs_.begin(), coeffs_.end(), [](cplx c) { return c == cplx{}; });
}

TruncatedSeries series_add(const TruncatedSeries& a, const TruncatedSeries& b) {
  require_same_basepoint(a, b);
  const int n = std::min(a.order(), b.order());
  std::vector<cplx> c(static_cast<std::size_t>(n) + 1);
  for (int k = 0; k <= n; ++k) c[static_cast<std::size_t>(k)] = a[k] + b[k];
  return {a.basepoint(), std::move(c), std::min(a.radius(), b.radius())};
}

TruncatedSeries series_sub(const TruncatedSeries& a, const TruncatedSeries& b) {
  return series_add(a, series_scale(b, -1.0));
}

TruncatedSeries series_scale(const TruncatedSeries& a, cplx s) {
  std::vector<cplx> c(a.coeffs().begin(), a.coeffs().end());
  for (auto& x : c) x *= s;
  return {a.basepoint(), std::move(c), a.radius()};
}

TruncatedSeries series_mul(const TruncatedSeries& a, const TruncatedSeries& b) {
  require_same_basepoint(a, b);
  const int n = std::min(a.order(), b.order());
  std::vector<cplx> c(static_cast<std::size_t>(n) + 1, cplx{0.0, 0.0});
  for (int k = 0; k <= n; ++k) {
    cplx acc{0.0, 0.0};
    for (int i = 0; i <= k; ++i) acc += a[i] * b[k - i];
    c[static_cast<std::size_t>(k)] = acc;
  }
  return {a.basepoint(), std::move(c), std::min(a.radius(), b.radius())};
}

TruncatedSeries series_diff(const TruncatedSeries& a) {
  if (a.order() == 0) return TruncatedSeries::zero(a.basepoint(), 0, a.radius());
  std::vector<cplx> c(static_cast<std::size_t>(a.order()));
  for (int k = 1; k <= a.order(); ++k) c[static_cast<std::size_t>(k - 1)] = static_cast<double>(k) * a[k];
  return {a.basepoint(), std::move(c), a.radius()};
}

TruncatedSeries series_int(const TruncatedSeries& a, cplx constant) {
  std::vector<cplx> c(static_cast<std::size_t>(a.order()) + 2);
  c[0] = constant;
  for (int k = 0; k <= a.order(); ++k) c[static_cast<std::size_t>(k + 1)] = a[k] / static_cast<double>(k + 1);
  return {a.basepoint(), std::move(c), a.radius()};
}

SeriesValue series_eval(const TruncatedSeries& a, cplx z) {
  const cplx t = z - a.basepoint();
  cplx acc{0.0, 0.0};
  for (int k = a.order(); k >= 0; --k) acc = acc * t + a[k];
  return {acc, std::abs(t) > a.radius()};
}

double truncation_bound(const TruncatedSeries& a, const TruncatedSeries& b, cplx z) {
  require_same_basepoint(a, b);
  const double r = std::abs(z - a.basepoint());
  const int n = std::min(a.order(), b.order());
  double bound = 0.0;
  for (int i = 0; i <= a.order(); ++i) {
    for (int j = std::max(0, n + 1 - i); j <= b.order(); ++j) {
      bound += std::abs(a[i]) * std::abs(b[j]) * std::pow(r, i + j);
    }
  }
  return bound;
}

SeriesVector::SeriesVector(std::vector<TruncatedSeries> components)
    : components_(std::move(components)) {
  if (components_.empty()) throw DomainError("series vector needs at least one component");
  for (const auto& c : components_) {
    if (c.basepoint() != components_.front().basepoint() ||
        c.order() != components_.front().order()) {
      throw DomainError("series vector components must share basepoint and order");
    }
  }
}

TruncatedSeries vdot(const SeriesVector& a, const SeriesVector& b) {
  if (a.dim() != b.dim()) throw DomainError("vdot: dimension mismatch");
  TruncatedSeries acc = series_mul(a[0], b[0]);
  for (std::size_t k = 1; k < a.dim(); ++k) acc = series_add(acc, series_mul(a[k], b[k]));
  return acc;
}

SeriesVector vscale(const TruncatedSeries& s, const SeriesVector& v) {
  std::vector<TruncatedSeries> out;
  out.reserve(v.dim());
  for (const auto& c : v.components()) out.push_back(series_mul(s, c));
  return SeriesVector(std::move(out));
}

SeriesVector vadd(const SeriesVector& a, const SeriesVector& b) {
  if (a.dim() != b.dim()) throw DomainError("vadd: dimension mismatch");
  std::vector<TruncatedSeries> out;
  out.reserve(a.dim());
  for (std::size_t k = 0; k < a.dim(); ++k) out.push_back(series_add(a[k], b[k]));
  return SeriesVector(std::move(out));
}

SeriesVector vdiff(const SeriesVector& v) {
  std::vector<TruncatedSeries> out;
  out.reserve(v.dim());
  for (const auto& c : v.components()) out.push_back(series_diff(c));
  return SeriesVector(std::move(out));
}

SeriesVector vint(const SeriesVector& v, std::span<const cplx> constants) {
  std::vector<TruncatedSeries> out;
  out.reserve(v.dim());
  for (std::size_t k = 0; k < v.dim(); ++k) {
    out.push_back(series_int(v[k], k < constants.size() ? constants[k] : cplx{0.0, 0.0}));
  }
  return SeriesVector(std::move(out));
}

Eigen::VectorXcd veval(const SeriesVector& v, cplx z, bool* outside_radius) {
  Eigen::VectorXcd out(static_cast<Eigen::Index>(v.dim()));
  bool outside = false;
  for (std::size_t k = 0; k < v.dim(); ++k) {
    const auto r = series_eval(v[k], z);
    out[static_cast<Eigen::Index>(k)] = r.value;
    outside = outside || r.outside_radius;
  }
  if (outside_radius) *outside_radius = outside;
  return out;
}

}  // namespace kbend
