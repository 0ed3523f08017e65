#include "kbend/chart.hpp"

#include "kbend/holo.hpp"

namespace kbend {

Jet2 Jet2::zeros(const Vec& coords, int ambient) {
  const auto d = coords.size();
  Jet2 j;
  j.coords = coords;
  j.value = Vec::Zero(ambient);
  j.d1 = Mat::Zero(ambient, d);
  j.d2.assign(static_cast<std::size_t>(d * d), Vec::Zero(ambient));
  return j;
}

Jet2 operator+(const Jet2& a, const Jet2& b) {
  if (a.ambient() != b.ambient() || a.dim() != b.dim()) {
    throw DomainError("jet sum: incompatible dimensions");
  }
  Jet2 out = a;
  out.value += b.value;
  out.d1 += b.d1;
  for (std::size_t k = 0; k < out.d2.size(); ++k) out.d2[k] += b.d2[k];
  out.in_domain = a.in_domain && b.in_domain;
  return out;
}

Jet2 operator*(double s, const Jet2& a) {
  Jet2 out = a;
  out.value *= s;
  out.d1 *= s;
  for (auto& v : out.d2) v *= s;
  return out;
}

Jet2 apply_linear(const Mat& m, const Jet2& a) {
  if (m.cols() != a.ambient()) throw DomainError("apply_linear: dimension mismatch");
  Jet2 out;
  out.coords = a.coords;
  out.value = m * a.value;
  out.d1 = m * a.d1;
  out.d2.reserve(a.d2.size());
  for (const auto& v : a.d2) out.d2.push_back(m * v);
  out.in_domain = a.in_domain;
  return out;
}

bool Box::contains(const Vec& p, double slack) const {
  if (p.size() != lo.size()) return false;
  for (Eigen::Index i = 0; i < p.size(); ++i) {
    if (p[i] < lo[i] - slack || p[i] > hi[i] + slack) return false;
  }
  return true;
}

ImmersionChart::ImmersionChart(int dim, int ambient, Evaluator eval, Box box,
                               std::vector<std::string> names, std::optional<Mat> complex_structure)
    : dim_(dim),
      ambient_(ambient),
      eval_(std::move(eval)),
      box_(std::move(box)),
      names_(std::move(names)),
      complex_structure_(std::move(complex_structure)) {
  if (dim_ < 1 || ambient_ < dim_) throw DomainError("chart: invalid dimensions");
  if (box_.dim() != dim_) throw DomainError("chart: sampling box has wrong dimension");
  if (names_.empty()) {
    for (int i = 0; i < dim_; ++i) names_.push_back("x" + std::to_string(i));
  }
}

Jet2 ImmersionChart::jet(const Vec& p) const {
  if (p.size() != dim_) throw DomainError("chart: coordinate vector has wrong dimension");
  Jet2 j = eval_(p);
  j.coords = p;
  // Stencils may reach slightly past the sampling box.
  j.in_domain = j.in_domain && box_.contains(p, 0.05 * box_.scale());
  return j;
}

ImmersionChart ImmersionChart::with_box(Box box) const {
  ImmersionChart c = *this;
  if (box.dim() != dim_) throw DomainError("chart: sampling box has wrong dimension");
  c.box_ = std::move(box);
  return c;
}

}  // namespace kbend
