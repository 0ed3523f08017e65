#include "kbend/fd.hpp"

#include <cmath>
#include <limits>

namespace kbend {

namespace {

Vec second_difference(const VectorMap& f, const Vec& p, const Vec& dir, double h, const Vec& f0) {
  return (-f(p + 2.0 * h * dir) + 16.0 * f(p + h * dir) - 30.0 * f0 + 16.0 * f(p - h * dir) -
          f(p - 2.0 * h * dir)) /
         (12.0 * h * h);
}

}  // namespace

double fd4_first_step(double scale) {
  return std::pow(std::numeric_limits<double>::epsilon(), 0.2) * scale;
}

double fd4_second_step(double scale) {
  return std::pow(std::numeric_limits<double>::epsilon(), 1.0 / 6.0) * scale;
}

Mat fd4_jacobian(const VectorMap& f, const Vec& p, double h) {
  const auto d = p.size();
  Vec f0 = f(p);
  Mat out(f0.size(), d);
  for (Eigen::Index i = 0; i < d; ++i) {
    Vec e = Vec::Zero(d);
    e[i] = h;
    out.col(i) = (-f(p + 2.0 * e) + 8.0 * f(p + e) - 8.0 * f(p - e) + f(p - 2.0 * e)) / (12.0 * h);
  }
  return out;
}

Jet2 fd4_jet(const VectorMap& f, const Vec& p, double h1, double h2) {
  const int d = static_cast<int>(p.size());
  Jet2 j;
  j.coords = p;
  j.value = f(p);
  j.d1 = fd4_jacobian(f, p, h1);
  j.d2.assign(static_cast<std::size_t>(d * d), Vec());
  for (int i = 0; i < d; ++i) {
    Vec ei = Vec::Zero(d);
    ei[i] = 1.0;
    j.second(i, i) = second_difference(f, p, ei, h2, j.value);
    for (int k = 0; k < i; ++k) {
      Vec ek = Vec::Zero(d);
      ek[k] = 1.0;
      const Vec plus = second_difference(f, p, ei + ek, h2, j.value);
      const Vec minus = second_difference(f, p, ei - ek, h2, j.value);
      j.second(i, k) = 0.25 * (plus - minus);
      j.second(k, i) = j.second(i, k);
    }
  }
  return j;
}

ImmersionChart fd_chart(int dim, int ambient, VectorMap f, Box box, std::vector<std::string> names) {
  const double scale = box.scale() > 0.0 ? std::min(1.0, box.scale()) : 1.0;
  const double h1 = fd4_first_step(scale);
  const double h2 = fd4_second_step(scale);
  auto eval = [f = std::move(f), h1, h2](const Vec& p) { return fd4_jet(f, p, h1, h2); };
  return ImmersionChart(dim, ambient, std::move(eval), std::move(box), std::move(names));
}

}  // namespace kbend
