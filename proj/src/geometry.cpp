#include "kbend/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <Eigen/Eigenvalues>

namespace kbend {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

Jet2 stencil_jet(const ImmersionChart& chart, const Vec& p) {
  Jet2 j = chart.jet(p);
  if (!j.in_domain) throw DomainError("finite-difference stencil leaves the chart domain");
  return j;
}

Mat metric_of(const Jet2& j) { return j.d1.transpose() * j.d1; }

// Upper-triangular R with G = R^T R; coordinates map to an orthonormal frame via R.
Mat frame_factor(const Mat& G) {
  Eigen::LLT<Mat> llt(G);
  if (llt.info() != Eigen::Success) throw NonImmersionError("metric is not positive definite");
  return llt.matrixU();
}

}  // namespace

double default_fd_step(double scale) { return std::cbrt(kEps) * scale; }
double default_second_step(double scale) { return std::sqrt(std::sqrt(kEps)) * scale; }

Vec generalized_cross(const Mat& v) {
  const auto n = v.rows();
  const auto d = v.cols();
  if (n != d + 1) throw DomainError("generalized_cross expects d vectors in R^(d+1)");
  Vec out(n);
  Mat minor(d, d);
  for (Eigen::Index k = 0; k < n; ++k) {
    Eigen::Index r = 0;
    for (Eigen::Index i = 0; i < n; ++i) {
      if (i == k) continue;
      minor.row(r++) = v.row(i);
    }
    const double sign = (k % 2 == 0) ? 1.0 : -1.0;
    out[k] = d == 0 ? sign : sign * minor.determinant();
  }
  return out;
}

PointFrame point_frame(const Jet2& jet, double regularity_tol) {
  const int d = jet.dim();
  if (jet.ambient() != d + 1) throw DomainError("point_frame expects a hypersurface jet");
  Eigen::JacobiSVD<Mat> svd(jet.d1);
  const Vec sv = svd.singularValues();
  if (sv.size() == 0 || !(sv[sv.size() - 1] > regularity_tol * sv[0])) {
    throw NonImmersionError("coordinate partials are rank deficient");
  }

  PointFrame f;
  f.coords = jet.coords;
  f.G = metric_of(jet);
  f.G_inv = f.G.inverse();
  Vec n = generalized_cross(jet.d1);
  f.N = n / n.norm();
  f.H.resize(d, d);
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) f.H(i, j) = jet.second(i, j).dot(f.N);
  }
  f.H = 0.5 * (f.H + f.H.transpose());
  f.A = f.G.ldlt().solve(f.H);

  Eigen::GeneralizedSelfAdjointEigenSolver<Mat> es(f.H, f.G);
  std::vector<int> order(static_cast<std::size_t>(d));
  std::iota(order.begin(), order.end(), 0);
  const Vec& ev = es.eigenvalues();
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return std::abs(ev[a]) > std::abs(ev[b]); });
  f.principal.resize(d);
  f.directions.resize(d, d);
  for (int k = 0; k < d; ++k) {
    f.principal[k] = ev[order[static_cast<std::size_t>(k)]];
    f.directions.col(k) = es.eigenvectors().col(order[static_cast<std::size_t>(k)]);
  }
  return f;
}

double op_norm(const Mat& endo, const Mat& G) {
  const Mat R = frame_factor(G);
  const Mat hat = R * endo * R.inverse();
  Eigen::JacobiSVD<Mat> svd(hat);
  return svd.singularValues().size() ? svd.singularValues()[0] : 0.0;
}

double frob_norm(const Mat& endo, const Mat& G) {
  const Mat R = frame_factor(G);
  return (R * endo * R.inverse()).norm();
}

double g_norm(const Vec& v, const Mat& G) { return std::sqrt(std::max(0.0, v.dot(G * v))); }

RankResult rank_and_nullity(const PointFrame& frame, double tol) {
  RankResult r;
  const int d = frame.dim();
  r.magnitudes = frame.principal.cwiseAbs();
  const double top = d > 0 ? r.magnitudes[0] : 0.0;
  const double threshold = tol * top;
  std::vector<int> null_cols;
  for (int k = 0; k < d; ++k) {
    const double m = r.magnitudes[k];
    if (top > 0.0 && m > threshold) {
      ++r.rank;
    } else {
      null_cols.push_back(k);
    }
    if (top > 0.0 && m >= threshold / 10.0 && m <= threshold * 10.0) r.indeterminate = true;
  }
  r.nullity_basis.resize(d, static_cast<Eigen::Index>(null_cols.size()));
  for (std::size_t c = 0; c < null_cols.size(); ++c) {
    r.nullity_basis.col(static_cast<Eigen::Index>(c)) = frame.directions.col(null_cols[c]);
  }
  return r;
}

double Christoffel::max_abs() const {
  double m = 0.0;
  for (double x : data_) m = std::max(m, std::abs(x));
  return m;
}

Christoffel christoffel(const ImmersionChart& chart, const Vec& p, double h) {
  const int d = chart.dim();
  std::vector<Mat> dG(static_cast<std::size_t>(d));
  for (int l = 0; l < d; ++l) {
    Vec e = Vec::Zero(d);
    e[l] = h;
    dG[static_cast<std::size_t>(l)] =
        (metric_of(stencil_jet(chart, p + e)) - metric_of(stencil_jet(chart, p - e))) / (2.0 * h);
  }
  const Mat G_inv = metric_of(stencil_jet(chart, p)).inverse();
  Christoffel gamma(d);
  for (int i = 0; i < d; ++i) {
    for (int j = i; j < d; ++j) {
      for (int k = 0; k < d; ++k) {
        double acc = 0.0;
        for (int l = 0; l < d; ++l) {
          acc += G_inv(k, l) * (dG[static_cast<std::size_t>(i)](j, l) +
                                dG[static_cast<std::size_t>(j)](i, l) -
                                dG[static_cast<std::size_t>(l)](i, j));
        }
        gamma(k, i, j) = 0.5 * acc;
        gamma(k, j, i) = 0.5 * acc;
      }
    }
  }
  return gamma;
}

Christoffel christoffel_exact(const Jet2& jet) {
  const int d = jet.dim();
  const Mat G_inv = metric_of(jet).inverse();
  Christoffel gamma(d);
  for (int i = 0; i < d; ++i) {
    for (int j = i; j < d; ++j) {
      const Vec lowered = jet.d1.transpose() * jet.second(i, j);
      const Vec raised = G_inv * lowered;
      for (int k = 0; k < d; ++k) {
        gamma(k, i, j) = raised[k];
        gamma(k, j, i) = raised[k];
      }
    }
  }
  return gamma;
}

double laplace_beltrami(const ImmersionChart& chart, const ScalarField& gamma, const Vec& p,
                        double h) {
  const int d = chart.dim();
  const Mat G_inv = metric_of(stencil_jet(chart, p)).inverse();
  const Christoffel chr = christoffel(chart, p, h);
  const double g0 = gamma(p);

  Vec grad(d);
  Mat hess(d, d);
  for (int i = 0; i < d; ++i) {
    Vec ei = Vec::Zero(d);
    ei[i] = h;
    const double gp = gamma(p + ei);
    const double gm = gamma(p - ei);
    grad[i] = (gp - gm) / (2.0 * h);
    hess(i, i) = (gp - 2.0 * g0 + gm) / (h * h);
    for (int j = 0; j < i; ++j) {
      Vec ej = Vec::Zero(d);
      ej[j] = h;
      const double v = (gamma(p + ei + ej) - gamma(p + ei - ej) - gamma(p - ei + ej) +
                        gamma(p - ei - ej)) /
                       (4.0 * h * h);
      hess(i, j) = v;
      hess(j, i) = v;
    }
  }

  double lap = 0.0;
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) {
      double corr = 0.0;
      for (int k = 0; k < d; ++k) corr += chr(k, i, j) * grad[k];
      lap += G_inv(i, j) * (hess(i, j) - corr);
    }
  }
  return lap;
}

double laplace_beltrami_from_gradient(const ImmersionChart& chart, const GradientField& grad,
                                      const Vec& p, double h) {
  const int d = chart.dim();
  const Mat G_inv = metric_of(stencil_jet(chart, p)).inverse();
  const Christoffel chr = christoffel(chart, p, h);
  const Vec g0 = grad(p);
  Mat hess(d, d);
  for (int i = 0; i < d; ++i) {
    Vec e = Vec::Zero(d);
    e[i] = h;
    hess.col(i) = (grad(p + e) - grad(p - e)) / (2.0 * h);
  }
  hess = 0.5 * (hess + hess.transpose());

  double lap = 0.0;
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) {
      double corr = 0.0;
      for (int k = 0; k < d; ++k) corr += chr(k, i, j) * g0[k];
      lap += G_inv(i, j) * (hess(i, j) - corr);
    }
  }
  return lap;
}

std::vector<Mat> covariant_derivative(const ImmersionChart& chart, const EndoField& field,
                                      const Vec& p, double h) {
  const int d = chart.dim();
  const Christoffel chr = christoffel(chart, p, h);
  const Mat S = field(p);
  std::vector<Mat> out;
  out.reserve(static_cast<std::size_t>(d));
  for (int k = 0; k < d; ++k) {
    Vec e = Vec::Zero(d);
    e[k] = h;
    // Five-point central stencil; the three-point one leaves O(h^2) of A''' behind.
    Mat D = (8.0 * (field(p + e) - field(p - e)) - (field(p + 2.0 * e) - field(p - 2.0 * e))) /
            (12.0 * h);
    Mat gk(d, d);  // gk(i, l) = Gamma^i_kl
    for (int i = 0; i < d; ++i) {
      for (int l = 0; l < d; ++l) gk(i, l) = chr(i, k, l);
    }
    D += gk * S - S * gk;
    out.push_back(std::move(D));
  }
  return out;
}

double anticommutation_residual(const PointFrame& frame, const Mat& J) {
  const double a = op_norm(frame.A, frame.G);
  if (a == 0.0) return 0.0;
  return op_norm(frame.A * J + J * frame.A, frame.G) / a;
}

double parallel_J_residual(const ImmersionChart& chart, const EndoField& J, const Vec& p, double h) {
  const int d = chart.dim();
  const Mat G = metric_of(stencil_jet(chart, p));
  const auto nabla = covariant_derivative(chart, J, p, h);
  double worst = 0.0;
  for (int k = 0; k < d; ++k) {
    for (int j = 0; j < d; ++j) {
      Vec ej = Vec::Zero(d);
      ej[j] = 1.0;
      const double r = g_norm(nabla[static_cast<std::size_t>(k)].col(j), G) / g_norm(ej, G);
      worst = std::max(worst, r);
    }
  }
  return worst / std::sqrt(static_cast<double>(d));
}

double weingarten_residual(const ImmersionChart& chart, const Vec& p, double h) {
  const int d = chart.dim();
  const Jet2 j0 = stencil_jet(chart, p);
  const PointFrame f0 = point_frame(j0);
  const Mat predicted = -j0.d1 * f0.A;
  double worst = 0.0;
  for (int i = 0; i < d; ++i) {
    Vec e = Vec::Zero(d);
    e[i] = h;
    const Vec np = point_frame(stencil_jet(chart, p + e)).N;
    const Vec nm = point_frame(stencil_jet(chart, p - e)).N;
    worst = std::max(worst, ((np - nm) / (2.0 * h) - predicted.col(i)).norm());
  }
  double scale = 0.0;
  for (int i = 0; i < d; ++i) scale = std::max(scale, predicted.col(i).norm());
  return scale > 0.0 ? worst / scale : worst;
}

}  // namespace kbend
