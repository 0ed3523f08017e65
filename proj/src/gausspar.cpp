#include "kbend/gausspar.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "kbend/fd.hpp"
#include "kbend/sampling.hpp"

namespace kbend {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double step_scale(const Box& box) { return box.scale() > 0.0 ? std::min(1.0, box.scale()) : 1.0; }

Vec head(const Vec& p, int k) { return p.head(k); }
Vec tail(const Vec& p, int k) { return p.tail(p.size() - k); }

Vec concat(const Vec& a, const Vec& b) {
  Vec out(a.size() + b.size());
  out << a, b;
  return out;
}

// Angle between the unit vector u and the line spanned by the unit vector v.
double line_angle(const Vec& u, const Vec& v) {
  const double c = u.dot(v);
  return std::atan2((u - c * v).norm(), std::abs(c));
}

ResidualReport skipped_report(std::string identity, const std::vector<double>& raw, double tol,
                              bool control) {
  std::vector<double> kept;
  kept.reserve(raw.size());
  for (double r : raw) {
    if (!std::isnan(r)) kept.push_back(r);
  }
  ResidualReport rep = make_report(std::move(identity), kept, tol, control);
  rep.skipped = raw.size() - kept.size();
  return rep;
}

// Modified Gram-Schmidt of `refs` against the orthonormal columns of `basis`.
Mat complete_frame(const Mat& basis, const Mat& refs) {
  Mat q(basis.rows(), basis.cols() + refs.cols());
  q.leftCols(basis.cols()) = basis;
  for (Eigen::Index k = 0; k < refs.cols(); ++k) {
    Vec v = refs.col(k);
    for (int pass = 0; pass < 2; ++pass) {
      for (Eigen::Index c = 0; c < basis.cols() + k; ++c) v -= q.col(c).dot(v) * q.col(c);
    }
    const double nv = v.norm();
    if (!(nv > 1e-10)) throw DomainError("Lambda frame degenerates: reference vector lies in the tangent space");
    q.col(basis.cols() + k) = v / nv;
  }
  return q.rightCols(refs.cols());
}

Mat orthonormal_columns(const Mat& m) {
  Mat q = m;
  for (Eigen::Index k = 0; k < q.cols(); ++k) {
    for (Eigen::Index c = 0; c < k; ++c) q.col(k) -= q.col(c).dot(q.col(k)) * q.col(c);
    q.col(k).normalize();
  }
  return q;
}

}  // namespace

double sphere_surface_defect(const SphereSurface& s, const Vec& x) {
  const Jet2 j = s.g.jet(x);
  const Mat xi = s.frame(x);
  if (xi.rows() != j.ambient() || xi.cols() != s.fiber_dim()) {
    throw DomainError("frame has the wrong shape for the sphere surface");
  }
  double worst = std::abs(j.value.norm() - 1.0);
  worst = std::max(worst, (xi.transpose() * xi - Mat::Identity(xi.cols(), xi.cols())).cwiseAbs().maxCoeff());
  if (xi.cols() > 0) {
    worst = std::max(worst, (xi.transpose() * j.value).cwiseAbs().maxCoeff());
    for (int i = 0; i < j.dim(); ++i) {
      const Vec gi = j.d1.col(i);
      worst = std::max(worst, (xi.transpose() * gi).cwiseAbs().maxCoeff() / gi.norm());
    }
  }
  return worst;
}

void validate_sphere_surface(const SphereSurface& s, std::span<const Vec> points, double tol) {
  if (s.g.dim() != 2) throw DomainError("sphere surface must be two-dimensional");
  if (s.fiber_dim() < 0) throw DomainError("sphere surface needs ambient dimension at least 3");
  for (const Vec& x : points) {
    const double d = sphere_surface_defect(s, x);
    if (!(d <= tol)) {
      throw DomainError("sphere surface violates |g| = 1 or frame orthonormality (defect " +
                        format_double(d) + ")");
    }
  }
}

Vec SupportFunction::grad(const Vec& x) const {
  if (gradient) return gradient(x);
  const ScalarField v = value;
  auto as_vec = [v](const Vec& p) { return Vec::Constant(1, v(p)); };
  return fd4_jacobian(as_vec, x, fd4_first_step()).row(0).transpose();
}

SupportFunction SupportFunction::scaled(double s) const {
  SupportFunction out;
  out.value = [v = value, s](const Vec& x) { return s * v(x); };
  if (gradient) out.gradient = [g = gradient, s](const Vec& x) -> Vec { return s * g(x); };
  return out;
}

SupportFunction constant_support(double c) {
  return {[c](const Vec&) { return c; }, [](const Vec& x) -> Vec { return Vec::Zero(x.size()); }};
}

Vec gauss_param_value(const SphereSurface& g, const SupportFunction& gamma, const Vec& x,
                      const Vec& w) {
  if (w.size() != g.fiber_dim()) throw DomainError("fiber coordinate count must match the frame");
  const Jet2 j = g.tangent_jet(x);
  const Mat G = j.d1.transpose() * j.d1;
  const Vec grad_coords = G.ldlt().solve(gamma.grad(x));
  Vec out = gamma.value(x) * j.value + j.d1 * grad_coords;
  if (w.size() > 0) out += g.frame(x) * w;
  return out;
}

GaussSample gauss_param(const SphereSurface& g, const SupportFunction& gamma, const Vec& x,
                        const Vec& w, double regularity_tol) {
  const int r = g.fiber_dim();
  const double scale = step_scale(g.g.box());
  auto psi = [&](const Vec& p) { return gauss_param_value(g, gamma, head(p, 2), tail(p, 2)); };
  GaussSample out;
  out.jet = fd4_jet(psi, concat(x, w), fd4_first_step(scale), fd4_second_step(scale));
  // Psi is affine in w: those partials are the frame itself.
  if (r > 0) {
    out.jet.d1.rightCols(r) = g.frame(x);
    for (int a = 2; a < 2 + r; ++a) {
      for (int b = 2; b < 2 + r; ++b) out.jet.second(a, b).setZero();
    }
  }
  out.jet.in_domain = g.g.box().contains(x, 0.05 * g.g.box().scale());
  Eigen::JacobiSVD<Mat> svd(out.jet.d1);
  const Vec sv = svd.singularValues();
  out.sigma_ratio = sv[0] > 0.0 ? sv[sv.size() - 1] / sv[0] : 0.0;
  out.regular = out.sigma_ratio > regularity_tol;
  return out;
}

ImmersionChart gauss_param_chart(const SphereSurface& g, const SupportFunction& gamma,
                                 const Box& wbox) {
  const int r = g.fiber_dim();
  if (wbox.dim() != r) throw DomainError("fiber box dimension must match the frame");
  Box box{concat(g.g.box().lo, wbox.lo), concat(g.g.box().hi, wbox.hi)};
  auto eval = [g, gamma](const Vec& p) { return gauss_param(g, gamma, head(p, 2), tail(p, 2)).jet; };
  std::vector<std::string> names = g.g.names();
  for (int k = 1; k <= r; ++k) names.push_back("w" + std::to_string(k));
  return ImmersionChart(2 + r, 3 + r, std::move(eval), std::move(box), std::move(names));
}

ResidualReport gauss_map_identity_residual(const SphereSurface& g, const SupportFunction& gamma,
                                           std::span<const Vec> samples, double tolerance) {
  const auto raw = map_points(samples, [&](const Vec& p) {
    const GaussSample s = gauss_param(g, gamma, head(p, 2), tail(p, 2));
    if (!s.regular) return kNaN;
    const Vec n = point_frame(s.jet, 0.0).N;
    return line_angle(n, g.tangent_jet(head(p, 2)).value);
  });
  return skipped_report("gauss_map_identity", raw, tolerance, false);
}

ResidualReport gauss_map_tangent_control(const SphereSurface& g, const SupportFunction& gamma,
                                         std::span<const Vec> samples, double tolerance) {
  const auto raw = map_points(samples, [&](const Vec& p) {
    const GaussSample s = gauss_param(g, gamma, head(p, 2), tail(p, 2));
    if (!s.regular) return kNaN;
    const Vec n = point_frame(s.jet, 0.0).N;
    return line_angle(n, g.tangent_jet(head(p, 2)).d1.col(0).normalized());
  });
  return skipped_report("gauss_map_tangent_control", raw, tolerance, true);
}

MinimalityReport minimality_criterion(const SphereSurface& g, const SupportFunction& gamma,
                                      std::span<const Vec> samples, double h, double tolerance,
                                      bool control) {
  if (!(h > 0.0)) h = default_second_step(step_scale(g.g.box()));
  if (!(tolerance > 0.0)) tolerance = 10.0 * h * h;
  std::vector<double> lap(samples.size());
  std::vector<double> tr(samples.size());
  for_each_index(samples.size(), [&](std::size_t i) {
    const Vec x = head(samples[i], 2);
    const double delta = gamma.gradient ? laplace_beltrami_from_gradient(g.g, gamma.gradient, x, h)
                                        : laplace_beltrami(g.g, gamma.value, x, h);
    lap[i] = std::abs(delta + 2.0 * gamma.value(x));
    const GaussSample s = gauss_param(g, gamma, x, tail(samples[i], 2));
    tr[i] = s.regular ? std::abs(point_frame(s.jet, 0.0).A.trace()) : kNaN;
  });
  MinimalityReport out;
  out.laplace = make_report("minimality_laplace", lap, tolerance, control);
  out.trace = skipped_report("minimality_trace", tr, tolerance, control);
  for (std::size_t i = 0; i < samples.size(); ++i) {
    if (std::isnan(tr[i])) continue;
    const bool small = lap[i] < tolerance && tr[i] < tolerance;
    const bool large = lap[i] > 10.0 * tolerance && tr[i] > 10.0 * tolerance;
    if (!small && !large) ++out.mixed;
  }
  return out;
}

Extraction extract_from_hypersurface(const ImmersionChart& f, std::span<const Vec> samples,
                                     double nullity_tol, double cluster_tol) {
  const std::size_t n = samples.size();
  Extraction out;
  out.normals.resize(n);
  out.support.resize(n);
  std::vector<double> drift(n, 0.0);
  const double h = default_fd_step(step_scale(f.box()));
  for_each_index(n, [&](std::size_t i) {
    const Vec& p = samples[i];
    const Jet2 j = f.jet(p);
    const PointFrame fr = point_frame(j);
    const RankResult rk = rank_and_nullity(fr);
    if (rk.rank != 2) {
      throw PreconditionError("Gauss parametrization requires rank 2; found rank " +
                              std::to_string(rk.rank));
    }
    out.normals[i] = fr.N;
    out.support[i] = j.value.dot(fr.N);
    const double a = op_norm(fr.A, fr.G);
    for (Eigen::Index c = 0; c < rk.nullity_basis.cols(); ++c) {
      const Vec v = rk.nullity_basis.col(c);
      const Vec np = point_frame(f.jet(p + h * v)).N;
      const Vec nm = point_frame(f.jet(p - h * v)).N;
      drift[i] = std::max(drift[i], ((np - nm) / (2.0 * h)).norm() / a);
    }
  });
  out.nullity_constancy = n ? *std::max_element(drift.begin(), drift.end()) : 0.0;
  if (out.nullity_constancy > nullity_tol) {
    throw RankTwoStructureError("Gauss map varies along the relative nullity (" +
                                format_double(out.nullity_constancy) + ")");
  }

  for (std::size_t i = 0; i < n; ++i) {
    auto hit = std::find_if(out.leaves.begin(), out.leaves.end(), [&](const LeafCluster& c) {
      return (c.normal - out.normals[i]).norm() < cluster_tol;
    });
    if (hit == out.leaves.end()) {
      out.leaves.push_back({out.normals[i], out.support[i], {i}});
    } else {
      hit->members.push_back(i);
      out.support_spread = std::max(out.support_spread, std::abs(out.support[i] - hit->support));
    }
  }
  return out;
}

SliceGaussData gauss_data_from_slice(const ImmersionChart& f, const Vec& w0) {
  const int d = f.dim();
  const int r = d - 2;
  if (f.ambient() != d + 1) throw DomainError("slice extraction expects a hypersurface chart");
  if (w0.size() != r) throw DomainError("slice needs one value per fixed coordinate");
  const Box& fb = f.box();
  Box sbox{fb.lo.head(2), fb.hi.head(2)};
  Box wbox{fb.lo.tail(r), fb.hi.tail(r)};

  auto lift = [w0](const Vec& s) { return concat(s, w0); };
  // g_i = -f_* A e_i along the two slice directions.
  auto slice_jet = [f, lift](const Vec& s) {
    const Jet2 j = f.jet(lift(s));
    const PointFrame fr = point_frame(j);
    const Mat dN = -j.d1 * fr.A.leftCols(2);
    return std::tuple{j, fr, dN};
  };

  const double h = fd4_first_step(step_scale(sbox));
  auto first = [slice_jet](const Vec& s) {
    auto [j, fr, dN] = slice_jet(s);
    Jet2 out = Jet2::zeros(s, j.ambient());
    out.value = fr.N;
    out.d1 = dN;
    out.in_domain = j.in_domain;
    return out;
  };
  auto g_eval = [slice_jet, first, h](const Vec& s) {
    Jet2 out = first(s);
    for (int i = 0; i < 2; ++i) {
      auto col = [&slice_jet, i](const Vec& q) -> Vec { return std::get<2>(slice_jet(q)).col(i); };
      const Mat dd = fd4_jacobian(col, s, h);
      for (int k = 0; k < 2; ++k) out.second(i, k) = dd.col(k);
    }
    for (int i = 0; i < 2; ++i) {
      for (int k = 0; k < i; ++k) {
        const Vec avg = 0.5 * (out.second(i, k) + out.second(k, i));
        out.second(i, k) = avg;
        out.second(k, i) = avg;
      }
    }
    return out;
  };
  std::vector<std::string> names(f.names().begin(), f.names().begin() + std::min<std::size_t>(2, f.names().size()));
  ImmersionChart g(2, f.ambient(), g_eval, sbox, names);

  const Jet2 center = f.jet(lift(sbox.center()));
  const Mat refs = center.d1.rightCols(r);
  FrameField frame = [slice_jet, refs](const Vec& s) {
    auto [j, fr, dN] = slice_jet(s);
    Mat basis(j.ambient(), 3);
    basis << fr.N, dN;
    return complete_frame(orthonormal_columns(basis), refs);
  };

  SupportFunction gamma;
  gamma.value = [slice_jet](const Vec& s) {
    auto [j, fr, dN] = slice_jet(s);
    return j.value.dot(fr.N);
  };
  gamma.gradient = [slice_jet](const Vec& s) -> Vec {
    auto [j, fr, dN] = slice_jet(s);
    return dN.transpose() * j.value;
  };
  return {SphereSurface{g, frame, first}, gamma, wbox};
}

RoundTrip gauss_round_trip(const ImmersionChart& f, const SliceGaussData& data,
                           std::span<const Vec> samples) {
  const SphereSurface& g = data.sphere;
  std::vector<double> dist(samples.size()), sup(samples.size()), nrm(samples.size());
  for_each_index(samples.size(), [&](std::size_t i) {
    const Vec& p = samples[i];
    const Jet2 jf = f.jet(p);
    const Vec target = point_frame(jf).N;
    Vec s = head(p, 2);
    for (int it = 0; it < 50; ++it) {
      const Jet2 jg = g.tangent_jet(s);
      const Vec step = jg.d1.colPivHouseholderQr().solve(target - jg.value);
      s += step;
      if (step.norm() < 1e-15) break;
    }
    const Mat xi = g.frame(s);
    const Vec w = xi.transpose() * jf.value;
    dist[i] = (gauss_param_value(g, data.support, s, w) - jf.value).norm();
    sup[i] = std::abs(data.support.value(s) - jf.value.dot(target));
    nrm[i] = (g.tangent_jet(s).value - target).norm();
  });
  RoundTrip rt;
  rt.points = samples.size();
  for (std::size_t i = 0; i < samples.size(); ++i) {
    rt.max_distance = std::max(rt.max_distance, dist[i]);
    rt.max_support_error = std::max(rt.max_support_error, sup[i]);
    rt.max_normal_error = std::max(rt.max_normal_error, nrm[i]);
  }
  return rt;
}

SphereSurface totally_geodesic_sphere() {
  auto eval = [](const Vec& p) {
    const double ph = p[0], th = p[1];
    const double st = std::sin(th), ct = std::cos(th), sp = std::sin(ph), cp = std::cos(ph);
    Jet2 j = Jet2::zeros(p, 4);
    j.value << st * cp, st * sp, ct, 0.0;
    j.d1.col(0) << -st * sp, st * cp, 0.0, 0.0;
    j.d1.col(1) << ct * cp, ct * sp, -st, 0.0;
    j.second(0, 0) << -st * cp, -st * sp, 0.0, 0.0;
    j.second(0, 1) << -ct * sp, ct * cp, 0.0, 0.0;
    j.second(1, 0) = j.second(0, 1);
    j.second(1, 1) << -st * cp, -st * sp, -ct, 0.0;
    return j;
  };
  Box box{Vec(2), Vec(2)};
  box.lo << -1.0, 0.5;
  box.hi << 1.0, 2.5;
  FrameField frame = [](const Vec&) { return Mat(Vec::Unit(4, 3)); };
  return {ImmersionChart(2, 4, eval, box, {"phi", "theta"}), frame, {}};
}

SphereSurface clifford_torus() {
  const double k = 1.0 / std::numbers::sqrt2;
  auto eval = [k](const Vec& p) {
    const double cx = std::cos(p[0]), sx = std::sin(p[0]), cy = std::cos(p[1]), sy = std::sin(p[1]);
    Jet2 j = Jet2::zeros(p, 4);
    j.value << k * cx, k * sx, k * cy, k * sy;
    j.d1.col(0) << -k * sx, k * cx, 0.0, 0.0;
    j.d1.col(1) << 0.0, 0.0, -k * sy, k * cy;
    j.second(0, 0) << -k * cx, -k * sx, 0.0, 0.0;
    j.second(1, 1) << 0.0, 0.0, -k * cy, -k * sy;
    return j;
  };
  Box box{Vec::Constant(2, -1.0), Vec::Constant(2, 1.0)};
  FrameField frame = [k](const Vec& p) {
    Mat xi(4, 1);
    xi << k * std::cos(p[0]), k * std::sin(p[0]), -k * std::cos(p[1]), -k * std::sin(p[1]);
    return xi;
  };
  return {ImmersionChart(2, 4, eval, box, {"x", "y"}), frame, {}};
}

SupportFunction torus_harmonic_support(double a, double b) {
  return {[a, b](const Vec& x) { return a * std::cos(x[0]) + b * std::sin(x[1]); },
          [a, b](const Vec& x) -> Vec {
            Vec g(2);
            g << -a * std::sin(x[0]), b * std::cos(x[1]);
            return g;
          }};
}

}  // namespace kbend
