#include "kbend/bending.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "kbend/sampling.hpp"

namespace kbend {

namespace {

Mat metric_of(const Mat& d1) { return d1.transpose() * d1; }

Mat orthonormal_factor(const Mat& G) {
  Eigen::LLT<Mat> llt(G);
  if (llt.info() != Eigen::Success) throw NonImmersionError("metric is not positive definite");
  return llt.matrixU();
}

Jet2 perturbed(const Jet2& f, const Jet2& t, double s) { return f + s * t; }

}  // namespace

std::string to_string(Provenance p) {
  switch (p) {
    case Provenance::conjugate: return "conjugate";
    case Provenance::trivial: return "trivial";
    case Provenance::cylinder: return "cylinder";
    case Provenance::custom: return "custom";
  }
  return "custom";
}

BendingField::BendingField(Evaluator eval, int ambient, Provenance provenance)
    : eval_(std::move(eval)), ambient_(ambient), provenance_(provenance) {}

BendingField BendingField::from_chart(const ImmersionChart& chart, Provenance provenance) {
  return BendingField([chart](const Vec& p) { return chart.jet(p); }, chart.ambient(), provenance);
}

Jet2 BendingField::jet(const Vec& p) const {
  Jet2 j = eval_(p);
  if (j.ambient() != ambient_) throw DomainError("bending field has inconsistent ambient dimension");
  j.coords = p;
  return j;
}

BendingField scaled(const BendingField& t, double s) {
  return BendingField([t, s](const Vec& p) { return s * t.jet(p); }, t.ambient(), t.provenance());
}

BendingField sum(const BendingField& a, const BendingField& b) {
  if (a.ambient() != b.ambient()) throw DomainError("bending sum: ambient dimension mismatch");
  return BendingField([a, b](const Vec& p) { return a.jet(p) + b.jet(p); }, a.ambient(),
                      Provenance::custom);
}

BendingField make_trivial(const TrivialData& data, const ImmersionChart& f) {
  const int m = f.ambient();
  if (data.D.rows() != m || data.D.cols() != m || data.w.size() != m) {
    throw DomainError("trivial bending: D and w must match the ambient dimension");
  }
  if ((data.D + data.D.transpose()).norm() > 1e-14 * std::max(1.0, data.D.norm())) {
    throw DomainError("trivial bending: D must be skew-symmetric");
  }
  return BendingField(
      [data, f](const Vec& p) {
        Jet2 j = apply_linear(data.D, f.jet(p));
        j.value += data.w;
        return j;
      },
      m, Provenance::trivial);
}

TrivialData random_trivial_data(int ambient, std::uint64_t seed, double scale) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, scale);
  Mat M(ambient, ambient);
  for (int i = 0; i < ambient; ++i) {
    for (int j = 0; j < ambient; ++j) M(i, j) = normal(rng);
  }
  Vec w(ambient);
  for (int i = 0; i < ambient; ++i) w[i] = normal(rng);
  return {0.5 * (M - M.transpose()), w};
}

ImmersionChart make_cylinder(const ImmersionChart& profile, const Box& zbox) {
  const int k = profile.dim();
  const int e = zbox.dim();
  const int amb = profile.ambient() + e;
  Box box{Vec(k + e), Vec(k + e)};
  box.lo << profile.box().lo, zbox.lo;
  box.hi << profile.box().hi, zbox.hi;
  auto names = profile.names();
  for (int i = 0; i < e; ++i) names.push_back("z" + std::to_string(i + 1));
  auto eval = [profile, k, e, amb](const Vec& p) {
    const Jet2 g = profile.jet(p.head(k));
    Jet2 j = Jet2::zeros(p, amb);
    const int pa = profile.ambient();
    j.value << g.value, p.tail(e);
    j.d1.topLeftCorner(pa, k) = g.d1;
    j.d1.bottomRightCorner(e, e).setIdentity();
    for (int a = 0; a < k; ++a) {
      for (int b = 0; b < k; ++b) j.second(a, b).head(pa) = g.second(a, b);
    }
    j.in_domain = g.in_domain;
    return j;
  };
  return ImmersionChart(k + e, amb, std::move(eval), std::move(box), std::move(names));
}

BendingField make_cylinder_bending(const BendingField& profile_bending, int profile_dim,
                                   const TrivialData& killing) {
  const int e = static_cast<int>(killing.w.size());
  if (killing.D.rows() != e || killing.D.cols() != e) {
    throw DomainError("cylinder bending: Killing data has mismatched dimensions");
  }
  if ((killing.D + killing.D.transpose()).norm() > 1e-14 * std::max(1.0, killing.D.norm())) {
    throw DomainError("cylinder bending: D must be skew-symmetric");
  }
  const int pa = profile_bending.ambient();
  const int k = profile_dim;
  return BendingField(
      [profile_bending, killing, k, e, pa](const Vec& p) {
        if (p.size() != k + e) throw DomainError("cylinder bending: wrong coordinate dimension");
        const Jet2 t1 = profile_bending.jet(p.head(k));
        if (t1.dim() != k) throw DomainError("cylinder bending: profile dimension mismatch");
        Jet2 j = Jet2::zeros(p, pa + e);
        j.value << t1.value, killing.D * p.tail(e) + killing.w;
        j.d1.topLeftCorner(pa, k) = t1.d1;
        j.d1.bottomRightCorner(e, e) = killing.D;
        for (int a = 0; a < k; ++a) {
          for (int b = 0; b < k; ++b) j.second(a, b).head(pa) = t1.second(a, b);
        }
        return j;
      },
      pa + e, Provenance::cylinder);
}

Mat tangential_endomorphism(const Jet2& f, const Jet2& t) {
  const Mat G = metric_of(f.d1);
  return G.ldlt().solve(f.d1.transpose() * t.d1);
}

double bending_scale(const Jet2& f, const Jet2& t) {
  double s = 0.0;
  for (int i = 0; i < f.dim(); ++i) s = std::max(s, t.d1.col(i).norm() / f.d1.col(i).norm());
  return s;
}

double default_bending_step(const PointFrame& frame, double scale) {
  const double s = op_norm(frame.A, frame.G) * scale;
  return s > 0.0 ? 1e-4 / std::sqrt(s) : 1e-4;
}

ResidualReport bending_residual(const ImmersionChart& f, const BendingField& t,
                                std::span<const Vec> points, double tolerance) {
  const auto res = map_points(points, [&](const Vec& p) {
    const Jet2 jf = f.jet(p);
    const Jet2 jt = t.jet(p);
    double worst = 0.0;
    for (int i = 0; i < jf.dim(); ++i) {
      for (int j = i; j < jf.dim(); ++j) {
        const double num = std::abs(jt.d1.col(i).dot(jf.d1.col(j)) + jf.d1.col(i).dot(jt.d1.col(j)));
        const double den = jf.d1.col(i).norm() * jt.d1.col(j).norm() +
                           jf.d1.col(j).norm() * jt.d1.col(i).norm();
        if (den > 0.0) worst = std::max(worst, num / den);
      }
    }
    return worst;
  });
  return make_report("infinitesimal_bending", res, tolerance);
}

VariationReports variation_first_order_residual(const ImmersionChart& f, const BendingField& t,
                                                std::span<const Vec> points, double eps,
                                                double tolerance) {
  const auto first_order = map_points(points, [&](const Vec& p) {
    const Jet2 jf = f.jet(p);
    const Jet2 jt = t.jet(p);
    const Mat dG = (metric_of(jf.d1 + eps * jt.d1) - metric_of(jf.d1 - eps * jt.d1)) / (2.0 * eps);
    return dG.norm() / metric_of(jf.d1).norm();
  });
  const auto exact = map_points(points, [&](const Vec& p) {
    const Jet2 jf = f.jet(p);
    const Jet2 jt = t.jet(p);
    const Mat G0 = metric_of(jf.d1);
    const Mat TT = metric_of(jt.d1);
    double worst = 0.0;
    for (double s : {0.1, -0.1}) {
      const Mat Gt = metric_of(jf.d1 + s * jt.d1);
      worst = std::max(worst, (Gt - G0 - s * s * TT).norm() / G0.norm());
    }
    return worst;
  });
  return {make_report("variation_first_order", first_order, tolerance),
          make_report("variation_exact_metric", exact, tolerance)};
}

GaussPreservationReports gauss_preservation_residual(const ImmersionChart& f, const BendingField& t,
                                                     std::span<const Vec> points, double eps,
                                                     double tolerance) {
  const auto normal_component = map_points(points, [&](const Vec& p) {
    const Jet2 jf = f.jet(p);
    const Jet2 jt = t.jet(p);
    const Vec N = point_frame(jf).N;
    double worst = 0.0;
    for (int i = 0; i < jt.dim(); ++i) {
      const double len = jt.d1.col(i).norm();
      if (len > 0.0) worst = std::max(worst, std::abs(N.dot(jt.d1.col(i))) / len);
    }
    return worst;
  });
  const auto variation = map_points(points, [&](const Vec& p) {
    const Jet2 jf = f.jet(p);
    const Jet2 jt = t.jet(p);
    const double s = bending_scale(jf, jt);
    if (s == 0.0) return 0.0;
    const Vec np = point_frame(perturbed(jf, jt, eps)).N;
    const Vec nm = point_frame(perturbed(jf, jt, -eps)).N;
    return (np - nm).norm() / (2.0 * eps) / s;
  });
  return {make_report("gauss_map_normal_component", normal_component, tolerance),
          make_report("gauss_map_variation", variation, tolerance)};
}

double BTensor::asymmetry() const {
  const Mat L = lowered();
  const double n = L.norm();
  return n > 0.0 ? (L - L.transpose()).norm() / n : 0.0;
}

double BTensor::norm() const { return frob_norm(endo, G); }

BTensor B_by_fd(const ImmersionChart& f, const BendingField& t, const Vec& p, double eps) {
  const Jet2 jf = f.jet(p);
  const Jet2 jt = t.jet(p);
  const PointFrame f0 = point_frame(jf);
  if (eps <= 0.0) eps = default_bending_step(f0, bending_scale(jf, jt));
  const Mat Ap = point_frame(perturbed(jf, jt, eps)).A;
  const Mat Am = point_frame(perturbed(jf, jt, -eps)).A;
  return {(Ap - Am) / (2.0 * eps), f0.G};
}

BTensor B_by_formula(const ImmersionChart& f, const BendingField& t, const Vec& p) {
  const Jet2 jf = f.jet(p);
  const Jet2 jt = t.jet(p);
  const PointFrame f0 = point_frame(jf);
  const Christoffel chr = christoffel_exact(jf);
  const int d = jf.dim();
  Vec tn(d);
  for (int k = 0; k < d; ++k) tn[k] = jt.d1.col(k).dot(f0.N);
  Mat b(d, d);
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) {
      double acc = jt.second(i, j).dot(f0.N);
      for (int k = 0; k < d; ++k) acc -= chr(k, i, j) * tn[k];
      b(i, j) = acc;
    }
  }
  return {f0.G.ldlt().solve(b), f0.G};
}

BatResult B_by_BAT(const ImmersionChart& f, const BendingField& t, const Vec& p, double gauss_tol) {
  const Jet2 jf = f.jet(p);
  const Jet2 jt = t.jet(p);
  const PointFrame f0 = point_frame(jf);
  for (int i = 0; i < jt.dim(); ++i) {
    const double len = jt.d1.col(i).norm();
    if (len > 0.0 && std::abs(f0.N.dot(jt.d1.col(i))) / len > gauss_tol) {
      throw PreconditionError("B = A o T_* requires a bending that preserves the Gauss map");
    }
  }
  BatResult r;
  r.T_star = tangential_endomorphism(jf, jt);
  r.B = {f0.A * r.T_star, f0.G};
  const double a = op_norm(f0.A, f0.G);
  const double ts = op_norm(r.T_star, f0.G);
  r.anticommutator =
      (a > 0.0 && ts > 0.0) ? op_norm(f0.A * r.T_star + r.T_star * f0.A, f0.G) / (a * ts) : 0.0;
  return r;
}

double B_deviation(const BTensor& a, const BTensor& b, double scale) {
  const double diff = frob_norm(a.endo - b.endo, a.G);
  return scale > 0.0 ? diff / scale : diff;
}

double fundamental_equation_residual(const Mat& A, const Mat& B, const Mat& G) {
  const Mat R = orthonormal_factor(G);
  const Mat Ri = R.inverse();
  const Mat Ah = R * A * Ri;
  const Mat Bh = R * B * Ri;
  const double na = Ah.jacobiSvd().singularValues()[0];
  const double nb = Bh.jacobiSvd().singularValues()[0];
  if (na == 0.0 || nb == 0.0) return 0.0;
  auto wedge = [](const Vec& u, const Vec& v) -> Mat { return u * v.transpose() - v * u.transpose(); };
  // Images of the coordinate vectors, in G-orthonormal components.
  const Mat Ae = R * A;
  const Mat Be = R * B;
  double worst = 0.0;
  for (int i = 0; i < A.rows(); ++i) {
    for (int j = i + 1; j < A.rows(); ++j) {
      const Mat w = wedge(Be.col(i), Ae.col(j)) - wedge(Be.col(j), Ae.col(i));
      worst = std::max(worst, w.norm() / std::sqrt(2.0 * G(i, i) * G(j, j)));
    }
  }
  return worst / (na * nb);
}

double codazzi_residual(const ImmersionChart& f, const EndoField& S, const Vec& p, double h) {
  const int d = f.dim();
  const Mat G = metric_of(f.jet(p).d1);
  const double s = op_norm(S(p), G);
  if (s == 0.0) return 0.0;
  const auto nabla = covariant_derivative(f, S, p, h);
  double worst = 0.0;
  for (int i = 0; i < d; ++i) {
    for (int j = i + 1; j < d; ++j) {
      const Vec v = nabla[static_cast<std::size_t>(i)].col(j) - nabla[static_cast<std::size_t>(j)].col(i);
      worst = std::max(worst, g_norm(v, G) / std::sqrt(G(i, i) * G(j, j)));
    }
  }
  return worst / s;
}

double parallel_Tstar_residual(const ImmersionChart& f, const BendingField& t, const Vec& p,
                               double h) {
  const int d = f.dim();
  const EndoField T = tangential_field(f, t);
  const Mat G = metric_of(f.jet(p).d1);
  const double s = op_norm(T(p), G);
  if (s == 0.0) return 0.0;
  const auto nabla = covariant_derivative(f, T, p, h);
  double worst = 0.0;
  for (int k = 0; k < d; ++k) {
    for (int j = 0; j < d; ++j) {
      worst = std::max(worst, g_norm(nabla[static_cast<std::size_t>(k)].col(j), G) / std::sqrt(G(j, j)));
    }
  }
  return worst / s;
}

EndoField shape_operator_field(const ImmersionChart& f) {
  return [f](const Vec& p) { return point_frame(f.jet(p)).A; };
}

EndoField B_formula_field(const ImmersionChart& f, const BendingField& t) {
  return [f, t](const Vec& p) { return B_by_formula(f, t, p).endo; };
}

EndoField tangential_field(const ImmersionChart& f, const BendingField& t) {
  return [f, t](const Vec& p) { return tangential_endomorphism(f.jet(p), t.jet(p)); };
}

RotationFit rotation_coefficient(const ImmersionChart& f, const BendingField& t, const Vec& p,
                                 double rank_tol) {
  const Jet2 jf = f.jet(p);
  const Jet2 jt = t.jet(p);
  const PointFrame fr = point_frame(jf);
  const RankResult rk = rank_and_nullity(fr, rank_tol);
  if (rk.rank != 2) throw PreconditionError("rotation form requires rank(A) = 2");
  Vec e1 = fr.directions.col(0);
  Vec e2 = fr.directions.col(1);
  if (f.complex_structure()) {
    if ((*f.complex_structure() * e1).dot(fr.G * e2) < 0.0) e2 = -e2;
  }
  const Mat T = tangential_endomorphism(jf, jt);
  Eigen::Matrix2d M;
  const Vec Te1 = T * e1;
  const Vec Te2 = T * e2;
  M(0, 0) = Te1.dot(fr.G * e1);
  M(1, 0) = Te1.dot(fr.G * e2);
  M(0, 1) = Te2.dot(fr.G * e1);
  M(1, 1) = Te2.dot(fr.G * e2);
  RotationFit fit;
  fit.c = 0.5 * (M(1, 0) - M(0, 1));
  Eigen::Matrix2d R;
  R << 0.0, -1.0, 1.0, 0.0;
  const double scale = op_norm(T, fr.G);
  fit.residual = scale > 0.0 ? (M - fit.c * R).norm() / scale : 0.0;
  return fit;
}

TrivialityVerdict classify_triviality(const ImmersionChart& f, const BendingField& t,
                                      std::span<const Vec> points, double tol) {
  const auto res = map_points(points, [&](const Vec& p) {
    const Jet2 jf = f.jet(p);
    const Jet2 jt = t.jet(p);
    const PointFrame fr = point_frame(jf);
    const double scale = op_norm(fr.A, fr.G) * bending_scale(jf, jt);
    if (scale == 0.0) return 0.0;
    return B_by_fd(f, t, p).norm() / scale;
  });
  TrivialityVerdict v;
  v.tolerance = tol;
  v.residual = res.empty() ? 0.0 : *std::max_element(res.begin(), res.end());
  v.trivial = v.residual < tol;
  return v;
}

ConjugateDecomposition decompose_bending(const ImmersionChart& f, const BendingField& fbar,
                                         const BendingField& t, std::span<const Vec> points) {
  if (points.empty()) throw DomainError("decomposition needs sample points");
  double num = 0.0;
  double den = 0.0;
  for (const Vec& p : points) {
    const BTensor bt = B_by_fd(f, t, p);
    const BTensor bf = B_by_fd(f, fbar, p);
    const Mat R = orthonormal_factor(bt.G);
    const Mat Ri = R.inverse();
    const Mat ht = R * bt.endo * Ri;
    const Mat hf = R * bf.endo * Ri;
    num += (ht.array() * hf.array()).sum();
    den += hf.squaredNorm();
  }
  ConjugateDecomposition out;
  out.c = den > 0.0 ? num / den : 0.0;

  const int m = f.ambient();
  const int pairs = m * (m - 1) / 2;
  const auto np = static_cast<Eigen::Index>(points.size());
  Mat sys = Mat::Zero(np * m, pairs + m);
  Vec rhs(np * m);
  std::vector<Vec> fvals;
  std::vector<Vec> tvals;
  for (Eigen::Index s = 0; s < np; ++s) {
    const Vec fv = f.jet(points[static_cast<std::size_t>(s)]).value;
    const Vec tv = t.jet(points[static_cast<std::size_t>(s)]).value;
    const Vec rv = tv - out.c * fbar.jet(points[static_cast<std::size_t>(s)]).value;
    int col = 0;
    for (int a = 0; a < m; ++a) {
      for (int b = a + 1; b < m; ++b, ++col) {
        sys(s * m + a, col) += fv[b];   // D(a,b) = theta
        sys(s * m + b, col) -= fv[a];   // D(b,a) = -theta
      }
    }
    for (int a = 0; a < m; ++a) sys(s * m + a, pairs + a) = 1.0;
    rhs.segment(s * m, m) = rv;
    fvals.push_back(fv);
    tvals.push_back(tv);
  }
  const Vec sol = sys.completeOrthogonalDecomposition().solve(rhs);
  out.trivial.D = Mat::Zero(m, m);
  int col = 0;
  for (int a = 0; a < m; ++a) {
    for (int b = a + 1; b < m; ++b, ++col) {
      out.trivial.D(a, b) = sol[col];
      out.trivial.D(b, a) = -sol[col];
    }
  }
  out.trivial.w = sol.tail(m);
  const Vec resid = sys * sol - rhs;
  double worst = 0.0;
  double tmax = 0.0;
  for (Eigen::Index s = 0; s < np; ++s) {
    worst = std::max(worst, resid.segment(s * m, m).norm());
    tmax = std::max(tmax, tvals[static_cast<std::size_t>(s)].norm());
  }
  out.residual = tmax > 0.0 ? worst / tmax : worst;
  return out;
}

}  // namespace kbend
