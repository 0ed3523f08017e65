#include "kbend/suites.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <numbers>
#include <random>

#include "kbend/bending.hpp"
#include "kbend/builtin.hpp"
#include "kbend/gausspar.hpp"
#include "kbend/geometry.hpp"
#include "kbend/sampling.hpp"

namespace kbend {

namespace {

constexpr double kControlTol = 1e-2;

using Reports = std::vector<ResidualReport>;

struct Charts {
  std::shared_ptr<const HolomorphicRep> rep;
  ImmersionChart f;
  ImmersionChart fbar;
  BendingField conj;
};

Charts charts_for(const WeierstrassSeed& seed) {
  auto rep = std::make_shared<const HolomorphicRep>(seed);
  ImmersionChart f = real_part_chart(rep, 1.0);
  ImmersionChart fbar = real_part_chart(rep, cplx{0.0, -1.0});
  return {rep, f, fbar, BendingField::from_chart(fbar, Provenance::conjugate)};
}

ResidualReport as_control(ResidualReport r, std::string identity) {
  r.identity = std::move(identity);
  r.control = true;
  r.tolerance = kControlTol;
  r.pass = r.points > 0 && r.min_residual > kControlTol;
  return r;
}

ResidualReport retol(ResidualReport r, double tol) {
  r.tolerance = tol;
  r.pass = r.max_residual < tol;
  return r;
}

ResidualReport control_report(std::string identity, const std::vector<double>& values) {
  return make_report(std::move(identity), values, kControlTol, true);
}

double fd_tol(const SuiteContext& ctx, const std::string& id) {
  const double h = suite_fd_step();
  return ctx.tol(id, 10.0 * h * h);
}

std::vector<Vec> random_points(const SuiteContext& ctx, std::size_t count, std::uint64_t salt) {
  return random_samples(seed_box(ctx.seed), count, ctx.rng_seed + salt);
}

Reports rank_suite(const SuiteContext& ctx) {
  const Charts c = charts_for(ctx.seed);
  const auto res = map_points(ctx.samples, [&](const Vec& p) {
    const RankResult r = rank_and_nullity(point_frame(c.f.jet(p)));
    return std::abs(r.rank - 2.0) + (r.indeterminate ? 1.0 : 0.0);
  });
  return {make_report("rank_two", res, ctx.tol("rank_two", 0.5))};
}

Reports minimality_suite(const SuiteContext& ctx) {
  const Charts c = charts_for(ctx.seed);
  const auto res = map_points(ctx.samples, [&](const Vec& p) {
    const PointFrame fr = point_frame(c.f.jet(p));
    const double a = op_norm(fr.A, fr.G);
    return a > 0.0 ? std::abs(fr.A.trace()) / a : 0.0;
  });
  return {make_report("minimality_trace", res, ctx.tol("minimality_trace", 1e-8))};
}

Reports kaehler_suite(const SuiteContext& ctx) {
  const Charts c = charts_for(ctx.seed);
  const Mat J = *c.f.complex_structure();
  const double h = suite_fd_step();
  const auto anti = map_points(ctx.samples, [&](const Vec& p) {
    return anticommutation_residual(point_frame(c.f.jet(p)), J);
  });
  const EndoField Jf = [J](const Vec&) { return J; };
  const auto par = map_points(ctx.samples, [&](const Vec& p) { return parallel_J_residual(c.f, Jf, p, h); });
  return {make_report("anticommutation", anti, ctx.tol("anticommutation", 1e-8)),
          make_report("parallel_J", par, fd_tol(ctx, "parallel_J"))};
}

Reports codazzi_suite(const SuiteContext& ctx) {
  const Charts c = charts_for(ctx.seed);
  const double h = suite_fd_step();
  const EndoField A = shape_operator_field(c.f);
  const auto cod = map_points(ctx.samples, [&](const Vec& p) { return codazzi_residual(c.f, A, p, h); });
  const auto wein = map_points(ctx.samples, [&](const Vec& p) { return weingarten_residual(c.f, p, h); });
  return {make_report("codazzi_A", cod, fd_tol(ctx, "codazzi_A")),
          make_report("weingarten", wein, fd_tol(ctx, "weingarten"))};
}

Reports associated_suite(const SuiteContext& ctx) {
  const Charts c = charts_for(ctx.seed);
  const Mat J = *c.f.complex_structure();
  std::vector<ImmersionChart> family;
  std::vector<double> thetas;
  for (int k = 1; k < 6; ++k) {
    const double th = k * std::numbers::pi / 6.0;
    thetas.push_back(th);
    family.push_back(real_part_chart(c.rep, std::polar(1.0, -th)));
  }
  const auto n = ctx.samples.size();
  std::vector<double> metric(n), normal(n), shape(n);
  for_each_index(n, [&](std::size_t i) {
    const Vec& p = ctx.samples[i];
    const PointFrame f0 = point_frame(c.f.jet(p));
    const double an = frob_norm(f0.A, f0.G);
    for (std::size_t k = 0; k < family.size(); ++k) {
      const PointFrame ft = point_frame(family[k].jet(p));
      metric[i] = std::max(metric[i], (ft.G - f0.G).norm() / f0.G.norm());
      normal[i] = std::max(normal[i], (ft.N - f0.N).norm());
      const Mat Jt = std::cos(thetas[k]) * Mat::Identity(J.rows(), J.cols()) + std::sin(thetas[k]) * J;
      const double dev = frob_norm(ft.A - f0.A * Jt, f0.G);
      shape[i] = std::max(shape[i], an > 0.0 ? dev / an : dev);
    }
  });
  return {make_report("associated_metric", metric, ctx.tol("associated_metric", 1e-10)),
          make_report("associated_normal", normal, ctx.tol("associated_normal", 1e-10)),
          make_report("associated_shape", shape, ctx.tol("associated_shape", 1e-8))};
}

Reports bending_suite(const SuiteContext& ctx) {
  const Charts c = charts_for(ctx.seed);
  const auto& pts = ctx.samples;
  const double h = suite_fd_step();
  Reports out;
  out.push_back(bending_residual(c.f, c.conj, pts, ctx.tol("infinitesimal_bending", 1e-10)));
  const auto var = variation_first_order_residual(c.f, c.conj, pts);
  out.push_back(retol(var.first_order, ctx.tol("variation_first_order", 1e-10)));
  out.push_back(retol(var.exact, ctx.tol("variation_exact_metric", 1e-10)));
  const auto gp = gauss_preservation_residual(c.f, c.conj, pts);
  out.push_back(retol(gp.normal_component, ctx.tol("gauss_map_normal_component", 1e-8)));
  out.push_back(retol(gp.normal_variation, ctx.tol("gauss_map_variation", 1e-8)));

  const auto n = pts.size();
  std::vector<double> sym(n), bat(n), anti(n), fund(n), cod(n), par(n);
  const EndoField Bf = B_formula_field(c.f, c.conj);
  for_each_index(n, [&](std::size_t i) {
    const Vec& p = pts[i];
    const Jet2 jf = c.f.jet(p);
    const Jet2 jt = c.conj.jet(p);
    const PointFrame fr = point_frame(jf);
    const BTensor bfd = B_by_fd(c.f, c.conj, p);
    const BatResult b = B_by_BAT(c.f, c.conj, p);
    sym[i] = bfd.asymmetry();
    bat[i] = B_deviation(b.B, bfd, op_norm(fr.A, fr.G) * bending_scale(jf, jt));
    anti[i] = b.anticommutator;
    fund[i] = fundamental_equation_residual(fr.A, bfd.endo, fr.G);
    cod[i] = codazzi_residual(c.f, Bf, p, h);
    par[i] = parallel_Tstar_residual(c.f, c.conj, p, h);
  });
  out.push_back(make_report("B_symmetry", sym, ctx.tol("B_symmetry", 1e-7)));
  out.push_back(make_report("BAT_agreement", bat, ctx.tol("BAT_agreement", 1e-7)));
  out.push_back(make_report("BAT_anticommutator", anti, ctx.tol("BAT_anticommutator", 1e-8)));
  out.push_back(make_report("fundamental_equation", fund, ctx.tol("fundamental_equation", 1e-7)));
  out.push_back(make_report("codazzi_B", cod, fd_tol(ctx, "codazzi_B")));
  out.push_back(make_report("parallel_Tstar", par, fd_tol(ctx, "parallel_Tstar")));
  return out;
}

Reports three_route_suite(const SuiteContext& ctx) {
  const Charts c = charts_for(ctx.seed);
  const auto pts = random_points(ctx, 30, 1);
  const double h = suite_fd_step();
  const auto res = map_points(pts, [&](const Vec& p) {
    const Jet2 jf = c.f.jet(p);
    const Jet2 jt = c.conj.jet(p);
    const PointFrame fr = point_frame(jf);
    const double s = bending_scale(jf, jt);
    const double eps = default_bending_step(fr, s);
    const double scale = op_norm(fr.A, fr.G) * s;
    const BTensor a = B_by_fd(c.f, c.conj, p, eps);
    const BTensor b = B_by_formula(c.f, c.conj, p);
    const BTensor t = B_by_BAT(c.f, c.conj, p).B;
    const double dev = std::max({B_deviation(a, b, scale), B_deviation(a, t, scale), B_deviation(b, t, scale)});
    return dev / std::max(eps * eps, h * h);
  });
  return {make_report("B_three_route", res, ctx.tol("B_three_route", 100.0))};
}

Reports rotation_suite(const SuiteContext& ctx) {
  const Charts c = charts_for(ctx.seed);
  const auto pts = random_points(ctx, 30, 2);
  std::vector<double> cs(pts.size()), fit(pts.size());
  for_each_index(pts.size(), [&](std::size_t i) {
    const RotationFit r = rotation_coefficient(c.f, c.conj, pts[i]);
    cs[i] = r.c;
    fit[i] = r.residual;
  });
  std::vector<double> dev(cs.size());
  std::transform(cs.begin(), cs.end(), dev.begin(), [](double v) { return std::abs(v - 1.0); });
  const auto [lo, hi] = std::minmax_element(cs.begin(), cs.end());
  const std::vector<double> spread{*hi - *lo};
  return {make_report("rotation_c", dev, ctx.tol("rotation_c", 1e-6)),
          make_report("rotation_fit", fit, ctx.tol("rotation_fit", 1e-8)),
          make_report("rotation_spread", spread, ctx.tol("rotation_spread", 1e-6))};
}

Reports triviality_suite(const SuiteContext& ctx) {
  const Charts c = charts_for(ctx.seed);
  const int m = c.f.ambient();
  const double tol = ctx.tol("trivial_bendings", 1e-6);
  std::vector<double> trivial;
  for (int k = 0; k < 20; ++k) {
    const BendingField t = make_trivial(random_trivial_data(m, ctx.rng_seed + 100 + k), c.f);
    trivial.push_back(classify_triviality(c.f, t, ctx.samples, tol).residual);
  }
  const TrivialData extra = random_trivial_data(m, ctx.rng_seed + 99, 0.3);
  const BendingField combo = sum(scaled(c.conj, 2.0), make_trivial(extra, c.f));
  const auto conj_v = classify_triviality(c.f, c.conj, ctx.samples, tol);
  const auto combo_v = classify_triviality(c.f, combo, ctx.samples, tol);
  const auto conj_d = decompose_bending(c.f, c.conj, c.conj, ctx.samples);
  const auto combo_d = decompose_bending(c.f, c.conj, combo, ctx.samples);
  auto flag = [](bool trivial_verdict) { return std::vector<double>{trivial_verdict ? 1.0 : 0.0}; };
  return {make_report("trivial_bendings", trivial, tol),
          make_report("conjugate_nontrivial", flag(conj_v.trivial), 0.5),
          make_report("combined_nontrivial", flag(combo_v.trivial), 0.5),
          make_report("conjugate_c", std::vector<double>{std::abs(conj_d.c - 1.0)}, ctx.tol("conjugate_c", 1e-6)),
          make_report("combined_c", std::vector<double>{std::abs(combo_d.c - 2.0)}, ctx.tol("combined_c", 1e-6)),
          make_report("decomposition_residual", std::vector<double>{combo_d.residual},
                      ctx.tol("decomposition_residual", 1e-6))};
}

Reports gausspar_suite(const SuiteContext& ctx) {
  const Charts c = charts_for(ctx.seed);
  const int r = c.f.dim() - 2;
  const Extraction ex = extract_from_hypersurface(c.f, ctx.samples, ctx.tol("nullity_constancy", 1e-7));
  const SliceGaussData data = gauss_data_from_slice(c.f, Vec::Zero(r));
  const RoundTrip rt = gauss_round_trip(c.f, data, ctx.samples);
  // Psi is sampled at the chart coordinates themselves: slice point, then
  // the fiber values reused as w.
  const auto& psi_pts = ctx.samples;
  ResidualReport gm = gauss_map_identity_residual(data.sphere, data.support, psi_pts,
                                                  ctx.tol("gauss_map_identity", 1e-8));
  const MinimalityReport mc = minimality_criterion(data.sphere, data.support, psi_pts);
  const ResidualReport lap = retol(mc.laplace, ctx.tol(mc.laplace.identity, mc.laplace.tolerance));
  const ResidualReport tr = retol(mc.trace, ctx.tol(mc.trace.identity, mc.trace.tolerance));
  return {make_report("nullity_constancy", std::vector<double>{ex.nullity_constancy},
                      ctx.tol("nullity_constancy", 1e-7)),
          make_report("leaf_support_spread", std::vector<double>{ex.support_spread},
                      ctx.tol("leaf_support_spread", 1e-6)),
          make_report("gauss_round_trip", std::vector<double>{rt.max_distance},
                      ctx.tol("gauss_round_trip", 1e-6)),
          gm,
          lap,
          tr,
          make_report("minimality_consistency", std::vector<double>{static_cast<double>(mc.mixed)}, 0.5)};
}

Reports cylinder_suite(const SuiteContext& ctx) {
  const Charts c = charts_for(ctx.seed);
  const int k = c.f.dim();
  Box zbox{Vec::Constant(2, -1.0), Vec::Constant(2, 1.0)};
  const ImmersionChart cyl = make_cylinder(c.f, zbox);
  TrivialData killing{Mat(2, 2), Vec(2)};
  killing.D << 0.0, 1.0, -1.0, 0.0;
  killing.w << 0.3, -0.2;
  const BendingField T = make_cylinder_bending(c.conj, k, killing);
  std::vector<Vec> pts;
  const auto zs = random_samples(zbox, ctx.samples.size(), ctx.rng_seed + 3);
  for (std::size_t i = 0; i < ctx.samples.size(); ++i) {
    Vec q(k + 2);
    q << ctx.samples[i], zs[i];
    pts.push_back(std::move(q));
  }
  const auto eucl = map_points(pts, [&](const Vec& p) {
    const Jet2 jf = cyl.jet(p);
    const Jet2 jt = T.jet(p);
    const PointFrame fr = point_frame(jf);
    const double scale = op_norm(fr.A, fr.G) * bending_scale(jf, jt);
    const BTensor B = B_by_fd(cyl, T, p);
    double worst = 0.0;
    for (int a = k; a < k + 2; ++a) {
      worst = std::max(worst, g_norm(B.endo.col(a), B.G) / std::sqrt(B.G(a, a)));
    }
    return scale > 0.0 ? worst / scale : worst;
  });
  ResidualReport bend = bending_residual(cyl, T, pts, ctx.tol("cylinder_bending", 1e-10));
  bend.identity = "cylinder_bending";
  return {bend, make_report("cylinder_B_euclidean", eucl, ctx.tol("cylinder_B_euclidean", 1e-8))};
}

Reports controls_suite(const SuiteContext& ctx) {
  const Charts c = charts_for(ctx.seed);
  const auto& pts = ctx.samples;
  const double h = suite_fd_step();
  const int d = c.f.dim();
  Reports out;

  const BendingField self = BendingField::from_chart(c.f, Provenance::custom);
  out.push_back(as_control(bending_residual(c.f, self, pts), "control_bending_T_eq_f"));
  out.push_back(as_control(variation_first_order_residual(c.f, self, pts).first_order,
                           "control_variation_T_eq_f"));

  const ImmersionChart sphere = unit_sphere_chart();
  Mat rot = Mat::Zero(3, 3);
  rot(0, 1) = -1.0;
  rot(1, 0) = 1.0;
  const auto sphere_pts = random_samples(sphere.box(), pts.size(), ctx.rng_seed + 5);
  const BendingField spin = make_trivial({rot, Vec::Zero(3)}, sphere);
  out.push_back(as_control(gauss_preservation_residual(sphere, spin, sphere_pts).normal_component,
                           "control_rotation_normal"));

  std::mt19937_64 rng(ctx.rng_seed + 7);
  std::normal_distribution<double> normal(0.0, 1.0);
  auto random_sym = [&]() {
    Mat m(d, d);
    for (int i = 0; i < d; ++i) {
      for (int j = 0; j < d; ++j) m(i, j) = normal(rng);
    }
    return Mat(0.5 * (m + m.transpose()));
  };
  const Mat M0 = random_sym();
  const Mat M1 = random_sym();
  const ImmersionChart f = c.f;
  const EndoField S = [f, M0, M1](const Vec& p) {
    const Jet2 j = f.jet(p);
    return Mat((j.d1.transpose() * j.d1).ldlt().solve(M0 + p[0] * M1));
  };
  out.push_back(control_report("control_random_codazzi",
                               map_points(pts, [&](const Vec& p) { return codazzi_residual(f, S, p, h); })));

  Mat K(d, d);
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) K(i, j) = normal(rng);
  }
  const Mat J = *f.complex_structure();
  const EndoField Jp = [J, K](const Vec& p) { return Mat(J + 0.5 * p[0] * K); };
  out.push_back(control_report("control_perturbed_J",
                               map_points(pts, [&](const Vec& p) { return parallel_J_residual(f, Jp, p, h); })));

  const SliceGaussData data = gauss_data_from_slice(f, Vec::Zero(d - 2));
  out.push_back(as_control(gauss_map_tangent_control(data.sphere, data.support, pts),
                           "control_gauss_map_tangent"));

  const SphereSurface tg = totally_geodesic_sphere();
  Box tbox{Vec(3), Vec(3)};
  tbox.lo << tg.g.box().lo, -1.0;
  tbox.hi << tg.g.box().hi, 1.0;
  const auto tpts = random_samples(tbox, 50, ctx.rng_seed + 11);
  const MinimalityReport mc = minimality_criterion(tg, constant_support(1.0), tpts, 0.0, 0.0, true);
  out.push_back(as_control(mc.laplace, "control_minimality_laplace"));
  out.push_back(as_control(mc.trace, "control_minimality_trace"));
  return out;
}

using SuiteFn = Reports (*)(const SuiteContext&);

struct Entry {
  SuiteInfo info;
  SuiteFn fn;
};

const std::vector<Entry>& entries() {
  static const std::vector<Entry> table{
      {{"rank", "rank of A equals two at every sample", false}, rank_suite},
      {{"minimality", "trace of A relative to |A|", false}, minimality_suite},
      {{"kaehler", "A anticommutes with J; J is parallel", false}, kaehler_suite},
      {{"codazzi", "Codazzi equation for A; Weingarten cross-check", false}, codazzi_suite},
      {{"associated", "metric, normal and shape operator across the associated family", false},
       associated_suite},
      {{"bending", "identities of the conjugate bending T = fbar", false}, bending_suite},
      {{"three_route", "B by t-differences, by the formula and as A o T_*", false}, three_route_suite},
      {{"rotation", "T_* restricted to (ker A)^perp is c R_pi/2 with c = 1", false}, rotation_suite},
      {{"triviality", "trivial bendings have B = 0; conjugate ones do not", false}, triviality_suite},
      {{"gausspar", "Gauss parametrization extracted from a slice and rebuilt", false}, gausspar_suite},
      {{"cylinder", "cylinder bending over the seed hypersurface", false}, cylinder_suite},
      {{"controls", "negative controls; each must exceed 1e-2", true}, controls_suite},
  };
  return table;
}

}  // namespace

double SuiteContext::tol(const std::string& identity, double fallback) const {
  const auto it = tolerances.find(identity);
  return it == tolerances.end() ? fallback : it->second;
}

double suite_fd_step() { return default_fd_step(1.0); }

const std::vector<SuiteInfo>& registered_suites() {
  static const std::vector<SuiteInfo> infos = [] {
    std::vector<SuiteInfo> v;
    for (const auto& e : entries()) v.push_back(e.info);
    return v;
  }();
  return infos;
}

bool is_registered_suite(const std::string& name) {
  if (name == "all") return true;
  const auto& e = entries();
  return std::any_of(e.begin(), e.end(), [&](const Entry& x) { return x.info.name == name; });
}

std::vector<Vec> suite_samples(const WeierstrassSeed& seed, const SamplingSpec& spec) {
  const Box box = seed_box(seed);
  if (spec.random > 0) return random_samples(box, spec.random, spec.seed);
  std::vector<int> counts = spec.counts;
  if (counts.empty()) {
    if (seed.n == 1) {
      counts = {10, 10};
    } else if (seed.n == 2) {
      counts = {4, 4, 3, 3};
    } else {
      counts.assign(static_cast<std::size_t>(2 * seed.n), 3);
    }
  }
  if (static_cast<int>(counts.size()) != box.dim()) {
    throw DomainError("sampling counts need one entry per chart coordinate (" +
                      std::to_string(box.dim()) + ")");
  }
  return grid_samples(box, counts);
}

std::vector<ResidualReport> run_suite(const std::string& name, const SuiteContext& ctx) {
  for (const auto& e : entries()) {
    if (e.info.name == name) return e.fn(ctx);
  }
  throw DomainError("unknown suite '" + name + "'");
}

bool SuiteRun::ok() const {
  if (!errors.empty()) return false;
  return std::all_of(reports.begin(), reports.end(),
                     [](const ResidualReport& r) { return r.control || r.pass; });
}

SuiteRun run_suites(const std::vector<std::string>& names, const SuiteContext& ctx) {
  std::vector<std::string> expanded;
  for (const auto& n : names) {
    if (n == "all") {
      for (const auto& e : entries()) expanded.push_back(e.info.name);
    } else {
      expanded.push_back(n);
    }
  }
  SuiteRun run;
  for (const auto& n : expanded) {
    try {
      auto reps = run_suite(n, ctx);
      run.reports.insert(run.reports.end(), reps.begin(), reps.end());
    } catch (const std::exception& e) {
      run.errors.push_back(n + ": " + e.what());
    }
  }
  return run;
}

}  // namespace kbend
