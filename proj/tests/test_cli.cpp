#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "kbend/builtin.hpp"
#include "kbend/commands.hpp"
#include "kbend/export.hpp"
#include "kbend/seed_io.hpp"
#include "kbend/suites.hpp"
#include "support.hpp"

using namespace kbend;
namespace fs = std::filesystem;

namespace {

const cplx I{0.0, 1.0};

fs::path scratch_dir(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("kbend_test_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

RunConfig config_for(const std::string& seed, const fs::path& out, json extra = json::object()) {
  json j = extra;
  j["seed"] = seed;
  j["out_dir"] = out.string();
  return config_from_json(j);
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<Vec> obj_vertices(const fs::path& p) {
  std::ifstream in(p);
  std::vector<Vec> out;
  std::string tag;
  while (in >> tag) {
    if (tag == "v") {
      Vec v(3);
      in >> v[0] >> v[1] >> v[2];
      out.push_back(v);
    } else {
      std::string rest;
      std::getline(in, rest);
    }
  }
  return out;
}

std::size_t obj_faces(const fs::path& p) {
  std::ifstream in(p);
  std::string line;
  std::size_t n = 0;
  while (std::getline(in, line)) n += line.rfind("f ", 0) == 0;
  return n;
}

// Largest residual after the best rigid motion taking a onto b.
double kabsch_residual(const std::vector<Vec>& a, const std::vector<Vec>& b) {
  const std::size_t n = a.size();
  Vec ca = Vec::Zero(3), cb = Vec::Zero(3);
  for (std::size_t i = 0; i < n; ++i) {
    ca += a[i] / static_cast<double>(n);
    cb += b[i] / static_cast<double>(n);
  }
  Mat H = Mat::Zero(3, 3);
  for (std::size_t i = 0; i < n; ++i) H += (a[i] - ca) * (b[i] - cb).transpose();
  Eigen::JacobiSVD<Mat> svd(H, Eigen::ComputeFullU | Eigen::ComputeFullV);
  Mat D = Mat::Identity(3, 3);
  D(2, 2) = (svd.matrixV() * svd.matrixU().transpose()).determinant() < 0 ? -1.0 : 1.0;
  const Mat R = svd.matrixV() * D * svd.matrixU().transpose();
  double worst = 0.0;
  for (std::size_t i = 0; i < n; ++i) worst = std::max(worst, (R * (a[i] - ca) + cb - b[i]).norm());
  return worst;
}

std::vector<std::vector<double>> csv_rows(const fs::path& p, std::vector<std::string>* header = nullptr) {
  std::ifstream in(p);
  std::string line;
  std::getline(in, line);
  if (header) {
    std::stringstream hs(line);
    std::string cell;
    while (std::getline(hs, cell, ',')) header->push_back(cell);
  }
  std::vector<std::vector<double>> rows;
  while (std::getline(in, line)) {
    std::stringstream ls(line);
    std::string cell;
    std::vector<double> row;
    while (std::getline(ls, cell, ',')) row.push_back(std::stod(cell));
    rows.push_back(row);
  }
  return rows;
}

}  // namespace

TEST_CASE("defaults are printable and load back") {
  const json d = default_config_json();
  const RunConfig cfg = config_from_json(d);
  CHECK(cfg.seed_name == "enneper");
  CHECK(cfg.suites.size() == registered_suites().size());
  CHECK(json::parse(dump_json(d)) == d);
}

TEST_CASE("config validation") {
  json bad_suite = {{"seed", "enneper"}, {"suites", {"rank", "nope"}}};
  CHECK_THROWS_WITH_AS(config_from_json(bad_suite), doctest::Contains("nope"), ConfigError);
  json bad_grid = {{"seed", "enneper"}, {"sampling", {{"counts", {1, 5}}}}};
  CHECK_THROWS_AS(config_from_json(bad_grid), ConfigError);
  CHECK_THROWS_AS(config_from_json(json{{"seed", "nonesuch"}}), DomainError);
  CHECK_THROWS_AS(config_from_json(json::array()), ConfigError);
}

TEST_CASE("seed JSON round trip") {
  for (const auto& name : builtin_seed_names()) {
    const WeierstrassSeed s = builtin_seed(name);
    const WeierstrassSeed back = seed_from_json(json::parse(dump_json(seed_to_json(s))));
    CHECK(seed_to_json(back) == seed_to_json(s));
    const Vec p = seed_box(s).center() + 0.1 * Vec::Ones(2 * s.n);
    CHECK((immersion_f(back).jet(p).value - immersion_f(s).jet(p).value).norm() == 0.0);
  }
}

TEST_CASE("generate writes the chain bundle") {
  const fs::path dir = scratch_dir("generate");
  SUBCASE("enneper") {
    const fs::path p = cmd_generate(config_for("enneper", dir));
    const json b = read_json_file(p);
    CHECK(b["n"] == 1);
    CHECK(b["delta_dim"] == 3);
    const json& delta = b["delta_derivs"][0];
    auto coeff = [&](int comp, int k) { return complex_from_json(delta[comp][k]); };
    CHECK(coeff(0, 0) == cplx{0.5});
    CHECK(coeff(0, 2) == cplx{-0.5});
    CHECK(coeff(1, 0) == 0.5 * I);
    CHECK(coeff(1, 2) == 0.5 * I);
    CHECK(coeff(2, 1) == cplx{1.0});
    for (int k = 3; k < 10; ++k) CHECK(coeff(0, k) == cplx{});
    CHECK(b["chart"]["coordinates"] == json({"x", "y"}));
    const WeierstrassSeed s = seed_from_bundle(b);
    CHECK(seed_to_json(s) == seed_to_json(enneper_seed()));
    CHECK(slurp(p) == slurp(cmd_generate(config_for("enneper", dir))));
  }
  SUBCASE("m4r5") {
    const json b = read_json_file(cmd_generate(config_for("m4r5", dir)));
    CHECK(b["delta_dim"] == 5);
    CHECK(b["alphas"].size() == 3);
    CHECK(b["chart"]["dim"] == 4);
  }
  SUBCASE("a bundle is a valid config source") {
    const fs::path p = cmd_generate(config_for("catenoid", dir));
    const RunConfig cfg = config_from_json(json{{"bundle", p.string()}});
    CHECK(cfg.seed_name == "catenoid");
    CHECK(seed_to_json(cfg.seed) == seed_to_json(catenoid_seed()));
  }
  SUBCASE("b_{n-1} = 0 is rejected with the invariant named") {
    json seed = seed_to_json(enneper_seed());
    seed["b"] = json::array({json::array({json::array({0.0, 0.0})})});
    json j = {{"seed", seed}, {"out_dir", dir.string()}};
    CHECK_THROWS_WITH(cmd_generate(config_from_json(j)), doctest::Contains("b_{n-1} is never zero"));
  }
}

TEST_CASE("verify runs suites and reports") {
  const fs::path dir = scratch_dir("verify");
  SUBCASE("enneper, all suites, passes and is deterministic") {
    const RunConfig cfg = config_for("enneper", dir);
    const VerifyResult r = cmd_verify(cfg);
    CHECK(r.exit_code() == 0);
    CHECK(r.run.errors.empty());
    for (const auto& rep : r.run.reports) {
      CAPTURE(rep.identity);
      CHECK(rep.pass);
    }
    const std::string first = slurp(r.json_path);
    CHECK(slurp(cmd_verify(cfg).json_path) == first);
    CHECK(json::parse(first)["ok"] == true);
    CHECK(slurp(r.text_path).find("verdict: pass") != std::string::npos);
  }
  SUBCASE("m4r5 rank suite: rank two at every sample") {
    const VerifyResult r = cmd_verify(config_for("m4r5", dir), {"rank"});
    REQUIRE(r.run.reports.size() == 1);
    CHECK(r.run.reports[0].identity == "rank_two");
    CHECK(r.run.reports[0].max_residual == 0.0);
    CHECK(r.run.reports[0].points == 144);
    CHECK(r.exit_code() == 0);
  }
  SUBCASE("controls are expected failures and keep exit status 0") {
    const VerifyResult r = cmd_verify(config_for("enneper", dir), {"controls"});
    CHECK(r.exit_code() == 0);
    for (const auto& rep : r.run.reports) {
      CHECK(rep.control);
      CHECK(rep.min_residual > 1e-2);
    }
    CHECK(slurp(r.text_path).find("expected-fail") != std::string::npos);
  }
  SUBCASE("a tightened tolerance fails the run") {
    const RunConfig cfg = config_for("enneper", dir, json{{"tolerances", {{"parallel_J", 1e-30}}}});
    CHECK(cmd_verify(cfg, {"kaehler"}).exit_code() == 1);
  }
  SUBCASE("a suite that throws is reported and fails the run") {
    SuiteContext ctx;
    ctx.seed = enneper_seed();
    ctx.samples = {kbtest::vec({5.0, 5.0})};
    const SuiteRun run = run_suites({"kaehler"}, ctx);
    CHECK(run.errors.size() == 1);
    CHECK(run.errors[0].rfind("kaehler: ", 0) == 0);
    CHECK_FALSE(run.ok());
  }
  SUBCASE("unknown suite names are rejected") {
    CHECK_THROWS_AS(cmd_verify(config_for("enneper", dir), {"nope"}), ConfigError);
  }
}

TEST_CASE("shipped manifests match a fresh run") {
  const fs::path dir = scratch_dir("manifest");
  for (const auto& name : builtin_seed_names()) {
    CAPTURE(name);
    const json manifest = read_json_file(fs::path(KBEND_SOURCE_DIR) / "data" / "manifests" / (name + ".json"));
    const VerifyResult r = cmd_verify(config_for(name, dir));
    const json fresh = json::parse(slurp(r.json_path));
    REQUIRE(fresh["reports"].size() == manifest["reports"].size());
    for (std::size_t i = 0; i < manifest["reports"].size(); ++i) {
      const json& a = manifest["reports"][i];
      const json& b = fresh["reports"][i];
      CHECK(a["identity"] == b["identity"]);
      CHECK(a["pass"] == b["pass"]);
      const double ma = a["max_residual"], mb = b["max_residual"];
      CHECK(mb <= std::max(10.0 * ma, 1e-14));
    }
  }
}

TEST_CASE("export: catenoid slice matches the closed form") {
  const fs::path dir = scratch_dir("export_cat");
  const RunConfig cfg = config_for("catenoid", dir, json{{"export", {{"counts", {15, 12}}}}});
  const auto files = cmd_export(cfg, std::string("x,y"));
  REQUIRE(files.size() == 2);
  const auto verts = obj_vertices(files[0]);
  REQUIRE(verts.size() == 15 * 12);
  CHECK(obj_faces(files[0]) == 14 * 11);

  const SliceMesh mesh = sample_slice(immersion_f(cfg.seed), parse_slice("x,y", {"x", "y"}, seed_box(cfg.seed)), 15, 12);
  std::vector<Vec> closed;
  for (const Vec& c : mesh.coords) {
    const cplx w = std::log(cplx{c[0], c[1]});
    const double s = w.real(), t = w.imag();
    closed.push_back(std::sqrt(2.0) * kbtest::vec({-std::cosh(s) * std::cos(t), -std::cosh(s) * std::sin(t), s}));
  }
  CHECK(kabsch_residual(verts, closed) < 1e-6);

  std::vector<std::string> header;
  const auto rows = csv_rows(files[1], &header);
  CHECK(header == std::vector<std::string>{"i", "j", "x", "y", "X1", "X2", "X3", "trace_A_rel", "anticommutation"});
  REQUIRE(rows.size() == 15 * 12);
  for (const auto& r : rows) {
    CHECK(r[7] < 1e-8);
    CHECK(r[8] < 1e-8);
  }
}

TEST_CASE("export: theta sweep keeps every edge length") {
  const fs::path dir = scratch_dir("export_sweep");
  const RunConfig cfg = config_for("m4r5", dir, json{{"export", {{"counts", {9, 7}}}}});
  const auto files = cmd_export(cfg, std::string("x,y:u1=0.1,v1=-0.05"), 8);
  std::size_t objs = 0;
  for (const auto& f : files) objs += f.extension() == ".obj";
  CHECK(objs == 8);
  const auto rows = csv_rows(dir / "m4r5_edges.csv");
  std::map<int, std::pair<double, double>> range;
  for (const auto& r : rows) {
    auto [it, fresh] = range.try_emplace(static_cast<int>(r[0]), r[3], r[3]);
    it->second.first = std::min(it->second.first, r[3]);
    it->second.second = std::max(it->second.second, r[3]);
  }
  CHECK(range.size() == static_cast<std::size_t>(9 * 6 + 8 * 7));
  double worst = 0.0;
  for (const auto& [e, mm] : range) worst = std::max(worst, mm.second - mm.first);
  CHECK(worst < 1e-8);
  CHECK(rows.size() == range.size() * 8);
}

TEST_CASE("export: conjugate and associated surfaces") {
  const fs::path dir = scratch_dir("export_family");
  RunConfig cfg = config_for("enneper", dir, json{{"export", {{"surface", "fbar"}, {"counts", {4, 4}}}}});
  const auto a = cmd_export(cfg, std::string("x,y"));
  CHECK(a[0].filename() == "enneper_fbar.obj");
  cfg.export_spec.surface = "theta";
  cfg.export_spec.theta = 0.3;
  CHECK(cmd_export(cfg, std::string("x,y"))[0].filename() == "enneper_theta.obj");
  cfg.export_spec.surface = "bogus";
  CHECK_THROWS_AS(cmd_export(cfg, std::string("x,y")), ConfigError);
}

TEST_CASE("export errors") {
  const fs::path dir = scratch_dir("export_err");
  const RunConfig cfg = config_for("m4r5", dir, json{{"export", {{"counts", {1, 5}}}}});
  CHECK_THROWS_WITH(cmd_export(cfg, std::string("x,y")), doctest::Contains("empty"));
  const RunConfig ok = config_for("m4r5", dir);
  CHECK_THROWS_AS(cmd_export(ok, std::string("x,y:u1=5")), DomainError);
  CHECK_THROWS_AS(cmd_export(ok, std::string("x,q")), DomainError);
  CHECK_THROWS_AS(cmd_export(ok, std::string("x")), DomainError);
  CHECK_THROWS_AS(cmd_export(ok, std::string("x,y:x=0.1")), DomainError);
  CHECK_THROWS_AS(cmd_export(ok, std::string("x,y:u1=abc")), DomainError);
  CHECK_THROWS_AS(cmd_export(ok), ConfigError);
}

TEST_CASE("slice parsing") {
  const Box box{kbtest::vec({-1, -1, -2, -2}), kbtest::vec({1, 1, 2, 2})};
  const SliceSpec s = parse_slice("u1, y : x=0.25", {"x", "y", "u1", "v1"}, box);
  CHECK(s.free_a == 2);
  CHECK(s.free_b == 1);
  CHECK((s.base - kbtest::vec({0.25, 0.0, 0.0, 0.0})).norm() == 0.0);
}
