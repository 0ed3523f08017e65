#include "kbend/seed_io.hpp"

#include <fstream>
#include <sstream>

#include "kbend/builtin.hpp"
#include "kbend/suites.hpp"

namespace kbend {

namespace {

template <class T>
T get_or(const json& j, const char* key, T fallback) {
  if (!j.contains(key) || j.at(key).is_null()) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("bad value for '") + key + "': " + e.what());
  }
}

std::vector<cplx> complex_list(const json& j) {
  if (!j.is_array()) throw ConfigError("expected a list of [re, im] pairs");
  std::vector<cplx> out;
  out.reserve(j.size());
  for (const auto& e : j) out.push_back(complex_from_json(e));
  return out;
}

json complex_list_json(std::span<const cplx> v) {
  json out = json::array();
  for (cplx z : v) out.push_back(complex_to_json(z));
  return out;
}

json series_vector_json(const SeriesVector& v) {
  json out = json::array();
  for (const auto& c : v.components()) out.push_back(complex_list_json(c.coeffs()));
  return out;
}

std::vector<TruncatedSeries> series_list(const json& j, const char* key, cplx base) {
  if (!j.contains(key) || !j.at(key).is_array()) {
    throw ConfigError(std::string("seed needs a list '") + key + "'");
  }
  std::vector<TruncatedSeries> out;
  for (const auto& e : j.at(key)) out.push_back(series_from_json(e, base));
  return out;
}

const std::vector<std::string> kDefaultSuites{"rank",     "minimality", "kaehler",     "codazzi",
                                              "associated", "bending",  "three_route", "rotation",
                                              "triviality", "gausspar", "cylinder",    "controls"};

}  // namespace

json complex_to_json(cplx z) { return json::array({z.real(), z.imag()}); }

cplx complex_from_json(const json& j) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
    throw ConfigError("complex numbers are written as [re, im]");
  }
  return {j[0].get<double>(), j[1].get<double>()};
}

TruncatedSeries series_from_json(const json& j, cplx default_base) {
  if (j.is_array()) {
    auto c = complex_list(j);
    if (c.empty()) throw ConfigError("a series needs at least one coefficient");
    return {default_base, std::move(c)};
  }
  if (!j.is_object() || !j.contains("coeffs")) {
    throw ConfigError("a series is {\"basepoint\": [re, im], \"coeffs\": [...]}");
  }
  const cplx base = j.contains("basepoint") ? complex_from_json(j.at("basepoint")) : default_base;
  auto c = complex_list(j.at("coeffs"));
  if (c.empty()) throw ConfigError("a series needs at least one coefficient");
  return {base, std::move(c)};
}

json series_to_json(const TruncatedSeries& s) {
  json out;
  out["basepoint"] = complex_to_json(s.basepoint());
  out["coeffs"] = complex_list_json(s.coeffs());
  return out;
}

WeierstrassSeed seed_from_json(const json& j) {
  if (!j.is_object()) throw ConfigError("seed must be a JSON object or a built-in name");
  WeierstrassSeed s;
  s.n = get_or<int>(j, "n", 0);
  s.trunc_order = get_or<int>(j, "trunc_order", 32);
  if (!j.contains("domain")) throw ConfigError("seed needs a 'domain' with center and radius");
  const json& dom = j.at("domain");
  s.domainU.center = dom.contains("center") ? complex_from_json(dom.at("center")) : cplx{};
  s.domainU.radius = get_or<double>(dom, "radius", 0.0);
  if (dom.contains("w_box")) {
    for (const auto& iv : dom.at("w_box")) {
      if (!iv.is_array() || iv.size() != 2) throw ConfigError("w_box entries are [lo, hi]");
      s.domainW.push_back({iv[0].get<double>(), iv[1].get<double>()});
    }
  }
  const cplx base = s.domainU.center;
  if (!j.contains("alpha0")) throw ConfigError("seed needs 'alpha0'");
  s.alpha0 = series_from_json(j.at("alpha0"), base);
  s.mu = series_list(j, "mu", base);
  s.b = series_list(j, "b", base);
  if (j.contains("constants")) {
    for (const auto& c : j.at("constants")) s.phi_constants.push_back(complex_list(c));
  }
  if (j.contains("F_constant")) s.F_constant = complex_list(j.at("F_constant"));
  return s;
}

json seed_to_json(const WeierstrassSeed& s) {
  json out;
  out["n"] = s.n;
  out["trunc_order"] = s.trunc_order;
  json dom;
  dom["center"] = complex_to_json(s.domainU.center);
  dom["radius"] = s.domainU.radius;
  json wb = json::array();
  for (const auto& iv : s.domainW) wb.push_back(json::array({iv.lo, iv.hi}));
  dom["w_box"] = wb;
  out["domain"] = dom;
  out["alpha0"] = series_to_json(s.alpha0);
  json mu = json::array();
  for (const auto& m : s.mu) mu.push_back(series_to_json(m));
  out["mu"] = mu;
  json b = json::array();
  for (const auto& e : s.b) b.push_back(series_to_json(e));
  out["b"] = b;
  json consts = json::array();
  for (const auto& c : s.phi_constants) consts.push_back(complex_list_json(c));
  out["constants"] = consts;
  out["F_constant"] = complex_list_json(s.F_constant);
  return out;
}

json default_config_json() {
  json j;
  j["seed"] = "enneper";
  j["suites"] = kDefaultSuites;
  j["sampling"] = {{"counts", json::array()}, {"random", 0}, {"seed", 1}};
  j["tolerances"] = json::object();
  j["export"] = {{"slice", ""},  {"surface", "f"}, {"theta", 0.0},
                 {"counts", {21, 21}}, {"sweep", 0}, {"prefix", ""}};
  j["out_dir"] = "kbend_out";
  j["rng_seed"] = 20240601;
  return j;
}

RunConfig config_from_json(const json& j, const std::filesystem::path& base_dir) {
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  RunConfig cfg;
  const int trunc = get_or<int>(j, "trunc_order", 32);
  if (j.contains("bundle")) {
    std::filesystem::path p = j.at("bundle").get<std::string>();
    if (p.is_relative()) p = base_dir / p;
    const json bundle = read_json_file(p);
    cfg.seed = seed_from_bundle(bundle);
    cfg.seed_name = get_or<std::string>(bundle, "name", "custom");
  } else {
    const json seed = j.contains("seed") ? j.at("seed") : json("enneper");
    if (seed.is_string()) {
      cfg.seed_name = seed.get<std::string>();
      cfg.seed = builtin_seed(cfg.seed_name, trunc);
    } else {
      cfg.seed_name = get_or<std::string>(j, "name", "custom");
      cfg.seed = seed_from_json(seed);
    }
  }

  cfg.suites = get_or<std::vector<std::string>>(j, "suites", kDefaultSuites);
  for (const auto& name : cfg.suites) {
    if (!is_registered_suite(name)) throw ConfigError("unknown suite '" + name + "'");
  }
  if (j.contains("sampling")) {
    const json& s = j.at("sampling");
    cfg.sampling.counts = get_or<std::vector<int>>(s, "counts", {});
    cfg.sampling.random = get_or<std::size_t>(s, "random", 0);
    cfg.sampling.seed = get_or<std::uint64_t>(s, "seed", 1);
    for (int c : cfg.sampling.counts) {
      if (c < 2) throw ConfigError("sampling counts must be at least 2 per axis");
    }
  }
  if (j.contains("tolerances")) {
    for (const auto& [k, v] : j.at("tolerances").items()) {
      if (!v.is_number()) throw ConfigError("tolerance for '" + k + "' must be a number");
      cfg.tolerances[k] = v.get<double>();
    }
  }
  if (j.contains("export")) {
    const json& e = j.at("export");
    cfg.export_spec.slice = get_or<std::string>(e, "slice", "");
    cfg.export_spec.surface = get_or<std::string>(e, "surface", "f");
    cfg.export_spec.theta = get_or<double>(e, "theta", 0.0);
    cfg.export_spec.counts = get_or<std::vector<int>>(e, "counts", {21, 21});
    cfg.export_spec.sweep = get_or<int>(e, "sweep", 0);
    cfg.export_spec.prefix = get_or<std::string>(e, "prefix", "");
  }
  cfg.out_dir = get_or<std::string>(j, "out_dir", "kbend_out");
  if (!base_dir.empty() && std::filesystem::path(cfg.out_dir).is_relative()) {
    cfg.out_dir = (base_dir / cfg.out_dir).string();
  }
  cfg.rng_seed = get_or<std::uint64_t>(j, "rng_seed", 20240601);
  return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
  return config_from_json(read_json_file(path), path.parent_path());
}

json config_to_json(const RunConfig& cfg) {
  json j;
  j["name"] = cfg.seed_name;
  j["seed"] = seed_to_json(cfg.seed);
  j["suites"] = cfg.suites;
  j["sampling"] = {{"counts", cfg.sampling.counts},
                   {"random", cfg.sampling.random},
                   {"seed", cfg.sampling.seed}};
  json tol = json::object();
  for (const auto& [k, v] : cfg.tolerances) tol[k] = v;
  j["tolerances"] = tol;
  const ExportSpec& e = cfg.export_spec;
  j["export"] = {{"slice", e.slice}, {"surface", e.surface}, {"theta", e.theta},
                 {"counts", e.counts}, {"sweep", e.sweep},     {"prefix", e.prefix}};
  j["out_dir"] = cfg.out_dir;
  j["rng_seed"] = cfg.rng_seed;
  return j;
}

json bundle_json(const std::string& name, const WeierstrassSeed& seed) {
  const WeierstrassChain chain = build_chain(seed);
  json out;
  out["name"] = name;
  out["n"] = seed.n;
  out["trunc_order"] = seed.trunc_order;
  out["basepoint"] = complex_to_json(seed.domainU.center);
  out["radius"] = seed.domainU.radius;
  json alphas = json::array();
  for (const auto& a : chain.alphas) alphas.push_back(series_vector_json(a));
  out["alphas"] = alphas;
  json phis = json::array();
  for (const auto& p : chain.phis) phis.push_back(series_vector_json(p));
  out["phis"] = phis;
  out["delta_dim"] = chain.delta().dim();
  json dd = json::array();
  for (const auto& d : chain.delta_derivs) dd.push_back(series_vector_json(d));
  out["delta_derivs"] = dd;

  const Box box = seed_box(seed);
  json chart;
  chart["dim"] = 2 * seed.n;
  chart["ambient"] = 2 * seed.n + 1;
  chart["coordinates"] = seed_coordinate_names(seed.n);
  chart["box"] = {{"lo", std::vector<double>(box.lo.data(), box.lo.data() + box.lo.size())},
                  {"hi", std::vector<double>(box.hi.data(), box.hi.data() + box.hi.size())}};
  out["chart"] = chart;
  out["seed"] = seed_to_json(seed);
  return out;
}

WeierstrassSeed seed_from_bundle(const json& bundle) {
  if (!bundle.contains("seed")) throw ConfigError("bundle has no 'seed' entry");
  return seed_from_json(bundle.at("seed"));
}

json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open '" + path.string() + "'");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("'" + path.string() + "' is not valid JSON: " + e.what());
  }
}

std::string dump_json(const json& j) { return j.dump(2); }

}  // namespace kbend
