#include "kbend/export.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <memory>
#include <numbers>
#include <sstream>

#include <boost/math/quadrature/gauss.hpp>

#include "kbend/geometry.hpp"
#include "kbend/report.hpp"
#include "kbend/sampling.hpp"

namespace kbend {

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) out.push_back(cur);
  return out;
}

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t");
  return s.substr(a, b - a + 1);
}

int coordinate_index(const std::string& name, const std::vector<std::string>& names) {
  const auto it = std::find(names.begin(), names.end(), name);
  if (it == names.end()) throw DomainError("slice names unknown coordinate '" + name + "'");
  return static_cast<int>(it - names.begin());
}

std::ofstream open_out(const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw DomainError("cannot write '" + path.string() + "'");
  return out;
}

}  // namespace

SliceSpec parse_slice(const std::string& text, const std::vector<std::string>& names, const Box& box) {
  const auto colon = text.find(':');
  const auto free = split(text.substr(0, colon), ',');
  if (free.size() != 2) throw DomainError("slice must name exactly two free coordinates");
  SliceSpec s;
  s.free_a = coordinate_index(trim(free[0]), names);
  s.free_b = coordinate_index(trim(free[1]), names);
  if (s.free_a == s.free_b) throw DomainError("slice free coordinates must differ");
  s.base = box.center();
  if (colon != std::string::npos) {
    for (const auto& item : split(text.substr(colon + 1), ',')) {
      if (trim(item).empty()) continue;
      const auto eq = item.find('=');
      if (eq == std::string::npos) throw DomainError("slice assignment '" + item + "' lacks '='");
      const int k = coordinate_index(trim(item.substr(0, eq)), names);
      if (k == s.free_a || k == s.free_b) throw DomainError("slice fixes a free coordinate");
      try {
        s.base[k] = std::stod(item.substr(eq + 1));
      } catch (const std::exception&) {
        throw DomainError("slice value in '" + item + "' is not a number");
      }
    }
  }
  return s;
}

SliceMesh sample_slice(const ImmersionChart& chart, const SliceSpec& slice, int nu, int nv) {
  if (nu < 2 || nv < 2) throw DomainError("export grid is empty: need at least 2 x 2 nodes");
  if (slice.base.size() != chart.dim()) throw DomainError("slice base has the wrong dimension");
  const Box& box = chart.box();
  Vec probe = slice.base;
  probe[slice.free_a] = box.center()[slice.free_a];
  probe[slice.free_b] = box.center()[slice.free_b];
  if (!box.contains(probe)) throw DomainError("slice leaves the chart domain");

  SliceMesh m;
  m.nu = nu;
  m.nv = nv;
  for (int i = 0; i < nu; ++i) {
    for (int j = 0; j < nv; ++j) {
      Vec p = slice.base;
      const double a = static_cast<double>(i) / (nu - 1);
      const double b = static_cast<double>(j) / (nv - 1);
      p[slice.free_a] = box.lo[slice.free_a] + a * (box.hi[slice.free_a] - box.lo[slice.free_a]);
      p[slice.free_b] = box.lo[slice.free_b] + b * (box.hi[slice.free_b] - box.lo[slice.free_b]);
      m.coords.push_back(std::move(p));
    }
  }
  m.points.resize(m.coords.size());
  for_each_index(m.coords.size(), [&](std::size_t k) {
    const Jet2 j = chart.jet(m.coords[k]);
    if (!j.in_domain) throw DomainError("slice leaves the chart domain");
    m.points[k] = j.value;
  });
  return m;
}

std::vector<std::pair<std::size_t, std::size_t>> mesh_edges(const SliceMesh& m) {
  std::vector<std::pair<std::size_t, std::size_t>> e;
  auto id = [&](int i, int j) { return static_cast<std::size_t>(i * m.nv + j); };
  for (int i = 0; i < m.nu; ++i) {
    for (int j = 0; j + 1 < m.nv; ++j) e.emplace_back(id(i, j), id(i, j + 1));
  }
  for (int i = 0; i + 1 < m.nu; ++i) {
    for (int j = 0; j < m.nv; ++j) e.emplace_back(id(i, j), id(i + 1, j));
  }
  return e;
}

std::vector<double> intrinsic_edge_lengths(const ImmersionChart& chart, const SliceMesh& mesh) {
  const auto edges = mesh_edges(mesh);
  std::vector<double> out(edges.size());
  for_each_index(edges.size(), [&](std::size_t k) {
    const Vec& a = mesh.coords[edges[k].first];
    const Vec& b = mesh.coords[edges[k].second];
    const Vec dir = b - a;
    auto speed = [&](double t) { return (chart.jet(a + t * dir).d1 * dir).norm(); };
    out[k] = boost::math::quadrature::gauss<double, 15>::integrate(speed, 0.0, 1.0);
  });
  return out;
}

std::vector<double> chord_edge_lengths(const SliceMesh& mesh) {
  std::vector<double> out;
  for (const auto& [a, b] : mesh_edges(mesh)) out.push_back((mesh.points[b] - mesh.points[a]).norm());
  return out;
}

void write_obj(const std::filesystem::path& path, const SliceMesh& mesh) {
  std::ofstream out = open_out(path);
  out << "# " << mesh.nu << " x " << mesh.nv << " slice\n";
  for (const Vec& p : mesh.points) {
    out << "v";
    for (int k = 0; k < 3; ++k) out << ' ' << format_double(k < p.size() ? p[k] : 0.0);
    out << '\n';
  }
  for (int i = 0; i + 1 < mesh.nu; ++i) {
    for (int j = 0; j + 1 < mesh.nv; ++j) {
      const int a = i * mesh.nv + j + 1;  // OBJ indices start at 1
      out << "f " << a << ' ' << a + mesh.nv << ' ' << a + mesh.nv + 1 << ' ' << a + 1 << '\n';
    }
  }
}

void write_csv(const std::filesystem::path& path, const ImmersionChart& chart, const SliceMesh& mesh) {
  const bool has_j = chart.complex_structure().has_value();
  std::vector<double> trace(mesh.coords.size()), anti(mesh.coords.size());
  for_each_index(mesh.coords.size(), [&](std::size_t k) {
    const PointFrame fr = point_frame(chart.jet(mesh.coords[k]));
    const double a = op_norm(fr.A, fr.G);
    trace[k] = a > 0.0 ? std::abs(fr.A.trace()) / a : 0.0;
    if (has_j) anti[k] = anticommutation_residual(fr, *chart.complex_structure());
  });

  std::ofstream out = open_out(path);
  out << "i,j";
  for (int c = 0; c < chart.dim(); ++c) {
    out << ',' << (c < static_cast<int>(chart.names().size()) ? chart.names()[c] : "q" + std::to_string(c));
  }
  for (int k = 0; k < chart.ambient(); ++k) out << ",X" << k + 1;
  out << ",trace_A_rel";
  if (has_j) out << ",anticommutation";
  out << '\n';
  for (int i = 0; i < mesh.nu; ++i) {
    for (int j = 0; j < mesh.nv; ++j) {
      const auto k = static_cast<std::size_t>(i * mesh.nv + j);
      out << i << ',' << j;
      for (int c = 0; c < chart.dim(); ++c) out << ',' << format_double(mesh.coords[k][c]);
      for (int a = 0; a < chart.ambient(); ++a) out << ',' << format_double(mesh.points[k][a]);
      out << ',' << format_double(trace[k]);
      if (has_j) out << ',' << format_double(anti[k]);
      out << '\n';
    }
  }
}

std::vector<std::filesystem::path> export_slice(const ImmersionChart& chart, const SliceSpec& slice,
                                                int nu, int nv, const std::filesystem::path& dir,
                                                const std::string& stem) {
  const SliceMesh mesh = sample_slice(chart, slice, nu, nv);
  const auto obj = dir / (stem + ".obj");
  const auto csv = dir / (stem + ".csv");
  write_obj(obj, mesh);
  write_csv(csv, chart, mesh);
  return {obj, csv};
}

std::vector<std::filesystem::path> export_sweep(const WeierstrassSeed& seed, const SliceSpec& slice,
                                                int nu, int nv, int frames,
                                                const std::filesystem::path& dir,
                                                const std::string& stem) {
  if (frames < 1) throw DomainError("a theta sweep needs at least one frame");
  auto rep = std::make_shared<const HolomorphicRep>(seed);
  std::vector<std::filesystem::path> files;
  std::vector<std::vector<double>> intrinsic, chord;
  for (int k = 0; k < frames; ++k) {
    const double theta = k * std::numbers::pi / frames;
    const ImmersionChart chart = real_part_chart(rep, std::polar(1.0, -theta));
    const SliceMesh mesh = sample_slice(chart, slice, nu, nv);
    const std::string name = stem + "_theta" + std::to_string(k);
    write_obj(dir / (name + ".obj"), mesh);
    write_csv(dir / (name + ".csv"), chart, mesh);
    files.push_back(dir / (name + ".obj"));
    files.push_back(dir / (name + ".csv"));
    intrinsic.push_back(intrinsic_edge_lengths(chart, mesh));
    chord.push_back(chord_edge_lengths(mesh));
  }
  const auto edges_path = dir / (stem + "_edges.csv");
  std::ofstream out = open_out(edges_path);
  out << "edge,frame,theta,intrinsic_length,chord_length\n";
  for (std::size_t e = 0; e < intrinsic.front().size(); ++e) {
    for (int k = 0; k < frames; ++k) {
      out << e << ',' << k << ',' << format_double(k * std::numbers::pi / frames) << ','
          << format_double(intrinsic[static_cast<std::size_t>(k)][e]) << ','
          << format_double(chord[static_cast<std::size_t>(k)][e]) << '\n';
    }
  }
  files.push_back(edges_path);
  return files;
}

}  // namespace kbend
