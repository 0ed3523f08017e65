#pragma once

// Two-dimensional slices of a chart written as Wavefront OBJ and CSV.

#include <filesystem>
#include <string>
#include <vector>

#include "kbend/chart.hpp"
#include "kbend/weierstrass.hpp"

namespace kbend {

/// Two free coordinates swept over the chart box; the rest held at `base`.
struct SliceSpec {
  int free_a = 0;
  int free_b = 1;
  Vec base;
};

/// Grammar: "a,b" or "a,b:name=value,name=value".  Names are chart
/// coordinate names; coordinates not mentioned sit at the box center.
SliceSpec parse_slice(const std::string& text, const std::vector<std::string>& names, const Box& box);

struct SliceMesh {
  int nu = 0;
  int nv = 0;
  std::vector<Vec> coords;  // row-major, index i * nv + j
  std::vector<Vec> points;
};

/// Throws DomainError for counts below 2 or a slice outside the chart box.
SliceMesh sample_slice(const ImmersionChart& chart, const SliceSpec& slice, int nu, int nv);

/// Edge list shared by the length helpers: first the edges along the second
/// free coordinate, then those along the first, both in row-major order.
std::vector<std::pair<std::size_t, std::size_t>> mesh_edges(const SliceMesh& mesh);
/// Lengths of the images of the coordinate edges, integrated with the metric.
std::vector<double> intrinsic_edge_lengths(const ImmersionChart& chart, const SliceMesh& mesh);
std::vector<double> chord_edge_lengths(const SliceMesh& mesh);

/// OBJ vertices use the first three ambient coordinates; faces are quads.
void write_obj(const std::filesystem::path& path, const SliceMesh& mesh);
/// Grid indices, chart coordinates, all ambient coordinates, then the
/// residual columns trace_A_rel and anticommutation (when the chart has J).
void write_csv(const std::filesystem::path& path, const ImmersionChart& chart, const SliceMesh& mesh);

/// Writes <stem>.obj and <stem>.csv; returns the paths written.
std::vector<std::filesystem::path> export_slice(const ImmersionChart& chart, const SliceSpec& slice,
                                                int nu, int nv, const std::filesystem::path& dir,
                                                const std::string& stem);

/// Frames theta_k = k pi / frames of the associated family, k = 0..frames-1,
/// as <stem>_theta<k>.obj/.csv, plus <stem>_edges.csv with the intrinsic and
/// chord length of every edge in every frame.
std::vector<std::filesystem::path> export_sweep(const WeierstrassSeed& seed, const SliceSpec& slice,
                                                int nu, int nv, int frames,
                                                const std::filesystem::path& dir,
                                                const std::string& stem);

}  // namespace kbend
