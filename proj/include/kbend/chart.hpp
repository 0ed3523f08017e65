#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace kbend {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

/// Second-order jet of a map R^d -> R^(m+1) at one point.
struct Jet2 {
  Vec coords;
  Vec value;
  Mat d1;               // (m+1) x d, column i is the partial along coordinate i
  std::vector<Vec> d2;  // d*d entries, index i*d + j
  bool in_domain = true;

  int dim() const { return static_cast<int>(d1.cols()); }
  int ambient() const { return static_cast<int>(value.size()); }
  const Vec& second(int i, int j) const { return d2[static_cast<std::size_t>(i * dim() + j)]; }
  Vec& second(int i, int j) { return d2[static_cast<std::size_t>(i * dim() + j)]; }

  static Jet2 zeros(const Vec& coords, int ambient);
};

Jet2 operator+(const Jet2& a, const Jet2& b);
Jet2 operator*(double s, const Jet2& a);
/// Applies a linear map of the ambient space to every component of the jet.
Jet2 apply_linear(const Mat& m, const Jet2& a);

struct Box {
  Vec lo;
  Vec hi;

  int dim() const { return static_cast<int>(lo.size()); }
  bool contains(const Vec& p, double slack = 0.0) const;
  Vec center() const { return 0.5 * (lo + hi); }
  double scale() const { return (hi - lo).maxCoeff(); }
};

/// An evaluable immersion chart with its sampling box.  Evaluation outside
/// the box is permitted and flagged through Jet2::in_domain.
class ImmersionChart {
 public:
  using Evaluator = std::function<Jet2(const Vec&)>;

  ImmersionChart(int dim, int ambient, Evaluator eval, Box box, std::vector<std::string> names = {},
                 std::optional<Mat> complex_structure = std::nullopt);

  Jet2 jet(const Vec& p) const;
  Jet2 operator()(const Vec& p) const { return jet(p); }

  int dim() const { return dim_; }
  int ambient() const { return ambient_; }
  const Box& box() const { return box_; }
  const std::vector<std::string>& names() const { return names_; }
  /// Almost complex structure in chart coordinates, when the chart has one.
  const std::optional<Mat>& complex_structure() const { return complex_structure_; }

  ImmersionChart with_box(Box box) const;

 private:
  int dim_;
  int ambient_;
  Evaluator eval_;
  Box box_;
  std::vector<std::string> names_;
  std::optional<Mat> complex_structure_;
};

}  // namespace kbend
