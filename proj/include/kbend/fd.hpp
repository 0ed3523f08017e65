#pragma once

// Fourth-order central-difference jets for maps known only through values.

#include <functional>

#include "kbend/chart.hpp"

namespace kbend {

using VectorMap = std::function<Vec(const Vec&)>;

/// Step balancing h^4 truncation against round-off for first derivatives.
double fd4_first_step(double scale = 1.0);
/// Same balance for second derivatives.
double fd4_second_step(double scale = 1.0);

/// First partials (as columns) of a vector map.
Mat fd4_jacobian(const VectorMap& f, const Vec& p, double h);

/// Value plus fourth-order first and second partials.  Mixed partials come
/// from second differences along e_i + e_j and e_i - e_j.
Jet2 fd4_jet(const VectorMap& f, const Vec& p, double h1, double h2);

/// Chart whose jets are computed by fd4_jet from a value map.
ImmersionChart fd_chart(int dim, int ambient, VectorMap f, Box box,
                        std::vector<std::string> names = {});

}  // namespace kbend
