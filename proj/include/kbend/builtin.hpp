#pragma once

#include <string>
#include <vector>

#include "kbend/chart.hpp"
#include "kbend/weierstrass.hpp"

namespace kbend {

/// n = 1, alpha0 = mu1 = b0 = 1 at the origin.
WeierstrassSeed enneper_seed(int trunc_order = 32);
/// n = 1, phi0 = z and b0 mu1 = z^-2 expanded at z = 2 (disc radius 0.6).
WeierstrassSeed catenoid_seed(int trunc_order = 32);
/// n = 2, alpha0 = mu1 = mu2 = 1, b0 = 0, b1 = 1: a minimal Kaehler M^4 in R^5.
WeierstrassSeed m4r5_seed(int trunc_order = 32);

WeierstrassSeed builtin_seed(const std::string& name, int trunc_order = 32);
std::vector<std::string> builtin_seed_names();

/// Unit sphere in R^3, coordinates (phi, theta) so that the normal points inward.
ImmersionChart unit_sphere_chart();
/// Round sphere of the given radius, coordinates (theta, phi); outward normal.
ImmersionChart round_sphere_chart(double radius = 1.0);
/// The plane z = 0 in R^3 with cartesian coordinates.
ImmersionChart plane_chart();
/// The plane z = 0 in R^3 in polar coordinates (r, theta).
ImmersionChart polar_plane_chart();

}  // namespace kbend
