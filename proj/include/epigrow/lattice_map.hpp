#pragma once

#include <cmath>

#include "epigrow/theta_table.hpp"

// Limiting density map on the d-dimensional torus: h(p) = g(f(p)) with
// g(p) = p - theta(p), theta taken from a Monte Carlo table. Below the
// percolation threshold the identity branch g(p) = p is exact and is enforced
// rather than trusted to the noisy table.

namespace epigrow::lattice {

inline constexpr double kDefaultPc2d = 0.5927;
inline constexpr double kDefaultPc3d = 0.3116;

double default_p_c(int dimension);

struct LatticeMapParams {
    double beta = 0.0;
    ThetaTable table;
    double p_c_estimate = kDefaultPc2d;

    // growth rate at which the fixed point of f reaches p_c
    double beta_c() const {
        return std::log(1.0 / (1.0 - p_c_estimate)) / p_c_estimate;
    }
};

double g_lattice(double p, const ThetaTable& table, double p_c_estimate);
double h_lattice(double p, const LatticeMapParams& params);

}  // namespace epigrow::lattice
