#include "epigrow/lattice_map.hpp"

#include <algorithm>
#include <stdexcept>

#include "epigrow/tree_map.hpp"

namespace epigrow::lattice {

double default_p_c(int dimension) {
    if (dimension == 2) return kDefaultPc2d;
    if (dimension == 3) return kDefaultPc3d;
    throw std::invalid_argument("no default p_c for this dimension; pass one explicitly");
}

double g_lattice(double p, const ThetaTable& table, double p_c_estimate) {
    if (!(p >= 0.0 && p <= 1.0)) throw std::domain_error("g_lattice: p out of [0,1]");
    if (p <= p_c_estimate) return p;  // subcritical: no infinite cluster
    const double theta = table.interpolate(p);
    return std::clamp(p - theta, 0.0, p);
}

double h_lattice(double p, const LatticeMapParams& params) {
    const double grown = tree::growth_map(p, params.beta);
    return g_lattice(grown, params.table, params.p_c_estimate);
}

}  // namespace epigrow::lattice
