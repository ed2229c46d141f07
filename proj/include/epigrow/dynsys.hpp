#pragma once

#include <functional>
#include <vector>

// Orbit and parameter-scan helpers shared by the tree and lattice maps.

namespace epigrow {

using DensityMap = std::function<double(double)>;

// (p0, m(p0), ..., m^{k_max}(p0)); k_max + 1 entries
std::vector<double> orbit(const DensityMap& map, double p0, int k_max);

struct ScanPoint {
    double beta;
    double value;
};

// For each beta (in grid order), iterate the map burn_in times from p0 and
// emit the next `keep` iterates.
std::vector<ScanPoint> bifurcation_scan(const std::vector<double>& betas,
                                        const std::function<DensityMap(double)>& family,
                                        double p0, int burn_in, int keep);

std::vector<double> linspace(double lo, double hi, int n);

}  // namespace epigrow
