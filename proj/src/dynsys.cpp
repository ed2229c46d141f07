#include "epigrow/dynsys.hpp"

#include <stdexcept>

namespace epigrow {

std::vector<double> orbit(const DensityMap& map, double p0, int k_max) {
    if (!(p0 >= 0.0 && p0 <= 1.0)) throw std::domain_error("orbit: p0 must be in [0,1]");
    if (k_max < 0) throw std::invalid_argument("orbit: k_max must be >= 0");
    std::vector<double> out;
    out.reserve(static_cast<size_t>(k_max) + 1);
    double p = p0;
    out.push_back(p);
    for (int k = 0; k < k_max; ++k) {
        p = map(p);
        out.push_back(p);
    }
    return out;
}

std::vector<ScanPoint> bifurcation_scan(const std::vector<double>& betas,
                                        const std::function<DensityMap(double)>& family,
                                        double p0, int burn_in, int keep) {
    if (burn_in < 0) throw std::invalid_argument("bifurcation_scan: burn_in must be >= 0");
    if (keep < 1) throw std::invalid_argument("bifurcation_scan: keep must be >= 1");
    std::vector<ScanPoint> out;
    out.reserve(betas.size() * static_cast<size_t>(keep));
    for (double beta : betas) {
        const DensityMap map = family(beta);
        double p = p0;
        for (int k = 0; k < burn_in; ++k) p = map(p);
        for (int k = 0; k < keep; ++k) {
            p = map(p);
            out.push_back({beta, p});
        }
    }
    return out;
}

std::vector<double> linspace(double lo, double hi, int n) {
    if (n < 1) throw std::invalid_argument("linspace: n must be >= 1");
    std::vector<double> v;
    v.reserve(static_cast<size_t>(n));
    if (n == 1) {
        v.push_back(lo);
        return v;
    }
    const double step = (hi - lo) / static_cast<double>(n - 1);
    for (int i = 0; i < n; ++i) v.push_back(lo + step * static_cast<double>(i));
    return v;
}

}  // namespace epigrow
