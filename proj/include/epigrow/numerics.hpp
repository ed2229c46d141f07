#pragma once

#include <cmath>
#include <functional>
#include <stdexcept>

namespace epigrow {

// Bisection root find for fn on [lo, hi] with fn(lo), fn(hi) of opposite
// sign (or either exactly zero). Absolute tolerance on the abscissa.
inline double bisect(const std::function<double(double)>& fn, double lo, double hi,
                     double tol = 1e-13) {
    double flo = fn(lo);
    double fhi = fn(hi);
    if (flo == 0.0) return lo;
    if (fhi == 0.0) return hi;
    if ((flo > 0.0) == (fhi > 0.0))
        throw std::runtime_error("bisect: endpoints do not bracket a root");
    while (hi - lo > tol) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;  // float resolution exhausted
        const double fmid = fn(mid);
        if (fmid == 0.0) return mid;
        if ((fmid > 0.0) == (flo > 0.0)) {
            lo = mid;
            flo = fmid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

}  // namespace epigrow
