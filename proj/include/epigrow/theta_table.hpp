#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

// Monte Carlo estimation of the percolation probability theta(p) on Z^d,
// tabulated over a p grid. "The origin's cluster is infinite" is proxied on a
// finite box: either the cluster wraps a torus of side box_side in some
// coordinate, or it touches the boundary of a centered box of that side.

namespace epigrow::lattice {

enum class InfinityCriterion { wrapping, boundary };

std::string criterion_name(InfinityCriterion c);
InfinityCriterion criterion_from_name(const std::string& name);

struct ThetaEntry {
    double p = 0.0;
    double theta_hat = 0.0;
    double std_err = 0.0;
    long n_samples = 0;
};

struct ThetaTable {
    int dimension = 2;
    int box_side = 128;
    InfinityCriterion criterion = InfinityCriterion::wrapping;
    uint64_t seed = 0;

    std::vector<ThetaEntry> entries;  // strictly increasing in p

    void validate() const;
    // theta at p via isotonic repair + linear interpolation, clamped to [0,1]
    double interpolate(double p) const;

    std::string to_csv() const;
    std::string metadata_json() const;
    static ThetaTable from_csv(const std::string& csv, const std::string& metadata);
};

// single-point estimate: (theta_hat, binomial std_err)
std::pair<double, double> estimate_theta(double p, int dimension, int box_side,
                                         long n_samples, InfinityCriterion criterion,
                                         uint64_t seed);

// default grid: coarse 0.02 spacing, refined to 0.005 on [p_c, p_c + 0.1]
std::vector<double> default_p_grid(double p_c);

ThetaTable build_theta_table(int dimension, int box_side, const std::vector<double>& grid,
                             long n_samples, InfinityCriterion criterion, uint64_t seed);

// file-backed cache keyed by (dimension, box_side, grid, n_samples, criterion, seed)
ThetaTable load_or_build_theta_table(const std::string& cache_dir, int dimension,
                                     int box_side, const std::vector<double>& grid,
                                     long n_samples, InfinityCriterion criterion,
                                     uint64_t seed, bool* from_cache = nullptr);

struct SlopePoint {
    double p;
    double slope;
};

struct SlopeDiagnostic {
    std::vector<SlopePoint> slopes;  // forward differences above p_c
    bool steepening_toward_pc = false;
};

// needs >= 3 table entries above p_c_estimate
SlopeDiagnostic theta_slope_diagnostic(const ThetaTable& table, double p_c_estimate);

}  // namespace epigrow::lattice
