#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "epigrow/percolation.hpp"

// The growth/epidemic particle system. Growth: every occupied site dies and
// seeds Poisson(beta) offspring spread uniformly over its dispersal
// neighborhood; thinned per site this is an independent Bernoulli with
// probability 1 - e^{-beta * local density}, which is what we sample. Epidemic:
// infections land independently per site with probability alpha and wipe out
// the whole occupied cluster they land in; cluster-level sampling with
// survival (1-alpha)^size is exact. A range-capped variant limits the spread
// to a through-cluster distance and exists as a diagnostic.

namespace epigrow::sim {

enum class Dispersal { global, radius };

struct ModelConfig {
    double beta = 2.0;
    double alpha = 0.0;
    Dispersal dispersal = Dispersal::global;
    int radius = 0;                // dispersal radius (torus only)
    std::optional<int> range_cap;  // epidemic truncation distance
    uint64_t seed = 0;
    bool record_half_steps = false;

    void validate(const Topology& topo) const;
};

struct TrajectoryRecord {
    std::vector<double> rho;       // rho[k] after k full steps, k = 0..k_max
    std::vector<double> rho_half;  // post-growth densities, if recorded
    uint64_t seed = 0;
};

OccupancyField init_occupancy(const Topology& topo, double p0, uint64_t seed);

OccupancyField growth_step(const OccupancyField& state, const ModelConfig& cfg,
                           int step_index);
OccupancyField epidemic_step(const OccupancyField& state, const ModelConfig& cfg,
                             int step_index);

TrajectoryRecord run(const Topology& topo, const ModelConfig& cfg, double p0, int k_max);

// exact window occupancy counts, window = {j : |j - i|_inf <= r} with wrap
std::vector<int32_t> box_counts(const OccupancyField& state, int r);
// counts / (2r+1)^d
std::vector<double> density_field(const OccupancyField& state, int r);

double good_site_fraction(const std::vector<double>& field, double target, double eps);

std::string snapshot_pgm(const OccupancyField& state);  // d = 2 only
std::string snapshot_rle(const OccupancyField& state);

}  // namespace epigrow::sim
