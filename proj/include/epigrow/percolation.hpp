#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "epigrow/topology.hpp"

namespace epigrow {

struct OccupancyField {
    Topology topo;
    std::vector<uint8_t> occupied;

    static OccupancyField make(const Topology& t) {
        OccupancyField f;
        f.topo = t;
        f.occupied.assign(static_cast<size_t>(t.n_sites()), 0);
        return f;
    }

    int64_t n_occupied() const {
        int64_t n = 0;
        for (uint8_t b : occupied) n += b;
        return n;
    }

    double density() const {
        return static_cast<double>(n_occupied()) / static_cast<double>(occupied.size());
    }
};

// Connected components of the occupied subgraph. Labels are the smallest site
// index of each component; vacant sites carry -1.
struct ClusterLabeling {
    std::vector<int64_t> label;
    std::map<int64_t, int64_t> sizes;  // label -> site count (ordered for determinism)

    int64_t n_clusters() const { return static_cast<int64_t>(sizes.size()); }
};

ClusterLabeling label_clusters(const OccupancyField& field);

struct ClusterStats {
    std::map<int64_t, int64_t> size_histogram;  // size -> number of clusters
    int64_t max_size = 0;
    double mean_size_per_occupied = 0.0;  // cluster size averaged over occupied sites
};

ClusterStats cluster_stats(const ClusterLabeling& labeling);
std::string cluster_stats_csv(const ClusterStats& stats);

// Exact P(diam(C0) <= k) for site percolation at density p on the infinite
// 3-tree (graph-distance diameter; a vacant origin counts as diameter <= k).
// Computed by a height-resolved recursion over the branch subtrees.
double tree_diameter_cdf(double p, int k);

}  // namespace epigrow
