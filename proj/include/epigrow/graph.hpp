#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

// Random 3-regular graphs via the configuration model: pair half-edges
// uniformly, reject the outcome wholesale on self-loops, parallel edges or
// disconnection. Conditioned on acceptance the sample is uniform over simple
// connected 3-regular graphs.

namespace epigrow {

struct Graph {
    std::vector<std::array<uint32_t, 3>> adj;
    uint64_t seed = 0;
    int attempts = 0;  // pairings drawn before acceptance

    uint32_t n() const { return static_cast<uint32_t>(adj.size()); }
    void validate() const;  // throws if degree/simplicity/connectivity broken
    std::string to_edge_list() const;
};

Graph generate_3_regular(uint32_t n, uint64_t seed, int max_attempts = 1000);

// nodes at graph distance <= radius from i
std::vector<uint32_t> ball(const Graph& g, uint32_t i, int radius);

// true iff the induced subgraph on ball(g, i, radius) is cycle-free
bool ball_is_tree(const Graph& g, uint32_t i, int radius);

// fraction of nodes whose radius-ball is a finite 3-tree
double local_tree_fraction(const Graph& g, int radius);

}  // namespace epigrow
