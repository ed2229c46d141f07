#include "epigrow/percolation.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace epigrow {

namespace {

struct DisjointSets {
    std::vector<int64_t> parent;
    std::vector<int64_t> rank_size;

    explicit DisjointSets(int64_t n) : parent(n), rank_size(n, 1) {
        for (int64_t i = 0; i < n; ++i) parent[i] = i;
    }

    int64_t find(int64_t x) {
        while (parent[x] != x) {
            parent[x] = parent[parent[x]];  // path halving
            x = parent[x];
        }
        return x;
    }

    void unite(int64_t a, int64_t b) {
        a = find(a);
        b = find(b);
        if (a == b) return;
        if (rank_size[a] < rank_size[b]) std::swap(a, b);
        parent[b] = a;
        rank_size[a] += rank_size[b];
    }
};

}  // namespace

ClusterLabeling label_clusters(const OccupancyField& field) {
    const int64_t n = field.topo.n_sites();
    if (static_cast<int64_t>(field.occupied.size()) != n)
        throw std::invalid_argument("label_clusters: occupancy size mismatch");
    DisjointSets dsu(n);
    const auto& occ = field.occupied;

    if (field.topo.kind == Topology::Kind::graph) {
        const Graph& g = *field.topo.graph;
        for (uint32_t u = 0; u < g.n(); ++u) {
            if (!occ[u]) continue;
            for (uint32_t v : g.adj[u])
                if (v > u && occ[v]) dsu.unite(u, v);
        }
    } else {
        const Torus& t = field.topo.torus;
        // link each occupied site to its +1 neighbor along every axis
        std::vector<int> c(t.dim, 0);
        std::vector<int64_t> strides(t.dim);
        for (int a = 0; a < t.dim; ++a) strides[a] = t.stride(a);
        for (int64_t site = 0; site < n; ++site) {
            if (occ[site]) {
                for (int a = 0; a < t.dim; ++a) {
                    const int64_t nb = (c[a] == t.side - 1)
                                           ? site - strides[a] * (t.side - 1)
                                           : site + strides[a];
                    if (nb != site && occ[nb]) dsu.unite(site, nb);
                }
            }
            for (int a = 0; a < t.dim; ++a) {  // mixed-radix increment
                if (++c[a] < t.side) break;
                c[a] = 0;
            }
        }
    }

    ClusterLabeling out;
    out.label.assign(n, -1);
    std::vector<int64_t> minrep(n, -1);
    for (int64_t i = 0; i < n; ++i) {
        if (!occ[i]) continue;
        const int64_t r = dsu.find(i);
        if (minrep[r] < 0) minrep[r] = i;  // ascending scan: first hit is the min
        out.label[i] = minrep[r];
    }
    for (int64_t i = 0; i < n; ++i)
        if (out.label[i] >= 0) ++out.sizes[out.label[i]];
    return out;
}

ClusterStats cluster_stats(const ClusterLabeling& labeling) {
    ClusterStats st;
    int64_t occupied = 0;
    int64_t weighted = 0;
    for (const auto& [label, size] : labeling.sizes) {
        ++st.size_histogram[size];
        st.max_size = std::max(st.max_size, size);
        occupied += size;
        weighted += size * size;
    }
    st.mean_size_per_occupied =
        occupied > 0 ? static_cast<double>(weighted) / static_cast<double>(occupied) : 0.0;
    return st;
}

std::string cluster_stats_csv(const ClusterStats& stats) {
    std::ostringstream os;
    os << "size,count\n";
    for (const auto& [size, count] : stats.size_histogram) os << size << "," << count << "\n";
    return os.str();
}

double tree_diameter_cdf(double p, int k) {
    if (!(p >= 0.0 && p <= 1.0)) throw std::domain_error("tree_diameter_cdf: p in [0,1]");
    if (k < 0) throw std::invalid_argument("tree_diameter_cdf: k must be >= 0");

    // w[idx] with idx = height + 1: probability that the cluster grown from the
    // root of a rooted binary branch has height = idx - 1 (height -1 == vacant
    // root) and every path through an internal node has length <= k. The
    // recursion is exact for heights <= k after k + 2 sweeps.
    const int W = k + 2;
    std::vector<double> w(W, 0.0), nw(W, 0.0), pref(W + 1, 0.0);
    w[0] = 1.0;
    for (int sweep = 0; sweep < k + 2; ++sweep) {
        pref[0] = 0.0;
        for (int i = 0; i < W; ++i) pref[i + 1] = pref[i] + w[i];
        nw[0] = 1.0 - p;
        for (int s = 0; s <= k; ++s) {
            const int t = s - 1;           // height of the taller child
            const int lim = k - 2 - t;     // cap on the other child's height
            const int ti = t + 1;
            double val = 0.0;
            // mixed pairs: heights (t, s2) with s2 <= min(t-1, lim)
            const int pref_end = std::min(t - 1, lim) + 2;  // exclusive, idx space
            if (pref_end > 0) val += 2.0 * w[ti] * pref[pref_end];
            if (lim >= t) val += w[ti] * w[ti];
            nw[s + 1] = p * val;
        }
        std::swap(w, nw);
    }

    // origin: occupied with three independent branches; a configuration is
    // admissible iff the two largest root distances (height + 1) sum to <= k
    double triple = 0.0;
    for (int i1 = 0; i1 < W; ++i1) {
        if (w[i1] == 0.0) continue;
        for (int i2 = 0; i2 < W; ++i2) {
            if (w[i2] == 0.0) continue;
            const double w12 = w[i1] * w[i2];
            for (int i3 = 0; i3 < W; ++i3) {
                int hi = i1, mid = i2;
                if (mid > hi) std::swap(hi, mid);
                if (i3 > hi) {
                    mid = hi;
                    hi = i3;
                } else if (i3 > mid) {
                    mid = i3;
                }
                if (hi + mid <= k) triple += w12 * w[i3];
            }
        }
    }
    return (1.0 - p) + p * triple;
}

}  // namespace epigrow
