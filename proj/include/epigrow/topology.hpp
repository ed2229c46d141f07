#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "epigrow/graph.hpp"

namespace epigrow {

// d-dimensional torus (Z mod side)^d; sites indexed in mixed radix with
// axis 0 fastest. Adjacency is nearest-neighbor (L1 distance 1) with wrap.
struct Torus {
    int dim = 0;
    int side = 0;

    int64_t n_sites() const {
        int64_t n = 1;
        for (int a = 0; a < dim; ++a) n *= side;
        return n;
    }

    int64_t stride(int axis) const {
        int64_t s = 1;
        for (int a = 0; a < axis; ++a) s *= side;
        return s;
    }

    void coords(int64_t site, int* out) const {
        for (int a = 0; a < dim; ++a) {
            out[a] = static_cast<int>(site % side);
            site /= side;
        }
    }

    int64_t site_of(const int* c) const {
        int64_t site = 0;
        for (int a = dim - 1; a >= 0; --a) site = site * side + c[a];
        return site;
    }

    void validate() const {
        if (dim < 1 || side < 2) throw std::invalid_argument("torus: need dim >= 1, side >= 2");
    }
};

struct Topology {
    enum class Kind { torus, graph };
    Kind kind = Kind::torus;
    Torus torus{};
    const Graph* graph = nullptr;

    static Topology make(const Torus& t) {
        t.validate();
        Topology topo;
        topo.kind = Kind::torus;
        topo.torus = t;
        return topo;
    }

    static Topology make(const Graph& g) {
        Topology topo;
        topo.kind = Kind::graph;
        topo.graph = &g;
        return topo;
    }

    int64_t n_sites() const {
        return kind == Kind::torus ? torus.n_sites()
                                   : static_cast<int64_t>(graph->n());
    }

    // calls fn(neighbor) for every neighbor of site
    template <class F>
    void for_each_neighbor(int64_t site, F&& fn) const {
        if (kind == Kind::graph) {
            for (uint32_t v : graph->adj[static_cast<uint32_t>(site)])
                fn(static_cast<int64_t>(v));
            return;
        }
        int64_t s = 1;
        int64_t rest = site;
        for (int a = 0; a < torus.dim; ++a) {
            const int c = static_cast<int>(rest % torus.side);
            rest /= torus.side;
            const int64_t up = (c == torus.side - 1) ? site - s * (torus.side - 1) : site + s;
            const int64_t dn = (c == 0) ? site + s * (torus.side - 1) : site - s;
            fn(up);
            if (dn != up) fn(dn);
            s *= torus.side;
        }
    }
};

}  // namespace epigrow
