#include "epigrow/sim.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>
#include <unordered_set>

#include "epigrow/rng.hpp"

namespace epigrow::sim {

void ModelConfig::validate(const Topology& topo) const {
    if (!(beta > 0.0)) throw std::invalid_argument("config: beta must be > 0");
    if (!(alpha >= 0.0 && alpha <= 1.0))
        throw std::invalid_argument("config: alpha must be in [0,1]");
    if (dispersal == Dispersal::radius) {
        if (topo.kind != Topology::Kind::torus)
            throw std::invalid_argument("config: radius dispersal requires a torus");
        if (radius < 1 || 2 * radius + 1 > topo.torus.side)
            throw std::invalid_argument("config: need 1 <= r < side/2");
    }
    if (range_cap && *range_cap < 0)
        throw std::invalid_argument("config: range_cap must be >= 0");
}

OccupancyField init_occupancy(const Topology& topo, double p0, uint64_t seed) {
    if (!(p0 >= 0.0 && p0 <= 1.0)) throw std::domain_error("init: p0 out of [0,1]");
    OccupancyField f = OccupancyField::make(topo);
    const uint64_t stream = rng::stream_id(rng::kInit);
    const int64_t n = topo.n_sites();
    for (int64_t i = 0; i < n; ++i)
        f.occupied[i] = rng::u01(seed, stream, static_cast<uint64_t>(i)) < p0 ? 1 : 0;
    return f;
}

std::vector<int32_t> box_counts(const OccupancyField& state, int r) {
    if (state.topo.kind != Topology::Kind::torus)
        throw std::invalid_argument("box_counts: torus topology required");
    const Torus& t = state.topo.torus;
    if (r < 0 || 2 * r + 1 > t.side)
        throw std::invalid_argument("box_counts: need 0 <= r < side/2");
    const int64_t n = t.n_sites();
    std::vector<int32_t> cur(n), next(n);
    for (int64_t i = 0; i < n; ++i) cur[i] = state.occupied[i];
    // one circular sliding-window pass per axis
    for (int a = 0; a < t.dim; ++a) {
        const int64_t stride = t.stride(a);
        const int side = t.side;
        const int64_t line_block = stride * side;
        for (int64_t block = 0; block < n; block += line_block) {
            for (int64_t offset = 0; offset < stride; ++offset) {
                const int64_t base = block + offset;
                int64_t sum = 0;
                for (int d = -r; d <= r; ++d) {
                    const int c = (d % side + side) % side;
                    sum += cur[base + static_cast<int64_t>(c) * stride];
                }
                for (int c = 0; c < side; ++c) {
                    next[base + static_cast<int64_t>(c) * stride] = static_cast<int32_t>(sum);
                    const int enter = (c + r + 1) % side;
                    const int leave = ((c - r) % side + side) % side;
                    sum += cur[base + static_cast<int64_t>(enter) * stride];
                    sum -= cur[base + static_cast<int64_t>(leave) * stride];
                }
            }
        }
        std::swap(cur, next);
    }
    return cur;
}

std::vector<double> density_field(const OccupancyField& state, int r) {
    const std::vector<int32_t> counts = box_counts(state, r);
    double vol = 1.0;
    for (int a = 0; a < state.topo.torus.dim; ++a) vol *= (2.0 * r + 1.0);
    std::vector<double> out(counts.size());
    for (size_t i = 0; i < counts.size(); ++i) out[i] = counts[i] / vol;
    return out;
}

OccupancyField growth_step(const OccupancyField& state, const ModelConfig& cfg,
                           int step_index) {
    cfg.validate(state.topo);
    OccupancyField next = OccupancyField::make(state.topo);
    const uint64_t stream = rng::stream_id(rng::kGrowth, static_cast<uint64_t>(step_index));
    const int64_t n = state.topo.n_sites();

    if (cfg.dispersal == Dispersal::global) {
        const double rho = state.density();
        const double prob = -std::expm1(-cfg.beta * rho);
        for (int64_t i = 0; i < n; ++i)
            next.occupied[i] =
                rng::u01(cfg.seed, stream, static_cast<uint64_t>(i)) < prob ? 1 : 0;
        return next;
    }

    // local dispersal over the punctured window {0 < |j-i|_inf <= r}
    const std::vector<int32_t> counts = box_counts(state, cfg.radius);
    int64_t vol = 1;
    for (int a = 0; a < state.topo.torus.dim; ++a) vol *= (2 * cfg.radius + 1);
    const auto window = static_cast<double>(vol - 1);
    std::vector<double> prob(static_cast<size_t>(vol), 0.0);
    for (int64_t m = 0; m < vol; ++m)
        prob[m] = -std::expm1(-cfg.beta * static_cast<double>(m) / window);
    for (int64_t i = 0; i < n; ++i) {
        const int32_t punctured = counts[i] - state.occupied[i];
        next.occupied[i] =
            rng::u01(cfg.seed, stream, static_cast<uint64_t>(i)) < prob[punctured] ? 1 : 0;
    }
    return next;
}

namespace {

OccupancyField epidemic_cluster_level(const OccupancyField& state, const ModelConfig& cfg,
                                      int step_index) {
    const ClusterLabeling labeling = label_clusters(state);
    const uint64_t stream =
        rng::stream_id(rng::kEpidemicCluster, static_cast<uint64_t>(step_index));
    std::unordered_set<int64_t> killed;
    for (const auto& [label, size] : labeling.sizes) {
        // dies iff at least one member receives a landing
        const double kill_prob = -std::expm1(static_cast<double>(size) * std::log1p(-cfg.alpha));
        if (rng::u01(cfg.seed, stream, static_cast<uint64_t>(label)) < kill_prob)
            killed.insert(label);
    }
    OccupancyField next = state;
    const int64_t n = state.topo.n_sites();
    for (int64_t i = 0; i < n; ++i)
        if (next.occupied[i] && killed.count(labeling.label[i])) next.occupied[i] = 0;
    return next;
}

// truncated epidemic: per-site landings, spread limited to through-cluster
// distance cap from any landing site
OccupancyField epidemic_range_capped(const OccupancyField& state, const ModelConfig& cfg,
                                     int step_index) {
    const uint64_t stream =
        rng::stream_id(rng::kEpidemicLanding, static_cast<uint64_t>(step_index));
    const int64_t n = state.topo.n_sites();
    const int cap = *cfg.range_cap;
    std::vector<int32_t> dist(n, -1);
    std::vector<int64_t> queue;
    for (int64_t i = 0; i < n; ++i) {
        if (state.occupied[i] &&
            rng::u01(cfg.seed, stream, static_cast<uint64_t>(i)) < cfg.alpha) {
            dist[i] = 0;
            queue.push_back(i);
        }
    }
    for (size_t head = 0; head < queue.size(); ++head) {
        const int64_t u = queue[head];
        if (dist[u] == cap) continue;
        state.topo.for_each_neighbor(u, [&](int64_t v) {
            if (state.occupied[v] && dist[v] < 0) {
                dist[v] = dist[u] + 1;
                queue.push_back(v);
            }
        });
    }
    OccupancyField next = state;
    for (int64_t i = 0; i < n; ++i)
        if (dist[i] >= 0) next.occupied[i] = 0;
    return next;
}

}  // namespace

OccupancyField epidemic_step(const OccupancyField& state, const ModelConfig& cfg,
                             int step_index) {
    cfg.validate(state.topo);
    if (cfg.alpha == 0.0 && !cfg.range_cap) return state;
    if (cfg.range_cap) return epidemic_range_capped(state, cfg, step_index);
    return epidemic_cluster_level(state, cfg, step_index);
}

TrajectoryRecord run(const Topology& topo, const ModelConfig& cfg, double p0, int k_max) {
    cfg.validate(topo);
    if (k_max < 0) throw std::invalid_argument("run: k_max must be >= 0");
    TrajectoryRecord rec;
    rec.seed = cfg.seed;
    OccupancyField state = init_occupancy(topo, p0, cfg.seed);
    rec.rho.push_back(state.density());
    for (int k = 1; k <= k_max; ++k) {
        state = growth_step(state, cfg, k);
        if (cfg.record_half_steps) rec.rho_half.push_back(state.density());
        state = epidemic_step(state, cfg, k);
        rec.rho.push_back(state.density());
    }
    return rec;
}

double good_site_fraction(const std::vector<double>& field, double target, double eps) {
    if (!(eps > 0.0)) throw std::invalid_argument("good_site_fraction: eps must be > 0");
    if (field.empty()) return 0.0;
    size_t good = 0;
    for (double d : field)
        if (std::abs(d - target) < eps) ++good;
    return static_cast<double>(good) / static_cast<double>(field.size());
}

std::string snapshot_pgm(const OccupancyField& state) {
    if (state.topo.kind != Topology::Kind::torus || state.topo.torus.dim != 2)
        throw std::invalid_argument("snapshot: 2-d torus required");
    const int side = state.topo.torus.side;
    std::ostringstream os;
    os << "P2\n" << side << " " << side << "\n1\n";
    for (int y = 0; y < side; ++y) {
        for (int x = 0; x < side; ++x) {
            os << static_cast<int>(state.occupied[static_cast<int64_t>(y) * side + x]);
            os << (x + 1 == side ? '\n' : ' ');
        }
    }
    return os.str();
}

std::string snapshot_rle(const OccupancyField& state) {
    if (state.topo.kind != Topology::Kind::torus || state.topo.torus.dim != 2)
        throw std::invalid_argument("snapshot: 2-d torus required");
    const int side = state.topo.torus.side;
    std::ostringstream os;
    os << "rle " << side << " " << side << "\n";
    const int64_t n = state.topo.n_sites();
    int64_t i = 0;
    while (i < n) {
        const uint8_t v = state.occupied[i];
        int64_t j = i;
        while (j < n && state.occupied[j] == v) ++j;
        os << static_cast<int>(v) << ":" << (j - i) << "\n";
        i = j;
    }
    return os.str();
}

}  // namespace epigrow::sim
