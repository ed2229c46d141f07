#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numeric>
#include <stdexcept>

#include "epigrow/dynsys.hpp"
#include "epigrow/graph.hpp"
#include "epigrow/rng.hpp"
#include "epigrow/sim.hpp"
#include "epigrow/tree_map.hpp"

using namespace epigrow;
using sim::Dispersal;
using sim::ModelConfig;

namespace {

OccupancyField block_field(int side, int block) {
    OccupancyField f = OccupancyField::make(Topology::make(Torus{2, side}));
    for (int y = 0; y < block; ++y)
        for (int x = 0; x < block; ++x) f.occupied[y * side + x] = 1;
    return f;
}

std::vector<int32_t> naive_box_counts(const OccupancyField& f, int r) {
    const Torus& t = f.topo.torus;
    const int64_t n = t.n_sites();
    std::vector<int32_t> out(n, 0);
    std::vector<int> c(t.dim), w(t.dim);
    for (int64_t i = 0; i < n; ++i) {
        t.coords(i, c.data());
        // enumerate the window by odometer over offsets in [-r, r]^d
        std::vector<int> off(t.dim, -r);
        while (true) {
            for (int a = 0; a < t.dim; ++a)
                w[a] = ((c[a] + off[a]) % t.side + t.side) % t.side;
            out[i] += f.occupied[t.site_of(w.data())];
            int a = 0;
            for (; a < t.dim; ++a) {
                if (++off[a] <= r) break;
                off[a] = -r;
            }
            if (a == t.dim) break;
        }
    }
    return out;
}

}  // namespace

TEST_CASE("initial occupancy") {
    const Topology topo = Topology::make(Torus{2, 100});
    CHECK(sim::init_occupancy(topo, 0.0, 1).n_occupied() == 0);
    CHECK(sim::init_occupancy(topo, 1.0, 1).n_occupied() == 10000);
    const double rho = sim::init_occupancy(topo, 0.3, 5).density();
    CHECK(std::abs(rho - 0.3) < 3.0 * std::sqrt(0.3 * 0.7 / 10000.0));
    CHECK_THROWS_AS(sim::init_occupancy(topo, 1.5, 1), std::domain_error);
}

TEST_CASE("growth step: global dispersal") {
    ModelConfig cfg;
    cfg.beta = tree::kBetaC;
    cfg.seed = 11;

    const Topology topo = Topology::make(Torus{2, 320});  // ~1e5 sites
    const OccupancyField empty = OccupancyField::make(topo);
    CHECK(sim::growth_step(empty, cfg, 1).n_occupied() == 0);

    // at the fixed point the density reproduces itself
    const OccupancyField half = sim::init_occupancy(topo, 0.5, 3);
    const OccupancyField grown = sim::growth_step(half, cfg, 1);
    CHECK(std::abs(grown.density() - 0.5) < 0.01);

    // never exceeds f(1) = 1 - e^{-beta} (up to binomial noise)
    ModelConfig big = cfg;
    big.beta = 2.6;
    const OccupancyField full = sim::init_occupancy(topo, 1.0, 3);
    const double cap = 1.0 - std::exp(-big.beta);
    const double sigma = std::sqrt(cap * (1 - cap) / 102400.0);
    CHECK(sim::growth_step(full, big, 1).density() <= cap + 3.0 * sigma);
}

TEST_CASE("growth step: local dispersal over the punctured window") {
    ModelConfig cfg;
    cfg.beta = 2.25;
    cfg.dispersal = Dispersal::radius;
    cfg.radius = 5;
    cfg.seed = 21;

    const Topology topo = Topology::make(Torus{2, 200});
    OccupancyField full = OccupancyField::make(topo);
    for (auto& b : full.occupied) b = 1;
    // fully occupied: punctured local density is exactly 1
    const double prob = 1.0 - std::exp(-2.25);
    const double rho = sim::growth_step(full, cfg, 1).density();
    CHECK(std::abs(rho - prob) < 3.0 * std::sqrt(prob * (1 - prob) / 40000.0));

    // single occupied site: only its window (excluding itself) can be seeded
    OccupancyField lone = OccupancyField::make(topo);
    lone.occupied[0] = 1;
    const OccupancyField next = sim::growth_step(lone, cfg, 2);
    CHECK(next.occupied[0] == 0);  // the parent site itself has local density 0
    const std::vector<int32_t> counts = sim::box_counts(lone, 5);
    for (int64_t i = 0; i < 200 * 200; ++i)
        if (counts[i] == 0) CHECK(next.occupied[i] == 0);

    ModelConfig bad = cfg;
    bad.radius = 120;
    CHECK_THROWS_AS(sim::growth_step(full, bad, 1), std::invalid_argument);
    ModelConfig on_graph = cfg;
    const Graph g = generate_3_regular(8, 2);
    CHECK_THROWS_AS(sim::growth_step(OccupancyField::make(Topology::make(g)), on_graph, 1),
                    std::invalid_argument);
}

TEST_CASE("epidemic step: trivial alphas and subset property") {
    const Topology topo = Topology::make(Torus{2, 64});
    const OccupancyField f = sim::init_occupancy(topo, 0.55, 9);
    ModelConfig cfg;
    cfg.beta = 2.0;
    cfg.seed = 9;

    cfg.alpha = 0.0;
    CHECK(sim::epidemic_step(f, cfg, 1).occupied == f.occupied);
    cfg.alpha = 1.0;
    CHECK(sim::epidemic_step(f, cfg, 1).n_occupied() == 0);

    cfg.alpha = 0.07;
    const OccupancyField after = sim::epidemic_step(f, cfg, 1);
    for (size_t i = 0; i < f.occupied.size(); ++i)
        CHECK(after.occupied[i] <= f.occupied[i]);
}

TEST_CASE("epidemic step: cluster survival probability") {
    // a 10x10 block is one cluster of 100 sites
    const OccupancyField f = block_field(32, 10);
    CHECK(label_clusters(f).n_clusters() == 1);
    ModelConfig cfg;
    cfg.beta = 2.0;
    cfg.alpha = 0.01;
    cfg.seed = 77;
    const int trials = 4000;
    int survived = 0;
    for (int t = 1; t <= trials; ++t)
        if (sim::epidemic_step(f, cfg, t).n_occupied() == 100) ++survived;
    const double expect = std::pow(0.99, 100);  // ~0.366
    const double freq = static_cast<double>(survived) / trials;
    CHECK(std::abs(freq - expect) < 3.0 * std::sqrt(expect * (1 - expect) / trials));
}

TEST_CASE("cluster-level sampling matches per-site landings") {
    // same field, both epidemic implementations; per-cluster survival
    // frequencies must agree (the capped path with a huge cap spreads
    // through whole clusters)
    const Topology topo = Topology::make(Torus{2, 16});
    const OccupancyField f = sim::init_occupancy(topo, 0.5, 31);
    const ClusterLabeling lab = label_clusters(f);
    REQUIRE(lab.n_clusters() >= 3);

    ModelConfig cluster_cfg;
    cluster_cfg.beta = 2.0;
    cluster_cfg.alpha = 0.1;
    cluster_cfg.seed = 41;
    ModelConfig site_cfg = cluster_cfg;
    site_cfg.range_cap = 1 << 20;

    const int trials = 3000;
    std::map<int64_t, int> live_cluster, live_site;
    for (int t = 1; t <= trials; ++t) {
        const OccupancyField a = sim::epidemic_step(f, cluster_cfg, t);
        const OccupancyField b = sim::epidemic_step(f, site_cfg, t);
        for (const auto& [label, size] : lab.sizes) {
            if (a.occupied[label]) ++live_cluster[label];
            if (b.occupied[label]) ++live_site[label];
        }
    }
    for (const auto& [label, size] : lab.sizes) {
        const double q = std::pow(0.9, static_cast<double>(size));
        const double se = std::sqrt(std::max(q * (1 - q), 1e-4) / trials);
        const double fa = static_cast<double>(live_cluster[label]) / trials;
        const double fb = static_cast<double>(live_site[label]) / trials;
        CHECK(std::abs(fa - q) < 4.0 * se);
        CHECK(std::abs(fb - q) < 4.0 * se);
        CHECK(std::abs(fa - fb) < 4.0 * se * 1.5);
    }
}

TEST_CASE("range-capped epidemic semantics") {
    ModelConfig cfg;
    cfg.beta = 2.0;
    cfg.alpha = 1.0;
    cfg.range_cap = 0;
    cfg.seed = 3;
    const OccupancyField f = sim::init_occupancy(Topology::make(Torus{2, 32}), 0.6, 8);
    // every occupied site receives its own landing; cap 0 still kills them all
    CHECK(sim::epidemic_step(f, cfg, 1).n_occupied() == 0);

    // ring cluster: site survives iff no landing within cap along the ring
    const int side = 64;
    OccupancyField ring = OccupancyField::make(Topology::make(Torus{2, side}));
    for (int x = 0; x < side; ++x) ring.occupied[x] = 1;  // one full row
    ModelConfig rc;
    rc.beta = 2.0;
    rc.alpha = 0.05;
    rc.range_cap = 3;
    rc.seed = 19;
    const int trials = 1500;
    double mean = 0.0, m2 = 0.0;
    for (int t = 1; t <= trials; ++t) {
        const double frac = sim::epidemic_step(ring, rc, t).n_occupied() / double(side);
        mean += frac;
        m2 += frac * frac;
    }
    mean /= trials;
    const double var = m2 / trials - mean * mean;
    const double expect = std::pow(0.95, 7);  // (1-alpha)^{2 cap + 1}
    CHECK(std::abs(mean - expect) < 4.0 * std::sqrt(var / trials) + 1e-6);
}

TEST_CASE("trajectories: trivial, shape, determinism") {
    const Topology topo = Topology::make(Torus{2, 64});
    ModelConfig cfg;
    cfg.beta = 2.25;
    cfg.alpha = 0.02;
    cfg.seed = 1234;
    cfg.record_half_steps = true;

    const sim::TrajectoryRecord zero = sim::run(topo, cfg, 0.0, 8);
    CHECK(zero.rho.size() == 9);
    for (double r : zero.rho) CHECK(r == 0.0);

    const sim::TrajectoryRecord a = sim::run(topo, cfg, 0.1, 20);
    CHECK(a.rho.size() == 21);
    CHECK(a.rho_half.size() == 20);
    for (size_t k = 0; k < a.rho_half.size(); ++k) CHECK(a.rho[k + 1] <= a.rho_half[k] + 1e-15);

    const sim::TrajectoryRecord b = sim::run(topo, cfg, 0.1, 20);
    CHECK(a.rho == b.rho);
    CHECK(a.rho_half == b.rho_half);
    ModelConfig other = cfg;
    other.seed = 4321;
    CHECK(sim::run(topo, other, 0.1, 20).rho != a.rho);
}

TEST_CASE("mean-field trajectory tracks the tree map where tracking is stable") {
    // subcritical growth: the limit orbit converges to the fixed point of f
    // and small alpha only nudges it; errors contract instead of amplifying
    {
        const Graph g = generate_3_regular(20000, 606);
        ModelConfig cfg;
        cfg.beta = 1.2;
        cfg.alpha = 0.001;
        cfg.seed = 606;
        const sim::TrajectoryRecord rec = sim::run(Topology::make(g), cfg, 0.1, 8);
        const auto limit = orbit([&](double p) { return tree::h_tree(p, cfg.beta); }, 0.1, 8);
        for (int k = 0; k <= 8; ++k) CHECK(std::abs(rec.rho[k] - limit[k]) < 0.02);
    }
    // chaotic regime: the first steps still track before the expansion of the
    // map amplifies the Monte Carlo noise
    {
        const Graph g = generate_3_regular(20000, 607);
        ModelConfig cfg;
        cfg.beta = 2.0 * std::log(3.0);
        cfg.alpha = 0.001;
        cfg.seed = 607;
        const sim::TrajectoryRecord rec = sim::run(Topology::make(g), cfg, 0.1, 2);
        const auto limit = orbit([&](double p) { return tree::h_tree(p, cfg.beta); }, 0.1, 2);
        for (int k = 0; k <= 2; ++k) CHECK(std::abs(rec.rho[k] - limit[k]) < 0.02);
    }
}

TEST_CASE("epidemic survivor density matches the branching-process prediction") {
    // independent oracle: on a locally tree-like graph with product occupancy
    // at density q, the surviving density after one epidemic at infection
    // probability alpha is q z B(z)^3 with z = 1 - alpha and B the smallest
    // root of B = (1-q) + q z B^2
    const Graph g = generate_3_regular(60000, 2718);
    const Topology topo = Topology::make(g);
    for (double q : {0.35, 0.55}) {
        const OccupancyField f = sim::init_occupancy(topo, q, 2718);
        const double q_hat = f.density();
        ModelConfig cfg;
        cfg.beta = 2.0;
        cfg.alpha = 0.05;
        cfg.seed = 2718;
        const double z = 1.0 - cfg.alpha;
        const double disc = 1.0 - 4.0 * q_hat * z * (1.0 - q_hat);
        const double b = (1.0 - std::sqrt(disc)) / (2.0 * q_hat * z);
        const double predicted = q_hat * z * b * b * b;
        const double rho1 = sim::epidemic_step(f, cfg, 1).density();
        CHECK(std::abs(rho1 - predicted) < 0.015);
    }
}

TEST_CASE("density field matches the naive window sum exactly") {
    // single occupied site spreads 1/9 over its 3x3 window
    const Topology topo = Topology::make(Torus{2, 8});
    OccupancyField f = OccupancyField::make(topo);
    f.occupied[2 * 8 + 3] = 1;
    const std::vector<double> field = sim::density_field(f, 1);
    int ninths = 0, zeros = 0;
    for (double v : field) {
        if (std::abs(v - 1.0 / 9.0) < 1e-15) ++ninths;
        if (v == 0.0) ++zeros;
    }
    CHECK(ninths == 9);
    CHECK(zeros == 64 - 9);

    OccupancyField full = OccupancyField::make(topo);
    for (auto& b : full.occupied) b = 1;
    for (double v : sim::density_field(full, 2)) CHECK(v == 1.0);

    const OccupancyField rnd2 = sim::init_occupancy(Topology::make(Torus{2, 64}), 0.4, 77);
    CHECK(sim::box_counts(rnd2, 5) == naive_box_counts(rnd2, 5));
    const OccupancyField rnd3 = sim::init_occupancy(Topology::make(Torus{3, 9}), 0.35, 78);
    CHECK(sim::box_counts(rnd3, 2) == naive_box_counts(rnd3, 2));

    CHECK_THROWS_AS(sim::box_counts(rnd2, 32), std::invalid_argument);
}

TEST_CASE("good site fraction") {
    const std::vector<double> uniform(100, 0.37);
    CHECK(sim::good_site_fraction(uniform, 0.37, 0.01) == 1.0);
    CHECK(sim::good_site_fraction(uniform, 1.5, 0.05) == 0.0);
    CHECK(sim::good_site_fraction(uniform, 0.4, 0.05) == 1.0);
    CHECK_THROWS_AS(sim::good_site_fraction(uniform, 0.4, 0.0), std::invalid_argument);
}

TEST_CASE("local densities concentrate around the global density") {
    // the good-site mechanism: most radius-r windows see a density close to
    // the global one
    sim::ModelConfig cfg;
    cfg.beta = 2.25;
    cfg.alpha = 0.01;
    cfg.dispersal = sim::Dispersal::radius;
    cfg.radius = 50;
    cfg.seed = 5150;
    // while the occupancy stays subcritical the field is near-product and
    // every window sees the global density; once epidemics start carving
    // patches the spread is genuine, so only the early steps are asserted
    const Topology topo = Topology::make(Torus{2, 500});
    OccupancyField state = sim::init_occupancy(topo, 0.1, cfg.seed);
    for (int k = 1; k <= 2; ++k) {
        state = sim::growth_step(state, cfg, k);
        state = sim::epidemic_step(state, cfg, k);
        const std::vector<double> field = sim::density_field(state, cfg.radius);
        CHECK(sim::good_site_fraction(field, state.density(), 0.05) > 0.9);
    }
}

TEST_CASE("fixed-range snapshot has genuine spatial patches") {
    // long fixed-range run, then compare 30x30 block-density variance against
    // site-shuffled copies of the same grid
    sim::ModelConfig cfg;
    cfg.beta = 2.25;
    cfg.alpha = 5e-6;
    cfg.dispersal = sim::Dispersal::radius;
    cfg.radius = 5;
    cfg.seed = 6;
    const int side = 450;
    const Topology topo = Topology::make(Torus{2, side});
    OccupancyField state = sim::init_occupancy(topo, 0.1, cfg.seed);
    for (int k = 1; k <= 200; ++k) {
        state = sim::growth_step(state, cfg, k);
        state = sim::epidemic_step(state, cfg, k);
    }

    const int block = 30;
    const int nb = side / block;
    const auto block_variance = [&](const std::vector<uint8_t>& occ) {
        std::vector<double> dens(static_cast<size_t>(nb) * nb, 0.0);
        for (int y = 0; y < side; ++y)
            for (int x = 0; x < side; ++x)
                dens[(y / block) * nb + (x / block)] += occ[static_cast<int64_t>(y) * side + x];
        double mean = 0.0;
        for (double& d : dens) {
            d /= block * block;
            mean += d;
        }
        mean /= static_cast<double>(dens.size());
        double var = 0.0;
        for (double d : dens) var += (d - mean) * (d - mean);
        return var / static_cast<double>(dens.size());
    };

    const double observed = block_variance(state.occupied);
    // permutation oracle: shuffling sites kills spatial structure
    rng::Sequence rnd(99, rng::stream_id(rng::kShuffle));
    std::vector<uint8_t> shuffled = state.occupied;
    double sum = 0.0, sum2 = 0.0;
    const int reps = 60;
    for (int rep = 0; rep < reps; ++rep) {
        for (size_t i = shuffled.size() - 1; i > 0; --i)
            std::swap(shuffled[i], shuffled[rnd.next_below(i + 1)]);
        const double v = block_variance(shuffled);
        sum += v;
        sum2 += v * v;
    }
    const double shuffle_mean = sum / reps;
    const double shuffle_sd = std::sqrt(std::max(sum2 / reps - shuffle_mean * shuffle_mean, 0.0));
    CHECK(observed > shuffle_mean + 3.0 * shuffle_sd);
}

TEST_CASE("snapshots") {
    const Topology topo = Topology::make(Torus{2, 4});
    OccupancyField f = OccupancyField::make(topo);
    const std::string empty_pgm = sim::snapshot_pgm(f);
    CHECK(empty_pgm.rfind("P2\n4 4\n1\n", 0) == 0);
    CHECK(empty_pgm.find('1') != std::string::npos);  // maxval line
    for (auto& b : f.occupied) b = 1;
    const std::string full_pgm = sim::snapshot_pgm(f);
    CHECK(full_pgm.find('0') == std::string::npos);

    f.occupied[5] = 0;
    const std::string rle = sim::snapshot_rle(f);
    CHECK(rle.rfind("rle 4 4\n", 0) == 0);
    // run lengths add back up to the site count
    long total = 0;
    size_t pos = rle.find('\n') + 1;
    while (pos < rle.size()) {
        const size_t colon = rle.find(':', pos);
        const size_t end = rle.find('\n', colon);
        total += std::stol(rle.substr(colon + 1, end - colon - 1));
        pos = end + 1;
    }
    CHECK(total == 16);

    const OccupancyField d3 = OccupancyField::make(Topology::make(Torus{3, 4}));
    CHECK_THROWS_AS(sim::snapshot_pgm(d3), std::invalid_argument);
}
