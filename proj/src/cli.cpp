#include "epigrow/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "epigrow/dynsys.hpp"
#include "epigrow/graph.hpp"
#include "epigrow/io.hpp"
#include "epigrow/lattice_map.hpp"
#include "epigrow/percolation.hpp"
#include "epigrow/sim.hpp"
#include "epigrow/theta_table.hpp"
#include "epigrow/tree_map.hpp"

namespace epigrow {

namespace {

using nlohmann::ordered_json;

struct Timer {
    std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    }
};

void write_with_manifest(const std::string& subcommand,
                         const std::map<std::string, std::string>& params, uint64_t seed,
                         const std::vector<std::pair<std::string, std::string>>& files,
                         double duration_s) {
    io::RunManifest m;
    m.subcommand = subcommand;
    m.params = params;
    m.seed = seed;
    m.duration_s = duration_s;
    for (const auto& [path, content] : files) {
        io::write_text_file(path, content);
        m.outputs.push_back(path);
    }
    if (!files.empty()) io::write_text_file(files.front().first + ".manifest.json", m.to_json());
}

// ---- lattice map plumbing --------------------------------------------------

struct LatticeOpts {
    int dim = 2;
    int box = 128;
    long samples = 1000;
    std::string criterion = "wrapping";
    double pc = -1.0;  // negative: per-dimension default
    std::string cache_dir = "theta_cache";
    std::string table_path;
};

void add_lattice_opts(CLI::App* cmd, LatticeOpts& o) {
    cmd->add_option("--dim", o.dim, "torus dimension for the theta table");
    cmd->add_option("--box", o.box, "finite-size box side for the theta table");
    cmd->add_option("--samples", o.samples, "Monte Carlo samples per table entry");
    cmd->add_option("--criterion", o.criterion, "wrapping|boundary infinite-cluster proxy");
    cmd->add_option("--pc", o.pc, "percolation threshold estimate (default per dimension)");
    cmd->add_option("--cache-dir", o.cache_dir, "theta table cache directory");
    cmd->add_option("--table", o.table_path, "load an explicit theta table CSV");
}

double resolve_pc(const LatticeOpts& o) {
    return o.pc >= 0.0 ? o.pc : lattice::default_p_c(o.dim);
}

std::string sidecar_path(const std::string& csv_path) {
    const auto dot = csv_path.rfind('.');
    return (dot == std::string::npos ? csv_path : csv_path.substr(0, dot)) + ".json";
}

lattice::ThetaTable resolve_table(const LatticeOpts& o, uint64_t seed) {
    if (!o.table_path.empty()) {
        return lattice::ThetaTable::from_csv(io::read_text_file(o.table_path),
                                             io::read_text_file(sidecar_path(o.table_path)));
    }
    const double pc = resolve_pc(o);
    return lattice::load_or_build_theta_table(o.cache_dir, o.dim, o.box,
                                              lattice::default_p_grid(pc), o.samples,
                                              lattice::criterion_from_name(o.criterion), seed);
}

DensityMap make_tree_map(double beta) {
    if (!(beta > 0.0)) throw std::invalid_argument("beta must be > 0");
    return [beta](double p) { return tree::h_tree(p, beta); };
}

// ---- grid / config helpers --------------------------------------------------

std::vector<double> parse_range(const std::string& spec) {
    double lo = 0, hi = 0, step = 0;
    char c1 = 0, c2 = 0;
    std::istringstream is(spec);
    if (!(is >> lo >> c1 >> hi >> c2 >> step) || c1 != ':' || c2 != ':' || step <= 0.0 ||
        hi < lo)
        throw std::invalid_argument("bad range spec, expected lo:hi:step");
    std::vector<double> out;
    for (double v = lo; v <= hi + 1e-12; v += step) out.push_back(std::min(v, hi));
    if (out.empty() || out.back() < hi - 1e-12) out.push_back(hi);
    return out;
}

// flat key=value config; keys mirror the subcommand's long flags
std::vector<std::string> config_tokens(const std::string& path) {
    std::vector<std::string> tokens;
    std::istringstream is(io::read_text_file(path));
    std::string line;
    while (std::getline(is, line)) {
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos) continue;
        const auto last = line.find_last_not_of(" \t\r");
        line = line.substr(first, last - first + 1);
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("config line without '=': " + line);
        std::string key = line.substr(0, eq);
        key = key.substr(0, key.find_last_not_of(" \t") + 1);
        std::string value = line.substr(eq + 1);
        const auto vtrim = value.find_first_not_of(" \t");
        value = vtrim == std::string::npos ? "" : value.substr(vtrim);
        tokens.push_back("--" + key + "=" + value);
    }
    return tokens;
}

// config-file tokens go right after the subcommand, so explicit flags win
std::vector<std::string> merge_config(int argc, const char* const* argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    std::string config_path;
    for (size_t i = 0; i < args.size(); ++i) {
        if (args[i].rfind("--config=", 0) == 0)
            config_path = args[i].substr(9);
        else if (args[i] == "--config" && i + 1 < args.size())
            config_path = args[i + 1];
    }
    if (config_path.empty() || args.empty()) return args;
    const std::vector<std::string> extra = config_tokens(config_path);
    std::vector<std::string> merged;
    merged.push_back(args[0]);
    merged.insert(merged.end(), extra.begin(), extra.end());
    merged.insert(merged.end(), args.begin() + 1, args.end());
    return merged;
}

std::map<std::string, std::string> resolved_params(const CLI::App* cmd) {
    std::map<std::string, std::string> out;
    for (const CLI::Option* opt : cmd->get_options()) {
        if (opt->get_lnames().empty()) continue;
        const std::string name = opt->get_lnames().front();
        if (name == "help") continue;
        if (opt->count() > 0) {
            const auto& results = opt->results();
            out[name] = results.empty() ? "true" : results.back();
        }
    }
    return out;
}

// ---- subcommands -------------------------------------------------------------

struct CommonOpts {
    std::string config;
    bool long_job = false;
    int threads = 0;  // advisory; the current build runs single-threaded
};

void add_common_opts(CLI::App* cmd, CommonOpts& c) {
    cmd->add_option("--config", c.config, "flat key=value config file (flags override)");
    cmd->add_flag("--long", c.long_job, "allow long jobs");
    cmd->add_option("--threads", c.threads,
                    "advisory worker count (current build runs single-threaded)");
}

struct OrbitArgs {
    CommonOpts common;
    std::string map = "tree";
    double beta = 2.0;
    double p0 = 0.1;
    int k = 550;
    uint64_t seed = 0;
    std::string out = "orbit.csv";
    LatticeOpts lat;
};

int cmd_orbit(const OrbitArgs& a, const CLI::App* cmd) {
    Timer timer;
    DensityMap map;
    if (a.map == "tree") {
        map = make_tree_map(a.beta);
    } else if (a.map == "lattice") {
        auto params = std::make_shared<lattice::LatticeMapParams>();
        params->beta = a.beta;
        params->p_c_estimate = resolve_pc(a.lat);
        params->table = resolve_table(a.lat, a.seed);
        map = [params](double p) { return lattice::h_lattice(p, *params); };
    } else {
        throw std::invalid_argument("map must be 'tree' or 'lattice'");
    }
    const std::vector<double> values = orbit(map, a.p0, a.k);
    std::ostringstream csv;
    csv << "k,value\n";
    for (size_t k = 0; k < values.size(); ++k)
        csv << k << "," << io::format_double(values[k]) << "\n";
    write_with_manifest("orbit", resolved_params(cmd), a.seed, {{a.out, csv.str()}},
                        timer.seconds());
    return 0;
}

struct BifurcateArgs {
    CommonOpts common;
    std::string map = "tree";
    double beta_min = 1.0;
    double beta_max = 3.0;
    int n_betas = 401;
    double p0 = 0.1;
    int burn_in = 500;
    int keep = 50;
    uint64_t seed = 0;
    std::string out = "bifurcation.csv";
    LatticeOpts lat;
};

int cmd_bifurcate(const BifurcateArgs& a, const CLI::App* cmd) {
    Timer timer;
    const std::vector<double> betas = linspace(a.beta_min, a.beta_max, a.n_betas);
    std::function<DensityMap(double)> family;
    if (a.map == "lattice") {
        // one shared table; beta only scales the growth step
        auto base = std::make_shared<lattice::LatticeMapParams>();
        base->p_c_estimate = resolve_pc(a.lat);
        base->table = resolve_table(a.lat, a.seed);
        family = [base](double beta) -> DensityMap {
            auto params = std::make_shared<lattice::LatticeMapParams>(*base);
            params->beta = beta;
            return [params](double p) { return lattice::h_lattice(p, *params); };
        };
    } else if (a.map == "tree") {
        family = [](double beta) { return make_tree_map(beta); };
    } else {
        throw std::invalid_argument("map must be 'tree' or 'lattice'");
    }
    const auto points = bifurcation_scan(betas, family, a.p0, a.burn_in, a.keep);
    std::ostringstream csv;
    csv << "beta,value\n";
    for (const auto& pt : points)
        csv << io::format_double(pt.beta) << "," << io::format_double(pt.value) << "\n";
    write_with_manifest("bifurcate", resolved_params(cmd), a.seed, {{a.out, csv.str()}},
                        timer.seconds());
    return 0;
}

struct CertifyArgs {
    CommonOpts common;
    double beta_lo = tree::kBetaC + 1e-3;
    double beta_hi = tree::kCertBetaMax;
    double step = 1e-3;
    std::string out = "certification.json";
};

int cmd_certify(const CertifyArgs& a, const CLI::App* cmd) {
    Timer timer;
    if (a.step < 1e-4 && !a.common.long_job)
        throw std::invalid_argument("steps below 1e-4 are a long job; pass --long");
    if (a.common.long_job)
        std::fprintf(stderr, "certify: sweeping [%g, %g] at step %g\n", a.beta_lo, a.beta_hi,
                     a.step);
    const tree::CertificationReport rep = tree::certify_expansion(a.beta_lo, a.beta_hi, a.step);
    ordered_json j;
    j["beta_lo"] = rep.beta_lo;
    j["beta_hi"] = rep.beta_hi;
    j["grid_step"] = rep.grid_step;
    j["lipschitz_bound"] = rep.lipschitz_bound;
    j["min_infimum"] = rep.min_infimum;
    if (!rep.scan_only) j["certified"] = rep.certified;
    ordered_json arr = ordered_json::array();
    for (const auto& e : rep.per_beta)
        arr.push_back({{"beta", e.beta}, {"infimum", e.infimum}, {"argmin", e.argmin}});
    j["per_beta"] = arr;
    write_with_manifest("certify", resolved_params(cmd), 0, {{a.out, j.dump(2) + "\n"}},
                        timer.seconds());
    if (!rep.scan_only && !rep.certified) {
        std::fprintf(stderr, "certify: expansion margin does not clear 1 at this step\n");
        return 2;
    }
    return 0;
}

struct LiyorkeArgs {
    double beta = 2.0;
    std::string out;
};

int cmd_liyorke(const LiyorkeArgs& a, const CLI::App* cmd) {
    Timer timer;
    const tree::Landmarks lm = tree::landmarks(a.beta);
    const tree::WitnessChain w = tree::check_li_yorke_witness(a.beta);
    const tree::PhiCheck phi = tree::verify_phi_inequality(a.beta);
    ordered_json j;
    j["beta"] = a.beta;
    j["a0"] = lm.a0;
    j["a1"] = lm.a1;
    j["c"] = lm.c;
    j["chain"] = {{"h1", w.h1}, {"h2", w.h2}, {"h3", w.h3}};
    j["witness_holds"] = w.holds;
    j["phi1"] = phi.phi1;
    j["phi2"] = phi.phi2;
    j["phi_holds"] = phi.holds;
    const std::string text = j.dump(2) + "\n";
    if (a.out.empty())
        std::cout << text;
    else
        write_with_manifest("liyorke", resolved_params(cmd), 0, {{a.out, text}},
                            timer.seconds());
    return w.holds && phi.holds ? 0 : 2;
}

struct ThetaArgs {
    CommonOpts common;
    int dim = 2;
    int box = 128;
    long samples = 1000;
    std::string criterion = "wrapping";
    std::string grid = "default";
    double pc = -1.0;
    uint64_t seed = 0;
    std::string out = "theta.csv";
};

int cmd_theta_table(const ThetaArgs& a, const CLI::App* cmd) {
    Timer timer;
    const double pc = a.pc >= 0.0 ? a.pc : lattice::default_p_c(a.dim);
    const std::vector<double> grid =
        a.grid == "default" ? lattice::default_p_grid(pc) : parse_range(a.grid);
    if ((a.box > 256 || a.samples > 5000) && !a.common.long_job)
        throw std::invalid_argument("large theta tables are a long job; pass --long");
    lattice::ThetaTable table;
    table.dimension = a.dim;
    table.box_side = a.box;
    table.criterion = lattice::criterion_from_name(a.criterion);
    table.seed = a.seed;
    for (size_t i = 0; i < grid.size(); ++i) {
        const auto [theta, se] =
            lattice::estimate_theta(grid[i], a.dim, a.box, a.samples, table.criterion, a.seed);
        table.entries.push_back({grid[i], theta, se, a.samples});
        if (a.common.long_job)
            std::fprintf(stderr, "theta-table: %zu/%zu p=%.4f theta=%.4f\n", i + 1, grid.size(),
                         grid[i], theta);
    }
    table.validate();
    write_with_manifest(
        "theta-table", resolved_params(cmd), a.seed,
        {{a.out, table.to_csv()}, {sidecar_path(a.out), table.metadata_json()}},
        timer.seconds());
    return 0;
}

struct SimArgs {
    CommonOpts common;
    std::string topology = "torus";
    int dim = 2;
    int side = 128;
    long n_nodes = 10000;  // rrg
    double beta = 2.25;
    double alpha = 0.01;
    std::string dispersal = "global";
    int radius = 0;
    int range_cap = -1;
    double p0 = 0.1;
    int steps = 100;
    uint64_t seed = 0;
    bool record_half = false;
    std::string beta_grid;  // sweep mode
    int burn_in = 500;
    int keep = 50;
    int snapshot_at = 0;
    std::string snapshot_format = "pgm";
    std::string snapshot_out;
    int field_stats_at = 0;
    double field_target = -1.0;
    double field_eps = 0.05;
    std::string graph_out;
    std::string out = "trajectory.csv";
};

sim::ModelConfig sim_config(const SimArgs& a) {
    sim::ModelConfig cfg;
    cfg.beta = a.beta;
    cfg.alpha = a.alpha;
    if (a.dispersal == "radius") {
        cfg.dispersal = sim::Dispersal::radius;
        cfg.radius = a.radius;
    } else if (a.dispersal == "global") {
        cfg.dispersal = sim::Dispersal::global;
    } else {
        throw std::invalid_argument("dispersal must be 'global' or 'radius'");
    }
    if (a.range_cap >= 0) cfg.range_cap = a.range_cap;
    cfg.seed = a.seed;
    cfg.record_half_steps = a.record_half;
    return cfg;
}

void check_sim_budget(const SimArgs& a, int64_t sites, int64_t n_runs) {
    const auto total_steps =
        static_cast<int64_t>(a.beta_grid.empty() ? a.steps : a.burn_in + a.keep);
    if (sites * total_steps * n_runs > 500'000'000 && !a.common.long_job)
        throw std::invalid_argument("this simulation is a long job; pass --long");
}

int cmd_sim(const SimArgs& a, const CLI::App* cmd, bool snapshot_only) {
    Timer timer;
    std::optional<Graph> graph;
    Topology topo;
    if (a.topology == "rrg") {
        if (a.dispersal == "radius")
            throw std::invalid_argument("radius dispersal requires a torus");
        graph = generate_3_regular(static_cast<uint32_t>(a.n_nodes), a.seed);
        topo = Topology::make(*graph);
    } else if (a.topology == "torus") {
        topo = Topology::make(Torus{a.dim, a.side});
    } else {
        throw std::invalid_argument("topology must be 'torus' or 'rrg'");
    }
    const sim::ModelConfig cfg = sim_config(a);
    cfg.validate(topo);
    const std::string name = snapshot_only ? "snapshot" : "sim";

    std::vector<std::pair<std::string, std::string>> outputs;

    if (!a.beta_grid.empty()) {
        // sweep: one trajectory per beta, keep the post-burn-in tail
        const std::vector<double> betas = parse_range(a.beta_grid);
        check_sim_budget(a, topo.n_sites(), static_cast<int64_t>(betas.size()));
        std::ostringstream csv;
        csv << "beta,k,rho\n";
        for (double beta : betas) {
            sim::ModelConfig c = cfg;
            c.beta = beta;
            const sim::TrajectoryRecord rec = sim::run(topo, c, a.p0, a.burn_in + a.keep);
            for (int k = a.burn_in + 1; k <= a.burn_in + a.keep; ++k)
                csv << io::format_double(beta) << "," << k << ","
                    << io::format_double(rec.rho[k]) << "\n";
            if (a.common.long_job) std::fprintf(stderr, "sim: beta=%.4f done\n", beta);
        }
        outputs.emplace_back(a.out, csv.str());
        write_with_manifest(name, resolved_params(cmd), a.seed, outputs, timer.seconds());
        return 0;
    }

    check_sim_budget(a, topo.n_sites(), 1);
    OccupancyField state = sim::init_occupancy(topo, a.p0, a.seed);
    sim::TrajectoryRecord rec;
    rec.rho.push_back(state.density());
    std::string snapshot_text;
    std::string field_stats_text;
    const int snap_at = (snapshot_only && a.snapshot_at == 0) ? a.steps : a.snapshot_at;
    for (int k = 1; k <= a.steps; ++k) {
        state = sim::growth_step(state, cfg, k);
        if (cfg.record_half_steps) rec.rho_half.push_back(state.density());
        state = sim::epidemic_step(state, cfg, k);
        rec.rho.push_back(state.density());
        if (k == snap_at)
            snapshot_text = a.snapshot_format == "rle" ? sim::snapshot_rle(state)
                                                       : sim::snapshot_pgm(state);
        if (k == a.field_stats_at && cfg.dispersal == sim::Dispersal::radius) {
            const std::vector<double> field = sim::density_field(state, cfg.radius);
            double mn = 1.0, mx = 0.0, mean = 0.0;
            for (double v : field) {
                mn = std::min(mn, v);
                mx = std::max(mx, v);
                mean += v;
            }
            mean /= static_cast<double>(field.size());
            std::ostringstream fs;
            fs << "k,mean,min,max,good_fraction\n"
               << k << "," << io::format_double(mean) << "," << io::format_double(mn) << ","
               << io::format_double(mx) << ",";
            if (a.field_target >= 0.0)
                fs << io::format_double(
                    sim::good_site_fraction(field, a.field_target, a.field_eps));
            fs << "\n";
            field_stats_text = fs.str();
        }
    }

    if (!snapshot_only) {
        std::ostringstream csv;
        csv << (cfg.record_half_steps ? "k,rho,rho_half\n" : "k,rho\n");
        for (size_t k = 0; k < rec.rho.size(); ++k) {
            csv << k << "," << io::format_double(rec.rho[k]);
            if (cfg.record_half_steps) {
                csv << ",";
                if (k >= 1) csv << io::format_double(rec.rho_half[k - 1]);
            }
            csv << "\n";
        }
        outputs.emplace_back(a.out, csv.str());
    }
    if (!snapshot_text.empty()) {
        std::string path = a.snapshot_out;
        if (path.empty())
            path = snapshot_only
                       ? a.out
                       : a.out + (a.snapshot_format == "rle" ? ".snap.rle" : ".snap.pgm");
        outputs.emplace_back(path, snapshot_text);
    }
    if (!field_stats_text.empty()) outputs.emplace_back(a.out + ".field.csv", field_stats_text);
    if (!a.graph_out.empty() && graph) outputs.emplace_back(a.graph_out, graph->to_edge_list());

    write_with_manifest(name, resolved_params(cmd), a.seed, outputs, timer.seconds());
    return 0;
}

void add_sim_opts(CLI::App* cmd, SimArgs& a, bool snapshot_only) {
    add_common_opts(cmd, a.common);
    cmd->add_option("--topology", a.topology, "torus|rrg");
    cmd->add_option("--dim", a.dim, "torus dimension");
    cmd->add_option("--side", a.side, "torus side length");
    cmd->add_option("--n", a.n_nodes, "node count for rrg topology (even)");
    cmd->add_option("--beta", a.beta, "offspring mean");
    cmd->add_option("--alpha", a.alpha, "per-site infection probability");
    cmd->add_option("--dispersal", a.dispersal, "global|radius");
    cmd->add_option("--radius", a.radius, "dispersal radius (torus)");
    cmd->add_option("--range-cap", a.range_cap, "truncate epidemic spread to this distance");
    cmd->add_option("--p0", a.p0, "initial density");
    cmd->add_option("--steps", a.steps, "full growth+epidemic steps");
    cmd->add_option("--seed", a.seed, "master seed");
    cmd->add_option("--snapshot-format", a.snapshot_format, "pgm|rle");
    if (!snapshot_only) {
        cmd->add_flag("--record-half", a.record_half, "record post-growth densities");
        cmd->add_option("--beta-grid", a.beta_grid, "sweep mode: lo:hi:step");
        cmd->add_option("--burn-in", a.burn_in, "sweep mode: discarded steps");
        cmd->add_option("--keep", a.keep, "sweep mode: recorded steps per beta");
        cmd->add_option("--snapshot-at", a.snapshot_at, "emit a grid snapshot at this step");
        cmd->add_option("--snapshot-out", a.snapshot_out, "snapshot output path");
        cmd->add_option("--field-stats-at", a.field_stats_at,
                        "emit local-density stats at this step");
        cmd->add_option("--field-target", a.field_target, "good-site target density");
        cmd->add_option("--field-eps", a.field_eps, "good-site tolerance");
        cmd->add_option("--graph-out", a.graph_out, "write the rrg edge list here");
    }
    cmd->add_option("--out", a.out, "output path");
}

}  // namespace

int cli_main(int argc, const char* const* argv) {
    CLI::App app{"growth/epidemic process simulator with limiting-map analysis"};
    // config-file tokens precede command-line flags; the last value wins
    app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
    app.require_subcommand(1);

    OrbitArgs orbit_args;
    CLI::App* orbit_cmd = app.add_subcommand("orbit", "iterate a limiting density map");
    add_common_opts(orbit_cmd, orbit_args.common);
    orbit_cmd->add_option("--map", orbit_args.map, "tree|lattice");
    orbit_cmd->add_option("--beta", orbit_args.beta, "offspring mean")->required();
    orbit_cmd->add_option("--p0", orbit_args.p0, "initial density");
    orbit_cmd->add_option("--k", orbit_args.k, "iterations");
    orbit_cmd->add_option("--seed", orbit_args.seed, "seed for table sampling");
    orbit_cmd->add_option("--out", orbit_args.out, "output CSV (k,value)");
    add_lattice_opts(orbit_cmd, orbit_args.lat);

    BifurcateArgs bif_args;
    CLI::App* bif_cmd = app.add_subcommand("bifurcate", "parameter scan of orbit tails");
    add_common_opts(bif_cmd, bif_args.common);
    bif_cmd->add_option("--map", bif_args.map, "tree|lattice");
    bif_cmd->add_option("--beta-min", bif_args.beta_min, "scan start");
    bif_cmd->add_option("--beta-max", bif_args.beta_max, "scan end");
    bif_cmd->add_option("--n-betas", bif_args.n_betas, "grid size");
    bif_cmd->add_option("--p0", bif_args.p0, "initial density");
    bif_cmd->add_option("--burn-in", bif_args.burn_in, "discarded iterations");
    bif_cmd->add_option("--keep", bif_args.keep, "recorded iterations per beta");
    bif_cmd->add_option("--seed", bif_args.seed, "seed for table sampling");
    bif_cmd->add_option("--out", bif_args.out, "output CSV (beta,value)");
    add_lattice_opts(bif_cmd, bif_args.lat);

    CertifyArgs cert_args;
    CLI::App* cert_cmd =
        app.add_subcommand("certify", "uniform-expansion scan of |(h^3)'| with margin");
    add_common_opts(cert_cmd, cert_args.common);
    cert_cmd->add_option("--beta-lo", cert_args.beta_lo, "grid start (> 2 log 2)");
    cert_cmd->add_option("--beta-hi", cert_args.beta_hi,
                         "grid end (beyond 2.48: scan-only, no certificate)");
    cert_cmd->add_option("--step", cert_args.step, "grid step");
    cert_cmd->add_option("--out", cert_args.out, "certification report JSON");

    LiyorkeArgs ly_args;
    CLI::App* ly_cmd = app.add_subcommand("liyorke", "period-three witness chain at one beta");
    ly_cmd->add_option("--beta", ly_args.beta, "offspring mean (> 2 log 2)")->required();
    ly_cmd->add_option("--out", ly_args.out, "optional JSON output path");

    ThetaArgs theta_args;
    CLI::App* theta_cmd =
        app.add_subcommand("theta-table", "Monte Carlo percolation probability table");
    add_common_opts(theta_cmd, theta_args.common);
    theta_cmd->add_option("--dim", theta_args.dim, "dimension (>= 2)");
    theta_cmd->add_option("--box", theta_args.box, "finite-size box side");
    theta_cmd->add_option("--samples", theta_args.samples, "samples per entry");
    theta_cmd->add_option("--criterion", theta_args.criterion, "wrapping|boundary");
    theta_cmd->add_option("--grid", theta_args.grid, "'default' or lo:hi:step");
    theta_cmd->add_option("--pc", theta_args.pc, "threshold estimate for the default grid");
    theta_cmd->add_option("--seed", theta_args.seed, "master seed");
    theta_cmd->add_option("--out", theta_args.out, "output CSV (+ JSON sidecar)");

    SimArgs sim_args;
    CLI::App* sim_cmd = app.add_subcommand("sim", "run the growth/epidemic process");
    add_sim_opts(sim_cmd, sim_args, false);

    SimArgs snap_args;
    CLI::App* snap_cmd =
        app.add_subcommand("snapshot", "run the process and emit the occupancy grid");
    add_sim_opts(snap_cmd, snap_args, true);

    std::vector<std::string> merged;
    try {
        merged = merge_config(argc, argv);
    } catch (const io::IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    std::vector<const char*> cargs;
    cargs.push_back(argc > 0 ? argv[0] : "epigrow");
    for (const std::string& s : merged) cargs.push_back(s.c_str());

    try {
        app.parse(static_cast<int>(cargs.size()), cargs.data());
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (orbit_cmd->parsed()) return cmd_orbit(orbit_args, orbit_cmd);
        if (bif_cmd->parsed()) return cmd_bifurcate(bif_args, bif_cmd);
        if (cert_cmd->parsed()) return cmd_certify(cert_args, cert_cmd);
        if (ly_cmd->parsed()) return cmd_liyorke(ly_args, ly_cmd);
        if (theta_cmd->parsed()) return cmd_theta_table(theta_args, theta_cmd);
        if (sim_cmd->parsed()) return cmd_sim(sim_args, sim_cmd, false);
        if (snap_cmd->parsed()) return cmd_sim(snap_args, snap_cmd, true);
    } catch (const io::IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::domain_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 1;
}

}  // namespace epigrow
