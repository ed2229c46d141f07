#include "epigrow/theta_table.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <sstream>
#include <stdexcept>

#include "epigrow/io.hpp"
#include "epigrow/rng.hpp"

namespace epigrow::lattice {

std::string criterion_name(InfinityCriterion c) {
    return c == InfinityCriterion::wrapping ? "wrapping" : "boundary";
}

InfinityCriterion criterion_from_name(const std::string& name) {
    if (name == "wrapping") return InfinityCriterion::wrapping;
    if (name == "boundary") return InfinityCriterion::boundary;
    throw std::invalid_argument("criterion must be 'wrapping' or 'boundary'");
}

void ThetaTable::validate() const {
    if (entries.empty()) throw std::invalid_argument("theta table: no entries");
    for (size_t i = 0; i < entries.size(); ++i) {
        const ThetaEntry& e = entries[i];
        if (!(e.p >= 0.0 && e.p <= 1.0)) throw std::invalid_argument("theta table: p out of [0,1]");
        if (!(e.theta_hat >= 0.0 && e.theta_hat <= 1.0))
            throw std::invalid_argument("theta table: theta out of [0,1]");
        // theta <= p up to noise; the extra cushion keeps honest 2-sigma
        // fluctuations across a 64-entry table from tripping the check
        if (e.theta_hat > e.p + 2.0 * e.std_err + 0.01)
            throw std::invalid_argument("theta table: theta exceeds p beyond noise");
        if (i > 0 && !(entries[i - 1].p < e.p))
            throw std::invalid_argument("theta table: entries not strictly sorted by p");
    }
}

double ThetaTable::interpolate(double p) const {
    validate();
    if (!(p >= 0.0 && p <= 1.0)) throw std::domain_error("interpolate: p out of [0,1]");
    // isotonic repair (running max) over the noisy estimates
    std::vector<double> iso(entries.size());
    double running = 0.0;
    for (size_t i = 0; i < entries.size(); ++i) {
        running = std::max(running, entries[i].theta_hat);
        iso[i] = std::min(running, 1.0);
    }
    if (p <= entries.front().p) return iso.front();
    if (p >= entries.back().p) return iso.back();
    size_t hi = 1;
    while (entries[hi].p < p) ++hi;
    const double p0 = entries[hi - 1].p, p1 = entries[hi].p;
    const double t = (p - p0) / (p1 - p0);
    return iso[hi - 1] + t * (iso[hi] - iso[hi - 1]);
}

namespace {

// BFS from the origin with lazily decided occupancy; buffers reused across
// samples through epoch stamping
struct ClusterProbe {
    int dim;
    int side;
    int64_t n_sites;
    std::vector<int64_t> strides;
    std::vector<uint32_t> visit_stamp;
    std::vector<uint32_t> occ_stamp;
    std::vector<uint8_t> occ_val;
    std::vector<int32_t> disp;  // dim entries per site (wrapping mode)
    std::vector<int64_t> queue;
    uint32_t epoch = 0;

    ClusterProbe(int dim_, int side_)
        : dim(dim_), side(side_) {
        n_sites = 1;
        strides.resize(dim);
        for (int a = 0; a < dim; ++a) {
            strides[a] = n_sites;
            n_sites *= side;
        }
        visit_stamp.assign(n_sites, 0);
        occ_stamp.assign(n_sites, 0);
        occ_val.assign(n_sites, 0);
        disp.assign(static_cast<size_t>(n_sites) * dim, 0);
        queue.reserve(1024);
    }

    bool occupied(int64_t site, double p, uint64_t seed, uint64_t stream) {
        if (occ_stamp[site] != epoch) {
            occ_stamp[site] = epoch;
            occ_val[site] = rng::u01(seed, stream, static_cast<uint64_t>(site)) < p ? 1 : 0;
        }
        return occ_val[site] != 0;
    }

    // wrapping: does the origin's cluster wind around the torus?
    bool wraps(double p, uint64_t seed, uint64_t stream) {
        ++epoch;
        const int64_t origin = 0;
        if (!occupied(origin, p, seed, stream)) return false;
        queue.clear();
        queue.push_back(origin);
        visit_stamp[origin] = epoch;
        for (int a = 0; a < dim; ++a) disp[origin * dim + a] = 0;
        for (size_t head = 0; head < queue.size(); ++head) {
            const int64_t u = queue[head];
            int64_t rest = u;
            for (int a = 0; a < dim; ++a) {
                const int c = static_cast<int>(rest % side);
                rest /= side;
                for (int dir = -1; dir <= 1; dir += 2) {
                    int64_t v;
                    if (dir > 0)
                        v = (c == side - 1) ? u - strides[a] * (side - 1) : u + strides[a];
                    else
                        v = (c == 0) ? u + strides[a] * (side - 1) : u - strides[a];
                    if (!occupied(v, p, seed, stream)) continue;
                    if (visit_stamp[v] == epoch) {
                        for (int b = 0; b < dim; ++b) {
                            const int32_t expect =
                                disp[u * dim + b] + (b == a ? dir : 0);
                            if (disp[v * dim + b] != expect) return true;  // wound a cycle
                        }
                        continue;
                    }
                    visit_stamp[v] = epoch;
                    for (int b = 0; b < dim; ++b)
                        disp[v * dim + b] = disp[u * dim + b] + (b == a ? dir : 0);
                    queue.push_back(v);
                }
            }
        }
        return false;
    }

    // boundary: does the cluster of the box center touch the box boundary?
    bool touches_boundary(double p, uint64_t seed, uint64_t stream) {
        ++epoch;
        int64_t origin = 0;
        for (int a = 0; a < dim; ++a) origin += strides[a] * (side / 2);
        if (!occupied(origin, p, seed, stream)) return false;
        queue.clear();
        queue.push_back(origin);
        visit_stamp[origin] = epoch;
        for (size_t head = 0; head < queue.size(); ++head) {
            const int64_t u = queue[head];
            int64_t rest = u;
            for (int a = 0; a < dim; ++a) {
                const int c = static_cast<int>(rest % side);
                rest /= side;
                for (int dir = -1; dir <= 1; dir += 2) {
                    const int nc = c + dir;
                    if (nc < 0 || nc >= side) continue;  // no wrap in this mode
                    const int64_t v = u + strides[a] * dir;
                    if (visit_stamp[v] == epoch) continue;
                    if (!occupied(v, p, seed, stream)) continue;
                    if (nc == 0 || nc == side - 1) return true;
                    visit_stamp[v] = epoch;
                    queue.push_back(v);
                }
            }
        }
        return false;
    }
};

uint64_t p_stream(double p, uint64_t sample) {
    return rng::stream_id(rng::kTheta, sample) ^ rng::mix64(std::bit_cast<uint64_t>(p));
}

}  // namespace

std::pair<double, double> estimate_theta(double p, int dimension, int box_side,
                                         long n_samples, InfinityCriterion criterion,
                                         uint64_t seed) {
    if (!(p >= 0.0 && p <= 1.0)) throw std::domain_error("estimate_theta: p out of [0,1]");
    if (dimension < 2) throw std::invalid_argument("estimate_theta: dimension must be >= 2");
    if (box_side < 8) throw std::invalid_argument("estimate_theta: box_side must be >= 8");
    if (n_samples < 1) throw std::invalid_argument("estimate_theta: n_samples must be >= 1");

    ClusterProbe probe(dimension, box_side);
    long hits = 0;
    for (long s = 0; s < n_samples; ++s) {
        const uint64_t stream = p_stream(p, static_cast<uint64_t>(s));
        const bool inf = (criterion == InfinityCriterion::wrapping)
                             ? probe.wraps(p, seed, stream)
                             : probe.touches_boundary(p, seed, stream);
        if (inf) ++hits;
    }
    const double theta = static_cast<double>(hits) / static_cast<double>(n_samples);
    const double se = std::sqrt(theta * (1.0 - theta) / static_cast<double>(n_samples));
    return {theta, se};
}

std::vector<double> default_p_grid(double p_c) {
    std::vector<double> grid;
    for (double p = 0.0; p < p_c - 0.015; p += 0.02) grid.push_back(p);
    for (int i = 0; i <= 20; ++i) grid.push_back(p_c + 0.005 * i);
    const double fine_end = p_c + 0.1;
    for (double p = 0.02 * std::ceil((fine_end + 0.015) / 0.02); p < 0.969; p += 0.02)
        grid.push_back(p);
    grid.push_back(1.0);
    std::sort(grid.begin(), grid.end());
    return grid;
}

ThetaTable build_theta_table(int dimension, int box_side, const std::vector<double>& grid,
                             long n_samples, InfinityCriterion criterion, uint64_t seed) {
    if (grid.empty()) throw std::invalid_argument("build_theta_table: empty grid");
    ThetaTable t;
    t.dimension = dimension;
    t.box_side = box_side;
    t.criterion = criterion;
    t.seed = seed;
    t.entries.reserve(grid.size());
    for (double p : grid) {
        const auto [theta, se] = estimate_theta(p, dimension, box_side, n_samples,
                                                criterion, seed);
        t.entries.push_back({p, theta, se, n_samples});
    }
    t.validate();
    return t;
}

std::string ThetaTable::to_csv() const {
    std::ostringstream os;
    os << "p,theta_hat,std_err,n_samples\n";
    for (const ThetaEntry& e : entries)
        os << io::format_double(e.p) << "," << io::format_double(e.theta_hat) << ","
           << io::format_double(e.std_err) << "," << e.n_samples << "\n";
    return os.str();
}

std::string ThetaTable::metadata_json() const {
    std::ostringstream os;
    os << "{\"dimension\":" << dimension << ",\"box_side\":" << box_side
       << ",\"criterion\":\"" << criterion_name(criterion) << "\",\"seed\":" << seed
       << "}\n";
    return os.str();
}

ThetaTable ThetaTable::from_csv(const std::string& csv, const std::string& metadata) {
    ThetaTable t;
    {
        // minimal json pull; the sidecar is flat
        auto grab = [&](const std::string& key) -> std::string {
            const auto pos = metadata.find("\"" + key + "\":");
            if (pos == std::string::npos)
                throw std::runtime_error("theta metadata: missing " + key);
            size_t start = pos + key.size() + 3;
            if (start >= metadata.size())
                throw std::runtime_error("theta metadata: truncated " + key);
            if (metadata[start] == '"') {
                const size_t end = metadata.find('"', start + 1);
                return metadata.substr(start + 1, end - start - 1);
            }
            size_t end = start;
            while (end < metadata.size() && metadata[end] != ',' && metadata[end] != '}') ++end;
            return metadata.substr(start, end - start);
        };
        t.dimension = std::stoi(grab("dimension"));
        t.box_side = std::stoi(grab("box_side"));
        t.criterion = criterion_from_name(grab("criterion"));
        t.seed = std::stoull(grab("seed"));
    }
    std::istringstream is(csv);
    std::string line;
    if (!std::getline(is, line) || line.rfind("p,theta_hat,std_err,n_samples", 0) != 0)
        throw std::runtime_error("theta csv: bad header");
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        ThetaEntry e;
        char* end = nullptr;
        const char* s = line.c_str();
        e.p = std::strtod(s, &end);
        if (*end != ',') throw std::runtime_error("theta csv: bad row");
        e.theta_hat = std::strtod(end + 1, &end);
        if (*end != ',') throw std::runtime_error("theta csv: bad row");
        e.std_err = std::strtod(end + 1, &end);
        if (*end != ',') throw std::runtime_error("theta csv: bad row");
        e.n_samples = std::strtol(end + 1, &end, 10);
        t.entries.push_back(e);
    }
    t.validate();
    return t;
}

ThetaTable load_or_build_theta_table(const std::string& cache_dir, int dimension,
                                     int box_side, const std::vector<double>& grid,
                                     long n_samples, InfinityCriterion criterion,
                                     uint64_t seed, bool* from_cache) {
    namespace fs = std::filesystem;
    uint64_t key = rng::mix64(static_cast<uint64_t>(dimension) * 31 + box_side);
    key = rng::mix64(key ^ static_cast<uint64_t>(n_samples));
    key = rng::mix64(key ^ seed);
    key = rng::mix64(key ^ (criterion == InfinityCriterion::wrapping ? 1u : 2u));
    for (double p : grid) key = rng::mix64(key ^ std::bit_cast<uint64_t>(p));
    char name[64];
    std::snprintf(name, sizeof(name), "theta_%016llx",
                  static_cast<unsigned long long>(key));
    fs::create_directories(cache_dir);
    const fs::path csv_path = fs::path(cache_dir) / (std::string(name) + ".csv");
    const fs::path meta_path = fs::path(cache_dir) / (std::string(name) + ".json");

    if (fs::exists(csv_path) && fs::exists(meta_path)) {
        ThetaTable t = ThetaTable::from_csv(io::read_text_file(csv_path.string()),
                                            io::read_text_file(meta_path.string()));
        if (t.dimension == dimension && t.box_side == box_side && t.seed == seed &&
            t.criterion == criterion && t.entries.size() == grid.size()) {
            if (from_cache) *from_cache = true;
            return t;
        }
    }
    ThetaTable t = build_theta_table(dimension, box_side, grid, n_samples, criterion, seed);
    io::write_text_file(csv_path.string(), t.to_csv());
    io::write_text_file(meta_path.string(), t.metadata_json());
    if (from_cache) *from_cache = false;
    return t;
}

SlopeDiagnostic theta_slope_diagnostic(const ThetaTable& table, double p_c_estimate) {
    table.validate();
    std::vector<const ThetaEntry*> above;
    for (const ThetaEntry& e : table.entries)
        if (e.p > p_c_estimate) above.push_back(&e);
    if (above.size() < 3)
        throw std::invalid_argument("theta_slope_diagnostic: need >= 3 entries above p_c");
    // slopes of the isotonic-repaired estimates, matching the interpolant
    std::vector<double> iso(above.size());
    double running = 0.0;
    for (size_t i = 0; i < above.size(); ++i) {
        running = std::max(running, above[i]->theta_hat);
        iso[i] = running;
    }
    SlopeDiagnostic d;
    for (size_t i = 0; i + 1 < above.size(); ++i) {
        const double dp = above[i + 1]->p - above[i]->p;
        d.slopes.push_back({above[i]->p, (iso[i + 1] - iso[i]) / dp});
    }
    d.steepening_toward_pc = d.slopes.front().slope > d.slopes.back().slope;
    return d;
}

}  // namespace epigrow::lattice
