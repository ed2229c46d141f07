#include "epigrow/graph.hpp"

#include <algorithm>
#include <queue>
#include <set>
#include <sstream>
#include <stdexcept>

#include "epigrow/rng.hpp"

namespace epigrow {

namespace {

// one uniform pairing of the 3n half-edges; false if non-simple
bool try_pairing(uint32_t n, rng::Sequence& rnd, std::vector<std::array<uint32_t, 3>>& adj) {
    const size_t m = 3ull * n;
    std::vector<uint32_t> stubs(m);
    for (size_t i = 0; i < m; ++i) stubs[i] = static_cast<uint32_t>(i / 3);
    // Fisher-Yates, then pair consecutive entries
    for (size_t i = m - 1; i > 0; --i) {
        const size_t j = rnd.next_below(i + 1);
        std::swap(stubs[i], stubs[j]);
    }
    adj.assign(n, {0, 0, 0});
    std::vector<int> deg(n, 0);
    for (size_t i = 0; i < m; i += 2) {
        const uint32_t u = stubs[i];
        const uint32_t v = stubs[i + 1];
        if (u == v) return false;  // self-loop
        for (int k = 0; k < deg[u]; ++k)
            if (adj[u][k] == v) return false;  // parallel edge
        adj[u][deg[u]++] = v;
        adj[v][deg[v]++] = u;
    }
    return true;
}

bool is_connected(const std::vector<std::array<uint32_t, 3>>& adj) {
    const auto n = static_cast<uint32_t>(adj.size());
    if (n == 0) return false;
    std::vector<uint8_t> seen(n, 0);
    std::vector<uint32_t> stack = {0};
    seen[0] = 1;
    uint32_t count = 1;
    while (!stack.empty()) {
        const uint32_t u = stack.back();
        stack.pop_back();
        for (uint32_t v : adj[u]) {
            if (!seen[v]) {
                seen[v] = 1;
                ++count;
                stack.push_back(v);
            }
        }
    }
    return count == n;
}

}  // namespace

Graph generate_3_regular(uint32_t n, uint64_t seed, int max_attempts) {
    if (n < 4 || n % 2 != 0)
        throw std::invalid_argument("generate_3_regular: n must be even and >= 4");
    Graph g;
    g.seed = seed;
    for (int attempt = 1; attempt <= max_attempts; ++attempt) {
        rng::Sequence rnd(seed, rng::stream_id(rng::kGraphGen, static_cast<uint64_t>(attempt)));
        if (!try_pairing(n, rnd, g.adj)) continue;
        if (!is_connected(g.adj)) continue;
        g.attempts = attempt;
        return g;
    }
    throw std::runtime_error("generate_3_regular: retry budget exhausted");
}

void Graph::validate() const {
    const uint32_t nn = n();
    if (nn < 4 || nn % 2 != 0) throw std::runtime_error("graph: bad node count");
    for (uint32_t u = 0; u < nn; ++u) {
        std::set<uint32_t> nb;
        for (uint32_t v : adj[u]) {
            if (v >= nn) throw std::runtime_error("graph: neighbor out of range");
            if (v == u) throw std::runtime_error("graph: self-loop");
            nb.insert(v);
            // symmetry
            const auto& back = adj[v];
            if (std::count(back.begin(), back.end(), u) != 1)
                throw std::runtime_error("graph: asymmetric or parallel edge");
        }
        if (nb.size() != 3) throw std::runtime_error("graph: degree != 3");
    }
    if (!is_connected(adj)) throw std::runtime_error("graph: not connected");
}

std::string Graph::to_edge_list() const {
    std::ostringstream os;
    os << "n=" << n() << " d=3 seed=" << seed << "\n";
    for (uint32_t u = 0; u < n(); ++u) {
        std::array<uint32_t, 3> nb = adj[u];
        std::sort(nb.begin(), nb.end());
        for (uint32_t v : nb)
            if (u < v) os << u << " " << v << "\n";
    }
    return os.str();
}

std::vector<uint32_t> ball(const Graph& g, uint32_t i, int radius) {
    if (i >= g.n()) throw std::out_of_range("ball: node index out of range");
    if (radius < 0) throw std::invalid_argument("ball: radius must be >= 0");
    std::vector<int> dist(g.n(), -1);
    std::vector<uint32_t> out = {i};
    dist[i] = 0;
    std::queue<uint32_t> q;
    q.push(i);
    while (!q.empty()) {
        const uint32_t u = q.front();
        q.pop();
        if (dist[u] == radius) continue;
        for (uint32_t v : g.adj[u]) {
            if (dist[v] < 0) {
                dist[v] = dist[u] + 1;
                out.push_back(v);
                q.push(v);
            }
        }
    }
    return out;
}

namespace {

// BFS scratch reused across many ball queries; stamps avoid O(n) clears
struct BallScratch {
    std::vector<uint32_t> stamp;
    std::vector<int> dist;
    std::vector<uint32_t> parent;
    std::vector<uint32_t> queue;
    uint32_t epoch = 0;

    explicit BallScratch(uint32_t n) : stamp(n, 0), dist(n), parent(n), queue() {}

    bool tree_ball(const Graph& g, uint32_t i, int radius) {
        ++epoch;
        queue.clear();
        queue.push_back(i);
        stamp[i] = epoch;
        dist[i] = 0;
        parent[i] = i;
        for (size_t head = 0; head < queue.size(); ++head) {
            const uint32_t u = queue[head];
            for (uint32_t v : g.adj[u]) {
                if (stamp[v] == epoch) {
                    if (v != parent[u] && u != parent[v]) return false;
                    continue;
                }
                if (dist[u] < radius) {
                    stamp[v] = epoch;
                    dist[v] = dist[u] + 1;
                    parent[v] = u;
                    queue.push_back(v);
                }
            }
        }
        return true;
    }
};

}  // namespace

bool ball_is_tree(const Graph& g, uint32_t i, int radius) {
    if (i >= g.n()) throw std::out_of_range("ball_is_tree: node index out of range");
    if (radius < 0) throw std::invalid_argument("ball_is_tree: radius must be >= 0");
    BallScratch scratch(g.n());
    return scratch.tree_ball(g, i, radius);
}

double local_tree_fraction(const Graph& g, int radius) {
    if (radius < 1) throw std::invalid_argument("local_tree_fraction: radius must be >= 1");
    BallScratch scratch(g.n());
    uint64_t good = 0;
    for (uint32_t i = 0; i < g.n(); ++i)
        if (scratch.tree_ball(g, i, radius)) ++good;
    return static_cast<double>(good) / static_cast<double>(g.n());
}

}  // namespace epigrow
