#include "epigrow/tree_map.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

#include "epigrow/numerics.hpp"

namespace epigrow::tree {

namespace {

const double kLog2 = std::log(2.0);

void check_density(double p) {
    if (!(p >= 0.0 && p <= 1.0)) throw std::domain_error("density must be in [0,1]");
}

void check_beta_positive(double beta) {
    if (!(beta > 0.0)) throw std::domain_error("beta must be > 0");
}

double a0_of(double beta) { return kLog2 / beta; }

bool on_lower_piece(double p, double a0, Side side) {
    if (p < a0) return true;
    if (p > a0) return false;
    return side == Side::left;
}

Side flip(Side s) { return s == Side::left ? Side::right : Side::left; }

}  // namespace

double growth_map(double p, double beta) {
    check_density(p);
    check_beta_positive(beta);
    return -std::expm1(-beta * p);
}

double theta_binary(double p) {
    check_density(p);
    if (p <= 0.5) return 0.0;
    return 2.0 - 1.0 / p;
}

double theta_tree(double p) {
    check_density(p);
    if (p <= 0.5) return 0.0;
    const double s = 1.0 - theta_binary(p);  // = (1-p)/p
    return p * (1.0 - s * s * s);
}

double g_tree(double p) {
    check_density(p);
    if (p <= 0.5) return p;
    const double q = 1.0 - p;
    return q * q * q / (p * p);
}

double h_tree(double p, double beta) {
    return g_tree(growth_map(p, beta));
}

double d_h_tree(double p, double beta, Side side) {
    check_density(p);
    check_beta_positive(beta);
    const double a0 = a0_of(beta);
    if (on_lower_piece(p, a0, side)) return beta * std::exp(-beta * p);
    const double e = std::exp(-beta * p);
    const double q = 1.0 - e;
    return e * e * e / (q * q * q) * (-3.0 * beta + beta * e);
}

Landmarks landmarks(double beta) {
    if (!(beta >= kBetaC - 1e-12))
        throw std::invalid_argument("landmarks: beta must be >= 2 log 2");
    Landmarks lm;
    lm.beta = beta;
    lm.a0 = a0_of(beta);
    lm.a1 = h_tree(0.5, beta);
    // c = f^{-1}(a0); f increases from 0 past a0 on [0, 1/2]
    const double fhalf = growth_map(0.5, beta);
    if (fhalf <= lm.a0) {
        lm.c = 0.5;  // beta at the 2 log 2 endpoint, degenerate chain
    } else {
        lm.c = bisect([&](double x) { return growth_map(x, beta) - lm.a0; }, 0.0, 0.5);
    }
    return lm;
}

WitnessChain check_li_yorke_witness(double beta) {
    if (!(beta > kBetaC))
        throw std::invalid_argument("witness check requires beta > 2 log 2");
    const Landmarks lm = landmarks(beta);
    WitnessChain w;
    w.c = lm.c;
    w.h1 = h_tree(lm.c, beta);
    w.h2 = h_tree(w.h1, beta);
    w.h3 = h_tree(w.h2, beta);
    w.holds = (w.h3 <= w.c) && (w.c < w.h1) && (w.h1 < w.h2);
    return w;
}

PhiCheck verify_phi_inequality(double beta) {
    if (!(beta >= kBetaC - 1e-12))
        throw std::invalid_argument("phi inequality requires beta >= 2 log 2");
    const double em = std::exp(-0.5 * beta);
    const double denom = (1.0 - em) * (1.0 - em);
    const double sigma = beta * em * em * em / denom;
    PhiCheck r;
    r.phi1 = std::exp(sigma);
    r.phi2 = beta / (beta - kLog2);
    r.phi1_le_phi2 = r.phi1 <= r.phi2 + 1e-12;
    r.mid22 = 4.0 - beta / kLog2;
    r.tail_lhs = beta * sigma;
    r.tail_ok = (beta <= 1.75) || (r.tail_lhs <= kLog2 + 1e-12);
    r.holds = r.phi1_le_phi2 && r.tail_ok;
    return r;
}

double d3_abs_derivative(double p, double beta, Side side) {
    check_density(p);
    check_beta_positive(beta);
    const double a0 = a0_of(beta);
    double x = p;
    Side s = side;
    double prod = 1.0;
    for (int j = 0; j < 3; ++j) {
        if (std::abs(x - a0) < 1e-11) x = a0;  // land exactly on the kink
        const bool lower = on_lower_piece(x, a0, s);
        prod *= d_h_tree(x, beta, s);
        x = h_tree(x, beta);
        if (!lower) s = flip(s);  // decreasing piece reverses the approach side
    }
    return std::abs(prod);
}

namespace {

// preimages of t under h restricted to [a1, 1/2]; h increases on [a1, a0]
// and decreases on [a0, 1/2]
std::vector<double> preimages_in_core(double t, double beta, const Landmarks& lm) {
    std::vector<double> out;
    const double f_a1 = growth_map(lm.a1, beta);
    if (t >= f_a1 && t <= 0.5) {
        out.push_back(bisect(
            [&](double x) { return growth_map(x, beta) - t; }, lm.a1, lm.a0));
    }
    if (t >= lm.a1 && t <= 0.5) {
        out.push_back(bisect(
            [&](double x) { return h_tree(x, beta) - t; }, lm.a0, 0.5));
    }
    return out;
}

void append_unique(std::vector<double>& v, double x) {
    for (double y : v)
        if (std::abs(y - x) < 1e-12) return;
    v.push_back(x);
}

}  // namespace

D3Result d3_infimum(double beta) {
    if (!(beta > kBetaC && beta <= kScanBetaMax + 1e-12))
        throw std::invalid_argument("d3_infimum: beta out of (2 log 2, 2.6]");
    const Landmarks lm = landmarks(beta);

    // kink preimages: points whose orbit hits a0 within three steps
    std::vector<double> level = {lm.a0};
    std::vector<double> breakpoints = {lm.a0};
    for (int depth = 1; depth <= 3; ++depth) {
        std::vector<double> next;
        for (double t : level)
            for (double q : preimages_in_core(t, beta, lm)) append_unique(next, q);
        for (double q : next) append_unique(breakpoints, q);
        level = std::move(next);
    }
    std::sort(breakpoints.begin(), breakpoints.end());

    D3Result res;
    res.infimum = std::numeric_limits<double>::infinity();
    res.argmin = lm.a1;
    auto consider = [&](double p, Side s) {
        const double v = d3_abs_derivative(p, beta, s);
        if (v < res.infimum) {
            res.infimum = v;
            res.argmin = p;
        }
    };
    consider(lm.a1, Side::right);
    consider(0.5, Side::left);
    for (double p : breakpoints) {
        if (p <= lm.a1 + 1e-12 || p >= 0.5 - 1e-12) continue;
        consider(p, Side::left);
        consider(p, Side::right);
        res.breakpoints.push_back(p);
    }
    return res;
}

CertificationReport certify_expansion(double beta_lo, double beta_hi, double grid_step) {
    if (!(beta_lo > kBetaC))
        throw std::invalid_argument("certify: beta_lo must exceed 2 log 2");
    if (!(beta_hi >= beta_lo))
        throw std::invalid_argument("certify: beta_hi must be >= beta_lo");
    if (!(beta_hi <= kScanBetaMax + 1e-12))
        throw std::invalid_argument("certify: beta_hi beyond scan range 2.6");
    if (!(grid_step > 0.0))
        throw std::invalid_argument("certify: grid_step must be > 0");

    CertificationReport rep;
    rep.beta_lo = beta_lo;
    rep.beta_hi = beta_hi;
    rep.grid_step = grid_step;
    rep.scan_only = beta_hi > kCertBetaMax + 1e-12;

    std::vector<double> grid;
    if (beta_hi == beta_lo) {
        grid.push_back(beta_lo);
    } else {
        const auto n = static_cast<size_t>((beta_hi - beta_lo) / grid_step);
        grid.reserve(n + 2);
        for (size_t i = 0; i <= n; ++i) {
            const double b = beta_lo + static_cast<double>(i) * grid_step;
            if (b < beta_hi) grid.push_back(b);
        }
        grid.push_back(beta_hi);
    }

    rep.per_beta.reserve(grid.size());
    double min_inf = std::numeric_limits<double>::infinity();
    for (double b : grid) {
        const D3Result r = d3_infimum(b);
        rep.per_beta.push_back({b, r.infimum, r.argmin});
        min_inf = std::min(min_inf, r.infimum);
    }
    rep.min_infimum = min_inf;

    const double margin = (grid.size() == 1 && beta_hi == beta_lo)
                              ? min_inf
                              : min_inf - kLipschitzBound * grid_step;
    rep.certified = !rep.scan_only && margin > 1.0 + 1e-9;
    return rep;
}

}  // namespace epigrow::tree
