#pragma once

#include <cmath>
#include <vector>

// Limiting density map for the growth/epidemic process with global dispersal
// on a random 3-regular graph. One full update is h(p) = g(f(p)) where
// f(p) = 1 - e^{-beta p} is the growth step and g removes the mass of the
// infinite percolation cluster on the 3-tree. Everything here is closed form;
// the interesting dynamics live on the trapped interval [a1, 1/2].

namespace epigrow::tree {

inline const double kBetaC = 2.0 * std::log(2.0);  // threshold for epidemics
inline constexpr double kCertBetaMax = 2.48;       // expansion certified up to here
inline constexpr double kScanBetaMax = 2.6;        // infimum scan exposed up to here
inline constexpr double kM1 = 2.48;                // bound on |dh/dp|
inline constexpr double kM2 = 49.73;               // bound on |d2h/(dbeta dp)|
inline constexpr double kLipschitzBound = 917.6;   // 3 * M1^2 * M2, rounded as pinned

double growth_map(double p, double beta);
double theta_binary(double p);
double theta_tree(double p);
double g_tree(double p);
double h_tree(double p, double beta);

// h is continuous but kinked at a0 = log(2)/beta; derivative APIs take a side.
enum class Side { left, right };
double d_h_tree(double p, double beta, Side side);

struct Landmarks {
    double beta;
    double a0;  // f(a0) = 1/2, the density whose growth image hits threshold
    double a1;  // h(1/2), lower edge of the trapped interval
    double c;   // f^{-1}(a0), solved by bisection
};
// beta >= kBetaC required (the endpoint is the degenerate a0 = a1 = c = 1/2 case)
Landmarks landmarks(double beta);

struct WitnessChain {
    bool holds;  // h3 <= c < h1 < h2
    double c;
    double h1, h2, h3;  // h(c), h^2(c), h^3(c)
};
// beta > kBetaC strictly
WitnessChain check_li_yorke_witness(double beta);

struct PhiCheck {
    double phi1;      // exp(beta e^{-3beta/2} / (1-e^{-beta/2})^2)
    double phi2;      // beta / (beta - log 2)
    bool phi1_le_phi2;
    double mid22;     // 4 - beta/log 2, the wedge used below 1.75
    double tail_lhs;  // beta^2 e^{-3beta/2} / (1-e^{-beta/2})^2
    bool tail_ok;     // tail_lhs <= log 2, binding only for beta > 1.75
    bool holds;
};
PhiCheck verify_phi_inequality(double beta);

// |(h^3)'(p)| with the requested one-sided derivative threaded through the
// chain rule (the approach side flips wherever the orbit passes a decreasing
// piece).
double d3_abs_derivative(double p, double beta, Side side);

struct D3Result {
    double infimum;
    double argmin;
    std::vector<double> breakpoints;  // kink preimages inside (a1, 1/2)
};
// beta in (kBetaC, kScanBetaMax]
D3Result d3_infimum(double beta);

struct CertEntry {
    double beta;
    double infimum;
    double argmin;
};

struct CertificationReport {
    double beta_lo = 0.0;
    double beta_hi = 0.0;
    double grid_step = 0.0;
    double lipschitz_bound = kLipschitzBound;
    double min_infimum = 0.0;
    bool scan_only = false;  // beta_hi beyond kCertBetaMax: no certificate claimed
    bool certified = false;
    std::vector<CertEntry> per_beta;
};

// Evaluates d3_infimum over a grid of step grid_step covering [beta_lo, beta_hi]
// and applies the Lipschitz-in-beta argument: certified iff every grid infimum
// minus lipschitz_bound * grid_step exceeds 1 (with 1e-9 slack absorbed into
// the threshold).
CertificationReport certify_expansion(double beta_lo, double beta_hi, double grid_step);

}  // namespace epigrow::tree
