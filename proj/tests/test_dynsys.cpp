#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

#include "epigrow/dynsys.hpp"
#include "epigrow/numerics.hpp"
#include "epigrow/tree_map.hpp"

using namespace epigrow;

namespace {

DensityMap tree_map(double beta) {
    return [beta](double p) { return tree::h_tree(p, beta); };
}

}  // namespace

TEST_CASE("orbit basics") {
    const auto zeros = orbit(tree_map(2.0), 0.0, 10);
    CHECK(zeros.size() == 11);
    for (double v : zeros) CHECK(v == 0.0);

    // subcritical growth decays monotonically
    const auto dec = orbit(tree_map(0.9), 0.3, 50);
    for (size_t i = 1; i < dec.size(); ++i) CHECK(dec[i] < dec[i - 1]);

    // supercritical tail trapped in [a1, 1/2]
    const double beta = 2.0 * std::log(3.0);
    const tree::Landmarks lm = tree::landmarks(beta);
    const auto tail = orbit(tree_map(beta), 0.1, 600);
    for (size_t k = 501; k <= 600; ++k) {
        CHECK(tail[k] >= lm.a1 - 1e-12);
        CHECK(tail[k] <= 0.5 + 1e-12);
    }

    CHECK_THROWS_AS(orbit(tree_map(2.0), -0.5, 5), std::domain_error);
    CHECK_THROWS_AS(orbit(tree_map(2.0), 0.5, -1), std::invalid_argument);
}

TEST_CASE("bifurcation scan of the tree family") {
    const auto family = [](double beta) { return tree_map(beta); };

    // below threshold: the kept block collapses onto the fixed point of f
    const auto fixed = bifurcation_scan({1.2}, family, 0.1, 500, 50);
    CHECK(fixed.size() == 50);
    const double pstar =
        bisect([](double p) { return 1.0 - std::exp(-1.2 * p) - p; }, 0.05, 0.999);
    for (const auto& pt : fixed) CHECK(std::abs(pt.value - pstar) < 1e-9);
    double spread = 0.0;
    for (const auto& pt : fixed)
        spread = std::max(spread, std::abs(pt.value - fixed.front().value));
    CHECK(spread < 1e-9);

    // at the threshold nothing escapes above 1/2
    const auto at_c = bifurcation_scan({tree::kBetaC}, family, 0.1, 500, 50);
    for (const auto& pt : at_c) CHECK(pt.value <= 0.5 + 1e-9);

    // chaotic regime: the kept block is genuinely spread out
    const auto wide = bifurcation_scan({2.0 * std::log(3.0)}, family, 0.1, 500, 50);
    std::set<long long> distinct;
    double lo = 1.0, hi = 0.0;
    for (const auto& pt : wide) {
        distinct.insert(static_cast<long long>(pt.value * 1e6));
        lo = std::min(lo, pt.value);
        hi = std::max(hi, pt.value);
    }
    CHECK(distinct.size() >= 10);
    CHECK(hi - lo > 0.05);

    CHECK_THROWS_AS(bifurcation_scan({2.0}, family, 0.1, -1, 50), std::invalid_argument);
    CHECK_THROWS_AS(bifurcation_scan({2.0}, family, 0.1, 500, 0), std::invalid_argument);
}

TEST_CASE("linspace") {
    const auto v = linspace(1.0, 3.0, 401);
    CHECK(v.size() == 401);
    CHECK(v.front() == 1.0);
    CHECK(std::abs(v.back() - 3.0) < 1e-12);
    CHECK(linspace(2.0, 5.0, 1).size() == 1);
}
