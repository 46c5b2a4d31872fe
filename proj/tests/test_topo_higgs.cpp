#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

#include "dualmeissner/topo_higgs.hpp"

using namespace dm;

namespace {
// benchmark compactification
constexpr double kVolume = 5.902827;
constexpr double kCs = 0.07546;
}  // namespace

TEST_CASE("e-fold count for the benchmark cell") {
    double n = efolds(kVolume, kCs);
    REQUIRE(n == Catch::Approx(117.336874).margin(5e-4));
    REQUIRE(sufficient_inflation(n));
    REQUIRE(log10_scale(n) == Catch::Approx(50.958757).margin(5e-4));
}

TEST_CASE("e-folds scale linearly in volume and inversely in sound speed") {
    double base = efolds(2.0, 0.1);
    REQUIRE(efolds(4.0, 0.1) == Catch::Approx(2.0 * base).margin(1e-12));
    REQUIRE(efolds(2.0, 0.05) == Catch::Approx(2.0 * base).margin(1e-12));
    REQUIRE(base == Catch::Approx(30.0).margin(1e-12));
    REQUIRE_FALSE(sufficient_inflation(base));
    REQUIRE(sufficient_inflation(60.0));  // boundary included
}

TEST_CASE("suppressed mass lands at the electroweak scale") {
    double m = higgs_mass_gev(kVolume, kCs);
    REQUIRE(m == Catch::Approx(126.015585).epsilon(1e-6));
    REQUIRE(m > 124.0);
    REQUIRE(m < 128.0);
}

TEST_CASE("suppression exponent is one third of the e-fold count") {
    for (double vol : {1.0, 3.7, 5.902827}) {
        for (double cs : {0.05, 0.07546, 0.3}) {
            double n = efolds(vol, cs);
            double m = higgs_mass_gev(vol, cs);
            double exponent = std::log(PhysicalConstants{}.planck_mass_gev / m);
            REQUIRE(exponent == Catch::Approx(n / 3.0).epsilon(1e-12));
            // undoing the suppression recovers the planck mass to rounding
            double undone = m * std::exp(0.5 * vol / cs);
            REQUIRE(undone == Catch::Approx(PhysicalConstants{}.planck_mass_gev).epsilon(1e-13));
        }
    }
}

TEST_CASE("planck mass conventions differ by sqrt(2 pi)") {
    double ratio = PhysicalConstants::h_based().planck_mass_gev /
                   PhysicalConstants::hbar_based().planck_mass_gev;
    REQUIRE(ratio == Catch::Approx(std::sqrt(2.0 * std::numbers::pi)).epsilon(1e-14));
    double mh = higgs_mass_gev(kVolume, kCs, PhysicalConstants::h_based());
    double mhbar = higgs_mass_gev(kVolume, kCs);
    REQUIRE(mh / mhbar == Catch::Approx(std::sqrt(2.0 * std::numbers::pi)).epsilon(1e-13));
}

TEST_CASE("mass-length trade: eight times the length halves the mass") {
    double m = 126.0, l = 2.5;
    REQUIRE(mass_at_length(m, l, 8.0 * l) == Catch::Approx(m / 2.0).epsilon(1e-14));
    REQUIRE(mass_at_length(m, l, l) == Catch::Approx(m).margin(1e-12));
    REQUIRE(mass_at_length(m, l, l / 8.0) == Catch::Approx(2.0 * m).epsilon(1e-14));
    // L^{-1/3} power law between arbitrary points
    double a = mass_at_length(m, l, 3.1 * l);
    REQUIRE(a == Catch::Approx(m * std::pow(3.1, -1.0 / 3.0)).epsilon(1e-13));
}

TEST_CASE("quartic pinch: critical points across the unfolding") {
    // well below the pinch: double well
    MorseAnalysis below = morse_critical_points(1.0, -1.0, 0.0);
    REQUIRE_FALSE(below.degenerate);
    REQUIRE(below.points.size() == 2);
    REQUIRE(below.points[0].rho == 0.0);
    REQUIRE_FALSE(below.points[0].is_minimum);
    REQUIRE(below.points[1].rho == Catch::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-14));
    REQUIRE(below.points[1].value == Catch::Approx(-0.25).epsilon(1e-14));
    REQUIRE(below.points[1].is_minimum);

    // exactly at the pinch: degenerate quartic minimum
    MorseAnalysis at = morse_critical_points(1.0, -1.0, 2.0);
    REQUIRE(at.degenerate);
    REQUIRE(at.points.size() == 1);
    REQUIRE(at.points[0].is_minimum);
    REQUIRE(at.effective_q2 == Catch::Approx(0.0).margin(1e-15));

    // above the pinch: single minimum at the origin
    MorseAnalysis above = morse_critical_points(1.0, -1.0, 4.0);
    REQUIRE_FALSE(above.degenerate);
    REQUIRE(above.points.size() == 1);
    REQUIRE(above.points[0].rho == 0.0);
    REQUIRE(above.points[0].is_minimum);
}

TEST_CASE("pinch location moves with the quadratic coefficient") {
    for (double q2 : {-3.0, -0.4}) {
        double t_star = -2.0 * q2;
        REQUIRE(morse_critical_points(2.0, q2, t_star).degenerate);
        REQUIRE(morse_critical_points(2.0, q2, t_star - 0.1).points.size() == 2);
        REQUIRE(morse_critical_points(2.0, q2, t_star + 0.1).points.size() == 1);
    }
}

TEST_CASE("off-origin minimum value follows the closed form") {
    for (double q4 : {0.5, 1.0, 3.0}) {
        for (double q : {-2.0, -0.3}) {
            MorseAnalysis m = morse_critical_points(q4, q, 0.0);
            REQUIRE(m.points.size() == 2);
            double rho = m.points[1].rho;
            // stationarity: psi'(rho) = 4 q4 rho^3 + 2 q rho = 0
            REQUIRE(4.0 * q4 * rho * rho * rho + 2.0 * q * rho ==
                    Catch::Approx(0.0).margin(1e-12));
            REQUIRE(m.points[1].value ==
                    Catch::Approx(q4 * std::pow(rho, 4) + q * rho * rho).epsilon(1e-12));
        }
    }
}

TEST_CASE("double well potential and its curvature") {
    double lambda = 0.13, v = 246.0;
    REQUIRE(higgs_potential(v, lambda, v) == 0.0);
    REQUIRE(higgs_potential(-v, lambda, v) == 0.0);
    REQUIRE(higgs_potential(0.0, lambda, v) ==
            Catch::Approx(0.25 * lambda * v * v * v * v).epsilon(1e-14));
    REQUIRE(higgs_curvature(lambda, v) == Catch::Approx(2.0 * lambda * v * v).epsilon(1e-14));
    // numerical second derivative at the minimum
    double h = 1e-3;
    double num = (higgs_potential(v + h, lambda, v) - 2.0 * higgs_potential(v, lambda, v) +
                  higgs_potential(v - h, lambda, v)) /
                 (h * h);
    REQUIRE(num == Catch::Approx(higgs_curvature(lambda, v)).epsilon(1e-4));
}

TEST_CASE("invalid inputs are rejected") {
    REQUIRE_THROWS_AS(efolds(0.0, 0.1), std::invalid_argument);
    REQUIRE_THROWS_AS(efolds(1.0, -0.1), std::invalid_argument);
    REQUIRE_THROWS_AS(higgs_mass_gev(-1.0, 0.1), std::invalid_argument);
    REQUIRE_THROWS_AS(mass_at_length(0.0, 1.0, 1.0), std::invalid_argument);
    REQUIRE_THROWS_AS(mass_at_length(1.0, 1.0, -2.0), std::invalid_argument);
    REQUIRE_THROWS_AS(morse_critical_points(0.0, 1.0, 1.0), std::invalid_argument);
    REQUIRE_THROWS_AS(morse_critical_points(-1.0, 1.0, 1.0), std::invalid_argument);
}
