#include <array>
#include <cmath>
#include <complex>
#include <vector>

#include <catch2/catch_amalgamated.hpp>

#include "dualmeissner/rng.hpp"
#include "dualmeissner/su2.hpp"

using dm::CounterRng;
using dm::Su2;

namespace {

constexpr double kPi = 3.14159265358979323846;

// Independent oracle: expand a quaternion into its defining 2x2 complex
// matrix and multiply matrices directly.
using Mat2 = std::array<std::complex<double>, 4>;  // row major

Mat2 to_matrix(const Su2& u) {
    std::complex<double> I(0.0, 1.0);
    return Mat2{u.a0 + I * u.a3, u.a2 + I * u.a1, -u.a2 + I * u.a1, u.a0 - I * u.a3};
}

Mat2 matmul(const Mat2& a, const Mat2& b) {
    return Mat2{a[0] * b[0] + a[1] * b[2], a[0] * b[1] + a[1] * b[3],
                a[2] * b[0] + a[3] * b[2], a[2] * b[1] + a[3] * b[3]};
}

// CDF of the a0 marginal of Haar measure on SU(2): density (2/pi) sqrt(1-x^2)
double haar_a0_cdf(double x) {
    x = std::max(-1.0, std::min(1.0, x));
    return 0.5 + (x * std::sqrt(1.0 - x * x) + std::asin(x)) / kPi;
}

}  // namespace

TEST_CASE("quaternion product matches 2x2 matrix multiplication") {
    CounterRng rng(11);
    for (int k = 0; k < 200; ++k) {
        Su2 u = dm::haar_random(rng);
        Su2 v = dm::haar_random(rng);
        Mat2 direct = matmul(to_matrix(u), to_matrix(v));
        Mat2 viaq = to_matrix(u * v);
        for (int i = 0; i < 4; ++i) {
            REQUIRE(std::abs(direct[i] - viaq[i]) < 1e-14);
        }
    }
}

TEST_CASE("pauli algebra: (i s1)(i s2) = -(i s3)") {
    Su2 is1{0, 1, 0, 0};
    Su2 is2{0, 0, 1, 0};
    Su2 p = is1 * is2;
    REQUIRE(p.a0 == Catch::Approx(0.0).margin(1e-15));
    REQUIRE(p.a1 == Catch::Approx(0.0).margin(1e-15));
    REQUIRE(p.a2 == Catch::Approx(0.0).margin(1e-15));
    REQUIRE(p.a3 == Catch::Approx(-1.0).epsilon(1e-15));
}

TEST_CASE("dagger is the group inverse and matches matrix adjoint") {
    CounterRng rng(12);
    for (int k = 0; k < 100; ++k) {
        Su2 u = dm::haar_random(rng);
        Su2 id = u * dm::dagger(u);
        REQUIRE(id.a0 == Catch::Approx(1.0).margin(1e-14));
        REQUIRE(std::abs(id.a1) < 1e-14);
        REQUIRE(std::abs(id.a2) < 1e-14);
        REQUIRE(std::abs(id.a3) < 1e-14);
    }
}

TEST_CASE("re_trace of identity is 2") {
    REQUIRE(dm::re_trace(dm::su2_identity) == 2.0);
}

TEST_CASE("group closure: products of unit quaternions stay unit") {
    CounterRng rng(13);
    Su2 u = dm::su2_identity;
    for (int k = 0; k < 1000; ++k) {
        u = u * dm::haar_random(rng);
        REQUIRE(dm::norm(u) == Catch::Approx(1.0).margin(1e-12));
    }
}

TEST_CASE("exp_algebra basic values") {
    SECTION("zero maps to identity") {
        Su2 u = dm::exp_algebra(0, 0, 0);
        REQUIRE(u.a0 == 1.0);
        REQUIRE(u.a3 == 0.0);
    }
    SECTION("exp(i c s3/2) with c = 2pi is -1") {
        Su2 u = dm::exp_algebra(0, 0, 2.0 * kPi);
        REQUIRE(u.a0 == Catch::Approx(-1.0).epsilon(1e-14));
        REQUIRE(std::abs(u.a3) < 1e-14);
    }
    SECTION("exp(i c s3/2) has phase c/2 in the upper diagonal entry") {
        double c = 0.73;
        Su2 u = dm::exp_algebra(0, 0, c);
        REQUIRE(std::atan2(u.a3, u.a0) == Catch::Approx(c / 2).epsilon(1e-13));
    }
    SECTION("exp(c) * exp(-c) = 1") {
        Su2 u = dm::exp_algebra(0.3, -1.2, 0.77);
        Su2 v = dm::exp_algebra(-0.3, 1.2, -0.77);
        Su2 id = u * v;
        REQUIRE(id.a0 == Catch::Approx(1.0).margin(1e-14));
        REQUIRE(std::abs(id.a1) < 1e-14);
    }
    SECTION("result is unit norm") {
        REQUIRE(dm::norm(dm::exp_algebra(4.2, -3.3, 10.0)) ==
                Catch::Approx(1.0).margin(1e-13));
    }
}

TEST_CASE("haar_random statistics") {
    const int n = 100000;
    CounterRng rng(20250819);
    double sum_a0 = 0.0, sum_tr = 0.0;
    std::vector<double> a0s;
    a0s.reserve(n);
    for (int k = 0; k < n; ++k) {
        Su2 u = dm::haar_random(rng);
        REQUIRE(dm::norm2(u) == Catch::Approx(1.0).margin(1e-12));
        sum_a0 += u.a0;
        sum_tr += dm::re_trace(u);
        a0s.push_back(u.a0);
    }
    // mean of a0 is 0 (sigma of the mean ~ 0.0016)
    REQUIRE(std::abs(sum_a0 / n) < 0.01);
    // mean trace is 0
    REQUIRE(std::abs(sum_tr / n) < 0.02);

    // chi-squared of the a0 histogram against the exact marginal,
    // 20 equal-width bins; 1% critical value for 19 dof is 36.191
    const int nbins = 20;
    std::vector<double> counts(nbins, 0.0);
    for (double x : a0s) {
        int b = static_cast<int>((x + 1.0) / 2.0 * nbins);
        if (b == nbins) b = nbins - 1;
        counts[b] += 1.0;
    }
    double chi2 = 0.0;
    for (int b = 0; b < nbins; ++b) {
        double lo = -1.0 + 2.0 * b / nbins;
        double hi = -1.0 + 2.0 * (b + 1) / nbins;
        double expect = n * (haar_a0_cdf(hi) - haar_a0_cdf(lo));
        chi2 += (counts[b] - expect) * (counts[b] - expect) / expect;
    }
    REQUIRE(chi2 < 36.191);
}

TEST_CASE("counter rng streams are reproducible and key-sensitive") {
    CounterRng a(42, 1, 2, 3), b(42, 1, 2, 3), c(42, 1, 2, 4);
    for (int i = 0; i < 16; ++i) {
        auto x = a.next_u64();
        REQUIRE(x == b.next_u64());
        REQUIRE(x != c.next_u64());
    }
}

TEST_CASE("uniform01 lies in (0,1]") {
    CounterRng rng(7);
    for (int i = 0; i < 10000; ++i) {
        double u = rng.uniform01();
        REQUIRE(u > 0.0);
        REQUIRE(u <= 1.0);
    }
}
