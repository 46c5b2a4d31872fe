/**
 * @file su2.hpp
 * @brief SU(2) group elements in the quaternion representation.
 *
 * An element is stored as the four real coefficients of
 *     U = a0*1 + i*(a1*s1 + a2*s2 + a3*s3),
 * with s1,s2,s3 the Pauli matrices, equivalently the 2x2 matrix
 *     [ a0 + i*a3   a2 + i*a1 ]
 *     [-a2 + i*a1   a0 - i*a3 ].
 * Group elements satisfy a0^2+a1^2+a2^2+a3^2 = 1.  Non-unit quaternions
 * appear as intermediate objects only (sums of staples), since the span of
 * SU(2) is closed under real linear combinations.
 */
#ifndef DUALMEISSNER_SU2_HPP
#define DUALMEISSNER_SU2_HPP

#include <cmath>

#include "dualmeissner/rng.hpp"

namespace dm {

struct Su2 {
    double a0 = 1.0, a1 = 0.0, a2 = 0.0, a3 = 0.0;
};

inline constexpr Su2 su2_identity{1.0, 0.0, 0.0, 0.0};

/// Quaternion product; matches 2x2 complex matrix multiplication.
inline Su2 operator*(const Su2& a, const Su2& b) {
    return Su2{
        a.a0 * b.a0 - a.a1 * b.a1 - a.a2 * b.a2 - a.a3 * b.a3,
        a.a0 * b.a1 + b.a0 * a.a1 - (a.a2 * b.a3 - a.a3 * b.a2),
        a.a0 * b.a2 + b.a0 * a.a2 - (a.a3 * b.a1 - a.a1 * b.a3),
        a.a0 * b.a3 + b.a0 * a.a3 - (a.a1 * b.a2 - a.a2 * b.a1),
    };
}

inline Su2 operator+(const Su2& a, const Su2& b) {
    return Su2{a.a0 + b.a0, a.a1 + b.a1, a.a2 + b.a2, a.a3 + b.a3};
}

inline Su2 operator*(double s, const Su2& a) {
    return Su2{s * a.a0, s * a.a1, s * a.a2, s * a.a3};
}

/// Hermitian conjugate == quaternion conjugate == group inverse for unit norm.
inline Su2 dagger(const Su2& a) { return Su2{a.a0, -a.a1, -a.a2, -a.a3}; }

/// Re Tr U = 2*a0 (the trace is real for any element of the SU(2) span).
inline double re_trace(const Su2& a) { return 2.0 * a.a0; }

inline double norm2(const Su2& a) {
    return a.a0 * a.a0 + a.a1 * a.a1 + a.a2 * a.a2 + a.a3 * a.a3;
}

inline double norm(const Su2& a) { return std::sqrt(norm2(a)); }

inline Su2 normalized(const Su2& a) {
    double n = norm(a);
    return (1.0 / n) * a;
}

/// exp(i c_a s_a / 2) = cos(|c|/2) + i sin(|c|/2) (c_a/|c|) s_a.
/// The algebra element is c_a T^a with T^a = s_a/2.
inline Su2 exp_algebra(double c1, double c2, double c3) {
    double c = std::sqrt(c1 * c1 + c2 * c2 + c3 * c3);
    double half = 0.5 * c;
    // sin(c/2)/c -> 1/2 as c -> 0
    double f = (c > 1e-12) ? std::sin(half) / c : 0.5 * (1.0 - half * half / 6.0);
    return Su2{std::cos(half), f * c1, f * c2, f * c3};
}

/// Haar-uniform element: 4 iid Gaussians normalized to the unit 3-sphere.
template <typename Rng>
inline Su2 haar_random(Rng& rng) {
    for (;;) {
        double g0, g1, g2, g3;
        rng.gaussian_pair(g0, g1);
        rng.gaussian_pair(g2, g3);
        Su2 u{g0, g1, g2, g3};
        double n2 = norm2(u);
        if (n2 > 1e-20) return (1.0 / std::sqrt(n2)) * u;
    }
}

}  // namespace dm

#endif
