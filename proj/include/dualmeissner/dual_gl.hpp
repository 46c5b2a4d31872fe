// Abelian Higgs (dual Ginzburg-Landau) vortex in cylindrical symmetry.
//
// Energy per unit length of an n-quantum flux tube, with S the condensate
// modulus and a the azimuthal gauge profile (a(0) = 0, a(inf) = 1):
//
//   sigma = 2 pi int_0^inf r dr [ (S')^2 + n^2 (1-a)^2 S^2 / r^2
//                                 + n^2 (a')^2 / (g^2 r^2) + lambda (S^2 - v^2)^2 ]
//
// Stationarity gives the coupled profile equations
//
//   S'' + S'/r - n^2 (1-a)^2 S / r^2 - 2 lambda S (S^2 - v^2) = 0
//   a'' - a'/r + g^2 S^2 (1 - a) = 0
//
// Mass scales: m_H = 2 v sqrt(lambda) (condensate), m_B = g v (gauge field),
// so coherence length 1/m_H, penetration depth 1/m_B, and the type boundary
// sits at 2 sqrt(lambda) = g.  There the functional admits a Bogomolny
// completion and sigma = 2 pi v^2 n exactly.
//
// Discretization: exponentially graded mesh, second-order stencils, damped
// Newton on the 2x2 block-tridiagonal linearization.
#ifndef DUALMEISSNER_DUAL_GL_HPP
#define DUALMEISSNER_DUAL_GL_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include "dualmeissner/errors.hpp"

namespace dm {

struct GLParameters {
    double g = 1.0;       // dual gauge coupling
    double lambda = 0.25; // quartic self-coupling
    double v = 1.0;       // condensate vacuum value
    int n = 1;            // flux quanta

    void validate() const {
        if (g <= 0.0) throw std::invalid_argument("GLParameters: g must be positive");
        if (lambda <= 0.0) throw std::invalid_argument("GLParameters: lambda must be positive");
        if (v <= 0.0) throw std::invalid_argument("GLParameters: v must be positive");
        if (n < 1) throw std::invalid_argument("GLParameters: n must be >= 1");
    }
};

struct GLScales {
    double m_higgs = 0.0;       // 2 v sqrt(lambda)
    double m_gauge = 0.0;       // g v
    double coherence_len = 0.0; // 1 / m_higgs
    double penetration_len = 0.0; // 1 / m_gauge
    bool type2 = false;         // penetration depth exceeds coherence length
    bool critical = false;      // the two lengths coincide
};

inline GLScales gl_scales(const GLParameters& p) {
    p.validate();
    GLScales s;
    s.m_higgs = 2.0 * p.v * std::sqrt(p.lambda);
    s.m_gauge = p.g * p.v;
    s.coherence_len = 1.0 / s.m_higgs;
    s.penetration_len = 1.0 / s.m_gauge;
    s.critical = std::abs(s.m_higgs - s.m_gauge) <= 1e-12 * (s.m_higgs + s.m_gauge);
    s.type2 = !s.critical && s.penetration_len > s.coherence_len;
    return s;
}

struct VortexParams {
    int nodes = 1024;
    double rmax_factor = 20.0;  // rmax = factor * max(coherence, penetration)
    double grading = 6.0;       // mesh exponent; 0 would be uniform
    int max_newton = 60;
    double tol = 1e-10;         // residual tolerance, scaled by the problem size
};

struct VortexSolution {
    GLParameters prm;
    std::vector<double> r, S, a;
    int newton_iters = 0;
    double residual = 0.0;  // final scaled max-norm
};

namespace detail {

// nonuniform 3-point first/second derivative weights (minus, center, plus)
struct Stencil {
    double c1m, c10, c1p;
    double c2m, c20, c2p;
};

inline Stencil stencil(double hm, double hp) {
    Stencil s;
    double denom = hm * hp * (hm + hp);
    s.c2p = 2.0 * hm / denom;
    s.c20 = -2.0 / (hm * hp);
    s.c2m = 2.0 * hp / denom;
    s.c1p = hm * hm / denom;
    s.c10 = (hp - hm) / (hm * hp);
    s.c1m = -hp * hp / denom;
    return s;
}

// derivative of a sampled profile at node i, one-sided at the ends
inline double deriv_at(const std::vector<double>& r, const std::vector<double>& y, int i) {
    int n = static_cast<int>(r.size());
    if (i == 0) {
        double h = r[1] - r[0];
        return (y[1] - y[0]) / h;
    }
    if (i == n - 1) {
        double h = r[n - 1] - r[n - 2];
        return (y[n - 1] - y[n - 2]) / h;
    }
    Stencil s = stencil(r[i] - r[i - 1], r[i + 1] - r[i]);
    return s.c1m * y[i - 1] + s.c10 * y[i] + s.c1p * y[i + 1];
}

struct Mat2 {
    double a = 0, b = 0, c = 0, d = 0;
};

inline Mat2 inv2(const Mat2& m) {
    double det = m.a * m.d - m.b * m.c;
    if (det == 0.0 || !std::isfinite(det))
        throw ConvergenceError("vortex solver: singular jacobian block");
    return Mat2{m.d / det, -m.b / det, -m.c / det, m.a / det};
}

inline Mat2 mul(const Mat2& x, const Mat2& y) {
    return Mat2{x.a * y.a + x.b * y.c, x.a * y.b + x.b * y.d,
                x.c * y.a + x.d * y.c, x.c * y.b + x.d * y.d};
}

inline void mulvec(const Mat2& m, const double in[2], double out[2]) {
    out[0] = m.a * in[0] + m.b * in[1];
    out[1] = m.c * in[0] + m.d * in[1];
}

}  // namespace detail

/// Exponentially graded radial mesh on [0, rmax]: r_i = rmax (e^{at} - 1)/(e^a - 1).
inline std::vector<double> vortex_mesh(int nodes, double rmax, double grading) {
    if (nodes < 8) throw std::invalid_argument("vortex_mesh: need at least 8 nodes");
    if (rmax <= 0.0) throw std::invalid_argument("vortex_mesh: rmax must be positive");
    std::vector<double> r(nodes);
    double ea = std::expm1(grading);
    for (int i = 0; i < nodes; ++i) {
        double t = static_cast<double>(i) / (nodes - 1);
        r[i] = grading == 0.0 ? rmax * t : rmax * std::expm1(grading * t) / ea;
    }
    r.back() = rmax;
    return r;
}

/// Newton solution of the vortex profile equations with Dirichlet ends
/// S(0) = a(0) = 0, S(rmax) = v, a(rmax) = 1.  Throws ConvergenceError if
/// the damped iteration cannot reach the residual tolerance.
inline VortexSolution solve_vortex(const GLParameters& prm, const VortexParams& vp = {}) {
    prm.validate();
    GLScales sc = gl_scales(prm);
    const int N = vp.nodes;
    const int M = N - 2;  // interior nodes
    if (M < 6) throw std::invalid_argument("solve_vortex: too few nodes");
    double rmax = vp.rmax_factor * std::max(sc.coherence_len, sc.penetration_len);

    VortexSolution sol;
    sol.prm = prm;
    sol.r = vortex_mesh(N, rmax, vp.grading);
    sol.S.resize(N);
    sol.a.resize(N);
    const double v = prm.v, g = prm.g, lam = prm.lambda;
    const double nn = static_cast<double>(prm.n);
    for (int i = 0; i < N; ++i) {
        double r = sol.r[i];
        sol.S[i] = v * std::pow(r / (r + sc.coherence_len), prm.n);
        double x = 0.5 * sc.m_gauge * r;
        sol.a[i] = -std::expm1(-x * x);
    }
    sol.S[0] = 0.0;
    sol.a[0] = 0.0;
    sol.S[N - 1] = v;
    sol.a[N - 1] = 1.0;

    const double scale = std::max({1.0, 4.0 * lam * v * v * v, g * g * v * v * std::max(1.0, v)});
    const double tol = vp.tol * scale;

    // magnitude = largest term-magnitude sum across nodes; a residual below
    // ~machine epsilon times that is indistinguishable from zero
    double magnitude = 1.0;
    auto residual = [&](const std::vector<double>& S, const std::vector<double>& a,
                        std::vector<double>& R) {
        double worst = 0.0, mag = 0.0;
        for (int i = 1; i <= M; ++i) {
            double r = sol.r[i];
            detail::Stencil st = detail::stencil(r - sol.r[i - 1], sol.r[i + 1] - r);
            double lapS = st.c2m * S[i - 1] + st.c20 * S[i] + st.c2p * S[i + 1];
            double dS = st.c1m * S[i - 1] + st.c10 * S[i] + st.c1p * S[i + 1];
            double lapa = st.c2m * a[i - 1] + st.c20 * a[i] + st.c2p * a[i + 1];
            double da = st.c1m * a[i - 1] + st.c10 * a[i] + st.c1p * a[i + 1];
            double one_m_a = 1.0 - a[i];
            double t1 = nn * nn * one_m_a * one_m_a * S[i] / (r * r);
            double t2 = 2.0 * lam * S[i] * (S[i] * S[i] - v * v);
            double rs = lapS + dS / r - t1 - t2;
            double ra = lapa - da / r + g * g * S[i] * S[i] * one_m_a;
            R[2 * (i - 1)] = rs;
            R[2 * (i - 1) + 1] = ra;
            worst = std::max({worst, std::abs(rs), std::abs(ra)});
            double ms = std::abs(st.c2m * S[i - 1]) + std::abs(st.c20 * S[i]) +
                        std::abs(st.c2p * S[i + 1]) + std::abs(dS / r) + std::abs(t1) +
                        std::abs(t2);
            double ma = std::abs(st.c2m * a[i - 1]) + std::abs(st.c20 * a[i]) +
                        std::abs(st.c2p * a[i + 1]) + std::abs(da / r) +
                        std::abs(g * g * S[i] * S[i] * one_m_a);
            mag = std::max({mag, ms, ma});
        }
        magnitude = mag;
        return worst;
    };

    std::vector<double> R(2 * M), Rtry(2 * M);
    std::vector<detail::Mat2> A(M + 1), B(M + 1), C(M + 1), Dinv(M + 1);
    std::vector<double> rhs(2 * (M + 1)), delta(2 * (M + 1));
    std::vector<double> Stry(N), atry(N);

    double rnorm = residual(sol.S, sol.a, R);
    auto target = [&] { return std::max(tol, 32.0 * 2.22e-16 * magnitude); };
    int it = 0;
    for (; it < vp.max_newton && rnorm > target(); ++it) {
        // assemble blocks (1-based over interior nodes)
        for (int i = 1; i <= M; ++i) {
            double r = sol.r[i];
            detail::Stencil st = detail::stencil(r - sol.r[i - 1], sol.r[i + 1] - r);
            double one_m_a = 1.0 - sol.a[i];
            B[i] = detail::Mat2{
                st.c20 + st.c10 / r - nn * nn * one_m_a * one_m_a / (r * r) -
                    2.0 * lam * (3.0 * sol.S[i] * sol.S[i] - v * v),
                2.0 * nn * nn * one_m_a * sol.S[i] / (r * r),
                2.0 * g * g * sol.S[i] * one_m_a,
                st.c20 - st.c10 / r - g * g * sol.S[i] * sol.S[i]};
            A[i] = detail::Mat2{st.c2m + st.c1m / r, 0.0, 0.0, st.c2m - st.c1m / r};
            C[i] = detail::Mat2{st.c2p + st.c1p / r, 0.0, 0.0, st.c2p - st.c1p / r};
        }
        // block Thomas: forward elimination
        for (int i = 1; i <= M; ++i) {
            detail::Mat2 D = B[i];
            double b0 = -R[2 * (i - 1)], b1 = -R[2 * (i - 1) + 1];
            if (i > 1) {
                detail::Mat2 ADi = detail::mul(A[i], Dinv[i - 1]);
                detail::Mat2 corr = detail::mul(ADi, C[i - 1]);
                D.a -= corr.a;
                D.b -= corr.b;
                D.c -= corr.c;
                D.d -= corr.d;
                double prev[2] = {rhs[2 * (i - 1)], rhs[2 * (i - 1) + 1]};
                double sub[2];
                detail::mulvec(ADi, prev, sub);
                b0 -= sub[0];
                b1 -= sub[1];
            }
            Dinv[i] = detail::inv2(D);
            rhs[2 * i] = b0;
            rhs[2 * i + 1] = b1;
        }
        // back substitution
        for (int i = M; i >= 1; --i) {
            double b[2] = {rhs[2 * i], rhs[2 * i + 1]};
            if (i < M) {
                double nxt[2] = {delta[2 * (i + 1)], delta[2 * (i + 1) + 1]};
                double sub[2];
                detail::mulvec(C[i], nxt, sub);
                b[0] -= sub[0];
                b[1] -= sub[1];
            }
            double d[2];
            detail::mulvec(Dinv[i], b, d);
            delta[2 * i] = d[0];
            delta[2 * i + 1] = d[1];
        }
        // damped update
        double step = 1.0;
        bool accepted = false;
        for (int ls = 0; ls < 40; ++ls) {
            Stry = sol.S;
            atry = sol.a;
            for (int i = 1; i <= M; ++i) {
                Stry[i] += step * delta[2 * i];
                atry[i] += step * delta[2 * i + 1];
            }
            double rtry = residual(Stry, atry, Rtry);
            if (std::isfinite(rtry) && rtry < rnorm * (1.0 - 1e-4 * step) + tol * 1e-3) {
                sol.S.swap(Stry);
                sol.a.swap(atry);
                R.swap(Rtry);
                rnorm = rtry;
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        if (!accepted) {
            if (rnorm <= 4.0 * target()) break;  // parked at the roundoff floor
            throw ConvergenceError("vortex solver: line search failed at residual " +
                                   std::to_string(rnorm));
        }
    }
    if (rnorm > 4.0 * target())
        throw ConvergenceError("vortex solver: newton iteration limit reached at residual " +
                               std::to_string(rnorm));
    sol.newton_iters = it;
    sol.residual = rnorm / scale;
    return sol;
}

/// Azimuthal magnetic field profile b(r) = n a'(r) / (g r), with the r -> 0
/// limit taken from the quadratic vanishing of a.
inline std::vector<double> b_theta_profile(const VortexSolution& s) {
    int N = static_cast<int>(s.r.size());
    std::vector<double> b(N);
    double nn = static_cast<double>(s.prm.n);
    for (int i = 1; i < N; ++i) b[i] = nn * detail::deriv_at(s.r, s.a, i) / (s.prm.g * s.r[i]);
    b[0] = 2.0 * nn * s.a[1] / (s.prm.g * s.r[1] * s.r[1]);
    return b;
}

/// Local energy per unit length per unit area (the tension integrand without
/// the 2 pi r measure).
inline std::vector<double> energy_density_profile(const VortexSolution& s) {
    int N = static_cast<int>(s.r.size());
    std::vector<double> e(N);
    double nn = static_cast<double>(s.prm.n);
    double g = s.prm.g, lam = s.prm.lambda, v = s.prm.v;
    for (int i = 0; i < N; ++i) {
        double dS = detail::deriv_at(s.r, s.S, i);
        double da = detail::deriv_at(s.r, s.a, i);
        double r = s.r[i];
        double ang = 0.0, mag = 0.0;
        if (i > 0) {
            ang = nn * nn * (1.0 - s.a[i]) * (1.0 - s.a[i]) * s.S[i] * s.S[i] / (r * r);
            mag = nn * nn * da * da / (g * g * r * r);
        } else {
            // S ~ r^n and a ~ r^2 keep both terms finite at the axis
            ang = s.prm.n == 1 ? dS * dS : 0.0;
            double curv = 2.0 * s.a[1] / (s.r[1] * s.r[1]);
            mag = nn * nn * curv * curv / (g * g);
        }
        double pot = lam * (s.S[i] * s.S[i] - v * v) * (s.S[i] * s.S[i] - v * v);
        e[i] = dS * dS + ang + mag + pot;
    }
    return e;
}

/// Winding flux 2 pi n a(rmax) / g; exactly 2 pi n / g with the Dirichlet end.
inline double flux(const VortexSolution& s) {
    return 2.0 * std::numbers::pi * s.prm.n * s.a.back() / s.prm.g;
}

/// The same flux from the field profile, int b 2 pi r dr by trapezoid.
inline double flux_quadrature(const VortexSolution& s) {
    std::vector<double> b = b_theta_profile(s);
    double acc = 0.0;
    for (std::size_t i = 1; i < s.r.size(); ++i) {
        double f0 = b[i - 1] * s.r[i - 1], f1 = b[i] * s.r[i];
        acc += 0.5 * (f0 + f1) * (s.r[i] - s.r[i - 1]);
    }
    return 2.0 * std::numbers::pi * acc;
}

/// String tension (energy per unit length) restricted to r >= r_min;
/// r_min = 0 gives the full tension.
inline double tension_tail(const VortexSolution& s, double r_min) {
    std::vector<double> e = energy_density_profile(s);
    double acc = 0.0;
    for (std::size_t i = 1; i < s.r.size(); ++i) {
        if (s.r[i] < r_min) continue;
        double r0 = std::max(s.r[i - 1], r_min);
        // linear interpolation of the integrand onto the clipped cell
        double f0 = e[i - 1] * s.r[i - 1], f1 = e[i] * s.r[i];
        if (r0 > s.r[i - 1]) {
            double t = (r0 - s.r[i - 1]) / (s.r[i] - s.r[i - 1]);
            f0 = (1.0 - t) * f0 + t * f1;
        }
        acc += 0.5 * (f0 + f1) * (s.r[i] - r0);
    }
    return 2.0 * std::numbers::pi * acc;
}

inline double string_tension(const VortexSolution& s) { return tension_tail(s, 0.0); }

struct TailFit {
    double mass = 0.0;
    double amplitude = 0.0;
    int npoints = 0;
};

namespace detail {

inline TailFit fit_exponential(const std::vector<double>& r, const std::vector<double>& y,
                               const std::string& label) {
    // least squares line through (r, y); y is the log-deviation with the
    // power-law prefactor removed, so slope = -mass
    int n = static_cast<int>(r.size());
    if (n < 8) throw std::runtime_error("tail fit (" + label + "): window too narrow");
    double sr = 0, sy = 0, srr = 0, sry = 0;
    for (int i = 0; i < n; ++i) {
        sr += r[i];
        sy += y[i];
        srr += r[i] * r[i];
        sry += r[i] * y[i];
    }
    double slope = (n * sry - sr * sy) / (n * srr - sr * sr);
    double icept = (sy - slope * sr) / n;
    TailFit f;
    f.mass = -slope;
    f.amplitude = std::exp(icept);
    f.npoints = n;
    return f;
}

}  // namespace detail

/// Decay mass of the condensate deviation: v - S ~ K0(m r) ~ e^{-m r}/sqrt(r).
inline TailFit fit_higgs_mass(const VortexSolution& s) {
    std::vector<double> rw, yw;
    for (std::size_t i = 0; i + 1 < s.r.size(); ++i) {
        double d = s.prm.v - s.S[i];
        if (d <= 1e-6 * s.prm.v || d >= 1e-3 * s.prm.v) continue;
        rw.push_back(s.r[i]);
        yw.push_back(std::log(d) + 0.5 * std::log(s.r[i]));
    }
    return detail::fit_exponential(rw, yw, "higgs");
}

/// Decay mass of the gauge deviation: 1 - a ~ r K1(m r) ~ sqrt(r) e^{-m r}.
inline TailFit fit_gauge_mass(const VortexSolution& s) {
    std::vector<double> rw, yw;
    for (std::size_t i = 0; i + 1 < s.r.size(); ++i) {
        double d = 1.0 - s.a[i];
        if (d <= 1e-6 || d >= 1e-3) continue;
        rw.push_back(s.r[i]);
        yw.push_back(std::log(d) - 0.5 * std::log(s.r[i]));
    }
    return detail::fit_exponential(rw, yw, "gauge");
}

}  // namespace dm

#endif
