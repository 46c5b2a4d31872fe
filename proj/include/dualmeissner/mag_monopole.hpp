// Maximal abelian gauge fixing, abelian projection, and monopole currents.
//
// mag_fix maximizes R[U] = sum_links (1/2) Tr(s3 U s3 U^+) by local gauge
// rotations.  Writing the site-local part as Tr[(g^+ s3 g) X] with
// X = sum_mu [U_mu(x) s3 U_mu(x)^+ + U_mu(x-mu)^+ s3 U_mu(x-mu)] = x_vec . s,
// the optimum rotates x_vec onto e3.  Overrelaxation scales the rotation
// angle by omega in (0,2); each site update is then still non-decreasing in
// the functional, since |1-omega| < 1 shrinks the angle to the maximum.
//
// After projection the plaquette angle splits as f = fbar + 2 pi n with
// fbar in (-pi, pi], and the integer monopole current on the dual lattice is
// k_mu = (1/2) eps_{mu nu rho sigma} (n_{rho sigma}(x+nu) - n_{rho sigma}(x)),
// an exactly conserved integer field (DeGrand-Toussaint counting).
#ifndef DUALMEISSNER_MAG_MONOPOLE_HPP
#define DUALMEISSNER_MAG_MONOPOLE_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "dualmeissner/lattice_mc.hpp"
#include "dualmeissner/su2.hpp"

namespace dm {

/// Per-link gauge functional value in [0, 1]:
/// (1/2)Tr(s3 U s3 U^+) = a0^2 - a1^2 - a2^2 + a3^2, mapped to (a0^2 + a3^2).
inline double mag_link_value(const Su2& u) {
    return u.a0 * u.a0 + u.a3 * u.a3;
}

/// Mean of the per-link functional over all links.
inline double mag_functional(const GaugeField& f) {
    double acc = 0.0;
    for (const Su2& u : f.u) acc += mag_link_value(u);
    return acc / static_cast<double>(f.u.size());
}

struct MagParams {
    double omega = 1.7;   // overrelaxation angle multiplier, in (0, 2)
    double tol = 1e-7;    // convergence: max site rotation angle below tol
    int max_iter = 5000;
};

struct MagReport {
    double functional = 0.0;
    int iterations = 0;
    bool converged = false;
    double final_delta = 0.0;            // last sweep's max rotation angle
    std::vector<double> history;         // functional after each sweep
};

namespace detail {

// 3-vector x with X = sum_mu [U s3 U^+ + W^+ s3 W] = x . sigma
inline void mag_local_vector(const GaugeField& f, int s, double x[3]) {
    x[0] = x[1] = x[2] = 0.0;
    const Su2 e3q{0.0, 0.0, 0.0, 1.0};
    for (int mu = 0; mu < 4; ++mu) {
        const Su2& u = f.link(s, mu);
        Su2 a = u * e3q * dagger(u);
        const Su2& w = f.link(f.lat.dn(s, mu), mu);
        Su2 b = dagger(w) * e3q * w;
        x[0] += a.a1 + b.a1;
        x[1] += a.a2 + b.a2;
        x[2] += a.a3 + b.a3;
    }
}

}  // namespace detail

/// Iteratively gauge-rotate toward the maximal abelian gauge.  Returns a
/// report; report.converged is false if max_iter sweeps did not reach tol
/// (no exception: the caller decides whether that is fatal).
inline MagReport mag_fix(GaugeField& f, const MagParams& p = {}) {
    if (p.omega <= 0.0 || p.omega >= 2.0)
        throw std::invalid_argument("mag_fix: omega must lie in (0, 2)");
    MagReport rep;
    rep.history.reserve(64);
    const int vol = f.lat.volume();
    for (int it = 0; it < p.max_iter; ++it) {
        double max_angle = 0.0;
        for (int par = 0; par < 2; ++par) {
            for (int s = 0; s < vol; ++s) {
                if (f.lat.parity(s) != par) continue;
                double x[3];
                detail::mag_local_vector(f, s, x);
                double nrm = std::sqrt(x[0] * x[0] + x[1] * x[1] + x[2] * x[2]);
                if (nrm < 1e-14) continue;  // no preferred direction
                double perp = std::sqrt(x[0] * x[0] + x[1] * x[1]);
                double psi = std::atan2(perp, x[2]);  // angle from e3
                if (psi > max_angle) max_angle = psi;
                if (psi < 1e-15) continue;
                // rotation axis e3 x xhat; for x antiparallel to e3 any
                // perpendicular axis works
                double ex, ey;
                if (perp > 1e-14 * nrm) {
                    ex = -x[1] / perp;
                    ey = x[0] / perp;
                } else {
                    ex = 1.0;
                    ey = 0.0;
                }
                double half = 0.5 * p.omega * psi;
                Su2 g{std::cos(half), std::sin(half) * ex, std::sin(half) * ey, 0.0};
                Su2 gd = dagger(g);
                for (int mu = 0; mu < 4; ++mu) {
                    f.link(s, mu) = g * f.link(s, mu);
                    int sd = f.lat.dn(s, mu);
                    f.link(sd, mu) = f.link(sd, mu) * gd;
                }
            }
        }
        rep.history.push_back(mag_functional(f));
        rep.final_delta = max_angle;
        rep.iterations = it + 1;
        if (max_angle < p.tol) {
            rep.converged = true;
            break;
        }
    }
    if (rep.history.empty()) rep.history.push_back(mag_functional(f));
    rep.functional = rep.history.back();
    return rep;
}

/// Compact U(1) field of link angles theta in (-pi, pi].
struct AbelianField {
    Lattice lat;
    std::vector<double> theta;  // [site*4 + mu]

    double th(int s, int mu) const { return theta[static_cast<std::size_t>(s) * 4 + mu]; }
    double& th(int s, int mu) { return theta[static_cast<std::size_t>(s) * 4 + mu]; }
};

/// Diagonal phase of each link: theta = arg(a0 + i a3), the phase of the
/// upper-diagonal matrix entry.  Residual U(1) transforms shift theta by a
/// lattice gradient.
inline AbelianField abelian_project(const GaugeField& f) {
    AbelianField a;
    a.lat = f.lat;
    a.theta.resize(f.u.size());
    for (std::size_t i = 0; i < f.u.size(); ++i) {
        double t = std::atan2(f.u[i].a3, f.u[i].a0);
        if (t <= -std::numbers::pi) t = std::numbers::pi;  // atan2 returns -pi only for (-0.0, x<0)
        a.theta[i] = t;
    }
    return a;
}

/// Split of a plaquette angle f in (-4pi, 4pi) into f = fbar + 2 pi n with
/// fbar in (-pi, pi] and integer n in [-2, 2].
struct PlaquetteSplit {
    double fbar;
    int n;
};

inline PlaquetteSplit decompose_angle(double f) {
    int n = static_cast<int>(std::ceil((f - std::numbers::pi) / (2.0 * std::numbers::pi)));
    double fbar = f - 2.0 * std::numbers::pi * n;
    // guard rounding at the branch points
    if (fbar > std::numbers::pi) { fbar -= 2.0 * std::numbers::pi; ++n; }
    if (fbar <= -std::numbers::pi) { fbar += 2.0 * std::numbers::pi; --n; }
    return PlaquetteSplit{fbar, n};
}

/// Oriented plaquette angle theta_mu(x) + theta_nu(x+mu) - theta_mu(x+nu) - theta_nu(x).
inline double abelian_plaquette(const AbelianField& a, int s, int mu, int nu) {
    return a.th(s, mu) + a.th(a.lat.up(s, mu), nu) - a.th(a.lat.up(s, nu), mu) -
           a.th(s, nu);
}

/// 4d Levi-Civita symbol with eps(0,1,2,3) = +1.
inline constexpr int eps4(int i, int j, int k, int l) {
    return (j - i) * (k - i) * (l - i) * (k - j) * (l - j) * (l - k) / 12;
}

/// Integer monopole currents on the dual lattice.
struct MonopoleField {
    Lattice lat;
    std::vector<std::int16_t> k;  // [site*4 + mu]

    int at(int s, int mu) const { return k[static_cast<std::size_t>(s) * 4 + mu]; }
};

inline MonopoleField monopole_currents(const AbelianField& a) {
    const int vol = a.lat.volume();
    // integer plaquette wrap counts n_{mu nu}, stored for mu < nu
    auto plane = [](int mu, int nu) {  // {01,02,03,12,13,23} -> 0..5
        static constexpr int tab[4][4] = {{-1, 0, 1, 2}, {0, -1, 3, 4}, {1, 3, -1, 5}, {2, 4, 5, -1}};
        return tab[mu][nu];
    };
    std::vector<std::int8_t> n(static_cast<std::size_t>(vol) * 6);
    for (int s = 0; s < vol; ++s)
        for (int mu = 0; mu < 4; ++mu)
            for (int nu = mu + 1; nu < 4; ++nu)
                n[static_cast<std::size_t>(s) * 6 + plane(mu, nu)] =
                    static_cast<std::int8_t>(decompose_angle(abelian_plaquette(a, s, mu, nu)).n);

    auto nval = [&](int s, int mu, int nu) -> int {
        if (mu == nu) return 0;
        int sgn = 1;
        if (mu > nu) { std::swap(mu, nu); sgn = -1; }
        return sgn * n[static_cast<std::size_t>(s) * 6 + plane(mu, nu)];
    };

    MonopoleField m;
    m.lat = a.lat;
    m.k.assign(static_cast<std::size_t>(vol) * 4, 0);
    for (int s = 0; s < vol; ++s) {
        for (int mu = 0; mu < 4; ++mu) {
            int acc = 0;
            for (int nu = 0; nu < 4; ++nu) {
                if (nu == mu) continue;
                for (int r = 0; r < 4; ++r)
                    for (int sg = 0; sg < 4; ++sg) {
                        int e = eps4(mu, nu, r, sg);
                        if (e == 0) continue;
                        acc += e * (nval(a.lat.up(s, nu), r, sg) - nval(s, r, sg));
                    }
            }
            // the double (rho,sigma) sum counts each plane twice
            m.k[static_cast<std::size_t>(s) * 4 + mu] = static_cast<std::int16_t>(acc / 2);
        }
    }
    return m;
}

/// Lattice divergence sum_mu [k_mu(x+mu) - k_mu(x)]; identically zero.
inline int monopole_divergence(const MonopoleField& m, int s) {
    int acc = 0;
    for (int mu = 0; mu < 4; ++mu) acc += m.at(m.lat.up(s, mu), mu) - m.at(s, mu);
    return acc;
}

/// Mean |k| per dual link.
inline double monopole_density(const MonopoleField& m) {
    long acc = 0;
    for (std::int16_t v : m.k) acc += std::abs(v);
    return static_cast<double>(acc) / static_cast<double>(m.k.size());
}

/// Abelian R x T Wilson loop of integer charge q: < cos(q * sum theta) >,
/// averaged over translations and ordered direction pairs.
inline double abelian_wilson_loop(const AbelianField& a, int r, int t, int q = 1) {
    if (r < 1 || t < 1 || q < 1)
        throw std::invalid_argument("abelian_wilson_loop: extents and charge must be >= 1");
    int dmin = *std::min_element(a.lat.dims().begin(), a.lat.dims().end());
    if (2 * r > dmin || 2 * t > dmin)
        throw std::range_error("abelian_wilson_loop: loop exceeds half the lattice extent");
    double acc = 0.0;
    long count = 0;
    const int vol = a.lat.volume();
    for (int s = 0; s < vol; ++s) {
        for (int mu = 0; mu < 4; ++mu) {
            for (int nu = 0; nu < 4; ++nu) {
                if (nu == mu) continue;
                double sum = 0.0;
                int x = s;
                for (int i = 0; i < r; ++i) { sum += a.th(x, mu); x = a.lat.up(x, mu); }
                for (int i = 0; i < t; ++i) { sum += a.th(x, nu); x = a.lat.up(x, nu); }
                for (int i = 0; i < r; ++i) { x = a.lat.dn(x, mu); sum -= a.th(x, mu); }
                for (int i = 0; i < t; ++i) { x = a.lat.dn(x, nu); sum -= a.th(x, nu); }
                acc += std::cos(q * sum);
                ++count;
            }
        }
    }
    return acc / static_cast<double>(count);
}

/// Table of loop expectation values W(r, t), 1-indexed.
struct LoopTable {
    int rmax = 0, tmax = 0;
    std::vector<double> w;  // [(r-1)*tmax + (t-1)]

    double at(int r, int t) const {
        if (r < 1 || r > rmax || t < 1 || t > tmax)
            throw std::range_error("LoopTable: index out of range");
        return w[static_cast<std::size_t>(r - 1) * tmax + (t - 1)];
    }
    double& at(int r, int t) {
        if (r < 1 || r > rmax || t < 1 || t > tmax)
            throw std::range_error("LoopTable: index out of range");
        return w[static_cast<std::size_t>(r - 1) * tmax + (t - 1)];
    }
    static LoopTable zeros(int rm, int tm) {
        LoopTable lt;
        lt.rmax = rm;
        lt.tmax = tm;
        lt.w.assign(static_cast<std::size_t>(rm) * tm, 0.0);
        return lt;
    }
};

/// Creutz ratio chi(R,T) = -ln[ W(R,T) W(R-1,T-1) / (W(R,T-1) W(R-1,T)) ].
/// For an area law W = exp(-sigma R T - perimeter terms) this isolates sigma.
inline double creutz_ratio(const LoopTable& w, int r, int t) {
    if (r < 2 || t < 2) throw std::invalid_argument("creutz_ratio needs R,T >= 2");
    double a = w.at(r, t), b = w.at(r - 1, t - 1), c = w.at(r, t - 1), d = w.at(r - 1, t);
    if (a <= 0.0 || b <= 0.0 || c <= 0.0 || d <= 0.0)
        throw std::domain_error("creutz_ratio: non-positive loop value");
    return -std::log(a * b / (c * d));
}

}  // namespace dm

#endif
