// Continuum SU(2)+adjoint-Higgs monopole fields on a 3d grid.
//
// Stores phi^a and A_i^a sampled at cell centers x_i = (i - n/2 + 1/2) h, so
// no sample sits on the hedgehog singularity.  Derived quantities use O(h^2)
// central differences, valid on the interior (one-cell margin):
//
//   D_i phi^a = d_i phi^a + e eps_{abc} A_i^b phi^c
//   F_ij^a    = d_i A_j^a - d_j A_i^a + e eps_{abc} A_i^b A_j^c
//   f_ij      = n^a F_ij^a - (1/e) eps_{abc} n^a (D_i n)^b (D_j n)^c,  n = phi/|phi|
//
// Sign conventions for the abelian field strength, the magnetic field and
// the winding density are fixed so that the unit hedgehog carries magnetic
// charge +4 pi / e.
//
// Total energy: midpoint sum over interior cells plus an analytic tail for
// the region outside the covered cube, where the density is the abelian
// Coulomb field q^2/(16 pi^2 r^4) up to exponentially small corrections.
#ifndef DUALMEISSNER_BPS_CONTINUUM_HPP
#define DUALMEISSNER_BPS_CONTINUUM_HPP

#include <cmath>
#include <cstddef>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace dm {

inline constexpr int eps3(int i, int j, int k) {
    return (j - i) * (k - j) * (k - i) / 2;
}

struct Grid3 {
    int n = 32;
    double h = 0.5;

    int size() const { return n * n * n; }
    int idx(int i, int j, int k) const { return (i * n + j) * n + k; }
    double coord(int i) const { return (i - 0.5 * n + 0.5) * h; }
    double half_extent() const { return 0.5 * n * h; }
};

struct BpsConfig {
    Grid3 grid;
    double e = 1.0;  // gauge coupling
    double v = 1.0;  // higgs vacuum value
};

/// Adjoint Higgs field phi^a and gauge potential A_i^a on the grid.
struct FieldConfig {
    Grid3 grid;
    double e = 1.0;
    double v = 1.0;
    std::vector<double> phi;  // [site*3 + a]
    std::vector<double> a;    // [site*9 + i*3 + a]

    double p(int s, int c) const { return phi[static_cast<std::size_t>(s) * 3 + c]; }
    double& p(int s, int c) { return phi[static_cast<std::size_t>(s) * 3 + c]; }
    double aa(int s, int i, int c) const { return a[static_cast<std::size_t>(s) * 9 + i * 3 + c]; }
    double& aa(int s, int i, int c) { return a[static_cast<std::size_t>(s) * 9 + i * 3 + c]; }
};

/// Exact BPS hedgehog: phi^a = xhat^a (v coth(evr) - 1/(er)),
/// A_i^a = eps_{aij} xhat_j (1 - evr/sinh(evr)) / (er).
inline FieldConfig prasad_sommerfield(const BpsConfig& cfg) {
    if (cfg.e <= 0.0 || cfg.v <= 0.0)
        throw std::invalid_argument("prasad_sommerfield: e and v must be positive");
    FieldConfig f;
    f.grid = cfg.grid;
    f.e = cfg.e;
    f.v = cfg.v;
    const int n = cfg.grid.n;
    f.phi.resize(static_cast<std::size_t>(cfg.grid.size()) * 3);
    f.a.resize(static_cast<std::size_t>(cfg.grid.size()) * 9);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            for (int k = 0; k < n; ++k) {
                int s = cfg.grid.idx(i, j, k);
                double x[3] = {cfg.grid.coord(i), cfg.grid.coord(j), cfg.grid.coord(k)};
                double r = std::sqrt(x[0] * x[0] + x[1] * x[1] + x[2] * x[2]);
                double xi = cfg.e * cfg.v * r;
                double hprof, kprof;  // |phi| and the transverse gauge profile
                if (xi < 1e-2) {
                    // series avoids the coth - 1/xi cancellation
                    hprof = cfg.v * xi * (1.0 / 3.0 - xi * xi / 45.0 + 2.0 * xi * xi * xi * xi / 945.0);
                    kprof = (xi / 6.0 - 7.0 * xi * xi * xi / 360.0) * cfg.v;
                } else {
                    hprof = cfg.v * (std::cosh(xi) / std::sinh(xi)) - 1.0 / (cfg.e * r);
                    kprof = (1.0 - xi / std::sinh(xi)) / (cfg.e * r);
                }
                for (int c = 0; c < 3; ++c) f.p(s, c) = x[c] / r * hprof;
                for (int d = 0; d < 3; ++d)
                    for (int c = 0; c < 3; ++c) {
                        double val = 0.0;
                        for (int jj = 0; jj < 3; ++jj)
                            if (eps3(c, d, jj) != 0) val += eps3(c, d, jj) * x[jj] / r * kprof;
                        f.aa(s, d, c) = val;
                    }
            }
        }
    }
    return f;
}

/// Everything downstream of one finite-difference pass.  Arrays are sized for
/// the full grid; only interior sites (one-cell margin) hold valid data.
struct BpsDerived {
    Grid3 grid;
    double e = 1.0;
    std::vector<double> b;       // nonabelian B_i^a, [site*9 + i*3 + a]
    std::vector<double> dphi;    // D_i phi^a, same layout
    std::vector<double> babl;    // abelian (thooft) B_i, [site*3 + i]
    std::vector<double> fabl;    // abelian f_ij as (f_23, f_31, f_12), [site*3 + c]
    std::vector<double> winding; // magnetic charge density from the higgs winding
    std::vector<double> energy;  // (1/2)(B^2 + (D phi)^2)

    double bfield(int s, int i, int c) const { return b[static_cast<std::size_t>(s) * 9 + i * 3 + c]; }
    double dp(int s, int i, int c) const { return dphi[static_cast<std::size_t>(s) * 9 + i * 3 + c]; }
    double babl_at(int s, int i) const { return babl[static_cast<std::size_t>(s) * 3 + i]; }
};

namespace detail {

struct NeighborView {
    const FieldConfig* f;
    int sxp, sxm, syp, sym, szp, szm;
    double inv2h;

    double dphi_dx(int dir, int c) const {
        int sp = dir == 0 ? sxp : dir == 1 ? syp : szp;
        int sm = dir == 0 ? sxm : dir == 1 ? sym : szm;
        return (f->p(sp, c) - f->p(sm, c)) * inv2h;
    }
    double da_dx(int dir, int i, int c) const {
        int sp = dir == 0 ? sxp : dir == 1 ? syp : szp;
        int sm = dir == 0 ? sxm : dir == 1 ? sym : szm;
        return (f->aa(sp, i, c) - f->aa(sm, i, c)) * inv2h;
    }
};

inline void cross(const double a[3], const double b[3], double out[3]) {
    out[0] = a[1] * b[2] - a[2] * b[1];
    out[1] = a[2] * b[0] - a[0] * b[2];
    out[2] = a[0] * b[1] - a[1] * b[0];
}

}  // namespace detail

/// One pass of central differences over the interior.  Throws
/// std::domain_error if |phi| < 1e-8 v anywhere (the higgs direction and the
/// abelian projection are undefined at a zero of phi).
inline BpsDerived compute_derived(const FieldConfig& f) {
    const Grid3& g = f.grid;
    const int n = g.n;
    BpsDerived d;
    d.grid = g;
    d.e = f.e;
    d.b.assign(static_cast<std::size_t>(g.size()) * 9, 0.0);
    d.dphi.assign(static_cast<std::size_t>(g.size()) * 9, 0.0);
    d.babl.assign(static_cast<std::size_t>(g.size()) * 3, 0.0);
    d.fabl.assign(static_cast<std::size_t>(g.size()) * 3, 0.0);
    d.winding.assign(g.size(), 0.0);
    d.energy.assign(g.size(), 0.0);

    // unit higgs direction, needed at every site that any interior stencil touches
    std::vector<double> nhat(static_cast<std::size_t>(g.size()) * 3);
    for (int s = 0; s < g.size(); ++s) {
        double px = f.p(s, 0), py = f.p(s, 1), pz = f.p(s, 2);
        double nrm = std::sqrt(px * px + py * py + pz * pz);
        if (nrm < 1e-8 * f.v)
            throw std::domain_error("compute_derived: higgs field vanishes on the grid");
        nhat[static_cast<std::size_t>(s) * 3 + 0] = px / nrm;
        nhat[static_cast<std::size_t>(s) * 3 + 1] = py / nrm;
        nhat[static_cast<std::size_t>(s) * 3 + 2] = pz / nrm;
    }
    auto nh = [&](int s, int c) { return nhat[static_cast<std::size_t>(s) * 3 + c]; };

    const double inv2h = 1.0 / (2.0 * g.h);
    for (int i = 1; i < n - 1; ++i) {
        for (int j = 1; j < n - 1; ++j) {
            for (int k = 1; k < n - 1; ++k) {
                int s = g.idx(i, j, k);
                detail::NeighborView nb{&f,
                                        g.idx(i + 1, j, k), g.idx(i - 1, j, k),
                                        g.idx(i, j + 1, k), g.idx(i, j - 1, k),
                                        g.idx(i, j, k + 1), g.idx(i, j, k - 1),
                                        inv2h};
                int sp[3] = {nb.sxp, nb.syp, nb.szp};
                int sm[3] = {nb.sxm, nb.sym, nb.szm};

                double pv[3] = {f.p(s, 0), f.p(s, 1), f.p(s, 2)};
                double nv[3] = {nh(s, 0), nh(s, 1), nh(s, 2)};
                double av[3][3];
                for (int dir = 0; dir < 3; ++dir)
                    for (int c = 0; c < 3; ++c) av[dir][c] = f.aa(s, dir, c);

                double dp[3][3], dn[3][3];  // [dir][color]
                for (int dir = 0; dir < 3; ++dir) {
                    for (int c = 0; c < 3; ++c) {
                        dp[dir][c] = nb.dphi_dx(dir, c);
                        dn[dir][c] = (nh(sp[dir], c) - nh(sm[dir], c)) * inv2h;
                    }
                }

                double Dp[3][3], Dn[3][3];
                for (int dir = 0; dir < 3; ++dir) {
                    double axp[3], axn[3];
                    detail::cross(av[dir], pv, axp);
                    detail::cross(av[dir], nv, axn);
                    for (int c = 0; c < 3; ++c) {
                        Dp[dir][c] = dp[dir][c] + f.e * axp[c];
                        Dn[dir][c] = dn[dir][c] + f.e * axn[c];
                    }
                }

                // F_ij^a for (ij) = (2,3),(3,1),(1,2) in 1-based labels
                double F[3][3];
                for (int c3 = 0; c3 < 3; ++c3) {
                    int ii = (c3 + 1) % 3, jj = (c3 + 2) % 3;
                    double comm[3];
                    detail::cross(av[ii], av[jj], comm);
                    for (int c = 0; c < 3; ++c)
                        F[c3][c] = nb.da_dx(ii, jj, c) - nb.da_dx(jj, ii, c) + f.e * comm[c];
                }

                double esum = 0.0;
                for (int c3 = 0; c3 < 3; ++c3) {
                    // B_i^a = -(1/2) eps_{ijk} F_jk^a; with F[c3] = F_{jk},
                    // (jk) cyclic, this is just -F[c3]
                    for (int c = 0; c < 3; ++c) {
                        double bval = -F[c3][c];
                        d.b[static_cast<std::size_t>(s) * 9 + c3 * 3 + c] = bval;
                        esum += bval * bval;
                    }
                    int ii = (c3 + 1) % 3, jj = (c3 + 2) % 3;
                    double dcross[3];
                    detail::cross(Dn[ii], Dn[jj], dcross);
                    double fab = 0.0;
                    for (int c = 0; c < 3; ++c)
                        fab += nv[c] * F[c3][c] - nv[c] * dcross[c] / f.e;
                    d.fabl[static_cast<std::size_t>(s) * 3 + c3] = fab;
                    d.babl[static_cast<std::size_t>(s) * 3 + c3] = -fab;
                }
                for (int dir = 0; dir < 3; ++dir)
                    for (int c = 0; c < 3; ++c) {
                        d.dphi[static_cast<std::size_t>(s) * 9 + dir * 3 + c] = Dp[dir][c];
                        esum += Dp[dir][c] * Dp[dir][c];
                    }
                d.energy[s] = 0.5 * esum;

                // winding (magnetic charge) density
                // (1/2e) eps_{ijk} eps_{abc} d_i n^a d_j n^b d_k n^c,
                // reduced to the cyclic triple products (the eps pair double
                // counts, cancelling the 1/2)
                double w = 0.0;
                for (int c3 = 0; c3 < 3; ++c3) {
                    int ii = (c3 + 1) % 3, jj = (c3 + 2) % 3;
                    double dc[3];
                    detail::cross(dn[ii], dn[jj], dc);
                    for (int c = 0; c < 3; ++c) w += dc[c] * dn[c3][c];
                }
                d.winding[s] = w / f.e;
            }
        }
    }
    return d;
}

/// Flux of the abelian magnetic field through the sphere of given radius,
/// by midpoint quadrature in cos(theta) and phi with trilinear interpolation.
inline double magnetic_charge(const BpsDerived& d, double radius, int ntheta = 48,
                              int nphi = 96) {
    const Grid3& g = d.grid;
    double reach = radius + g.h * 1.733;
    if (radius <= 0.0 || reach >= (0.5 * g.n - 1.0) * g.h)
        throw std::range_error("magnetic_charge: sphere leaves the valid interior");

    auto interp = [&](double x, double y, double z, int comp) {
        double u = x / g.h + 0.5 * g.n - 0.5;
        double v = y / g.h + 0.5 * g.n - 0.5;
        double w = z / g.h + 0.5 * g.n - 0.5;
        int i0 = static_cast<int>(std::floor(u));
        int j0 = static_cast<int>(std::floor(v));
        int k0 = static_cast<int>(std::floor(w));
        double fu = u - i0, fv = v - j0, fw = w - k0;
        double acc = 0.0;
        for (int di = 0; di < 2; ++di)
            for (int dj = 0; dj < 2; ++dj)
                for (int dk = 0; dk < 2; ++dk) {
                    double wgt = (di ? fu : 1.0 - fu) * (dj ? fv : 1.0 - fv) * (dk ? fw : 1.0 - fw);
                    acc += wgt * d.babl_at(g.idx(i0 + di, j0 + dj, k0 + dk), comp);
                }
        return acc;
    };

    const double pi = std::numbers::pi;
    double flux = 0.0;
    for (int it = 0; it < ntheta; ++it) {
        double ct = -1.0 + (it + 0.5) * 2.0 / ntheta;
        double st = std::sqrt(1.0 - ct * ct);
        for (int ip = 0; ip < nphi; ++ip) {
            double ph = (ip + 0.5) * 2.0 * pi / nphi;
            double nx = st * std::cos(ph), ny = st * std::sin(ph), nz = ct;
            double x = radius * nx, y = radius * ny, z = radius * nz;
            double bn = interp(x, y, z, 0) * nx + interp(x, y, z, 1) * ny + interp(x, y, z, 2) * nz;
            flux += bn;
        }
    }
    flux *= radius * radius * (2.0 / ntheta) * (2.0 * pi / nphi);
    return flux;
}

/// Volume integral of the higgs winding density.  Equals the magnetic charge
/// for any configuration whose windings sit well inside the interior.
inline double topological_charge(const BpsDerived& d) {
    double acc = 0.0;
    for (double w : d.winding) acc += w;
    return acc * d.grid.h * d.grid.h * d.grid.h;
}

namespace detail {

/// Solid-angle integral of max_i |nhat_i| over the unit sphere; the exterior
/// of a cube of half-side a subtends int r^-4 d^3x = beta / a.
inline double cube_angle_factor() {
    const double pi = std::numbers::pi;
    const int nt = 256, np = 512;
    double acc = 0.0;
    for (int it = 0; it < nt; ++it) {
        double ct = -1.0 + (it + 0.5) * 2.0 / nt;
        double st = std::sqrt(1.0 - ct * ct);
        for (int ip = 0; ip < np; ++ip) {
            double ph = (ip + 0.5) * 2.0 * pi / np;
            double m = std::max({std::abs(st * std::cos(ph)), std::abs(st * std::sin(ph)), std::abs(ct)});
            acc += m;
        }
    }
    return acc * (2.0 / nt) * (2.0 * pi / np);
}

}  // namespace detail

struct EnergyBreakdown {
    double interior = 0.0;  // midpoint sum over interior cells
    double tail = 0.0;      // analytic exterior correction
    double total = 0.0;
};

/// Total field energy: interior midpoint sum plus the Coulomb tail of a point
/// charge q outside the covered cube (half-side a - h).
inline EnergyBreakdown total_energy(const BpsDerived& d, double charge) {
    EnergyBreakdown out;
    for (double e : d.energy) out.interior += e;
    out.interior *= d.grid.h * d.grid.h * d.grid.h;
    double a_eff = d.grid.half_extent() - d.grid.h;
    static const double beta = detail::cube_angle_factor();
    out.tail = charge * charge / (16.0 * std::numbers::pi * std::numbers::pi) * beta / a_eff;
    out.total = out.interior + out.tail;
    return out;
}

/// Pointwise BPS saturation error: max over interior of |B - D phi|.
inline double bogomolny_residual(const BpsDerived& d) {
    const Grid3& g = d.grid;
    double worst = 0.0;
    for (int i = 1; i < g.n - 1; ++i)
        for (int j = 1; j < g.n - 1; ++j)
            for (int k = 1; k < g.n - 1; ++k) {
                int s = g.idx(i, j, k);
                double acc = 0.0;
                for (int dir = 0; dir < 3; ++dir)
                    for (int c = 0; c < 3; ++c) {
                        double diff = d.bfield(s, dir, c) - d.dp(s, dir, c);
                        acc += diff * diff;
                    }
                if (acc > worst) worst = acc;
            }
    return std::sqrt(worst);
}

struct RadialSample {
    double r = 0.0;
    double phi_norm = 0.0;
    double b_norm = 0.0;
    double energy_density = 0.0;
};

/// Spherically averaged profiles, binned by radius over interior cells.
inline std::vector<RadialSample> radial_profile(const FieldConfig& f, const BpsDerived& d,
                                                int nbins) {
    if (nbins < 1) throw std::invalid_argument("radial_profile: nbins must be >= 1");
    const Grid3& g = f.grid;
    double rmax = g.half_extent() - g.h;
    std::vector<RadialSample> out(nbins);
    std::vector<long> count(nbins, 0);
    for (int i = 1; i < g.n - 1; ++i)
        for (int j = 1; j < g.n - 1; ++j)
            for (int k = 1; k < g.n - 1; ++k) {
                int s = g.idx(i, j, k);
                double x = g.coord(i), y = g.coord(j), z = g.coord(k);
                double r = std::sqrt(x * x + y * y + z * z);
                int bin = static_cast<int>(r / rmax * nbins);
                if (bin >= nbins) continue;
                double pn = 0.0, bn = 0.0;
                for (int c = 0; c < 3; ++c) pn += f.p(s, c) * f.p(s, c);
                for (int dir = 0; dir < 3; ++dir) bn += d.babl_at(s, dir) * d.babl_at(s, dir);
                out[bin].r += r;
                out[bin].phi_norm += std::sqrt(pn);
                out[bin].b_norm += std::sqrt(bn);
                out[bin].energy_density += d.energy[s];
                ++count[bin];
            }
    for (int b = 0; b < nbins; ++b) {
        if (count[b] == 0) {
            out[b].r = (b + 0.5) * rmax / nbins;
            continue;
        }
        out[b].r /= count[b];
        out[b].phi_norm /= count[b];
        out[b].b_norm /= count[b];
        out[b].energy_density /= count[b];
    }
    return out;
}

}  // namespace dm

#endif
