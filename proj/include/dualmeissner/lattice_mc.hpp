// Pure SU(2) Wilson gauge theory on a periodic 4d lattice.
//
// Link updates use the Kennedy-Pendleton heat bath (Phys. Lett. 156B (1985)
// 393) with the Creutz rejection method (Phys. Rev. D21 (1980) 2308) at small
// effective coupling, plus microcanonical overrelaxation reflections.
// Updates run in checkerboard order; links of equal parity and direction
// never share a staple, and every link draws from a counter-based rng stream
// keyed by (seed, sweep, site, direction), so the Markov chain is
// reproducible independent of traversal order or thread count.
#ifndef DUALMEISSNER_LATTICE_MC_HPP
#define DUALMEISSNER_LATTICE_MC_HPP

#include <algorithm>
#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "dualmeissner/rng.hpp"
#include "dualmeissner/su2.hpp"

namespace dm {

// reserved sweep ids so initialization / gauge-transform streams never
// collide with update sweeps
inline constexpr std::uint64_t kSweepHotStart = ~std::uint64_t{0};
inline constexpr std::uint64_t kSweepGaugeTransform = ~std::uint64_t{0} - 1;

class Lattice {
  public:
    Lattice() = default;

    explicit Lattice(const std::array<int, 4>& dims) : dims_(dims) {
        volume_ = 1;
        for (int d = 0; d < 4; ++d) {
            if (dims[d] < 2 || dims[d] % 2 != 0)
                throw std::invalid_argument(
                    "lattice extents must be even and >= 2 (checkerboard "
                    "update contract), got " + std::to_string(dims[d]));
            volume_ *= dims[d];
        }
        up_.resize(static_cast<std::size_t>(volume_) * 4);
        dn_.resize(static_cast<std::size_t>(volume_) * 4);
        parity_.resize(volume_);
        for (int s = 0; s < volume_; ++s) {
            auto c = coords(s);
            parity_[s] = static_cast<std::uint8_t>((c[0] + c[1] + c[2] + c[3]) & 1);
            for (int mu = 0; mu < 4; ++mu) {
                auto cu = c, cd = c;
                cu[mu] = (c[mu] + 1) % dims_[mu];
                cd[mu] = (c[mu] - 1 + dims_[mu]) % dims_[mu];
                up_[static_cast<std::size_t>(s) * 4 + mu] = site(cu);
                dn_[static_cast<std::size_t>(s) * 4 + mu] = site(cd);
            }
        }
    }

    const std::array<int, 4>& dims() const { return dims_; }
    int volume() const { return volume_; }

    /// site index: x fastest, then y, z, t
    int site(const std::array<int, 4>& c) const {
        return c[0] + dims_[0] * (c[1] + dims_[1] * (c[2] + dims_[2] * c[3]));
    }

    std::array<int, 4> coords(int s) const {
        std::array<int, 4> c;
        c[0] = s % dims_[0]; s /= dims_[0];
        c[1] = s % dims_[1]; s /= dims_[1];
        c[2] = s % dims_[2]; s /= dims_[2];
        c[3] = s;
        return c;
    }

    int up(int s, int mu) const { return up_[static_cast<std::size_t>(s) * 4 + mu]; }
    int dn(int s, int mu) const { return dn_[static_cast<std::size_t>(s) * 4 + mu]; }
    int parity(int s) const { return parity_[s]; }

  private:
    std::array<int, 4> dims_{0, 0, 0, 0};
    int volume_ = 0;
    std::vector<std::int32_t> up_, dn_;
    std::vector<std::uint8_t> parity_;
};

struct GaugeField {
    Lattice lat;
    std::vector<Su2> u;  // [site*4 + mu]

    Su2& link(int s, int mu) { return u[static_cast<std::size_t>(s) * 4 + mu]; }
    const Su2& link(int s, int mu) const { return u[static_cast<std::size_t>(s) * 4 + mu]; }
};

inline GaugeField cold_start(const std::array<int, 4>& dims) {
    GaugeField f;
    f.lat = Lattice(dims);
    f.u.assign(static_cast<std::size_t>(f.lat.volume()) * 4, su2_identity);
    return f;
}

inline GaugeField hot_start(const std::array<int, 4>& dims, std::uint64_t seed) {
    GaugeField f;
    f.lat = Lattice(dims);
    f.u.resize(static_cast<std::size_t>(f.lat.volume()) * 4);
    for (int s = 0; s < f.lat.volume(); ++s) {
        for (int mu = 0; mu < 4; ++mu) {
            CounterRng rng(seed, kSweepHotStart, static_cast<std::uint64_t>(s), mu);
            f.link(s, mu) = haar_random(rng);
        }
    }
    return f;
}

/// Sum of the six staples attached to link (s, mu), oriented so that
/// Re Tr(U_mu(s) * staple_sum) equals the sum of Re Tr over the six
/// plaquettes containing that link.
inline Su2 staple_sum(const GaugeField& f, int s, int mu) {
    Su2 acc{0.0, 0.0, 0.0, 0.0};
    const int sup = f.lat.up(s, mu);
    for (int nu = 0; nu < 4; ++nu) {
        if (nu == mu) continue;
        // forward: U_nu(s+mu) U_mu(s+nu)^+ U_nu(s)^+
        acc = acc + f.link(sup, nu) * dagger(f.link(f.lat.up(s, nu), mu)) *
                        dagger(f.link(s, nu));
        // backward: U_nu(s+mu-nu)^+ U_mu(s-nu)^+ U_nu(s-nu)
        const int sdn = f.lat.dn(s, nu);
        acc = acc + dagger(f.link(f.lat.dn(sup, nu), nu)) *
                        dagger(f.link(sdn, mu)) * f.link(sdn, nu);
    }
    return acc;
}

/// Decomposition staple_sum = k * V with V in SU(2), k >= 0.
struct Staple {
    double k;
    Su2 v;
};

inline Staple staple(const GaugeField& f, int s, int mu) {
    Su2 a = staple_sum(f, s, mu);
    double k = norm(a);
    if (k < 1e-30) return Staple{0.0, su2_identity};
    return Staple{k, (1.0 / k) * a};
}

/// Draw the trace-half coordinate a0 from P(a0) ~ sqrt(1-a0^2) exp(alpha*a0)
/// on [-1,1].  Kennedy-Pendleton for alpha above ~1 (acceptance -> 1 at
/// large alpha), Creutz accept/reject below (exact at any alpha, efficient
/// at small alpha).
template <typename Rng>
inline double heatbath_a0(double alpha, Rng& rng) {
    if (alpha > 1.0) {
        for (;;) {
            double xr1 = std::log(rng.uniform01());
            double xr2 = std::log(rng.uniform01());
            double c = std::cos(6.283185307179586 * rng.uniform01());
            double d = -(xr2 + xr1 * c * c) / alpha;  // d = 1 - a0 >= 0
            double xr4 = rng.uniform01();
            if (xr4 * xr4 < 1.0 - 0.5 * d) return 1.0 - d;
        }
    }
    const double xl = std::exp(-2.0 * alpha);
    for (;;) {
        double r = xl + (1.0 - xl) * rng.uniform01();  // in (xl, 1]
        double a0 = 1.0 + std::log(r) / alpha;
        double u = rng.uniform01();
        if (u * u < 1.0 - a0 * a0) return a0;
    }
}

namespace detail {

template <typename Rng>
inline Su2 heatbath_link(const GaugeField& f, int s, int mu, double beta, Rng& rng) {
    Staple st = staple(f, s, mu);
    const double alpha = beta * st.k;
    if (alpha < 1e-12) return haar_random(rng);  // flat conditional, e.g. beta = 0
    // conditional weight exp((beta/2) ReTr(U A)) = exp(alpha w0), W = U V
    double w0 = heatbath_a0(alpha, rng);
    double rho = std::sqrt(std::max(0.0, 1.0 - w0 * w0));
    double w3 = rho * rng.uniform_sym();
    double phi = 6.283185307179586 * rng.uniform01();
    double rperp = std::sqrt(std::max(0.0, rho * rho - w3 * w3));
    Su2 w{w0, rperp * std::cos(phi), rperp * std::sin(phi), w3};
    return w * dagger(st.v);
}

}  // namespace detail

/// Monte Carlo stream state: the seed plus a monotone sweep counter.  Each
/// heat-bath sweep consumes one counter value; overrelaxation is
/// deterministic and consumes none.
struct McState {
    std::uint64_t seed = 1;
    std::uint64_t sweep = 0;
};

inline void heatbath_sweep(GaugeField& f, double beta, McState& st) {
    const int vol = f.lat.volume();
    for (int mu = 0; mu < 4; ++mu) {
        for (int par = 0; par < 2; ++par) {
            for (int s = 0; s < vol; ++s) {
                if (f.lat.parity(s) != par) continue;
                CounterRng rng(st.seed, st.sweep,
                               static_cast<std::uint64_t>(s), mu);
                f.link(s, mu) = detail::heatbath_link(f, s, mu, beta, rng);
            }
        }
    }
    ++st.sweep;
}

/// Microcanonical reflection U -> V^+ U^+ V^+ about the staple direction V;
/// preserves Re Tr(U A) exactly and is an involution.
inline void overrelax_sweep(GaugeField& f) {
    const int vol = f.lat.volume();
    for (int mu = 0; mu < 4; ++mu) {
        for (int par = 0; par < 2; ++par) {
            for (int s = 0; s < vol; ++s) {
                if (f.lat.parity(s) != par) continue;
                Staple st = staple(f, s, mu);
                if (st.k < 1e-14) continue;  // direction undefined, leave link
                Su2 vd = dagger(st.v);
                f.link(s, mu) = vd * dagger(f.link(s, mu)) * vd;
            }
        }
    }
}

/// Mean of (1/2) Re Tr U_p over all 6 V plaquettes; in [-1, 1].
inline double average_plaquette(const GaugeField& f) {
    double acc = 0.0;
    const int vol = f.lat.volume();
    for (int s = 0; s < vol; ++s) {
        for (int mu = 0; mu < 4; ++mu) {
            const int smu = f.lat.up(s, mu);
            for (int nu = mu + 1; nu < 4; ++nu) {
                Su2 p = f.link(s, mu) * f.link(smu, nu) *
                        dagger(f.link(f.lat.up(s, nu), mu)) * dagger(f.link(s, nu));
                acc += 0.5 * re_trace(p);
            }
        }
    }
    return acc / (6.0 * vol);
}

/// Wilson action S = beta * sum_p (1 - (1/2) Re Tr U_p).
inline double wilson_action(const GaugeField& f, double beta) {
    return beta * 6.0 * f.lat.volume() * (1.0 - average_plaquette(f));
}

/// R x T rectangular Wilson loop, averaged over all translations and all
/// ordered direction pairs (mu != nu), normalized as (1/2) Re Tr.
inline double wilson_loop(const GaugeField& f, int r, int t) {
    if (r < 1 || t < 1) throw std::invalid_argument("wilson_loop: extents must be >= 1");
    int dmin = *std::min_element(f.lat.dims().begin(), f.lat.dims().end());
    if (2 * r > dmin || 2 * t > dmin)
        throw std::range_error("wilson_loop: loop exceeds half the lattice extent");
    double acc = 0.0;
    long count = 0;
    const int vol = f.lat.volume();
    for (int s = 0; s < vol; ++s) {
        for (int mu = 0; mu < 4; ++mu) {
            for (int nu = 0; nu < 4; ++nu) {
                if (nu == mu) continue;
                Su2 p = su2_identity;
                int x = s;
                for (int i = 0; i < r; ++i) { p = p * f.link(x, mu); x = f.lat.up(x, mu); }
                for (int i = 0; i < t; ++i) { p = p * f.link(x, nu); x = f.lat.up(x, nu); }
                for (int i = 0; i < r; ++i) { x = f.lat.dn(x, mu); p = p * dagger(f.link(x, mu)); }
                for (int i = 0; i < t; ++i) { x = f.lat.dn(x, nu); p = p * dagger(f.link(x, nu)); }
                acc += 0.5 * re_trace(p);
                ++count;
            }
        }
    }
    return acc / static_cast<double>(count);
}

/// Apply an independent Haar-random gauge rotation at every site:
/// U_mu(x) -> g(x) U_mu(x) g(x+mu)^+.  Traced loops are invariant.
inline void random_gauge_transform(GaugeField& f, std::uint64_t seed) {
    const int vol = f.lat.volume();
    std::vector<Su2> g(vol);
    for (int s = 0; s < vol; ++s) {
        CounterRng rng(seed, kSweepGaugeTransform, static_cast<std::uint64_t>(s), 0);
        g[s] = haar_random(rng);
    }
    for (int s = 0; s < vol; ++s)
        for (int mu = 0; mu < 4; ++mu)
            f.link(s, mu) = g[s] * f.link(s, mu) * dagger(g[f.lat.up(s, mu)]);
}

/// One compound update: a heat-bath sweep followed by n_or overrelaxation
/// sweeps (the usual decorrelation mix).
inline void compound_sweep(GaugeField& f, double beta, int n_or, McState& st) {
    heatbath_sweep(f, beta, st);
    for (int i = 0; i < n_or; ++i) overrelax_sweep(f);
}

struct SimulationConfig {
    std::array<int, 4> dims{8, 8, 8, 8};
    double beta = 2.3;
    int n_therm = 200;
    int n_sweeps = 2000;       // compound sweeps after thermalization
    int measure_every = 10;    // compound sweeps between measurements
    int overrelax_per_heatbath = 4;
    std::uint64_t seed = 1;
    int snapshot_every = 0;    // 0 = no snapshots; in units of measurements
    bool hot = true;

    void validate() const {
        if (beta <= 0) throw std::invalid_argument("beta must be > 0");
        if (n_therm < 0 || n_sweeps < 0) throw std::invalid_argument("negative sweep count");
        if (measure_every < 1) throw std::invalid_argument("measure_every must be >= 1");
        if (overrelax_per_heatbath < 0) throw std::invalid_argument("negative overrelax count");
        for (int d : dims)
            if (d < 2 || d % 2 != 0)
                throw std::invalid_argument("lattice extents must be even and >= 2");
    }
};

}  // namespace dm

#endif
