#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <mutex>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "dualmeissner/bps_continuum.hpp"
#include "dualmeissner/config.hpp"
#include "dualmeissner/dual_gl.hpp"
#include "dualmeissner/errors.hpp"
#include "dualmeissner/lattice_mc.hpp"
#include "dualmeissner/mag_monopole.hpp"
#include "dualmeissner/manifest.hpp"
#include "dualmeissner/snapshot.hpp"
#include "dualmeissner/stats.hpp"
#include "dualmeissner/topo_higgs.hpp"

namespace dm {

// Shortest decimal form that round-trips a double; the fixed format is what
// makes byte-identical reruns a meaningful promise.
inline std::string g17(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

class CsvFile {
  public:
    CsvFile(const std::filesystem::path& path, const std::string& header)
        : out_(path, std::ios::binary | std::ios::trunc), path_(path.string()) {
        if (!out_) throw IoError("cannot open '" + path_ + "' for writing");
        out_ << header << '\n';
    }

    void line(const std::string& s) { out_ << s << '\n'; }

    void close() {
        out_.flush();
        if (!out_) throw IoError("write failure on '" + path_ + "'");
        out_.close();
    }

  private:
    std::ofstream out_;
    std::string path_;
};

inline int env_threads() {
    const char* s = std::getenv("DUALMEISSNER_THREADS");
    if (!s || !*s) return 1;
    char* end = nullptr;
    long v = std::strtol(s, &end, 10);
    if (*end != '\0' || v < 1)
        throw ConfigError("DUALMEISSNER_THREADS must be a positive integer, got '" +
                          std::string(s) + "'");
    return static_cast<int>(std::min(v, 64L));
}

// Runs job(i) for i in [0, n) on up to `threads` workers. Results land in
// input order, so downstream output is independent of the thread count.
template <typename Fn>
auto parallel_map(int n, int threads, Fn job) -> std::vector<decltype(job(0))> {
    using T = decltype(job(0));
    std::vector<T> out(static_cast<std::size_t>(std::max(n, 0)));
    threads = std::clamp(threads, 1, std::max(n, 1));
    if (threads == 1) {
        for (int i = 0; i < n; ++i) out[i] = job(i);
        return out;
    }
    std::atomic<int> next{0};
    std::exception_ptr err;
    std::mutex err_mu;
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t)
        pool.emplace_back([&] {
            for (;;) {
                int i = next.fetch_add(1);
                if (i >= n) break;
                try {
                    out[i] = job(i);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(err_mu);
                    if (!err) err = std::current_exception();
                }
            }
        });
    for (auto& th : pool) th.join();
    if (err) std::rethrow_exception(err);
    return out;
}

// ---------------------------------------------------------------------------
// simulate

inline const std::set<std::string>& simulate_keys() {
    static const std::set<std::string> keys{
        "lattice.dims", "lattice.beta",  "mc.n_therm",        "mc.n_sweeps",
        "mc.measure_every", "mc.overrelax_per_heatbath", "mc.seed",
        "mc.snapshot_every", "mc.start"};
    return keys;
}

inline SimulationConfig simulation_config_from(const Config& cfg) {
    cfg.check_known(simulate_keys());
    SimulationConfig sc;
    sc.dims = cfg.get_dims("lattice.dims", sc.dims);
    sc.beta = cfg.get_double("lattice.beta");  // the one key with no default
    sc.n_therm = static_cast<int>(cfg.get_int("mc.n_therm", sc.n_therm));
    sc.n_sweeps = static_cast<int>(cfg.get_int("mc.n_sweeps", sc.n_sweeps));
    sc.measure_every = static_cast<int>(cfg.get_int("mc.measure_every", sc.measure_every));
    sc.overrelax_per_heatbath =
        static_cast<int>(cfg.get_int("mc.overrelax_per_heatbath", sc.overrelax_per_heatbath));
    sc.seed = static_cast<std::uint64_t>(cfg.get_int("mc.seed", static_cast<long long>(sc.seed)));
    sc.snapshot_every = static_cast<int>(cfg.get_int("mc.snapshot_every", sc.snapshot_every));
    std::string start = cfg.get_string("mc.start", "hot");
    if (start == "hot")
        sc.hot = true;
    else if (start == "cold")
        sc.hot = false;
    else
        throw ConfigError("key 'mc.start': expected 'hot' or 'cold', got '" + start + "'");
    sc.validate();
    return sc;
}

inline std::map<std::string, std::string> simulate_entries(const SimulationConfig& sc) {
    std::ostringstream dims;
    dims << sc.dims[0] << ' ' << sc.dims[1] << ' ' << sc.dims[2] << ' ' << sc.dims[3];
    return {{"lattice.dims", dims.str()},
            {"lattice.beta", g17(sc.beta)},
            {"mc.n_therm", std::to_string(sc.n_therm)},
            {"mc.n_sweeps", std::to_string(sc.n_sweeps)},
            {"mc.measure_every", std::to_string(sc.measure_every)},
            {"mc.overrelax_per_heatbath", std::to_string(sc.overrelax_per_heatbath)},
            {"mc.seed", std::to_string(sc.seed)},
            {"mc.snapshot_every", std::to_string(sc.snapshot_every)},
            {"mc.start", sc.hot ? "hot" : "cold"}};
}

struct SimulateResult {
    int rows = 0;
    double last_plaquette = 0.0;
    std::vector<std::string> snapshots;  // filenames relative to out_dir
};

inline SimulateResult run_simulate(const SimulationConfig& sc, const std::string& out_dir) {
    sc.validate();
    std::filesystem::create_directories(out_dir);
    RunManifest man("simulate", out_dir);
    man.set_config(simulate_entries(sc));
    man.set_seed(sc.seed);

    SimulateResult res;
    try {
        GaugeField f = sc.hot ? hot_start(sc.dims, sc.seed) : cold_start(sc.dims);
        McState st{sc.seed, 0};

        CsvFile csv(std::filesystem::path(out_dir) / "measurements.csv",
                    "sweep,avg_plaquette");
        man.add_output("measurements.csv");

        for (int i = 0; i < sc.n_therm; ++i)
            compound_sweep(f, sc.beta, sc.overrelax_per_heatbath, st);

        int measurements = 0;
        for (int i = 1; i <= sc.n_sweeps; ++i) {
            compound_sweep(f, sc.beta, sc.overrelax_per_heatbath, st);
            if (i % sc.measure_every != 0) continue;
            double p = average_plaquette(f);
            csv.line(std::to_string(st.sweep) + "," + g17(p));
            res.last_plaquette = p;
            ++res.rows;
            ++measurements;
            if (sc.snapshot_every > 0 && measurements % sc.snapshot_every == 0) {
                char name[40];
                std::snprintf(name, sizeof name, "snapshot_%06llu.snap",
                              static_cast<unsigned long long>(st.sweep));
                write_snapshot((std::filesystem::path(out_dir) / name).string(), f, sc.beta,
                               st.sweep);
                man.add_output(name);
                res.snapshots.push_back(name);
            }
        }
        csv.close();
        man.write(true);
    } catch (...) {
        // leave a partial-manifest marker so the debris is recognizable
        try {
            man.write(false);
        } catch (...) {
        }
        throw;
    }
    return res;
}

// ---------------------------------------------------------------------------
// magflow: gauge fixing, abelian projection, monopoles, loops over an ensemble

struct MagflowOptions {
    std::vector<std::string> snapshots;
    std::string out_dir = ".";
    MagParams mag{};
    int rmax = 3, tmax = 3;  // loop table extents, clamped to the lattice
    int charge = 2;          // abelian loop charge
    bool dump_monopoles = false;
    int threads = 0;  // 0 = take DUALMEISSNER_THREADS (default 1)
};

struct MagflowResult {
    int processed = 0;
    int skipped = 0;
    Estimate functional, density, chi22, chi33, abelian_chi22;
};

namespace detail {

struct MagRow {
    bool ok = false;
    std::string warning;
    double functional = 0.0;
    int iterations = 0;
    bool converged = false;
    double density = 0.0;
    std::vector<double> wloops;  // [(r-1)*tmax + (t-1)]
    std::vector<double> aloops;
    std::vector<std::array<int, 6>> monopoles;  // x,y,z,t,mu,k
};

inline MagRow magflow_one(const std::string& path, const MagflowOptions& o,
                          const std::array<int, 4>& want_dims, int rmax, int tmax) {
    MagRow row;
    Snapshot snap;
    try {
        snap = read_snapshot(path);
    } catch (const IoError& e) {
        row.warning = e.what();
        return row;
    }
    if (snap.field.lat.dims() != want_dims) {
        row.warning = "snapshot '" + path + "' has mismatched dimensions";
        return row;
    }
    GaugeField& f = snap.field;

    MagReport rep = mag_fix(f, o.mag);
    row.functional = rep.functional;
    row.iterations = rep.iterations;
    row.converged = rep.converged;
    if (!rep.converged)
        row.warning = "gauge fixing hit the iteration cap on '" + path +
                      "' (delta " + g17(rep.final_delta) + "); keeping the row";

    AbelianField ab = abelian_project(f);
    MonopoleField mk = monopole_currents(ab);
    row.density = monopole_density(mk);

    row.wloops.resize(static_cast<std::size_t>(rmax) * tmax);
    row.aloops.resize(static_cast<std::size_t>(rmax) * tmax);
    for (int r = 1; r <= rmax; ++r)
        for (int t = 1; t <= tmax; ++t) {
            row.wloops[static_cast<std::size_t>(r - 1) * tmax + (t - 1)] = wilson_loop(f, r, t);
            row.aloops[static_cast<std::size_t>(r - 1) * tmax + (t - 1)] =
                abelian_wilson_loop(ab, r, t, o.charge);
        }

    if (o.dump_monopoles) {
        for (int s = 0; s < mk.lat.volume(); ++s)
            for (int mu = 0; mu < 4; ++mu)
                if (int k = mk.at(s, mu); k != 0) {
                    auto c = mk.lat.coords(s);
                    row.monopoles.push_back({c[0], c[1], c[2], c[3], mu, k});
                }
    }
    row.ok = true;
    return row;
}

inline Estimate summarize(std::vector<std::vector<double>> samples,
                          const std::function<double(const std::vector<double>&)>& f) {
    try {
        return jackknife(samples, f);
    } catch (const std::exception&) {
        double nan = std::nan("");
        return {nan, nan};
    }
}

}  // namespace detail

inline MagflowResult run_magflow(const MagflowOptions& o) {
    if (o.snapshots.empty()) throw ConfigError("magflow needs at least one snapshot");
    if (o.rmax < 1 || o.tmax < 1) throw ConfigError("loop extents must be >= 1");
    if (o.charge < 1) throw ConfigError("abelian loop charge must be >= 1");
    const int threads = o.threads > 0 ? o.threads : env_threads();

    std::filesystem::create_directories(o.out_dir);
    RunManifest man("magflow", o.out_dir);
    {
        std::string joined;
        for (const auto& s : o.snapshots) {
            if (!joined.empty()) joined += ';';
            joined += s;
        }
        man.set_config({{"snapshots", joined},
                        {"omega", g17(o.mag.omega)},
                        {"tol", g17(o.mag.tol)},
                        {"max_iter", std::to_string(o.mag.max_iter)},
                        {"rmax", std::to_string(o.rmax)},
                        {"tmax", std::to_string(o.tmax)},
                        {"charge", std::to_string(o.charge)},
                        {"dump_monopoles", o.dump_monopoles ? "true" : "false"},
                        {"threads", std::to_string(threads)}});
    }

    MagflowResult res;
    try {
        // the first readable snapshot pins the lattice shape and loop extents
        std::array<int, 4> dims{};
        int first = -1;
        std::vector<std::string> early_warn;
        for (int i = 0; i < static_cast<int>(o.snapshots.size()) && first < 0; ++i) {
            try {
                Snapshot probe = read_snapshot(o.snapshots[i]);
                dims = probe.field.lat.dims();
                first = i;
            } catch (const IoError& e) {
                early_warn.push_back(e.what());
            }
        }
        for (const auto& w : early_warn) std::cerr << "warning: skipping: " << w << "\n";
        if (first < 0) throw IoError("all " + std::to_string(o.snapshots.size()) +
                                     " snapshots were unreadable");
        int dmin = *std::min_element(dims.begin(), dims.end());
        const int rmax = std::min(o.rmax, dmin / 2);
        const int tmax = std::min(o.tmax, dmin / 2);

        const int n = static_cast<int>(o.snapshots.size());
        auto rows = parallel_map(n, threads, [&](int i) {
            if (i < first) return detail::MagRow{};  // already diagnosed above
            return detail::magflow_one(o.snapshots[i], o, dims, rmax, tmax);
        });

        std::string header = "file,mag_functional,mag_iterations,mag_converged,monopole_density";
        for (int r = 1; r <= rmax; ++r)
            for (int t = 1; t <= tmax; ++t)
                header += ",w_" + std::to_string(r) + "_" + std::to_string(t);
        for (int r = 1; r <= rmax; ++r)
            for (int t = 1; t <= tmax; ++t)
                header += ",aw" + std::to_string(o.charge) + "_" + std::to_string(r) + "_" +
                          std::to_string(t);

        CsvFile csv(std::filesystem::path(o.out_dir) / "magflow.csv", header);
        man.add_output("magflow.csv");

        std::vector<std::vector<double>> wsamples, asamples;
        std::vector<double> funcs, densities;
        for (int i = 0; i < n; ++i) {
            const auto& row = rows[i];
            if (!row.warning.empty() && (i >= first || row.ok))
                std::cerr << (row.ok ? "warning: " : "warning: skipping: ") << row.warning
                          << "\n";
            if (!row.ok) {
                ++res.skipped;
                continue;
            }
            ++res.processed;
            std::string line = std::filesystem::path(o.snapshots[i]).filename().string();
            line += "," + g17(row.functional);
            line += "," + std::to_string(row.iterations);
            line += row.converged ? ",1" : ",0";
            line += "," + g17(row.density);
            for (double w : row.wloops) line += "," + g17(w);
            for (double w : row.aloops) line += "," + g17(w);
            csv.line(line);
            wsamples.push_back(row.wloops);
            asamples.push_back(row.aloops);
            funcs.push_back(row.functional);
            densities.push_back(row.density);

            if (o.dump_monopoles) {
                char name[48];
                std::snprintf(name, sizeof name, "monopoles_%04d.csv", i);
                CsvFile dump(std::filesystem::path(o.out_dir) / name, "x,y,z,t,mu,k");
                for (const auto& m : row.monopoles) {
                    std::string l;
                    for (int c = 0; c < 6; ++c) l += (c ? "," : "") + std::to_string(m[c]);
                    dump.line(l);
                }
                dump.close();
                man.add_output(name);
            }
        }
        csv.close();
        if (res.processed == 0)
            throw IoError("all " + std::to_string(n) + " snapshots were skipped");

        auto chi_of = [tmax](int r, int t) {
            return [r, t, tmax](const std::vector<double>& m) {
                LoopTable lt;
                lt.rmax = static_cast<int>(m.size()) / tmax;
                lt.tmax = tmax;
                lt.w = m;
                return creutz_ratio(lt, r, t);
            };
        };
        const double nan = std::nan("");
        res.functional = funcs.size() > 1 ? mean_error(funcs) : Estimate{funcs[0], nan};
        res.density = densities.size() > 1 ? mean_error(densities) : Estimate{densities[0], nan};
        res.chi22 = (rmax >= 2 && tmax >= 2) ? detail::summarize(wsamples, chi_of(2, 2))
                                             : Estimate{nan, nan};
        res.chi33 = (rmax >= 3 && tmax >= 3) ? detail::summarize(wsamples, chi_of(3, 3))
                                             : Estimate{nan, nan};
        res.abelian_chi22 = (rmax >= 2 && tmax >= 2)
                                ? detail::summarize(asamples, chi_of(2, 2))
                                : Estimate{nan, nan};

        CsvFile sum(std::filesystem::path(o.out_dir) / "magflow_summary.csv",
                    "observable,value,error,n");
        man.add_output("magflow_summary.csv");
        auto put = [&](const std::string& name, const Estimate& e) {
            sum.line(name + "," + g17(e.value) + "," + g17(e.error) + "," +
                     std::to_string(res.processed));
        };
        put("mag_functional", res.functional);
        put("monopole_density", res.density);
        put("chi_2_2", res.chi22);
        put("chi_3_3", res.chi33);
        put("abelian_q" + std::to_string(o.charge) + "_chi_2_2", res.abelian_chi22);
        sum.close();
        man.write(true);
    } catch (...) {
        try {
            man.write(false);
        } catch (...) {
        }
        throw;
    }
    return res;
}

// ---------------------------------------------------------------------------
// bps

struct BpsOptions {
    int grid = 48;
    double h = 0.25;
    double e = 1.0;
    double v = 1.0;
    double radius = 3.0;  // surface-quadrature sphere
    int bins = 48;
    std::string out_dir = ".";
};

struct BpsResult {
    double charge = 0.0;
    double topological = 0.0;
    EnergyBreakdown energy;
    double residual = 0.0;
};

inline BpsResult run_bps(const BpsOptions& o) {
    if (o.grid < 8) throw ConfigError("bps grid must be >= 8 points per axis");
    if (o.h <= 0) throw ConfigError("bps grid spacing must be > 0");

    std::filesystem::create_directories(o.out_dir);
    RunManifest man("bps", o.out_dir);
    man.set_config({{"grid", std::to_string(o.grid)},
                    {"h", g17(o.h)},
                    {"e", g17(o.e)},
                    {"v", g17(o.v)},
                    {"radius", g17(o.radius)},
                    {"bins", std::to_string(o.bins)}});

    BpsResult res;
    try {
        BpsConfig cfg;
        cfg.grid = Grid3{o.grid, o.h};
        cfg.e = o.e;
        cfg.v = o.v;
        FieldConfig fld = prasad_sommerfield(cfg);
        BpsDerived der = compute_derived(fld);
        res.charge = magnetic_charge(der, o.radius);
        res.topological = topological_charge(der);
        res.energy = total_energy(der, res.charge);
        res.residual = bogomolny_residual(der);

        CsvFile prof(std::filesystem::path(o.out_dir) / "bps_profile.csv",
                     "r,phi_norm,b_norm,energy_density");
        man.add_output("bps_profile.csv");
        for (const auto& s : radial_profile(fld, der, o.bins))
            prof.line(g17(s.r) + "," + g17(s.phi_norm) + "," + g17(s.b_norm) + "," +
                      g17(s.energy_density));
        prof.close();

        CsvFile sum(std::filesystem::path(o.out_dir) / "bps_summary.csv",
                    "grid,h,e,v,radius,charge,topological_charge,interior_energy,tail_energy,"
                    "total_energy,bogomolny_residual");
        man.add_output("bps_summary.csv");
        sum.line(std::to_string(o.grid) + "," + g17(o.h) + "," + g17(o.e) + "," + g17(o.v) +
                 "," + g17(o.radius) + "," + g17(res.charge) + "," + g17(res.topological) +
                 "," + g17(res.energy.interior) + "," + g17(res.energy.tail) + "," +
                 g17(res.energy.total) + "," + g17(res.residual));
        sum.close();
        man.write(true);
    } catch (...) {
        try {
            man.write(false);
        } catch (...) {
        }
        throw;
    }
    return res;
}

// ---------------------------------------------------------------------------
// vortex

struct VortexOptions {
    GLParameters prm{};
    VortexParams solver{};
    std::string out_dir = ".";
};

struct VortexRunResult {
    GLScales scales;
    double flux_exact = 0.0;
    double flux_quad = 0.0;
    double tension = 0.0;
    TailFit higgs_fit, gauge_fit;  // mass 0 when the fit window is empty
    int newton_iters = 0;
    double residual = 0.0;
};

inline VortexRunResult run_vortex(const VortexOptions& o) {
    std::filesystem::create_directories(o.out_dir);
    RunManifest man("vortex", o.out_dir);
    man.set_config({{"g", g17(o.prm.g)},
                    {"lambda", g17(o.prm.lambda)},
                    {"v", g17(o.prm.v)},
                    {"n", std::to_string(o.prm.n)},
                    {"nodes", std::to_string(o.solver.nodes)},
                    {"rmax_factor", g17(o.solver.rmax_factor)}});

    VortexRunResult res;
    try {
        VortexSolution sol = solve_vortex(o.prm, o.solver);
        res.scales = gl_scales(o.prm);
        res.flux_exact = flux(sol);
        res.flux_quad = flux_quadrature(sol);
        res.tension = string_tension(sol);
        res.newton_iters = sol.newton_iters;
        res.residual = sol.residual;
        try {
            res.higgs_fit = fit_higgs_mass(sol);
        } catch (const std::exception&) {
        }
        try {
            res.gauge_fit = fit_gauge_mass(sol);
        } catch (const std::exception&) {
        }

        auto b = b_theta_profile(sol);
        auto en = energy_density_profile(sol);
        CsvFile prof(std::filesystem::path(o.out_dir) / "vortex_profile.csv",
                     "r,S,a,b_theta,energy_density");
        man.add_output("vortex_profile.csv");
        for (std::size_t i = 0; i < sol.r.size(); ++i)
            prof.line(g17(sol.r[i]) + "," + g17(sol.S[i]) + "," + g17(sol.a[i]) + "," +
                      g17(b[i]) + "," + g17(en[i]));
        prof.close();

        CsvFile sum(std::filesystem::path(o.out_dir) / "vortex_summary.csv",
                    "g,lambda,v,n,m_higgs,m_gauge,coherence_len,penetration_len,type2,"
                    "critical,flux,flux_quadrature,tension,fitted_m_higgs,fitted_m_gauge,"
                    "newton_iters,residual");
        man.add_output("vortex_summary.csv");
        sum.line(g17(o.prm.g) + "," + g17(o.prm.lambda) + "," + g17(o.prm.v) + "," +
                 std::to_string(o.prm.n) + "," + g17(res.scales.m_higgs) + "," +
                 g17(res.scales.m_gauge) + "," + g17(res.scales.coherence_len) + "," +
                 g17(res.scales.penetration_len) + "," + (res.scales.type2 ? "1" : "0") + "," +
                 (res.scales.critical ? "1" : "0") + "," + g17(res.flux_exact) + "," +
                 g17(res.flux_quad) + "," + g17(res.tension) + "," + g17(res.higgs_fit.mass) +
                 "," + g17(res.gauge_fit.mass) + "," + std::to_string(res.newton_iters) + "," +
                 g17(res.residual));
        sum.close();
        man.write(true);
    } catch (...) {
        try {
            man.write(false);
        } catch (...) {
        }
        throw;
    }
    return res;
}

// ---------------------------------------------------------------------------
// higgsmass

struct HiggsOptions {
    double volume = 0.0;
    double cs = 0.0;
    std::string name = "benchmark";
    bool planck_h = false;  // use the h-based Planck mass instead of hbar-based
    std::string out_dir = ".";
};

struct HiggsResult {
    double efolds = 0.0;
    double log10 = 0.0;
    double mass_gev = 0.0;
    bool sufficient = false;
};

inline HiggsResult run_higgsmass(const HiggsOptions& o) {
    std::filesystem::create_directories(o.out_dir);
    RunManifest man("higgsmass", o.out_dir);
    man.set_config({{"volume", g17(o.volume)},
                    {"cs", g17(o.cs)},
                    {"name", o.name},
                    {"planck", o.planck_h ? "h" : "hbar"}});

    HiggsResult res;
    try {
        PhysicalConstants pc =
            o.planck_h ? PhysicalConstants::h_based() : PhysicalConstants::hbar_based();
        res.efolds = efolds(o.volume, o.cs);
        res.log10 = log10_scale(res.efolds);
        res.mass_gev = higgs_mass_gev(o.volume, o.cs, pc);
        res.sufficient = sufficient_inflation(res.efolds);

        CsvFile csv(std::filesystem::path(o.out_dir) / "higgsmass.csv",
                    "name,efolds,log10_scale,higgs_mass_gev,sufficient_inflation");
        man.add_output("higgsmass.csv");
        csv.line(o.name + "," + g17(res.efolds) + "," + g17(res.log10) + "," +
                 g17(res.mass_gev) + "," + (res.sufficient ? "1" : "0"));
        csv.close();
        man.write(true);
    } catch (...) {
        try {
            man.write(false);
        } catch (...) {
        }
        throw;
    }
    return res;
}

}  // namespace dm
