// Command line front end. Subcommands wrap the library runners; every error
// path exits nonzero with a machine-parseable `error: class=...` diagnostic
// on stderr (config=2, convergence=3, io=4).

#include <cstdio>
#include <exception>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "dualmeissner/config.hpp"
#include "dualmeissner/errors.hpp"
#include "dualmeissner/manifest.hpp"
#include "dualmeissner/runner.hpp"

namespace {

int dispatch(CLI::App& app, int argc, char** argv) {
    try {
        app.parse(argc, argv);
        return 0;
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);  // prints help, exits 0
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "error: class=config: " << e.what() << "\n";
        return dm::ConfigError::exit_code;
    } catch (const dm::ConfigError& e) {
        std::cerr << "error: class=config: " << e.what() << "\n";
        return dm::ConfigError::exit_code;
    } catch (const dm::ConvergenceError& e) {
        std::cerr << "error: class=convergence: " << e.what() << "\n";
        return dm::ConvergenceError::exit_code;
    } catch (const dm::IoError& e) {
        std::cerr << "error: class=io: " << e.what() << "\n";
        return dm::IoError::exit_code;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: class=config: " << e.what() << "\n";
        return dm::ConfigError::exit_code;
    } catch (const std::exception& e) {
        std::cerr << "error: class=internal: " << e.what() << "\n";
        return 1;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"dual superconductor toolkit: SU(2) lattice ensembles, abelian "
                 "projection and monopole currents, BPS monopole checks, dual "
                 "Ginzburg-Landau vortex profiles, and the topological Higgs-mass "
                 "estimate"};
    app.require_subcommand(1);

    // --- simulate ---------------------------------------------------------
    auto* sim = app.add_subcommand("simulate", "run a heat-bath/overrelaxation ensemble");
    std::string sim_config, sim_out = ".";
    double sim_beta = 0.0;
    std::vector<int> sim_dims;
    long long sim_therm = -1, sim_sweeps = -1, sim_measure = -1, sim_or = -1, sim_snap = -1;
    long long sim_seed = -1;
    std::string sim_start;
    sim->add_option("--config", sim_config, "key=value config file");
    sim->add_option("--out", sim_out, "output directory (default .)");
    auto* fbeta = sim->add_option("--beta", sim_beta, "gauge coupling (overrides file)");
    auto* fdims = sim->add_option("--dims", sim_dims, "lattice extents, 4 integers")
                      ->expected(4);
    auto* ftherm = sim->add_option("--n-therm", sim_therm, "thermalization sweeps");
    auto* fsweeps = sim->add_option("--n-sweeps", sim_sweeps, "measurement-phase sweeps");
    auto* fmeas = sim->add_option("--measure-every", sim_measure, "sweeps between measurements");
    auto* forh = sim->add_option("--or-per-hb", sim_or, "overrelaxation sweeps per heat bath");
    auto* fseed = sim->add_option("--seed", sim_seed, "RNG seed");
    auto* fsnap = sim->add_option("--snapshot-every", sim_snap,
                                  "snapshot every N measurements (0 = never)");
    auto* fstart = sim->add_option("--start", sim_start, "hot or cold");
    sim->callback([&] {
        dm::Config cfg = sim_config.empty() ? dm::Config{} : dm::Config::parse_file(sim_config);
        if (fbeta->count()) cfg.set("lattice.beta", dm::g17(sim_beta));
        if (fdims->count())
            cfg.set("lattice.dims", std::to_string(sim_dims[0]) + " " +
                                        std::to_string(sim_dims[1]) + " " +
                                        std::to_string(sim_dims[2]) + " " +
                                        std::to_string(sim_dims[3]));
        if (ftherm->count()) cfg.set("mc.n_therm", std::to_string(sim_therm));
        if (fsweeps->count()) cfg.set("mc.n_sweeps", std::to_string(sim_sweeps));
        if (fmeas->count()) cfg.set("mc.measure_every", std::to_string(sim_measure));
        if (forh->count()) cfg.set("mc.overrelax_per_heatbath", std::to_string(sim_or));
        if (fseed->count()) cfg.set("mc.seed", std::to_string(sim_seed));
        if (fsnap->count()) cfg.set("mc.snapshot_every", std::to_string(sim_snap));
        if (fstart->count()) cfg.set("mc.start", sim_start);
        dm::SimulationConfig sc = dm::simulation_config_from(cfg);
        dm::SimulateResult r = dm::run_simulate(sc, sim_out);
        std::cout << "simulate: " << r.rows << " measurements, " << r.snapshots.size()
                  << " snapshots, final avg_plaquette " << dm::g17(r.last_plaquette) << "\n";
    });

    // --- magflow ----------------------------------------------------------
    auto* mag = app.add_subcommand(
        "magflow", "gauge-fix snapshots, project, count monopoles, measure loops");
    dm::MagflowOptions mo;
    mag->add_option("snapshots", mo.snapshots, "snapshot files")->required();
    mag->add_option("--out", mo.out_dir, "output directory (default .)");
    mag->add_option("--omega", mo.mag.omega, "gauge-fixing overrelaxation parameter");
    mag->add_option("--tol", mo.mag.tol, "gauge-fixing stop tolerance");
    mag->add_option("--max-iter", mo.mag.max_iter, "gauge-fixing iteration cap");
    mag->add_option("--rmax", mo.rmax, "largest loop spatial extent");
    mag->add_option("--tmax", mo.tmax, "largest loop temporal extent");
    mag->add_option("--charge", mo.charge, "abelian loop charge");
    mag->add_flag("--dump-monopoles", mo.dump_monopoles, "write per-config current lists");
    mag->add_option("--threads", mo.threads,
                    "worker threads (default: DUALMEISSNER_THREADS or 1)");
    mag->callback([&] {
        dm::MagflowResult r = dm::run_magflow(mo);
        std::cout << "magflow: " << r.processed << " configs";
        if (r.skipped) std::cout << " (" << r.skipped << " skipped)";
        std::cout << ", <R> " << dm::g17(r.functional.value) << ", monopole density "
                  << dm::g17(r.density.value) << "\n";
    });

    // --- bps --------------------------------------------------------------
    auto* bps = app.add_subcommand("bps", "evaluate the exact monopole on a grid");
    dm::BpsOptions bo;
    bps->set_help_flag("--help", "print this help message and exit");  // frees -h / --h
    bps->add_option("--grid", bo.grid, "points per axis");
    bps->add_option("--h", bo.h, "grid spacing");
    bps->add_option("--e", bo.e, "gauge coupling");
    bps->add_option("--v", bo.v, "scalar vacuum value");
    bps->add_option("--radius", bo.radius, "surface-quadrature sphere radius");
    bps->add_option("--bins", bo.bins, "radial profile bins");
    bps->add_option("--out", bo.out_dir, "output directory (default .)");
    bps->callback([&] {
        dm::BpsResult r = dm::run_bps(bo);
        std::cout << "bps: charge " << dm::g17(r.charge) << ", energy "
                  << dm::g17(r.energy.total) << ", bogomolny residual "
                  << dm::g17(r.residual) << "\n";
    });

    // --- vortex -----------------------------------------------------------
    auto* vtx = app.add_subcommand("vortex", "solve the dual flux-tube profile");
    dm::VortexOptions vo;
    vtx->add_option("--g", vo.prm.g, "dual gauge coupling");
    vtx->add_option("--lambda", vo.prm.lambda, "condensate self-coupling");
    vtx->add_option("--v", vo.prm.v, "condensate vacuum value");
    vtx->add_option("--n", vo.prm.n, "flux quanta");
    vtx->add_option("--nodes", vo.solver.nodes, "mesh nodes");
    vtx->add_option("--rmax-factor", vo.solver.rmax_factor,
                    "box size in units of the longest screening length");
    vtx->add_option("--max-newton", vo.solver.max_newton, "iteration cap for the solver");
    vtx->add_option("--out", vo.out_dir, "output directory (default .)");
    vtx->callback([&] {
        dm::VortexRunResult r = dm::run_vortex(vo);
        std::cout << "vortex: tension " << dm::g17(r.tension) << ", flux "
                  << dm::g17(r.flux_quad) << ", type "
                  << (r.scales.critical ? "critical" : (r.scales.type2 ? "II" : "I")) << "\n";
    });

    // --- higgsmass --------------------------------------------------------
    auto* hm = app.add_subcommand("higgsmass",
                                  "suppressed mass scale from 3-manifold invariants");
    dm::HiggsOptions ho;
    hm->add_option("--vol", ho.volume, "hyperbolic volume")->required();
    hm->add_option("--cs", ho.cs, "Chern-Simons invariant")->required();
    hm->add_option("--name", ho.name, "row label");
    hm->add_flag("--planck-h", ho.planck_h, "use the h-based Planck mass");
    hm->add_option("--out", ho.out_dir, "output directory (default .)");
    hm->callback([&] {
        dm::HiggsResult r = dm::run_higgsmass(ho);
        std::cout << "higgsmass: " << dm::g17(r.mass_gev) << " GeV, " << dm::g17(r.efolds)
                  << " e-folds" << (r.sufficient ? "" : " (insufficient)") << "\n";
    });

    // --- verify -----------------------------------------------------------
    auto* ver = app.add_subcommand("verify", "re-check a run manifest's file digests");
    std::string ver_path;
    ver->add_option("manifest", ver_path, "manifest JSON file")->required();
    ver->callback([&] {
        dm::VerifyReport rep = dm::verify_manifest(ver_path);
        for (const auto& m : rep.mismatches) std::cout << "mismatch: " << m << "\n";
        std::cout << "verify: " << rep.checked << " files, "
                  << (rep.ok() ? "all digests match" : "FAILED") << "\n";
        if (!rep.ok()) throw dm::IoError("manifest verification failed");
    });

    return dispatch(app, argc, argv);
}
