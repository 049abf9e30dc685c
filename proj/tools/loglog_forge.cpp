// loglog-forge: numerical laboratory for log-log blow-up of quintic NLS on
// rotationally symmetric surfaces. Subcommands: profile, radiation, spectral,
// simulate, check-init, fit.
#include <CLI11.hpp>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "llf/config.hpp"
#include "llf/csv.hpp"
#include "llf/diagnostics.hpp"
#include "llf/errors.hpp"
#include "llf/evolution.hpp"
#include "llf/geometry.hpp"
#include "llf/modulation.hpp"
#include "llf/parallel.hpp"
#include "llf/profiles.hpp"
#include "llf/radiation.hpp"
#include "llf/spectral.hpp"

namespace fs = std::filesystem;
using namespace llf;

namespace {

std::string b_tag(double b) {
    char tmp[32];
    std::snprintf(tmp, sizeof tmp, "%.4f", b);
    return tmp;
}

void ensure_dir(const std::string& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    require(!ec, "io-error", "cannot create output directory " + dir);
}

int cmd_profile(const std::vector<double>& bs, double eta, const std::string& out,
                unsigned threads) {
    ensure_dir(out);
    std::vector<prof::TruncatedProfile> tps(bs.size());
    parallel_for(bs.size(), [&](std::size_t i) {
        tps[i] = prof::truncate(prof::solve_profile(bs[i], eta));
    }, threads);
    CsvWriter summary({"b", "R_b", "shoot_value", "mass_excess", "energy_1d",
                       "momentum", "closeness"});
    for (std::size_t i = 0; i < bs.size(); ++i) {
        const auto& tp = tps[i];
        auto inv = prof::profile_invariants(tp);
        summary.row({tp.base.b, tp.base.R_b, tp.base.shoot_value, inv.mass_excess,
                     inv.energy_1d, inv.momentum, inv.closeness});
        CsvWriter w({"y", "ReQt", "ImQt", "RePsi", "ImPsi"});
        for (std::size_t k = 0; k < tp.y.size(); ++k)
            w.row({tp.y[k], tp.Qtilde[k].real(), tp.Qtilde[k].imag(), tp.Psi[k].real(),
                   tp.Psi[k].imag()});
        w.write_file(out + "/profile_b" + b_tag(tp.base.b) + ".csv");
    }
    summary.write_file(out + "/profile_summary.csv");
    if (bs.size() >= 2) {
        std::vector<double> small;
        for (double b : bs)
            if (b <= 0.2) small.push_back(b);
        if (small.size() >= 2) {
            CsvWriter d0csv({"d0"});
            d0csv.row({prof::d0_estimate(small, eta)});
            d0csv.write_file(out + "/d0.csv");
        }
    }
    return 0;
}

int cmd_radiation(const std::vector<double>& bs, double eta, const std::string& out,
                  bool dump_fields, unsigned threads) {
    ensure_dir(out);
    std::vector<rad::RadiationSolution> sols(bs.size());
    std::vector<double> semis(bs.size());
    parallel_for(bs.size(), [&](std::size_t i) {
        auto p = prof::solve_profile(bs[i], eta);
        sols[i] = rad::solve_zeta(p);
        semis[i] = rad::gamma_semiclassical(p);
    }, threads);
    CsvWriter w({"b", "Gamma_b", "plateau_low", "plateau_high", "method", "variation",
                 "Gamma_semiclassical", "zeta_grad_sq"});
    std::vector<std::pair<double, double>> pts;
    for (std::size_t i = 0; i < bs.size(); ++i) {
        const auto& s = sols[i];
        w.raw_row({CsvWriter::format(s.b), CsvWriter::format(s.Gamma_b),
                   CsvWriter::format(s.plateau_lo), CsvWriter::format(s.plateau_hi),
                   s.method, CsvWriter::format(s.plateau_variation),
                   CsvWriter::format(semis[i]), CsvWriter::format(s.zeta_grad_sq)});
        pts.emplace_back(s.b, s.Gamma_b);
        if (dump_fields) {
            CsvWriter f({"r", "ReZ", "ImZ", "ReZeta", "ImZeta"});
            for (std::size_t k = 0; k < s.r.size(); ++k)
                f.row({s.r[k], s.Ztilde[k].real(), s.Ztilde[k].imag(), s.zeta[k].real(),
                       s.zeta[k].imag()});
            f.write_file(out + "/radiation_b" + b_tag(s.b) + ".csv");
        }
    }
    w.write_file(out + "/radiation.csv");
    if (pts.size() >= 3) {
        auto fit = rad::gamma_slope_fit(pts);
        CsvWriter fw({"slope", "intercept"});
        fw.row({fit.slope, fit.intercept});
        fw.write_file(out + "/gamma_fit.csv");
    }
    return 0;
}

int cmd_spectral(double L, std::size_t N, const std::string& out) {
    ensure_dir(out);
    auto r = spectral::coercivity_delta(L, N);
    CsvWriter w({"L", "N", "min_raw_1", "min_raw_2", "delta_hat"});
    w.row({r.L, static_cast<double>(r.N), r.min_raw_1, r.min_raw_2, r.delta_hat});
    w.write_file(out + "/coercivity.csv");
    std::cout << "delta_hat = " << r.delta_hat << "\n";
    return 0;
}

evo::SimConfig sim_config_from(const cfg::RunConfig& rc, const geom::SurfaceMetric& m) {
    evo::SimConfig sc;
    sc.grid = geom::make_grid(m, rc.grid_r_lo, rc.grid_r_hi, rc.grid_n);
    sc.c_dt = rc.c_dt;
    sc.dt_max = rc.dt_max;
    sc.max_time = rc.max_time;
    sc.lambda_floor_cells = rc.lambda_floor_cells;
    sc.grad_ceiling = rc.grad_ceiling;
    sc.record_every = rc.record_every;
    sc.snapshot_every = rc.snapshot_every;
    sc.track_modulation = rc.track_modulation;
    sc.b0 = rc.b0;
    sc.sign = rc.sign;
    if (rc.track_modulation || rc.eps0_kind != "none")
        sc.family = mod::ProfileFamily(rc.family_b_min, rc.family_b_max, rc.family_db,
                                       rc.profile_eta);
    mod::ModulationState g;
    g.lambda = rc.lambda0;
    g.r_center = rc.r0;
    g.gamma = rc.gamma0;
    g.b = rc.b0;
    g.metric = m;
    sc.initial_guess = g;
    return sc;
}

geom::RadialField initial_from(const cfg::RunConfig& rc, const evo::SimConfig& sc) {
    evo::Eps0Spec spec;
    spec.kind = rc.eps0_kind == "none" ? evo::Eps0Spec::Kind::None
                                       : evo::Eps0Spec::Kind::GaussianEven;
    spec.width = rc.eps0_width;
    spec.amplitude = rc.eps0_amplitude;
    return evo::synthesize_initial(sc.grid, sc.family, rc.lambda0, rc.r0, rc.gamma0,
                                   rc.b0, spec, rc.alpha_star, rc.strict_loglog);
}

void write_trajectory(const evo::TrajectoryRecord& tr, const std::string& path) {
    CsvWriter w({"t", "lambda", "b", "r_center", "gamma", "mass", "energy",
                 "momentum_loc", "E2", "s", "grad_norm", "E_local", "tracked"});
    for (std::size_t i = 0; i < tr.t.size(); ++i) {
        const auto& st = tr.states[i];
        w.row({tr.t[i], tr.tracked[i] ? st.lambda : tr.lambda_est[i],
               tr.tracked[i] ? st.b : 0.0, tr.tracked[i] ? st.r_center : 0.0,
               tr.tracked[i] ? st.gamma : 0.0, tr.mass[i], tr.energy[i],
               tr.momentum_loc[i], tr.E2[i], tr.s[i], tr.grad_norm[i], tr.E_local[i],
               static_cast<double>(tr.tracked[i])});
    }
    w.write_file(path);
}

void write_law_report(const diag::LawReport& rep, const std::string& path) {
    CsvWriter w({"s", "b", "b_log_s", "lambda", "log_lambda_bound", "bs_smoothed",
                 "E_local", "gamma_proxy", "band_ok", "virial_ok", "lambda_bound_ok"});
    for (std::size_t i = 0; i < rep.s.size(); ++i)
        w.row({rep.s[i], rep.b[i], rep.b_log_s[i], rep.lambda[i], rep.log_lambda_bound[i],
               rep.bs_smoothed[i], rep.E_local[i], rep.gamma_proxy[i],
               static_cast<double>(rep.band_ok[i]), static_cast<double>(rep.virial_ok[i]),
               static_cast<double>(rep.lambda_bound_ok[i])});
    w.write_file(path);
}

int cmd_simulate(const std::string& config_path) {
    cfg::RunConfig rc = cfg::load_file(config_path);
    auto m = cfg::metric_from(rc);
    auto sc = sim_config_from(rc, m);
    auto u0 = initial_from(rc, sc);
    ensure_dir(rc.out_dir);
    auto tr = evo::run(sc, u0);
    write_trajectory(tr, rc.out_dir + "/trajectory.csv");
    // modulation series per the module's external interface
    {
        CsvWriter w({"t", "lambda", "r_center", "gamma", "b", "local_energy",
                     "ortho_res_1", "ortho_res_2", "ortho_res_3", "ortho_res_4"});
        for (std::size_t i = 0; i < tr.t.size(); ++i) {
            if (!tr.tracked[i]) continue;
            std::array<double, 4> o{0.0, 0.0, 0.0, 0.0};
            if (!tr.eps[i].eps.empty())
                o = mod::orthogonality_residuals(tr.states[i], tr.eps[i], sc.family);
            w.row({tr.t[i], tr.states[i].lambda, tr.states[i].r_center,
                   tr.states[i].gamma, tr.states[i].b, tr.E_local[i], o[0], o[1], o[2],
                   o[3]});
        }
        w.write_file(rc.out_dir + "/modulation.csv");
    }
    for (std::size_t k = 0; k < tr.snapshots.size(); ++k) {
        char name[64];
        std::snprintf(name, sizeof name, "snapshot_%06zu", k);
        double t = tr.t[tr.snapshot_index[k]];
        if (rc.binary_snapshots)
            cfg::write_snapshot_bin(rc.out_dir + "/" + name + ".bin", tr.snapshots[k]);
        else
            cfg::write_snapshot_csv(rc.out_dir + "/" + name + ".csv", t, tr.snapshots[k]);
    }
    // law monitors on the tracked portion
    std::vector<double> s, b, lam, El;
    for (std::size_t i = 0; i < tr.t.size(); ++i) {
        if (!tr.tracked[i]) continue;
        s.push_back(tr.s[i]);
        b.push_back(tr.states[i].b);
        lam.push_back(tr.states[i].lambda);
        El.push_back(tr.E_local[i]);
    }
    if (!s.empty()) {
        auto rep = diag::law_monitor(s, b, lam, El, rc.lambda0, rc.delta, rc.slack_lo,
                                     rc.slack_hi);
        write_law_report(rep, rc.out_dir + "/laws.csv");
    }
    // concentration series over snapshots
    if (!tr.snapshots.empty()) {
        CsvWriter w({"t", "window_mass", "total_mass", "remainder",
                     "eps_side_remainder", "R", "A", "target"});
        for (std::size_t k = 0; k < tr.snapshots.size(); ++k) {
            std::size_t i = tr.snapshot_index[k];
            if (!tr.tracked[i]) continue;
            auto pt = diag::concentration_point(tr.snapshots[k], tr.states[i], tr.eps[i],
                                                sc.family, rc.a_param);
            w.row({tr.t[i], pt.window_mass, pt.total_mass, pt.remainder,
                   pt.eps_side_remainder, pt.R, pt.A,
                   diag::concentration_target(tr.states[i])});
        }
        w.write_file(rc.out_dir + "/concentration.csv");
    }
    std::cout << "stop_reason = " << tr.stop_reason << "\n";
    return 0;
}

int cmd_check_init(const std::string& config_path) {
    cfg::RunConfig rc = cfg::load_file(config_path);
    auto m = cfg::metric_from(rc);
    auto sc = sim_config_from(rc, m);
    auto u0 = initial_from(rc, sc);
    ensure_dir(rc.out_dir);
    auto [st, eps] = mod::decompose(u0, *sc.initial_guess, sc.family);
    mod::RegimeParams params;
    params.alpha_star = rc.alpha_star;
    params.delta = rc.delta;
    auto conds = mod::regime_check(u0, st, eps, sc.family, 'A', params);
    auto condsB = mod::regime_check(u0, st, eps, sc.family, 'B', params);
    CsvWriter w({"name", "checkable", "pass", "measured", "threshold", "note"});
    auto emit = [&](const mod::Condition& c) {
        w.raw_row({c.name, c.checkable ? "1" : "0", c.pass ? "1" : "0",
                   CsvWriter::format(c.measured), CsvWriter::format(c.threshold),
                   c.note});
        std::cout << c.name << ": "
                  << (!c.checkable ? "skipped" : (c.pass ? "pass" : "FAIL"))
                  << "  (measured " << c.measured << ", threshold " << c.threshold
                  << ")\n";
    };
    for (const auto& c : conds) emit(c);
    for (const auto& c : condsB) emit(c);
    w.write_file(rc.out_dir + "/init_conditions.csv");
    return 0;
}

int cmd_fit(const std::string& traj_path, const std::string& out, double lambda0,
            double delta, double slack_lo, double slack_hi) {
    std::ifstream in(traj_path);
    require(in.good(), "io-error", "cannot open trajectory " + traj_path);
    std::string line;
    std::getline(in, line); // header
    std::vector<double> t, lam, b, s, grad, El;
    while (std::getline(in, line)) {
        auto v = cfg::parse_list(line);
        require(v.size() >= 13, "io-error", "trajectory row needs 13 columns");
        if (v[12] < 0.5) continue; // untracked rows
        t.push_back(v[0]);
        lam.push_back(v[1]);
        b.push_back(v[2]);
        s.push_back(v[9]);
        grad.push_back(v[10]);
        El.push_back(v[11]);
    }
    require(!t.empty(), "tracking-missing", "no tracked rows in the trajectory");
    ensure_dir(out);
    auto rep = diag::law_monitor(s, b, lam, El, lambda0, delta, slack_lo, slack_hi);
    write_law_report(rep, out + "/laws.csv");
    CsvWriter w({"T_hat", "exponent", "ratio_lo", "ratio_hi", "loglog_correction",
                 "band_fraction", "virial_fraction"});
    auto fit = diag::loglog_fit(t, grad);
    w.row({fit.T_hat, fit.exponent, fit.ratio_lo, fit.ratio_hi,
           fit.loglog_correction ? 1.0 : 0.0, rep.band_fraction, rep.virial_fraction});
    w.write_file(out + "/fit.csv");
    std::cout << "T_hat = " << fit.T_hat << ", exponent = " << fit.exponent << "\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"loglog-forge: quintic NLS blow-up laboratory on rotationally symmetric surfaces"};
    app.require_subcommand(1);
    unsigned threads = 0;
    app.add_option("--threads", threads, "cap worker count (overrides LOGLOG_FORGE_THREADS)");

    std::vector<double> bs{0.2};
    double eta = 0.01;
    std::string out = "out";
    bool dump_fields = false;
    double L = 20.0;
    std::size_t N = 2000;
    std::string config_path, traj_path;
    double lambda0 = 2e-2, delta = 0.01, slack_lo = 0.5, slack_hi = 2.0;

    auto* profile = app.add_subcommand("profile", "solve self-similar profiles Q_b");
    profile->add_option("--b", bs, "b values");
    profile->add_option("--eta", eta, "cutoff parameter");
    profile->add_option("--out", out, "output directory");

    auto* radiation = app.add_subcommand("radiation", "radiation zeta_b and flux Gamma_b");
    radiation->add_option("--b", bs, "b values");
    radiation->add_option("--eta", eta, "cutoff parameter");
    radiation->add_option("--out", out, "output directory");
    radiation->add_flag("--dump-fields", dump_fields, "emit full Z/zeta fields");

    auto* spectralc = app.add_subcommand("spectral", "coercivity constant delta_hat");
    spectralc->add_option("--L", L, "half width");
    spectralc->add_option("--N", N, "node count");
    spectralc->add_option("--out", out, "output directory");

    auto* simulate = app.add_subcommand("simulate", "radial NLS run from a config");
    simulate->add_option("--config", config_path, "run config file")->required();

    auto* check = app.add_subcommand("check-init", "A/B condition ledger for the configured initial data");
    check->add_option("--config", config_path, "run config file")->required();

    auto* fit = app.add_subcommand("fit", "law monitors and log-log fit on a stored trajectory");
    fit->add_option("--trajectory", traj_path, "trajectory.csv from simulate")->required();
    fit->add_option("--out", out, "output directory");
    fit->add_option("--lambda0", lambda0, "initial scale for the lambda bound");
    fit->add_option("--delta", delta, "coercivity constant for the virial monitor");
    fit->add_option("--slack-lo", slack_lo, "lower band slack");
    fit->add_option("--slack-hi", slack_hi, "upper band slack");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        // usage/config errors exit 2
        app.exit(e);
        return e.get_exit_code() == 0 ? 0 : 2;
    }

    try {
        if (profile->parsed()) return cmd_profile(bs, eta, out, threads);
        if (radiation->parsed()) return cmd_radiation(bs, eta, out, dump_fields, threads);
        if (spectralc->parsed()) return cmd_spectral(L, N, out);
        if (simulate->parsed()) return cmd_simulate(config_path);
        if (check->parsed()) return cmd_check_init(config_path);
        if (fit->parsed()) return cmd_fit(traj_path, out, lambda0, delta, slack_lo, slack_hi);
    } catch (const Error& e) {
        std::cerr << "error: " << e.kind() << ": " << e.what() << "\n";
        return e.kind() == "config-error" ? 2 : 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
