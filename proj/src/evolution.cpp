#include "llf/evolution.hpp"

#include <cmath>

#include "llf/diagnostics.hpp"
#include "llf/errors.hpp"
#include "llf/groundstate.hpp"

namespace llf::evo {

namespace {

void nonlinear_phase(std::vector<cplx>& v, double dt_half, double sign) {
    // i u_t = σ|u|⁴u  ⇒  u ← u e^{-iσ|u|⁴ dt}
    for (auto& z : v) {
        double a2 = std::norm(z);
        z *= std::polar(1.0, -sign * a2 * a2 * dt_half);
    }
}

// Crank–Nicolson for u_t = iΔu: (I − i dt/2 Δ) u⁺ = (I + i dt/2 Δ) u,
// complex Thomas solve on the tridiagonal system.
void linear_cn(const geom::TridiagonalOp& lap, std::vector<cplx>& v, double dt) {
    std::size_t n = v.size();
    cplx alpha(0.0, 0.5 * dt);
    std::vector<cplx> rhs(n), c(n), d(n);
    for (std::size_t i = 0; i < n; ++i) {
        cplx acc = (1.0 + alpha * lap.diag[i]) * v[i];
        if (i > 0) acc += alpha * lap.sub[i] * v[i - 1];
        if (i + 1 < n) acc += alpha * lap.sup[i] * v[i + 1];
        rhs[i] = acc;
    }
    // forward sweep for the (I − αΔ) system
    cplx beta = 1.0 - alpha * lap.diag[0];
    require(std::abs(beta) > 0.0, "linear-solve-failure", "singular pivot");
    v[0] = rhs[0] / beta;
    for (std::size_t i = 1; i < n; ++i) {
        c[i - 1] = (-alpha * lap.sup[i - 1]) / beta;
        beta = (1.0 - alpha * lap.diag[i]) - (-alpha * lap.sub[i]) * c[i - 1];
        require(std::abs(beta) > 0.0, "linear-solve-failure", "singular pivot");
        v[i] = (rhs[i] - (-alpha * lap.sub[i]) * v[i - 1]) / beta;
    }
    for (std::size_t i = n - 1; i-- > 0;) v[i] -= c[i] * v[i + 1];
}

} // namespace

geom::RadialField step_with(const geom::TridiagonalOp& lap, const geom::RadialField& u,
                            double dt, double sign) {
    std::vector<cplx> v = u.values;
    if (dt != 0.0) {
        nonlinear_phase(v, 0.5 * dt, sign);
        linear_cn(lap, v, dt);
        nonlinear_phase(v, 0.5 * dt, sign);
    }
    return geom::RadialField{u.grid, std::move(v)};
}

geom::RadialField step(const geom::RadialField& u, double dt, double sign) {
    auto lap = geom::assemble_laplacian(u.grid);
    return step_with(lap, u, dt, sign);
}

double lambda_estimate(const geom::RadialField& u) {
    static const double q_grad = std::sqrt(std::sqrt(3.0) * M_PI / 4.0); // ‖Q'‖_{L²(ℝ)}
    double g2 = geom::grad_sq(u);
    if (g2 <= 0.0) return 1.0;
    std::size_t peak = 0;
    double best = -1.0;
    for (std::size_t i = 0; i < u.grid.n; ++i) {
        double a = std::norm(u.values[i]);
        if (a > best) {
            best = a;
            peak = i;
        }
    }
    double h = u.grid.metric.h(u.grid.node(peak));
    return q_grad * std::sqrt(2.0 * M_PI * std::max(h, 1e-300)) / std::sqrt(g2);
}

TrajectoryRecord run(const SimConfig& cfg, const geom::RadialField& u0) {
    require(cfg.c_dt > 0.0 && cfg.dt_max > 0.0, "parameter-out-of-range",
            "dt rule must be positive");
    require(cfg.lambda_floor_cells >= 2.0, "parameter-out-of-range",
            "lambda floor must be at least 2 cells");
    require(cfg.record_every >= 1, "parameter-out-of-range", "record cadence >= 1");
    TrajectoryRecord rec;
    auto lap = geom::assemble_laplacian(cfg.grid);
    geom::RadialField u = u0;
    double t = 0.0;
    double s = diag::s0_of(cfg.b0);
    double lambda_floor = cfg.lambda_floor_cells * cfg.grid.dr();
    bool tracking = cfg.track_modulation;
    mod::ModulationState guess;
    if (cfg.initial_guess) guess = *cfg.initial_guess;

    std::size_t step_idx = 0;
    std::size_t record_count = 0;
    for (;;) {
        double lam = lambda_estimate(u);

        bool do_record = (step_idx % cfg.record_every) == 0;
        if (do_record) {
            bool finite = true;
            for (const auto& z : u.values)
                if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
                    finite = false;
                    break;
                }
            if (!finite) {
                rec.stop_reason = "nan-detected";
                break;
            }
            auto cons = diag::conserved_report(u);
            rec.t.push_back(t);
            rec.s.push_back(s);
            rec.mass.push_back(cons.mass);
            rec.energy.push_back(cons.energy);
            rec.momentum_loc.push_back(cons.momentum_loc);
            rec.E2.push_back(cons.E2);
            rec.grad_norm.push_back(std::sqrt(geom::grad_sq(u)));
            bool got = false;
            mod::ModulationState st;
            mod::EpsilonField ef;
            if (tracking) {
                try {
                    auto [st2, ef2] = mod::decompose(u, guess, cfg.family);
                    st = st2;
                    ef = ef2;
                    guess = st2;
                    got = true;
                } catch (const Error&) {
                    // retry once from a field-based reseed before giving up
                    try {
                        mod::ModulationState fresh = guess;
                        std::size_t peak = 0;
                        double best = -1.0;
                        for (std::size_t i = 0; i < u.grid.n; ++i)
                            if (std::norm(u.values[i]) > best) {
                                best = std::norm(u.values[i]);
                                peak = i;
                            }
                        fresh.lambda = lam;
                        fresh.r_center = u.grid.node(peak);
                        fresh.gamma = std::arg(u.values[peak]);
                        auto [st2, ef2] = mod::decompose(u, fresh, cfg.family);
                        st = st2;
                        ef = ef2;
                        guess = st2;
                        got = true;
                    } catch (const Error& e) {
                        tracking = false;
                        rec.tracking_lost = true;
                        rec.tracking_lost_reason = e.what();
                    }
                }
            }
            rec.tracked.push_back(got ? 1 : 0);
            rec.states.push_back(st);
            rec.E_local.push_back(got ? mod::local_energy(st, ef) : 0.0);
            bool snap = cfg.snapshot_every > 0 && (record_count % cfg.snapshot_every) == 0;
            rec.eps.push_back(got && snap ? std::move(ef) : mod::EpsilonField{});
            rec.lambda_est.push_back(got ? st.lambda : lam);
            if (snap) {
                rec.snapshot_index.push_back(rec.t.size() - 1);
                rec.snapshots.push_back(u);
            }
            ++record_count;
            if (got) lam = st.lambda;
        }

        if (t >= cfg.max_time) {
            rec.stop_reason = "max-time";
            break;
        }
        if (lam < lambda_floor) {
            rec.stop_reason = "lambda-floor";
            break;
        }
        if (!rec.grad_norm.empty() && rec.grad_norm.back() >= cfg.grad_ceiling) {
            rec.stop_reason = "grad-ceiling";
            break;
        }
        if (step_idx >= cfg.max_steps) {
            rec.stop_reason = "step-limit";
            break;
        }

        double dt = std::min(cfg.c_dt * lam * lam, cfg.dt_max);
        dt = std::min(dt, cfg.max_time - t);
        if (dt <= 0.0) {
            rec.stop_reason = "max-time";
            break;
        }
        u = step_with(lap, u, dt, cfg.sign);
        t += dt;
        s += dt / (lam * lam);
        ++step_idx;
    }
    return rec;
}

geom::RadialField synthesize_initial(const geom::RadialGrid& grid,
                                     const mod::ProfileFamily& fam, double lambda0,
                                     double r0, double gamma0, double b0,
                                     const Eps0Spec& spec, double alpha_star,
                                     bool strict_loglog) {
    require(lambda0 > 0, "parameter-out-of-range", "lambda0 must be positive");
    require(fam.contains(b0), "condition-unsatisfiable",
            "b0 outside the prepared profile family");
    require(std::fabs(r0 - 1.0) < alpha_star, "condition-unsatisfiable",
            "A1 fails: |r0 - 1| >= alpha*");
    if (strict_loglog) {
        require(b0 < alpha_star, "condition-unsatisfiable", "A2 fails: b0 >= alpha*");
        // A5: λ₀ < exp(−exp(8π/(9 b₀))), evaluated in double-log form
        double X = 8.0 * M_PI / (9.0 * b0);
        bool a5 = lambda0 < 1.0 && std::log(-std::log(lambda0)) > X;
        require(a5, "condition-unsatisfiable",
                "A5 fails: lambda0 >= exp(-exp(8pi/(9 b0)))");
    }

    mod::ModulationState st;
    st.lambda = lambda0;
    st.r_center = r0;
    st.gamma = gamma0;
    st.b = b0;
    st.metric = grid.metric;

    // ε₀ on the implied y-grid, orthogonality-projected; amplitude optionally
    // tuned so the conserved energy vanishes (the nonemptiness choice of ν)
    mod::EpsilonField shape;
    shape.dy = grid.dr() / lambda0;
    shape.y0 = (grid.node(0) - r0) / lambda0;
    shape.state = st;
    shape.eps.assign(grid.n, cplx{0.0, 0.0});
    if (spec.kind == Eps0Spec::Kind::GaussianEven) {
        for (std::size_t i = 0; i < grid.n; ++i) {
            double y = shape.y_at(i);
            shape.eps[i] = std::exp(-(y / spec.width) * (y / spec.width));
        }
        shape = orthogonalize_eps(st, shape, fam);
    }

    auto assemble = [&](double nu) {
        mod::EpsilonField e = shape;
        for (auto& z : e.eps) z *= nu;
        return mod::recompose(st, e, fam, grid);
    };

    double nu = 0.0;
    if (spec.kind == Eps0Spec::Kind::GaussianEven) {
        if (std::isnan(spec.amplitude)) {
            // secant on E(ν) = 0
            double n0 = 0.0, n1 = 1e-3;
            double f0 = diag::conserved_report(assemble(n0)).energy;
            double f1 = diag::conserved_report(assemble(n1)).energy;
            for (int it = 0; it < 60 && std::fabs(f1) > 1e-16 * (1.0 / (lambda0 * lambda0));
                 ++it) {
                if (f1 == f0) break;
                double n2 = n1 - f1 * (n1 - n0) / (f1 - f0);
                n0 = n1;
                f0 = f1;
                n1 = n2;
                f1 = diag::conserved_report(assemble(n1)).energy;
            }
            nu = n1;
        } else {
            nu = spec.amplitude;
        }
    }
    return assemble(nu);
}

} // namespace llf::evo
