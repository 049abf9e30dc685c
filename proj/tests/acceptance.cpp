// End-to-end acceptance suite: one PASS/FAIL line per criterion, nonzero
// exit if anything fails. Criteria 1–7 are exact or oracle-backed; 8–10 are
// trend and property checks on a focusing run over a sphere-like surface
// with h(1) = 1 (the blow-up laws are not reachable as converged asymptotics
// at desk scale, so those check laws, envelopes and windows).
#include <chrono>
#include <cmath>
#include <cstdio>
#include <vector>

#include "llf/airy.hpp"
#include "llf/config.hpp"
#include "llf/diagnostics.hpp"
#include "llf/evolution.hpp"
#include "llf/geometry.hpp"
#include "llf/groundstate.hpp"
#include "llf/modulation.hpp"
#include "llf/profiles.hpp"
#include "llf/radiation.hpp"
#include "llf/spectral.hpp"

using namespace llf;
using cplx = std::complex<double>;

namespace {

int g_failures = 0;

struct Criterion {
    int id;
    bool ok = true;
    std::string details;

    void check(bool cond, const std::string& what) {
        if (!cond) {
            ok = false;
            details += (details.empty() ? "" : "; ") + what;
        }
    }
    void done(double seconds) {
        std::printf("%s criterion %d  (%.1f s)%s%s\n", ok ? "PASS" : "FAIL", id, seconds,
                    details.empty() ? "" : " — ", details.c_str());
        std::fflush(stdout);
        if (!ok) ++g_failures;
    }
};

double now_s() {
    using clk = std::chrono::steady_clock;
    static const clk::time_point t0 = clk::now();
    return std::chrono::duration<double>(clk::now() - t0).count();
}

std::string fmt(double v) {
    char tmp[40];
    std::snprintf(tmp, sizeof tmp, "%.4g", v);
    return tmp;
}

double lsq_slope(const std::vector<double>& x, const std::vector<double>& y) {
    double n = static_cast<double>(x.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

// ------------------------------------------------------------- criterion 1

void criterion_1() {
    double t0 = now_s();
    Criterion c{1};
    // ODE residual of the closed form (independent second derivative)
    auto tab = gs::GroundStateTable::build(35.0, 1e-3);
    double worst = 0.0;
    for (std::size_t i = 0; i < tab.y.size(); ++i) {
        double y = tab.y[i], q = tab.Q[i];
        double th = std::tanh(2.0 * y);
        double d2 = q * th * th - 2.0 * q * (1.0 - th * th);
        worst = std::max(worst, std::fabs(-d2 + q - q * q * q * q * q));
    }
    c.check(worst < 1e-10, "ODE residual " + fmt(worst));

    auto rep = gs::pohozaev_report(tab);
    c.check(std::fabs(rep.mass - std::sqrt(3.0) * M_PI / 2.0) < 1e-8,
            "mass " + fmt(rep.mass));
    c.check(std::fabs(rep.res_grad) < 1e-8, "grad identity " + fmt(rep.res_grad));
    c.check(std::fabs(rep.res_sextic) < 1e-8, "sextic identity " + fmt(rep.res_sextic));
    c.check(std::fabs(rep.energy) < 1e-8, "E(Q) " + fmt(rep.energy));

    auto lm = gs::apply_operator(tab, gs::Operator::Lminus, tab.Q);
    double sup_lm = 0.0;
    for (double v : lm) sup_lm = std::max(sup_lm, std::fabs(v));
    c.check(sup_lm < 1e-8, "L-Q residual " + fmt(sup_lm));

    auto lamq = gs::apply_operator(tab, gs::Operator::Lambda, tab.Q);
    std::vector<double> prod(tab.y.size());
    for (std::size_t i = 0; i < prod.size(); ++i) prod[i] = tab.Q[i] * lamq[i];
    double ip = gs::quad(tab, prod);
    c.check(std::fabs(ip) < 1e-10, "(Q,ΛQ) " + fmt(ip));

    std::vector<double> lq(tab.y.size());
    for (std::size_t i = 0; i < lq.size(); ++i) lq[i] = gs::lambda_q(tab.y[i]);
    auto lp = gs::apply_operator(tab, gs::Operator::Lplus, lq);
    double sup_lp = 0.0;
    for (std::size_t i = 0; i < lp.size(); ++i)
        sup_lp = std::max(sup_lp, std::fabs(lp[i] + 2.0 * tab.Q[i]));
    c.check(sup_lp < 1e-6, "L+ΛQ + 2Q residual " + fmt(sup_lp));
    c.done(now_s() - t0);
}

// ------------------------------------------------------------- criterion 2

void criterion_2() {
    double t0 = now_s();
    Criterion c{2};
    auto sph = geom::make_metric(geom::MetricKind::RoundSphere);

    auto err_at = [&](std::size_t n) {
        auto g = geom::make_grid(sph, 0.0, M_PI, n);
        auto f = geom::make_field(g, [](double r) { return cplx(std::cos(r), 0.0); });
        auto lap = geom::laplacian_apply(f);
        double worst = 0.0;
        for (std::size_t i = 0; i < g.n; ++i)
            worst = std::max(worst, std::abs(lap.values[i] + 2.0 * f.values[i]));
        return worst;
    };
    double order = std::log2(err_at(500) / err_at(1000));
    c.check(order >= 1.9, "laplacian order " + fmt(order));

    auto g = geom::make_grid(sph, 0.0, M_PI, 32768);
    auto one = geom::make_field(g, [](double) { return cplx(1.0, 0.0); });
    double area = geom::integrate(one, 2);
    c.check(std::fabs(area - 4.0 * M_PI) < 1e-8, "area " + fmt(area));

    // self-adjointness in the h-weighted product
    auto gs2 = geom::make_grid(sph, 0.2, 2.8, 900);
    auto f1 = geom::make_field(gs2, [](double r) {
        return cplx(std::exp(-6.0 * (r - 1.3) * (r - 1.3)), 0.0);
    });
    auto f2 = geom::make_field(gs2, [](double r) {
        return cplx((r - 0.4) * std::exp(-5.0 * (r - 1.7) * (r - 1.7)), 0.0);
    });
    auto L1 = geom::laplacian_apply(f1);
    auto L2 = geom::laplacian_apply(f2);
    auto w = gs2.weights();
    double a = 0, b = 0;
    for (std::size_t i = 0; i < gs2.n; ++i) {
        a += w[i] * (L1.values[i] * std::conj(f2.values[i])).real();
        b += w[i] * (f1.values[i] * std::conj(L2.values[i])).real();
    }
    double dr2 = gs2.dr() * gs2.dr();
    c.check(std::fabs(a - b) <= dr2, "self-adjointness " + fmt(std::fabs(a - b)));

    std::vector<double> ratios;
    for (double lambda : {1e-1, 1e-2, 1e-3}) {
        double wdt = std::min(0.55, 40.0 * lambda);
        auto gg = geom::make_grid(sph, 1.0 - wdt, 1.0 + wdt, 1024);
        auto f = geom::make_field(gg, [&](double r) {
            double y = (r - 1.0) / lambda;
            return cplx(std::pow(lambda, -0.25) * std::exp(-y * y), 0.0);
        });
        ratios.push_back(geom::radial_sobolev_check(f, 0.25, 1.0 - wdt, 1.0 + wdt).ratio);
    }
    double mx = *std::max_element(ratios.begin(), ratios.end());
    double mn = *std::min_element(ratios.begin(), ratios.end());
    c.check(mx / mn < 3.0, "sobolev ratio spread " + fmt(mx / mn));
    c.done(now_s() - t0);
}

// ------------------------------------------------------------- criterion 3

void criterion_3() {
    double t0 = now_s();
    Criterion c{3};
    double q0 = gs::q(0.0);
    std::vector<double> bs{0.05, 0.1, 0.2}, K, excess;
    for (double b : bs) {
        auto p = prof::solve_profile(b, 0.01);
        c.check(std::fabs(p.p_at(p.R_b)) < 1e-10,
                "P(R_b) at b=" + fmt(b) + ": " + fmt(p.p_at(p.R_b)));
        K.push_back(std::fabs(p.shoot_value - q0) / (b * b));
        auto tp = prof::truncate(p);
        auto inv = prof::profile_invariants(tp);
        excess.push_back(inv.mass_excess);
        c.check(std::fabs(inv.momentum) < 1e-12, "momentum " + fmt(inv.momentum));
        double outside = 0.0;
        for (std::size_t i = 0; i < tp.y.size(); ++i) {
            double a = std::fabs(tp.y[i]);
            if (a < p.R_b_minus - 1e-9 || a > p.R_b + 1e-9)
                outside = std::max(outside, std::abs(tp.Psi[i]));
        }
        c.check(outside < 1e-13, "Psi support leak " + fmt(outside));
    }
    double kmx = *std::max_element(K.begin(), K.end());
    double kmn = *std::min_element(K.begin(), K.end());
    c.check((kmx - kmn) / kmn <= 0.25, "K spread " + fmt((kmx - kmn) / kmn));

    // d0 from sub-grids {0.05, 0.1} and {0.1, 0.2}
    double d0a = (excess[1] - excess[0]) / (bs[1] * bs[1] - bs[0] * bs[0]);
    double d0b = (excess[2] - excess[1]) / (bs[2] * bs[2] - bs[1] * bs[1]);
    c.check(d0a > 0.0 && d0b > 0.0, "d0 sign");
    c.check(std::fabs(d0a - d0b) / d0b <= 0.10, "d0 sub-grid spread " +
                                                    fmt(std::fabs(d0a - d0b) / d0b));
    c.done(now_s() - t0);
}

// ------------------------------------------------------------- criterion 4

void criterion_4() {
    double t0 = now_s();
    Criterion c{4};
    double s2 = airy::langer_s(2.0);
    c.check(std::fabs(s2 - std::pow(0.75 * M_PI, 2.0 / 3.0)) < 1e-10,
            "langer identity " + fmt(s2));

    std::vector<std::pair<double, double>> pts;
    double g20 = 0.0, g25 = 0.0;
    for (double b : {0.18, 0.20, 0.22, 0.25, 0.27, 0.33}) {
        auto p = prof::solve_profile(b, 0.01);
        auto sol = rad::solve_zeta(p);
        c.check(sol.plateau_variation < 0.05,
                "plateau variation " + fmt(sol.plateau_variation) + " at b=" + fmt(b));
        if (b == 0.20) g20 = sol.Gamma_b;
        if (b == 0.25) g25 = sol.Gamma_b;
        if (b != 0.20 && b != 0.25) pts.emplace_back(b, sol.Gamma_b);
        if (b >= 0.2) {
            double semi = rad::gamma_semiclassical(p);
            c.check(std::fabs(sol.Gamma_b / semi - 1.0) <= 0.10,
                    "cross-route " + fmt(sol.Gamma_b / semi) + " at b=" + fmt(b));
        }
    }
    auto fit = rad::gamma_slope_fit(pts);
    c.check(std::fabs(fit.slope + M_PI) <= 0.10 * M_PI, "slope " + fmt(fit.slope));
    double predicted = 1.25 * std::exp(-M_PI);
    c.check(std::fabs(g20 / g25 - predicted) <= 0.20 * predicted,
            "ratio " + fmt(g20 / g25) + " vs " + fmt(predicted));
    c.done(now_s() - t0);
}

// ------------------------------------------------------------- criterion 5

double criterion_5() {
    double t0 = now_s();
    Criterion c{5};
    auto r1 = spectral::coercivity_delta(20.0, 2000);
    auto r2 = spectral::coercivity_delta(20.0, 4000);
    c.check(r1.delta_hat > 0.0, "delta_hat " + fmt(r1.delta_hat));
    c.check(std::fabs(r1.delta_hat - r2.delta_hat) / r2.delta_hat <= 0.05,
            "refinement drift " + fmt(std::fabs(r1.delta_hat - r2.delta_hat) / r2.delta_hat));
    c.check(std::min(r1.min_raw_1, r1.min_raw_2) < 0.0,
            "unprojected minimum " + fmt(std::min(r1.min_raw_1, r1.min_raw_2)));
    c.done(now_s() - t0);
    return r1.delta_hat > 0 ? r1.delta_hat : 0.254;
}

// ------------------------------------------------------------- criterion 6

void criterion_6(const mod::ProfileFamily& fam) {
    double t0 = now_s();
    Criterion c{6};
    auto sph = geom::make_metric(geom::MetricKind::RoundSphere);
    auto grid = geom::make_grid(sph, 0.35, 1.65, 4096);
    mod::ModulationState st;
    st.lambda = 2e-2;
    st.r_center = 1.0;
    st.gamma = 0.7;
    st.b = 0.25;
    st.metric = sph;
    mod::EpsilonField eps;
    eps.dy = grid.dr() / st.lambda;
    eps.y0 = (grid.node(0) - st.r_center) / st.lambda;
    eps.state = st;
    eps.eps.resize(grid.n);
    for (std::size_t i = 0; i < grid.n; ++i) {
        double y = eps.y_at(i);
        eps.eps[i] = cplx(1e-3 * std::exp(-0.2 * y * y), 5e-4 * y * std::exp(-0.3 * y * y));
    }
    eps = mod::orthogonalize_eps(st, eps, fam);
    auto u = mod::recompose(st, eps, fam, grid);
    mod::ModulationState guess = st;
    guess.lambda *= 1.1;
    guess.r_center += 0.004;
    guess.gamma += 0.2;
    guess.b = 0.22;
    auto [rec, re] = mod::decompose(u, guess, fam);
    c.check(std::fabs(rec.lambda - st.lambda) < 1e-8, "lambda recovery");
    c.check(std::fabs(rec.r_center - st.r_center) < 1e-8, "r recovery");
    c.check(std::fabs(std::remainder(rec.gamma - st.gamma, 2 * M_PI)) < 1e-8, "gamma recovery");
    c.check(std::fabs(rec.b - st.b) < 1e-8, "b recovery");
    auto o = mod::orthogonality_residuals(rec, re, fam);
    for (double v : o) c.check(std::fabs(v) < 1e-10, "orthogonality " + fmt(v));

    // gauge covariance
    double theta = 0.9;
    auto u2 = u;
    for (auto& z : u2.values) z *= std::polar(1.0, theta);
    mod::ModulationState guess2 = rec;
    guess2.gamma += theta;
    auto [rec2, re2] = mod::decompose(u2, guess2, fam);
    c.check(std::fabs(rec2.lambda - rec.lambda) < 1e-9 &&
                std::fabs(rec2.r_center - rec.r_center) < 1e-9 &&
                std::fabs(rec2.b - rec.b) < 1e-9 &&
                std::fabs(std::remainder(rec2.gamma - rec.gamma - theta, 2 * M_PI)) < 1e-9,
            "gauge covariance");

    // scaling covariance on the flat plane
    auto flat = geom::make_metric(geom::MetricKind::EuclideanPlane);
    auto fgrid = geom::make_grid(flat, 0.5, 1.5, 4096);
    mod::ModulationState fst = st;
    fst.metric = flat;
    fst.lambda = 1e-2;
    fst.gamma = 0.4;
    for (double sigma : {2.0, 4.0}) {
        std::vector<cplx> v(fgrid.n);
        for (std::size_t i = 0; i < fgrid.n; ++i) {
            double r = fgrid.node(i);
            double y = (sigma * (r - 1.0)) / fst.lambda;
            v[i] = std::sqrt(sigma / fst.lambda) * fam.qtilde(fst.b, y) *
                   std::polar(1.0, fst.gamma);
        }
        auto us = geom::make_field(fgrid, v);
        mod::ModulationState g2 = fst;
        g2.lambda = fst.lambda / sigma;
        auto [rs, es] = mod::decompose(us, g2, fam);
        c.check(std::fabs(rs.lambda - fst.lambda / sigma) <= 0.01 * fst.lambda / sigma,
                "scaling covariance at sigma=" + fmt(sigma));
    }

    // quadratic leading order of the nonlinear remainders over three decades
    auto norm_of = [&](const std::vector<double>& v) {
        double acc = 0.0;
        for (std::size_t i = 0; i < v.size(); ++i)
            acc += v[i] * v[i] * std::exp(-std::fabs(eps.y_at(i)));
        return std::sqrt(acc * eps.dy);
    };
    std::vector<double> ratios;
    for (double t : {1e-2, 1e-3, 1e-4}) {
        mod::EpsilonField scaled = eps;
        for (auto& z : scaled.eps) z *= t / 1e-3; // eps built at 1e-3 amplitude
        auto lin = mod::linearized_apply(st, scaled, fam);
        ratios.push_back(std::hypot(norm_of(lin.R1), norm_of(lin.R2)) / (t * t));
    }
    double rmx = *std::max_element(ratios.begin(), ratios.end());
    double rmn = *std::min_element(ratios.begin(), ratios.end());
    c.check(rmx / rmn < 3.0, "R quadratic scaling spread " + fmt(rmx / rmn));
    c.done(now_s() - t0);
}

// ------------------------------------------------------------- criterion 7

void criterion_7() {
    double t0 = now_s();
    Criterion c{7};
    auto sph = geom::make_metric(geom::MetricKind::RoundSphere);
    {
        auto g = geom::make_grid(sph, 0.0, M_PI, 4096);
        auto u0 = geom::make_field(g, [](double r) { return cplx(1e-6 * std::cos(r), 0.0); });
        auto lap = geom::assemble_laplacian(g);
        auto u = u0;
        for (int k = 0; k < 10000; ++k) u = evo::step_with(lap, u, 1e-4, -1.0);
        cplx rot = std::polar(1.0, -2.0);
        double worst = 0.0;
        for (std::size_t i = 0; i < g.n; ++i)
            worst = std::max(worst, std::abs(u.values[i] - rot * u0.values[i]));
        c.check(worst / 1e-6 < 1e-6, "phase error " + fmt(worst / 1e-6));
    }
    {
        auto g = geom::make_grid(sph, 0.5, 1.5, 1024);
        auto u0 = geom::make_field(g, [](double r) {
            return cplx(0.8 * std::exp(-40.0 * (r - 1.0) * (r - 1.0)), 0.0);
        });
        auto lap = geom::assemble_laplacian(g);
        auto u = u0;
        double m0 = geom::integrate(u0, 2);
        for (int k = 0; k < 10000; ++k) u = evo::step_with(lap, u, 1e-5, -1.0);
        double drift = std::fabs(geom::integrate(u, 2) - m0) / m0;
        c.check(drift < 1e-9, "mass drift " + fmt(drift));
        auto v = evo::step_with(lap, u, 2e-5, -1.0);
        v = evo::step_with(lap, v, -2e-5, -1.0);
        double rev = 0.0;
        for (std::size_t i = 0; i < g.n; ++i)
            rev = std::max(rev, std::abs(v.values[i] - u.values[i]));
        c.check(rev < 1e-10, "reversal " + fmt(rev));
    }
    {
        auto bump = [](double r) {
            return cplx(0.9 * std::exp(-25.0 * (r - 1.0) * (r - 1.0)), 0.0);
        };
        auto g = geom::make_grid(sph, 0.2, 1.8, 1024);
        auto u0 = geom::make_field(g, bump);
        auto lap = geom::assemble_laplacian(g);
        auto advance = [&](double dt, int steps) {
            auto u = u0;
            for (int k = 0; k < steps; ++k) u = evo::step_with(lap, u, dt, -1.0);
            return u;
        };
        auto a = advance(8e-4, 50), b = advance(4e-4, 100), d = advance(2e-4, 200);
        double e1 = 0, e2 = 0;
        for (std::size_t i = 0; i < g.n; ++i) {
            e1 = std::max(e1, std::abs(a.values[i] - b.values[i]));
            e2 = std::max(e2, std::abs(b.values[i] - d.values[i]));
        }
        double t_order = std::log2(e1 / e2);
        c.check(t_order >= 1.9, "temporal order " + fmt(t_order));

        auto observable = [&](std::size_t n) {
            auto gg = geom::make_grid(sph, 0.2, 1.8, n);
            auto uu = geom::make_field(gg, bump);
            auto ll = geom::assemble_laplacian(gg);
            auto u = uu;
            for (int k = 0; k < 100; ++k) u = evo::step_with(ll, u, 1e-4, -1.0);
            return geom::integrate(u, 4);
        };
        double oa = observable(400), ob = observable(800), oc = observable(1600);
        double s_order = std::log2(std::fabs(oa - ob) / std::fabs(ob - oc));
        c.check(s_order >= 1.9, "spatial order " + fmt(s_order));
    }
    c.done(now_s() - t0);
}

// ----------------------------------------------------- criteria 8, 9 and 10

void criteria_8_to_10(const mod::ProfileFamily& fam, double delta_hat) {
    double t0 = now_s();
    cfg::RunConfig rc;
    rc.metric_kind = "s2-normalized"; // compact sphere-like warp with h(1) = 1
    auto m = cfg::metric_from(rc);
    auto grid = geom::make_grid(m, 0.35, 1.65, 15600);
    auto u0 = evo::synthesize_initial(grid, fam, 2e-2, 1.0, 0.0, 0.25,
                                      evo::Eps0Spec{evo::Eps0Spec::Kind::None}, 1e-2,
                                      false);
    evo::SimConfig sc;
    sc.grid = grid;
    sc.c_dt = 0.01;
    sc.dt_max = 5e-4;
    sc.max_time = 1.0;
    sc.lambda_floor_cells = 4.0;
    sc.grad_ceiling = 1e12;
    sc.record_every = 5;
    sc.snapshot_every = 10;
    sc.track_modulation = true;
    sc.b0 = 0.25;
    sc.family = fam;
    mod::ModulationState g0;
    g0.lambda = 2e-2;
    g0.r_center = 1.0;
    g0.gamma = 0.0;
    g0.b = 0.25;
    g0.metric = m;
    sc.initial_guess = g0;
    auto tr = evo::run(sc, u0);
    double run_s = now_s() - t0;

    // ---- criterion 8
    {
        Criterion c{8};
        c.check(tr.stop_reason == "lambda-floor", "stop reason " + tr.stop_reason);
        double growth = tr.grad_norm.back() / tr.grad_norm.front();
        c.check(growth >= 10.0, "gradient growth " + fmt(growth));
        double runmin = 1e300;
        bool env = true;
        double bmin = 1e300;
        for (std::size_t i = 0; i < tr.t.size(); ++i) {
            if (!tr.tracked[i]) continue;
            double l = tr.states[i].lambda;
            runmin = std::min(runmin, l);
            if (l > 3.0 * runmin * 1.05) env = false;
            bmin = std::min(bmin, tr.states[i].b);
        }
        c.check(env, "3x almost-monotone envelope");
        c.check(bmin > 0.0, "b positivity, min " + fmt(bmin));
        auto fit = diag::loglog_fit(tr.t, tr.grad_norm);
        c.check(fit.exponent >= 0.45 && fit.exponent <= 0.65,
                "blow-up exponent " + fmt(fit.exponent));
        c.done(run_s);
    }

    // tracked series for the law monitors
    std::vector<double> s, b, lam, El;
    for (std::size_t i = 0; i < tr.t.size(); ++i) {
        if (!tr.tracked[i]) continue;
        s.push_back(tr.s[i]);
        b.push_back(tr.states[i].b);
        lam.push_back(tr.states[i].lambda);
        El.push_back(tr.E_local[i]);
    }

    // ---- criterion 9
    {
        double t9 = now_s();
        Criterion c{9};
        auto rep = diag::law_monitor(s, b, lam, El, 2e-2, delta_hat);
        c.check(rep.band_fraction >= 1.0 - 1e-12,
                "b log s band fraction " + fmt(rep.band_fraction));
        c.check(rep.virial_fraction >= 0.90,
                "virial fraction " + fmt(rep.virial_fraction) + " (delta " +
                    fmt(delta_hat) + ")");
        c.done(now_s() - t9);
    }

    // ---- criterion 10
    {
        double t10 = now_s();
        Criterion c{10};
        double target = 2.0 * M_PI * gs::mass_closed_form(); // h(1) = 1 here
        double first_d = -1.0, last_d = 0.0, final_win = 0.0, rem_err = 0.0;
        std::size_t used = 0;
        for (std::size_t k = 0; k < tr.snapshots.size(); ++k) {
            std::size_t i = tr.snapshot_index[k];
            if (!tr.tracked[i] || tr.eps[i].eps.empty()) continue;
            auto pt = diag::concentration_point(tr.snapshots[k], tr.states[i], tr.eps[i],
                                                fam, 0.3);
            double d = std::fabs(pt.window_mass - target);
            if (first_d < 0) first_d = d;
            last_d = d;
            final_win = pt.window_mass;
            rem_err = std::max(rem_err,
                               std::fabs(pt.remainder - pt.eps_side_remainder) /
                                   pt.total_mass);
            ++used;
        }
        c.check(used >= 5, "snapshot count " + fmt(static_cast<double>(used)));
        c.check(std::fabs(final_win - target) <= 0.25 * target,
                "final window mass " + fmt(final_win) + " vs " + fmt(target));
        // approach: the distance to the concentration value must not grow by
        // more than 2% of the target over the run (desk-scale reading of the
        // monotone approach; b drifts slowly so the window fraction wobbles)
        c.check(last_d - first_d <= 0.02 * target,
                "distance drift " + fmt(last_d - first_d));
        c.check(rem_err <= 0.01, "remainder consistency " + fmt(rem_err));
        c.done(now_s() - t10);
    }
}

} // namespace

int main() {
    std::printf("acceptance suite\n");
    criterion_1();
    criterion_2();
    criterion_3();
    criterion_4();
    double delta_hat = criterion_5();
    mod::ProfileFamily fam(0.1, 0.42, 0.005);
    criterion_6(fam);
    criterion_7();
    criteria_8_to_10(fam, delta_hat);
    std::printf("%d criterion(s) failed\n", g_failures);
    return g_failures == 0 ? 0 : 1;
}
